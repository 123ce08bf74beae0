// Core numeric types: exact integers/rationals and fixed-precision binary
// floats used throughout the library.
//
// All lattice data is exact (cpp_int / cpp_rational).  Analytic quantities
// (theta sums, zeta products, bounds) are computed in cpp_bin_float with a
// compile-time significand width.  The default working type is real128
// (128-bit significand, eps ~ 2.9e-39); every routine that accumulates
// floating sums reports a rigorous error bound built from the standard
// rounding model, so the reported abs_error covers truncation + rounding.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/math/constants/constants.hpp>

#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace thetalab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

template <unsigned Bits>
using real_bits = boost::multiprecision::number<
    boost::multiprecision::backends::cpp_bin_float<
        Bits, boost::multiprecision::backends::digit_base_2>,
    boost::multiprecision::et_off>;

using real64  = real_bits<64>;
using real128 = real_bits<128>;
using real192 = real_bits<192>;
using real256 = real_bits<256>;
using real512 = real_bits<512>;

// Guard-precision companion used for sensitive intermediates (power ladders,
// bases e^{-pi/D} raised to large integer exponents).
template <class Real> struct wider;
template <> struct wider<real64>  { using type = real128; };
template <> struct wider<real128> { using type = real256; };
template <> struct wider<real192> { using type = real_bits<384>; };
template <> struct wider<real256> { using type = real512; };
template <class Real> using wider_t = typename wider<Real>::type;

template <class Real>
inline Real pi_v() { return boost::math::constants::pi<Real>(); }

template <class Real>
inline Real eps_v() { return std::numeric_limits<Real>::epsilon(); }

template <class Real>
inline Real to_real(const Rat& q) {
    return Real(numerator(q).str()) / Real(denominator(q).str());
}

template <class Real>
inline Real to_real(const Int& n) { return Real(n.str()); }

// Decimal rendering with full round-trip precision; used by all JSON/CSV
// writers so output bytes are reproducible.
template <class Real>
inline std::string to_decimal_string(const Real& x) {
    std::ostringstream os;
    os << std::scientific
       << std::setprecision(std::numeric_limits<Real>::max_digits10) << x;
    return os.str();
}

inline std::string to_string(const Rat& q) {
    std::ostringstream os;
    os << numerator(q) << "/" << denominator(q);
    return os.str();
}

// Parses "p/q", "p", or a plain decimal like "0.25".
Rat parse_rational(const std::string& s);

inline Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        Rat r(num, den);
        return r;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac_len = s.size() - dot - 1;
        Int num(digits);
        Int den = 1;
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        return Rat(num, den);
    }
    return Rat(Int(s));
}

inline Int factorial(unsigned n) {
    Int f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Int num = 1, den = 1;
    for (unsigned i = 0; i < k; ++i) { num *= n - i; den *= i + 1; }
    return num / den;
}

}  // namespace thetalab
