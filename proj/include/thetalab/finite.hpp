// Exact finite-ring geometry on the fibers of P^m over Z.
//
// Binary forms over F_p factor through the dehomogenization at x1 = 1 plus
// the x1-power carrying the point at infinity.  The mod-p^2 singularity
// test works closed point by closed point: a point (p, g) lies in the
// singular locus of div(f) iff f lies in the ideal (p^2, p g, g^2), decided
// by dividing f = Q g^2 + r1 g + r0 over Z/p^2 and checking r0 mod p^2
// (r1 mod p vanishes automatically for repeated factors).  The test is
// independent of the lift of g.
//
// Censuses enumerate full coefficient spaces (Z/p^e)^rank with deterministic
// range partitioning; local zeta factors of P^m are exact rationals.
#pragma once

#include "thetalab/errors.hpp"
#include "thetalab/fp_poly.hpp"
#include "thetalab/intpoly.hpp"
#include "thetalab/model.hpp"
#include "thetalab/parallel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace thetalab {

// A degree-d form with coefficients in Z/modulus, graded-lex order.
// For prime-power moduli p^e the (p, e) fields are set.
struct FiniteForm {
    Int modulus;
    std::uint64_t p = 0;  // prime part when modulus = p^e
    int e = 0;            // exponent (1 or 2 for the geometry paths)
    int m = 1;
    int d = 1;
    std::vector<Int> coeffs;  // reduced to [0, modulus)
};

inline FiniteForm reduce_mod(const IntegerSection& s, const Int& N) {
    if (N < 2) fail(errc::invalid_argument, "modulus must be >= 2");
    FiniteForm f;
    f.modulus = N;
    f.m = s.space->m;
    f.d = s.space->d;
    f.coeffs.reserve(s.coeffs.size());
    for (const Int& c : s.coeffs) {
        Int r = c % N;
        if (r < 0) r += N;
        f.coeffs.push_back(r);
    }
    // detect prime powers (desk-scale trial division)
    Int n = N;
    for (Int q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            int e = 0;
            Int m = N;
            while (m % q == 0) { m /= q; ++e; }
            if (m == 1) {
                f.p = q.convert_to<std::uint64_t>();
                f.e = e;
            }
            return f;
        }
    }
    f.p = N.convert_to<std::uint64_t>();  // N prime
    f.e = 1;
    return f;
}

// --- binary form helpers (m = 1) -------------------------------------------

namespace detail {

// coeffs[j] = coefficient of x0^(d-j) x1^j; dehomogenization at x1 = 1 is
// A(x) = sum_j c_j x^(d-j).
inline fp::Poly dehomogenize(const std::vector<std::uint64_t>& c, int d) {
    fp::Poly a(d + 1);
    for (int j = 0; j <= d; ++j) a[d - j] = c[j];
    fp::trim(a);
    return a;
}

inline std::vector<std::uint64_t> to_u64_coeffs(const FiniteForm& f) {
    std::vector<std::uint64_t> c(f.coeffs.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = f.coeffs[i].convert_to<std::uint64_t>();
    return c;
}

}  // namespace detail

// One irreducible component of a binary form over F_p: either the point at
// infinity (the factor x1) or the homogenization of a monic irreducible
// univariate polynomial.
struct BinaryFactor {
    bool at_infinity = false;
    fp::Poly poly;  // monic irreducible in x = x0/x1; empty when at_infinity
    int multiplicity = 0;

    int factor_degree() const {
        return at_infinity ? 1 : fp::degree(poly);
    }
};

// Factorization of a nonzero binary form over F_p (m = 1, e = 1).
inline std::vector<BinaryFactor> factor_fp(const FiniteForm& f) {
    if (f.m != 1) fail(errc::unsupported_dimension, "binary factorization needs m = 1");
    if (f.e != 1) fail(errc::invalid_argument, "factor_fp expects a prime field form");
    auto c = detail::to_u64_coeffs(f);
    int d = f.d;
    int inf_mult = 0;
    while (inf_mult <= d && c[inf_mult] % f.p == 0) ++inf_mult;
    if (inf_mult > d) fail(errc::zero_form, "factorization of the zero form");

    std::vector<BinaryFactor> out;
    if (inf_mult > 0) out.push_back({true, {}, inf_mult});
    fp::Poly a = detail::dehomogenize(c, d);
    for (auto& x : a) x %= f.p;
    fp::trim(a);
    if (fp::degree(a) >= 1)
        for (auto& fm : fp::factor(a, f.p))
            out.push_back({false, fm.factor, fm.multiplicity});
    return out;
}

inline bool is_irreducible_fp(const FiniteForm& f) {
    auto facs = factor_fp(f);
    return facs.size() == 1 && facs[0].multiplicity == 1 &&
           facs[0].factor_degree() == f.d;
}

struct SingularPoint {
    BinaryFactor point;  // the residue factor g mod p
    int degree;          // degree of the closed point
};

struct DivisorDiagnostics {
    bool smooth = false;
    bool vanishes_mod_p = false;
    std::vector<SingularPoint> singular_points;
    std::vector<BinaryFactor> components_fp;
};

namespace detail {

// r0/r1 test for one repeated monic factor g of A mod p, over Z/p^2.
inline bool affine_point_singular(const fp::Poly& a_p2, const fp::Poly& g,
                                  std::uint64_t p) {
    std::uint64_t p2 = p * p;
    fp::Poly g2 = fp::mul(g, g, p2);
    fp::Poly q, rem;
    fp::divmod(a_p2, g2, p2, q, rem);
    fp::Poly r1, r0;
    fp::divmod(rem, g, p2, r1, r0);
    for (auto x : r0) if (x % p2 != 0) return false;
    for (auto x : r1) if (x % p != 0) return false;
    return true;
}

inline bool infinity_point_singular(const std::vector<std::uint64_t>& c,
                                    std::uint64_t p) {
    std::uint64_t p2 = p * p;
    // chart x0 = 1, local coordinate y = x1: f(1,y) = sum_j c_j y^j,
    // divide by y^2: r1 = c_1, r0 = c_0.
    return c[1] % p == 0 && c[0] % p2 == 0;
}

}  // namespace detail

// Full smoothness diagnostics of div(f) on the fiber over p, f mod p^2.
inline DivisorDiagnostics is_smooth_mod_p2(const FiniteForm& f) {
    if (f.m != 1) fail(errc::unsupported_dimension, "use the surface scan for m = 2");
    if (f.e != 2) fail(errc::invalid_argument, "is_smooth_mod_p2 expects e = 2");
    if (f.d < 1) fail(errc::degree_zero, "degree must be >= 1");
    const std::uint64_t p = f.p;
    auto c = detail::to_u64_coeffs(f);

    DivisorDiagnostics diag;
    diag.vanishes_mod_p = true;
    for (auto x : c) if (x % p != 0) { diag.vanishes_mod_p = false; break; }
    if (diag.vanishes_mod_p) {
        diag.smooth = false;  // the vertical fiber forces a singular point (d >= 1)
        return diag;
    }

    FiniteForm fbar;
    fbar.modulus = p;
    fbar.p = p;
    fbar.e = 1;
    fbar.m = 1;
    fbar.d = f.d;
    for (auto x : c) fbar.coeffs.push_back(Int(x % p));
    diag.components_fp = factor_fp(fbar);

    fp::Poly a_p2 = detail::dehomogenize(c, f.d);
    for (const auto& comp : diag.components_fp) {
        if (comp.multiplicity < 2) continue;
        bool sing = comp.at_infinity
                        ? detail::infinity_point_singular(c, p)
                        : detail::affine_point_singular(a_p2, comp.poly, p);
        if (sing) diag.singular_points.push_back({comp, comp.factor_degree()});
    }
    diag.smooth = diag.singular_points.empty();
    return diag;
}

// --- closed points and zeta factors ----------------------------------------

inline int moebius(int n) {
    int mu = 1;
    for (int q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            n /= q;
            if (n % q == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

inline Int projective_space_size(int m, const Int& q) {
    Int s = 0, t = 1;
    for (int i = 0; i <= m; ++i) { s += t; t *= q; }
    return s;
}

// Number of closed points of degree e on P^m over F_p.
inline Int count_closed_points(int m, std::uint64_t p, int e) {
    if (e < 1) fail(errc::invalid_argument, "degree must be >= 1");
    Int total = 0;
    for (int f = 1; f <= e; ++f) {
        if (e % f != 0) continue;
        Int pf = 1;
        for (int i = 0; i < f; ++i) pf *= p;
        total += Int(moebius(e / f)) * projective_space_size(m, pf);
    }
    return total / e;
}

// zeta_{P^m/F_p}(s)^{-1} = prod_{i=0}^{m} (1 - p^{i-s}), exact.
inline Rat local_zeta_inv(int m, std::uint64_t p, int s) {
    if (s <= m) fail(errc::pole_region, "s must exceed m");
    Rat prod = 1;
    for (int i = 0; i <= m; ++i) {
        Int den = 1;
        for (int k = 0; k < s - i; ++k) den *= p;
        prod *= Rat(den - 1, den);
    }
    return prod;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
    std::vector<bool> sieve(n + 1, true);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i) sieve[j] = false;
    }
    return out;
}

template <class Real>
struct ZetaProduct {
    Real value;
    Real remainder_bound;  // |value - zeta_X(s)^{-1}| <= remainder_bound
    std::uint64_t p_max;
};

// Truncated Euler product for zeta_{P^m/Z}(s)^{-1} = prod_p zeta_{P^m_p}(s)^{-1}
// with an explicit K/p_max-style remainder from
// sum_{p > R} sum_i p^{i-s} <= sum_i R^{i-s+1}/(s-i-1).
template <class Real = real128>
inline ZetaProduct<Real> global_zeta_inv(int m, int s, std::uint64_t p_max) {
    if (s <= m + 1) fail(errc::pole_region, "s must exceed m + 1");
    Real value = 1;
    for (std::uint64_t p : primes_up_to(p_max))
        value *= to_real<Real>(local_zeta_inv(m, p, s));
    Real rem = 0;
    Real R(p_max);
    for (int i = 0; i <= m; ++i)
        rem += pow(R, Real(i - s + 1)) / Real(s - i - 1);
    return {value, value * rem, p_max};
}

// Projective discriminant of an integer section (m = 1).
inline Int resultant_disc(const IntegerSection& s) {
    if (s.space->m != 1) fail(errc::unsupported_dimension, "discriminant needs m = 1");
    return zx::binary_form_discriminant(s.coeffs, s.space->d);
}

// --- exhaustive censuses ----------------------------------------------------

enum class CensusPredicate { smooth_p2, irreducible_fp, nonzero_fp };

inline std::string census_predicate_name(CensusPredicate p) {
    switch (p) {
        case CensusPredicate::smooth_p2: return "smooth_p2";
        case CensusPredicate::irreducible_fp: return "irreducible_fp";
        case CensusPredicate::nonzero_fp: return "nonzero_fp";
    }
    return "?";
}

constexpr std::uint64_t kDefaultCensusCap = std::uint64_t(1) << 26;

struct CensusResult {
    int m = 1;
    std::uint64_t p = 0;
    int e = 1;
    int d = 1;
    CensusPredicate predicate;
    Int matching;
    Int total;
    Rat density;
};

namespace detail {

// Lean smooth test used in census loops: coefficients already mod p^2.
inline bool census_smooth_p2(const std::vector<std::uint64_t>& c, std::uint64_t p, int d) {
    const std::uint64_t p2 = p * p;
    int inf_mult = 0;
    while (inf_mult <= d && c[inf_mult] % p == 0) ++inf_mult;
    if (inf_mult > d) return false;  // f = 0 mod p
    if (inf_mult >= 2 && infinity_point_singular(c, p)) return false;

    fp::Poly abar(d + 1);
    for (int j = 0; j <= d; ++j) abar[d - j] = c[j] % p;
    fp::trim(abar);
    if (fp::degree(abar) < 1) return true;
    if (fp::is_squarefree(abar, p)) return true;

    fp::Poly a_p2(d + 1);
    for (int j = 0; j <= d; ++j) a_p2[d - j] = c[j] % p2;
    fp::trim(a_p2);
    std::vector<std::pair<fp::Poly, int>> parts;
    fp::detail::squarefree_parts(fp::make_monic(abar, p), p, 1, parts);
    std::mt19937_64 gen = make_stream(fp::detail::poly_hash(abar, p), 0x5eed);
    for (auto& [z, mult] : parts) {
        if (mult < 2) continue;
        std::vector<fp::FactorMult> irr;
        fp::detail::ddf_edf(z, p, gen, mult, irr);
        for (auto& fm : irr)
            if (affine_point_singular(a_p2, fm.factor, p)) return false;
    }
    return true;
}

inline bool census_irreducible_fp(const std::vector<std::uint64_t>& c, std::uint64_t p, int d) {
    int inf_mult = 0;
    while (inf_mult <= d && c[inf_mult] % p == 0) ++inf_mult;
    if (inf_mult > d) return false;
    if (inf_mult > 0) return d == 1;  // only the bare x1 survives
    fp::Poly abar(d + 1);
    for (int j = 0; j <= d; ++j) abar[d - j] = c[j] % p;
    fp::trim(abar);
    if (fp::degree(abar) != d) return false;  // cannot happen with inf_mult == 0
    if (!fp::is_squarefree(abar, p)) return false;
    auto facs = fp::factor(abar, p);
    return facs.size() == 1 && facs[0].multiplicity == 1;
}

}  // namespace detail

// Exhaustive census over all of (Z/p^e)^rank for m = 1 predicates.
inline CensusResult brute_density(int m, std::uint64_t p, int e, int d,
                                  CensusPredicate pred,
                                  std::uint64_t cap = kDefaultCensusCap) {
    if (m != 1) fail(errc::unsupported_dimension, "censuses are exact for m = 1 only");
    if ((pred == CensusPredicate::smooth_p2 && e != 2) ||
        (pred == CensusPredicate::irreducible_fp && e != 1))
        fail(errc::invalid_argument, "predicate/exponent mismatch");
    const int rank = d + 1;
    std::uint64_t q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    Int total_i = 1;
    for (int i = 0; i < rank; ++i) total_i *= q;
    if (total_i > Int(cap)) fail(errc::cap_exceeded, "census size exceeds cap");
    const std::uint64_t total = total_i.convert_to<std::uint64_t>();

    auto count = batched_reduce<std::uint64_t>(
        total, 1 << 14, 0,
        [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t) {
            std::vector<std::uint64_t> c(rank);
            std::uint64_t idx = lo;
            for (int i = 0; i < rank; ++i) { c[i] = idx % q; idx /= q; }
            std::uint64_t matches = 0;
            for (std::uint64_t v = lo; v < hi; ++v) {
                bool ok = false;
                switch (pred) {
                    case CensusPredicate::smooth_p2:
                        ok = detail::census_smooth_p2(c, p, d);
                        break;
                    case CensusPredicate::irreducible_fp:
                        ok = detail::census_irreducible_fp(c, p, d);
                        break;
                    case CensusPredicate::nonzero_fp: {
                        ok = false;
                        for (auto x : c) if (x % p != 0) { ok = true; break; }
                        break;
                    }
                }
                if (ok) ++matches;
                // odometer step
                for (int i = 0; i < rank; ++i) {
                    if (++c[i] < q) break;
                    c[i] = 0;
                }
            }
            return matches;
        },
        [](std::uint64_t a, std::uint64_t b) { return a + b; });

    CensusResult r;
    r.m = m; r.p = p; r.e = e; r.d = d;
    r.predicate = pred;
    r.matching = count;
    r.total = total_i;
    r.density = Rat(Int(count), total_i);
    return r;
}

// Joint census over Z/(prod p_i^2): density of forms smooth at every listed
// prime.  CRT ground truth for the per-prime product.
inline Rat joint_smooth_density(int d, const std::vector<std::uint64_t>& primes,
                                std::uint64_t cap = kDefaultCensusCap) {
    const int rank = d + 1;
    std::uint64_t M = 1;
    for (auto p : primes) M *= p * p;
    Int total_i = 1;
    for (int i = 0; i < rank; ++i) total_i *= M;
    if (total_i > Int(cap)) fail(errc::cap_exceeded, "joint census size exceeds cap");
    const std::uint64_t total = total_i.convert_to<std::uint64_t>();

    auto count = batched_reduce<std::uint64_t>(
        total, 1 << 14, 0,
        [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t) {
            std::vector<std::uint64_t> c(rank), cp(rank);
            std::uint64_t idx = lo;
            for (int i = 0; i < rank; ++i) { c[i] = idx % M; idx /= M; }
            std::uint64_t matches = 0;
            for (std::uint64_t v = lo; v < hi; ++v) {
                bool ok = true;
                for (auto p : primes) {
                    const std::uint64_t p2 = p * p;
                    for (int i = 0; i < rank; ++i) cp[i] = c[i] % p2;
                    if (!detail::census_smooth_p2(cp, p, d)) { ok = false; break; }
                }
                if (ok) ++matches;
                for (int i = 0; i < rank; ++i) {
                    if (++c[i] < M) break;
                    c[i] = 0;
                }
            }
            return matches;
        },
        [](std::uint64_t a, std::uint64_t b) { return a + b; });
    return Rat(Int(count), total_i);
}

}  // namespace thetalab
