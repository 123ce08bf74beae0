// Exact Z[x] machinery: contents, pseudo-division, subresultant resultants,
// discriminants of binary forms, and a Zassenhaus irreducibility test
// (factor mod p, quadratic multifactor Hensel lifting past the Mignotte
// bound, subset recombination with exact trial division).  Degrees stay at
// desk scale, so schoolbook arithmetic on cpp_int coefficients is plenty.
#pragma once

#include "thetalab/errors.hpp"
#include "thetalab/fp_poly.hpp"
#include "thetalab/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace thetalab::zx {

using ZPoly = std::vector<Int>;  // little-endian

inline void trim(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }
inline bool is_zero(const ZPoly& f) { return f.empty(); }

inline Int content(const ZPoly& f) {
    Int c = 0;
    for (const Int& x : f) c = gcd(c, x);
    return c;  // nonnegative; 0 for the zero polynomial
}

inline ZPoly primitive_part(const ZPoly& f) {
    Int c = content(f);
    if (c == 0) return {};
    ZPoly r = f;
    for (Int& x : r) x /= c;
    if (!r.empty() && r.back() < 0)
        for (Int& x : r) x = -x;
    return r;
}

inline ZPoly derivative(const ZPoly& f) {
    if (f.size() <= 1) return {};
    ZPoly r(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) r[i - 1] = f[i] * Int(static_cast<unsigned>(i));
    return r;
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

inline ZPoly scale(const ZPoly& a, const Int& c) {
    ZPoly r = a;
    for (Int& x : r) x *= c;
    trim(r);
    return r;
}

// Pseudo-remainder: lc(B)^(degA-degB+1) * A = Q*B + R, deg R < deg B.
inline ZPoly pseudo_rem(ZPoly a, const ZPoly& b) {
    int db = degree(b);
    const Int& lb = b.back();
    int e = degree(a) - db + 1;
    while (!is_zero(a) && degree(a) >= db) {
        int shift = degree(a) - db;
        Int c = a.back();
        for (Int& x : a) x *= lb;
        for (int i = 0; i <= db; ++i) a[shift + i] -= c * b[i];
        trim(a);
        --e;
    }
    // degree may drop by more than one per step; pad to exactly lc^(delta+1)
    if (e > 0) {
        Int mult = 1;
        for (int i = 0; i < e; ++i) mult *= lb;
        for (Int& x : a) x *= mult;
    }
    return a;
}

namespace detail {

// Cohen-style subresultant resultant of nonzero A, B.
inline Int resultant_core(ZPoly a, ZPoly b) {
    trim(a); trim(b);
    if (is_zero(a) || is_zero(b)) return 0;
    int sign = 1;
    if (degree(a) < degree(b)) {
        if ((degree(a) & 1) && (degree(b) & 1)) sign = -sign;
        std::swap(a, b);
    }
    if (degree(b) == 0) {
        Int r = 1;
        for (int i = 0; i < degree(a); ++i) r *= b[0];
        return sign * r;
    }
    Int ca = content(a), cb = content(b);
    ZPoly A = primitive_part(a), B = primitive_part(b);
    // sign flips from primitive_part's leading-coefficient normalization
    if (a.back() < 0 && (degree(b) & 1)) sign = -sign;
    if (b.back() < 0 && (degree(a) & 1)) sign = -sign;
    Int t = 1;
    for (int i = 0; i < degree(b); ++i) t *= ca;
    for (int i = 0; i < degree(a); ++i) t *= cb;

    Int g = 1, h = 1;
    for (;;) {
        int da = degree(A), db = degree(B);
        int delta = da - db;
        if ((da & 1) && (db & 1)) sign = -sign;
        ZPoly R = pseudo_rem(A, B);
        if (is_zero(R)) return 0;
        A = B;
        Int divisor = g;
        for (int i = 0; i < delta; ++i) divisor *= h;
        B = R;
        for (Int& x : B) x /= divisor;
        g = A.back();
        if (delta > 0) {
            // h = g^delta / h^(delta-1)
            Int num = 1;
            for (int i = 0; i < delta; ++i) num *= g;
            Int den = 1;
            for (int i = 0; i < delta - 1; ++i) den *= h;
            h = num / den;
        }
        if (degree(B) == 0) {
            int dA = degree(A);
            // resultant = lc(B)^dA / h^(dA-1), times contents and sign
            Int num = 1;
            for (int i = 0; i < dA; ++i) num *= B[0];
            Int den = 1;
            for (int i = 0; i < dA - 1; ++i) den *= h;
            return sign * t * (num / den);
        }
    }
}

}  // namespace detail

inline Int resultant(const ZPoly& a, const ZPoly& b) {
    return detail::resultant_core(a, b);
}

// gcd over Z via the primitive Euclidean sequence.
inline ZPoly gcd(ZPoly a, ZPoly b) {
    trim(a); trim(b);
    if (is_zero(a)) return primitive_part(b);
    if (is_zero(b)) return primitive_part(a);
    Int c = boost::multiprecision::gcd(content(a), content(b));
    a = primitive_part(a);
    b = primitive_part(b);
    if (degree(a) < degree(b)) std::swap(a, b);
    while (!is_zero(b)) {
        ZPoly r = primitive_part(pseudo_rem(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    return scale(a, c);
}

// q with f = q*g exactly, or empty if g does not divide f over Z.
inline ZPoly exact_divide(const ZPoly& f, const ZPoly& g) {
    if (is_zero(g)) return {};
    ZPoly r = f;
    trim(r);
    if (is_zero(r)) return {};
    if (degree(r) < degree(g)) return {};
    ZPoly q(degree(r) - degree(g) + 1, Int(0));
    while (!is_zero(r) && degree(r) >= degree(g)) {
        Int c = r.back();
        if (c % g.back() != 0) return {};
        c /= g.back();
        int shift = degree(r) - degree(g);
        q[shift] = c;
        for (std::size_t i = 0; i < g.size(); ++i) r[shift + i] -= c * g[i];
        trim(r);
    }
    if (!is_zero(r)) return {};
    trim(q);
    return q;
}

inline ZPoly squarefree_part(const ZPoly& f) {
    ZPoly g = gcd(f, derivative(f));
    if (degree(g) < 1) return primitive_part(f);
    ZPoly q = exact_divide(primitive_part(f), primitive_part(g));
    return primitive_part(q);
}

// --- Zassenhaus irreducibility over Q ------------------------------------

namespace detail {

using ModPoly = std::vector<Int>;  // coefficients in [0, modulus)

inline ModPoly to_mod(const ZPoly& f, const Int& m) {
    ModPoly r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        Int x = f[i] % m;
        if (x < 0) x += m;
        r[i] = x;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

inline ModPoly mod_mul(const ModPoly& a, const ModPoly& b, const Int& m) {
    if (a.empty() || b.empty()) return {};
    ModPoly r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % m;
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

inline ModPoly mod_add(const ModPoly& a, const ModPoly& b, const Int& m) {
    ModPoly r(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < r.size(); ++i) {
        Int x = (i < a.size() ? a[i] : Int(0)) + (i < b.size() ? b[i] : Int(0));
        r[i] = x >= m ? x - m : x;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

inline ModPoly mod_sub(const ModPoly& a, const ModPoly& b, const Int& m) {
    ModPoly r(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < r.size(); ++i) {
        Int x = (i < a.size() ? a[i] : Int(0)) - (i < b.size() ? b[i] : Int(0));
        if (x < 0) x += m;
        r[i] = x;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// Division by a monic divisor over Z/m.
inline void mod_divmod(const ModPoly& f, const ModPoly& h, const Int& m,
                       ModPoly& q, ModPoly& r) {
    r = f;
    while (!r.empty() && r.back() == 0) r.pop_back();
    q.assign(r.size() >= h.size() ? r.size() - h.size() + 1 : 0, Int(0));
    while (r.size() >= h.size()) {
        Int c = r.back();
        std::size_t shift = r.size() - h.size();
        if (c != 0) {
            q[shift] = c;
            for (std::size_t i = 0; i < h.size(); ++i) {
                Int x = (r[shift + i] - c * h[i]) % m;
                if (x < 0) x += m;
                r[shift + i] = x;
            }
        }
        r.pop_back();
        while (!r.empty() && r.back() == 0) r.pop_back();
    }
}

// One quadratic Hensel step: modulus m -> m^2.
struct HenselPair { ModPoly g, h, s, t; };

inline HenselPair hensel_step(const ModPoly& f, const HenselPair& in, const Int& m) {
    Int m2 = m * m;
    auto G = to_mod(ZPoly(in.g.begin(), in.g.end()), m2);
    auto H = to_mod(ZPoly(in.h.begin(), in.h.end()), m2);
    auto S = to_mod(ZPoly(in.s.begin(), in.s.end()), m2);
    auto T = to_mod(ZPoly(in.t.begin(), in.t.end()), m2);
    ModPoly e = mod_sub(f, mod_mul(G, H, m2), m2);
    ModPoly q, r;
    mod_divmod(mod_mul(S, e, m2), H, m2, q, r);
    ModPoly Gs = mod_add(mod_add(G, mod_mul(T, e, m2), m2), mod_mul(q, G, m2), m2);
    ModPoly Hs = mod_add(H, r, m2);
    ModPoly one{Int(1)};
    ModPoly b = mod_sub(mod_add(mod_mul(S, Gs, m2), mod_mul(T, Hs, m2), m2), one, m2);
    ModPoly c, d;
    mod_divmod(mod_mul(S, b, m2), Hs, m2, c, d);
    ModPoly Ss = mod_sub(S, d, m2);
    ModPoly Ts = mod_sub(mod_sub(T, mod_mul(T, b, m2), m2), mod_mul(c, Gs, m2), m2);
    return {Gs, Hs, Ss, Ts};
}

// Bezout s*g + t*h = 1 over F_p for coprime g, h.
inline void bezout_fp(const fp::Poly& g, const fp::Poly& h, std::uint64_t p,
                      fp::Poly& s, fp::Poly& t) {
    fp::Poly r0 = g, r1 = h;
    fp::Poly s0{1}, s1{}, t0{}, t1{1};
    while (!fp::is_zero(r1)) {
        fp::Poly q, r;
        fp::divmod(r0, r1, p, q, r);
        fp::Poly s2 = fp::sub(s0, fp::mul(q, s1, p), p);
        fp::Poly t2 = fp::sub(t0, fp::mul(q, t1, p), p);
        r0 = std::move(r1); r1 = std::move(r);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    // r0 is a nonzero constant
    std::uint64_t inv = fp::invmod(r0[0], p);
    s = fp::scale(s0, inv, p);
    t = fp::scale(t0, inv, p);
}

// Lifts the monic factorization f = prod(facs) from mod p to mod >= target.
inline void lift_tree(const ModPoly& f, const std::vector<fp::Poly>& facs,
                      std::size_t lo, std::size_t hi, std::uint64_t p,
                      const Int& target, std::vector<ModPoly>& out) {
    if (hi - lo == 1) { out[lo] = f; return; }
    std::size_t mid = lo + (hi - lo) / 2;
    fp::Poly g0{1}, h0{1};
    for (std::size_t i = lo; i < mid; ++i) g0 = fp::mul(g0, facs[i], p);
    for (std::size_t i = mid; i < hi; ++i) h0 = fp::mul(h0, facs[i], p);
    fp::Poly s0, t0;
    bezout_fp(g0, h0, p, s0, t0);

    auto lift64 = [](const fp::Poly& a) {
        ModPoly r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = Int(a[i]);
        return r;
    };
    HenselPair pair{lift64(g0), lift64(h0), lift64(s0), lift64(t0)};
    Int m = p;
    while (m < target) {
        pair = hensel_step(to_mod(ZPoly(f.begin(), f.end()), m * m), pair, m);
        m *= m;
    }
    ModPoly G = to_mod(ZPoly(pair.g.begin(), pair.g.end()), m);
    ModPoly H = to_mod(ZPoly(pair.h.begin(), pair.h.end()), m);
    lift_tree(G, facs, lo, mid, p, target, out);
    lift_tree(H, facs, mid, hi, p, target, out);
}

inline Int infinity_norm(const ZPoly& f) {
    Int m = 0;
    for (const Int& x : f) {
        Int a = abs(x);
        if (a > m) m = a;
    }
    return m;
}

}  // namespace detail

// Exact irreducibility over Q of a primitive polynomial of degree >= 1.
inline bool is_irreducible_q(const ZPoly& input, int subset_budget_bits = 22) {
    ZPoly f = input;
    trim(f);
    int d = degree(f);
    if (d < 1) return false;
    if (d == 1) return true;
    if (d > 60) fail(errc::factorization_budget, "degree beyond recombination budget");
    if (f[0] == 0) return false;  // divisible by x
    if (degree(gcd(f, derivative(f))) > 0) return false;  // not squarefree

    // Degree screen over a few good primes: intersect attainable proper
    // factor degrees; empty intersection proves irreducibility.
    static const std::uint64_t primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43};
    std::uint64_t degree_mask = ~std::uint64_t(0);  // bit k: proper factor of degree k possible
    std::uint64_t best_p = 0;
    std::vector<fp::FactorMult> best_facs;
    int screens = 0;
    for (std::uint64_t p : primes) {
        if (f.back() % p == 0) continue;
        fp::Poly fp_poly(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            Int x = f[i] % Int(p);
            if (x < 0) x += p;
            fp_poly[i] = x.convert_to<std::uint64_t>();
        }
        if (!fp::is_squarefree(fp_poly, p)) continue;
        auto facs = fp::factor(fp_poly, p);
        if (facs.size() == 1) return true;
        std::uint64_t attainable = 1;  // subset-sum bitset over factor degrees
        for (const auto& fm : facs) attainable |= attainable << fp::degree(fm.factor);
        degree_mask &= attainable;
        if ((degree_mask & ((std::uint64_t(1) << d) - 2)) == 0) return true;  // bits 1..d-1 empty
        if (best_p == 0 || facs.size() < best_facs.size()) {
            best_p = p;
            best_facs = std::move(facs);
        }
        if (++screens >= 3) break;
    }
    if (best_p == 0)
        fail(errc::factorization_budget, "no usable prime for modular factorization");

    const std::size_t r = best_facs.size();
    if (r > static_cast<std::size_t>(subset_budget_bits))
        fail(errc::factorization_budget, "too many modular factors to recombine");

    // Hensel lift past twice the factor coefficient bound.
    Int bound = detail::infinity_norm(f) * abs(f.back());
    for (int i = 0; i < d; ++i) bound *= 2;
    bound = bound * Int(d + 1) * 2 + 1;  // covers sqrt(d+1) * 2^d * H * |lc| * 2
    Int target = best_p;
    while (target <= bound) target *= target;

    std::vector<fp::Poly> monics(r);
    for (std::size_t i = 0; i < r; ++i) monics[i] = best_facs[i].factor;
    // monic image of f mod target
    detail::ModPoly fmod = detail::to_mod(f, target);
    Int lc = fmod.back();
    // scale to monic: multiply by lc^{-1} mod target (p doesn't divide lc)
    {
        // modular inverse via extended Euclid on Int
        Int a = lc % target, m = target, x0 = 0, x1 = 1;
        Int aa = a, mm = m;
        while (aa != 0) {
            Int q = mm / aa;
            mm -= q * aa; std::swap(aa, mm);
            x0 -= q * x1; std::swap(x0, x1);
        }
        Int inv = x0 % target;
        if (inv < 0) inv += target;
        for (Int& c : fmod) c = c * inv % target;
    }
    std::vector<detail::ModPoly> lifted(r);
    detail::lift_tree(fmod, monics, 0, r, best_p, target, lifted);

    // Subset recombination: any proper subset product that divides f over Z
    // certifies reducibility.
    Int lc_f = f.back();
    Int half = target / 2;
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t(1) << r); ++mask) {
        int deg_sum = 0;
        for (std::size_t i = 0; i < r; ++i)
            if (mask & (std::uint64_t(1) << i)) deg_sum += static_cast<int>(lifted[i].size()) - 1;
        if (deg_sum < 1 || deg_sum > d - 1) continue;
        if (((degree_mask >> deg_sum) & 1) == 0) continue;
        detail::ModPoly cand{lc_f % target};
        if (cand[0] < 0) cand[0] += target;
        for (std::size_t i = 0; i < r; ++i)
            if (mask & (std::uint64_t(1) << i)) cand = detail::mod_mul(cand, lifted[i], target);
        ZPoly g(cand.size());
        for (std::size_t i = 0; i < cand.size(); ++i)
            g[i] = cand[i] > half ? cand[i] - target : cand[i];
        g = primitive_part(g);
        if (degree(g) < 1) continue;
        if (!exact_divide(f, g).empty()) return false;
    }
    return true;
}

// --- Binary forms ----------------------------------------------------------

// A binary form of degree d is stored as coeffs[j] = coefficient of
// x0^(d-j) x1^j, j = 0..d (the m=1 graded-lex section order).

// Projective discriminant of a degree-d integer binary form; zero iff the
// form has a repeated root in P^1 over Q-bar.  Computed as
// (-1)^{d(d-1)/2} Res(A, A') / lc(A) after a unimodular shear making the
// x0^d coefficient nonzero (the discriminant is shear-invariant).
inline Int binary_form_discriminant(const std::vector<Int>& coeffs, int d) {
    if (static_cast<int>(coeffs.size()) != d + 1)
        fail(errc::invalid_argument, "coefficient count != degree + 1");
    bool zero = true;
    for (const Int& c : coeffs) if (c != 0) { zero = false; break; }
    if (zero) fail(errc::zero_section, "discriminant of the zero form");
    if (d == 1) return 1;

    // find shear f(x0, t x0 + x1) with nonzero x0^d coefficient f(1, t)
    std::vector<Int> work = coeffs;
    for (Int t = 0; ; ++t) {
        Int val = 0, tp = 1;
        for (int j = 0; j <= d; ++j) { val += coeffs[j] * tp; tp *= t; }
        if (val != 0) {
            if (t != 0) {
                // expand f(x0, t x0 + x1)
                std::vector<Int> out(d + 1, Int(0));
                for (int j = 0; j <= d; ++j) {
                    // c_j x0^{d-j} (t x0 + x1)^j
                    Int tp2 = 1;
                    for (int k = j; k >= 0; --k) {
                        // term with x1^k: C(j,k) t^{j-k} x0^{d-k}
                        out[k] += coeffs[j] * binomial(j, k) * tp2;
                        tp2 *= t;
                    }
                }
                work = std::move(out);
            }
            break;
        }
        if (t > d) fail(errc::zero_section, "no shear found for nonzero form");
    }
    // dehomogenize at x1 = 1: A(x) = sum_j work[j] x^{d-j}
    ZPoly A(d + 1);
    for (int j = 0; j <= d; ++j) A[d - j] = work[j];
    Int res = resultant(A, derivative(A));
    Int disc = res / A.back();
    if ((static_cast<long long>(d) * (d - 1) / 2) % 2 != 0) disc = -disc;
    return disc;
}

// Divisor irreducibility of an integer binary form on the arithmetic model:
// nonzero, unit content, and irreducible over Q as a form.
inline bool binary_form_divisor_irreducible(const std::vector<Int>& coeffs, int d) {
    Int c = 0;
    for (const Int& x : coeffs) c = boost::multiprecision::gcd(c, x);
    if (c != 1) return false;  // zero form (c=0) or vertical content
    if (d == 1) return true;   // primitive linear forms are prime
    if (coeffs[0] == 0 || coeffs[d] == 0) return false;  // x1 | f or x0 | f
    ZPoly A(d + 1);
    for (int j = 0; j <= d; ++j) A[d - j] = coeffs[j];
    return is_irreducible_q(A);
}

}  // namespace thetalab::zx
