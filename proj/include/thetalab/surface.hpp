// Smoothness scan for divisors on P^2 fibers (m = 2).
//
// Closed points of residue degree e <= e_max are enumerated as Frobenius
// orbits of F_{p^e}-points; a point of div(f) is singular iff the value of a
// lift vanishes mod p^2 and both chart partials vanish mod p (lift choice
// does not matter on that locus).  The truncation bias of stopping at e_max
// is reported as the exact tail bound sum_{e > e_max} N_e p^{-e(n+1)} with
// n = 3, bounded by geometric series.
//
// Exact surface censuses are out of reach (elimination theory would be
// needed for closed points of every degree), so this path backs Monte Carlo
// experiments only.
#pragma once

#include "thetalab/errors.hpp"
#include "thetalab/finite.hpp"
#include "thetalab/fp_poly.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace thetalab {

namespace gf {

// F_{p^e} as F_p[t]/(h), h monic irreducible of degree e.
struct Field {
    std::uint64_t p;
    int e;
    fp::Poly h;       // modulus over F_p
    fp::Poly h_lift;  // same coefficients read mod p^2
};

inline Field make_field(std::uint64_t p, int e) {
    Field F{p, e, {}, {}};
    if (e == 1) {
        F.h = fp::Poly{0, 1};
    } else {
        // scan monic polynomials; for e <= 3 irreducible <=> no roots,
        // checked here by full factorization to stay degree-generic
        std::uint64_t total = 1;
        for (int i = 0; i < e; ++i) total *= p;
        for (std::uint64_t n = 0;; ++n) {
            if (n >= total) fail(errc::invalid_argument, "no irreducible found");
            fp::Poly cand(e + 1, 0);
            std::uint64_t x = n;
            for (int i = 0; i < e; ++i) { cand[i] = x % p; x /= p; }
            cand[e] = 1;
            auto facs = fp::factor(cand, p);
            if (facs.size() == 1 && facs[0].multiplicity == 1) { F.h = cand; break; }
        }
    }
    F.h_lift = F.h;
    return F;
}

using El = fp::Poly;  // degree < e, coefficients mod p (or mod p^2 in the ring)

inline El reduce(const Field& F, const fp::Poly& a, std::uint64_t mod) {
    return fp::mod(a, mod == F.p ? F.h : F.h_lift, mod);
}

inline El mul(const Field& F, const El& a, const El& b, std::uint64_t mod) {
    return reduce(F, fp::mul(a, b, mod), mod);
}

inline El frobenius(const Field& F, const El& a) {
    return fp::pow_mod(a, Int(F.p), F.h, F.p);
}

inline El from_index(const Field& F, std::uint64_t idx) {
    El a(F.e, 0);
    for (int i = 0; i < F.e; ++i) { a[i] = idx % F.p; idx /= F.p; }
    fp::trim(a);
    return a;
}

inline std::uint64_t to_index(const Field& F, const El& a) {
    std::uint64_t idx = 0, mul = 1;
    for (int i = 0; i < F.e; ++i) {
        idx += (i < static_cast<int>(a.size()) ? a[i] : 0) * mul;
        mul *= F.p;
    }
    return idx;
}

}  // namespace gf

struct SurfaceDiagnostics {
    bool smooth_up_to_cutoff = false;
    bool vanishes_mod_p = false;
    int cutoff = 3;
    Rat truncation_bias;  // bound on the scanned-out singular mass
};

namespace detail {

// Evaluate a trivariate form and optionally its partials at a projective
// point with coordinates in GF(p^e) (mod p) or its Galois ring lift (mod p^2).
struct SurfaceEval {
    const SectionSpace* shape;  // monomial exponents only (m = 2 layout)
    std::vector<std::uint64_t> coeffs;  // mod p^2
    std::uint64_t p;

    // value of f at (x,y,z) in the ring mod `mod`, using precomputed powers
    gf::El value(const gf::Field& F, const std::array<std::vector<gf::El>, 3>& pw,
                 std::uint64_t mod, const std::vector<std::uint64_t>& cs) const {
        gf::El acc;
        for (std::size_t k = 0; k < shape->monomials.size(); ++k) {
            std::uint64_t c = cs[k] % mod;
            if (c == 0) continue;
            const auto& a = shape->monomials[k];
            gf::El term{c};
            term = gf::mul(F, term, pw[0][a[0]], mod);
            term = gf::mul(F, term, pw[1][a[1]], mod);
            term = gf::mul(F, term, pw[2][a[2]], mod);
            acc = fp::add(acc, term, mod);
        }
        return acc;
    }
};

inline Rat pow_rat(const Rat& x, int k) {
    Rat r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

inline Rat surface_truncation_bias(std::uint64_t p, int e_max) {
    // sum_{e > e_max} N_e p^{-4e},  N_e <= (p^{2e} + p^e + 1)/e
    Rat total = 0;
    Rat pr(1, Int(p));
    for (int j = 2; j <= 4; ++j) {
        // sum_{e > e_max} p^{-je} / e  <=  p^{-j(e_max+1)} / ((e_max+1)(1 - p^-j))
        Rat x = 1;
        for (int i = 0; i < j * (e_max + 1); ++i) x *= pr;
        total += x / (Rat(e_max + 1) * (1 - pow_rat(pr, j)));
    }
    return total;
}

}  // namespace detail

// Scans all closed points of degree <= e_max on the fiber P^2 over p for
// singular points of div(f), f given mod p^2 in graded-lex order.
inline SurfaceDiagnostics is_smooth_surface_mod_p2(const SectionSpace& S,
                                                   const FiniteForm& f,
                                                   int e_max = 3) {
    if (S.m != 2 || f.m != 2) fail(errc::unsupported_dimension, "surface scan needs m = 2");
    if (f.e != 2) fail(errc::invalid_argument, "surface scan expects e = 2");
    const std::uint64_t p = f.p, p2 = p * p;

    SurfaceDiagnostics diag;
    diag.cutoff = e_max;
    diag.truncation_bias = detail::surface_truncation_bias(p, e_max);

    auto cs = detail::to_u64_coeffs(f);
    diag.vanishes_mod_p = true;
    for (auto x : cs) if (x % p != 0) { diag.vanishes_mod_p = false; break; }
    if (diag.vanishes_mod_p) return diag;  // vertical fiber: singular for d >= 1

    detail::SurfaceEval ev{&S, cs, p};

    for (int e = 1; e <= e_max; ++e) {
        gf::Field F = gf::make_field(p, e);
        std::uint64_t q = 1;
        for (int i = 0; i < e; ++i) q *= p;

        // representatives: (1,a,b), (0,1,b), (0,0,1)
        auto run_point = [&](const std::array<gf::El, 3>& P) -> bool {
            // orbit size check + lex-min dedup
            std::array<gf::El, 3> cur = P;
            int orbit = 0;
            bool minimal = true;
            do {
                for (int i = 0; i < 3; ++i) cur[i] = gf::frobenius(F, cur[i]);
                ++orbit;
                if (cur < P) { minimal = false; break; }
            } while (!(cur == P));
            if (!minimal || orbit != e) return false;

            // powers of the (lifted) coordinates mod p^2 and mod p
            std::array<std::vector<gf::El>, 3> pw2, pw1;
            for (int i = 0; i < 3; ++i) {
                pw2[i].resize(S.d + 1);
                pw1[i].resize(S.d + 1);
                pw2[i][0] = gf::El{1};
                pw1[i][0] = gf::El{1};
                for (int k = 1; k <= S.d; ++k) {
                    pw2[i][k] = gf::mul(F, pw2[i][k - 1], P[i], p2);
                    pw1[i][k] = gf::mul(F, pw1[i][k - 1], P[i], p);
                }
            }
            // value mod p^2
            gf::El val = ev.value(F, pw2, p2, cs);
            bool val0 = true;
            for (auto x : val) if (x % p2 != 0) { val0 = false; break; }
            if (!val0) return false;
            // all three homogeneous partials mod p; equivalent to the two
            // chart partials once f(P) = 0, by the Euler relation
            for (int v = 0; v < 3; ++v) {
                gf::El acc;
                for (std::size_t k = 0; k < S.monomials.size(); ++k) {
                    const auto& a = S.monomials[k];
                    if (a[v] == 0) continue;
                    std::uint64_t c = (cs[k] % p) * (a[v] % p) % p;
                    if (c == 0) continue;
                    gf::El term{c};
                    for (int u = 0; u < 3; ++u) {
                        int pow_u = a[u] - (u == v ? 1 : 0);
                        term = gf::mul(F, term, pw1[u][pow_u], p);
                    }
                    acc = fp::add(acc, term, p);
                }
                if (!fp::is_zero(acc)) return false;
            }
            return true;  // singular point found
        };

        std::array<gf::El, 3> P;
        for (std::uint64_t ia = 0; ia < q; ++ia) {
            for (std::uint64_t ib = 0; ib < q; ++ib) {
                P = {gf::El{1}, gf::from_index(F, ia), gf::from_index(F, ib)};
                if (run_point(P)) return diag;  // smooth_up_to_cutoff stays false
            }
        }
        for (std::uint64_t ib = 0; ib < q; ++ib) {
            P = {gf::El{}, gf::El{1}, gf::from_index(F, ib)};
            if (run_point(P)) return diag;
        }
        P = {gf::El{}, gf::El{}, gf::El{1}};
        if (run_point(P)) return diag;
    }
    diag.smooth_up_to_cutoff = true;
    return diag;
}

}  // namespace thetalab
