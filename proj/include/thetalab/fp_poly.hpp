// Dense univariate polynomial arithmetic over Z/m for machine-word moduli,
// plus complete factorization over prime fields (squarefree decomposition,
// distinct-degree, Cantor-Zassenhaus equal-degree splitting).  Degrees here
// are small (forms of desk-scale degree), so everything is schoolbook.
//
// Factorization consumes a private mt19937_64 seeded from the polynomial
// itself, making results fully deterministic.
#pragma once

#include "thetalab/errors.hpp"
#include "thetalab/numeric.hpp"
#include "thetalab/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace thetalab::fp {

using Poly = std::vector<std::uint64_t>;  // little-endian, coefficients in [0, m)

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline bool is_zero(const Poly& f) { return f.empty(); }

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Inverse of a unit mod m (m prime, or a coprime to m).
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    long long t = 0, nt = 1;
    long long r = static_cast<long long>(m), nr = static_cast<long long>(a % m);
    while (nr != 0) {
        long long q = r / nr;
        t -= q * nt; std::swap(t, nt);
        r -= q * nr; std::swap(r, nr);
    }
    if (r != 1) fail(errc::invalid_argument, "element not invertible");
    if (t < 0) t += static_cast<long long>(m);
    return static_cast<std::uint64_t>(t);
}

inline Poly add(const Poly& a, const Poly& b, std::uint64_t m) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint64_t x = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        r[i] = x >= m ? x - m : x;
    }
    trim(r);
    return r;
}

inline Poly sub(const Poly& a, const Poly& b, std::uint64_t m) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint64_t x = (i < a.size() ? a[i] : 0) + m - (i < b.size() ? b[i] : 0);
        r[i] = x >= m ? x - m : x;
    }
    trim(r);
    return r;
}

inline Poly mul(const Poly& a, const Poly& b, std::uint64_t m) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % m;
    }
    trim(r);
    return r;
}

inline Poly scale(const Poly& a, std::uint64_t c, std::uint64_t m) {
    Poly r = a;
    for (auto& x : r) x = mulmod(x, c, m);
    trim(r);
    return r;
}

// f = q*g + r; requires lc(g) invertible mod m.
inline void divmod(const Poly& f, const Poly& g, std::uint64_t m, Poly& q, Poly& r) {
    if (is_zero(g)) fail(errc::invalid_argument, "division by zero polynomial");
    r = f;
    trim(r);
    q.assign(r.size() > g.size() - 1 ? r.size() - g.size() + 1 : 0, 0);
    std::uint64_t inv = invmod(g.back(), m);
    while (r.size() >= g.size()) {
        std::uint64_t c = mulmod(r.back(), inv, m);
        std::size_t shift = r.size() - g.size();
        if (c != 0) {
            q[shift] = c;
            for (std::size_t i = 0; i < g.size(); ++i) {
                std::uint64_t x = r[shift + i] + m - mulmod(c, g[i], m);
                r[shift + i] = x >= m ? x - m : x;
            }
        }
        r.pop_back();
        while (!r.empty() && r.back() == 0) r.pop_back();
        if (r.size() < g.size()) break;
    }
    trim(q);
}

inline Poly mod(const Poly& f, const Poly& g, std::uint64_t m) {
    Poly q, r;
    divmod(f, g, m, q, r);
    return r;
}

inline Poly make_monic(const Poly& f, std::uint64_t p) {
    if (is_zero(f)) return f;
    return scale(f, invmod(f.back(), p), p);
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
    trim(a); trim(b);
    while (!is_zero(b)) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, p);
}

inline Poly derivative(const Poly& f, std::uint64_t m) {
    if (f.size() <= 1) return {};
    Poly r(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) r[i - 1] = mulmod(f[i], i % m, m);
    trim(r);
    return r;
}

inline Poly pow_mod(Poly base, Int e, const Poly& modpoly, std::uint64_t p) {
    Poly r{1};
    base = mod(base, modpoly, p);
    while (e > 0) {
        if ((e & 1) != 0) r = mod(mul(r, base, p), modpoly, p);
        e >>= 1;
        if (e > 0) base = mod(mul(base, base, p), modpoly, p);
    }
    return r;
}

struct FactorMult {
    Poly factor;  // monic irreducible
    int multiplicity;
};

namespace detail {

inline std::uint64_t poly_hash(const Poly& f, std::uint64_t p) {
    std::uint64_t h = 1469598103934665603ULL ^ p;
    for (auto c : f) { h ^= c; h *= 1099511628211ULL; }
    return h;
}

// Splits a monic squarefree product of irreducibles all of degree e.
inline void equal_degree(const Poly& f, int e, std::uint64_t p,
                         std::mt19937_64& g, std::vector<Poly>& out) {
    int k = degree(f);
    if (k == e) { out.push_back(f); return; }
    Poly split;
    for (int attempt = 0; attempt < 200; ++attempt) {
        Poly r(k);
        for (auto& c : r) c = g() % p;
        trim(r);
        if (is_zero(r) || degree(r) < 1) continue;
        Poly t;
        if (p == 2) {
            // trace map r + r^2 + r^4 + ... + r^(2^(e-1)) mod f
            t = r;
            Poly cur = r;
            for (int i = 1; i < e; ++i) {
                cur = mod(mul(cur, cur, p), f, p);
                t = add(t, cur, p);
            }
        } else {
            Int q = 1;
            for (int i = 0; i < e; ++i) q *= p;
            t = pow_mod(r, (q - 1) / 2, f, p);
            if (t.empty()) t = Poly{p - 1}; else t[0] = (t[0] + p - 1) % p;
            trim(t);
        }
        Poly d = gcd(f, t, p);
        if (degree(d) > 0 && degree(d) < k) { split = d; break; }
    }
    if (is_zero(split))
        fail(errc::factorization_budget, "equal-degree splitting stalled");
    Poly q, r;
    divmod(f, split, p, q, r);
    equal_degree(split, e, p, g, out);
    equal_degree(make_monic(q, p), e, p, g, out);
}

}  // namespace detail

namespace detail {

inline Poly quotient(const Poly& f, const Poly& g, std::uint64_t p) {
    Poly q, r;
    divmod(f, g, p, q, r);
    return make_monic(q, p);
}

// p-th root of a monic polynomial with vanishing derivative: over F_p the
// coefficients are Frobenius-fixed, so the root just gathers every p-th one.
inline Poly pth_root(const Poly& f, std::uint64_t p) {
    Poly root(degree(f) / p + 1);
    for (std::size_t i = 0; i < root.size(); ++i) root[i] = f[i * p];
    trim(root);
    return root;
}

// (squarefree monic part, multiplicity) pairs of monic f, char-p aware.
inline void squarefree_parts(const Poly& f, std::uint64_t p, int scale,
                             std::vector<std::pair<Poly, int>>& parts) {
    if (degree(f) < 1) return;
    Poly d = derivative(f, p);
    if (is_zero(d)) {
        squarefree_parts(pth_root(f, p), p, scale * static_cast<int>(p), parts);
        return;
    }
    Poly c = gcd(f, d, p);
    Poly w = quotient(f, c, p);
    int i = 1;
    while (degree(w) > 0) {
        Poly y = gcd(w, c, p);
        Poly z = quotient(w, y, p);
        if (degree(z) > 0) parts.emplace_back(z, i * scale);
        w = y;
        c = quotient(c, y, p);
        ++i;
    }
    if (degree(c) > 0)
        squarefree_parts(pth_root(c, p), p, scale * static_cast<int>(p), parts);
}

// Distinct-degree + equal-degree split of a monic squarefree z.
inline void ddf_edf(const Poly& z, std::uint64_t p, std::mt19937_64& gen,
                    int mult, std::vector<FactorMult>& out) {
    Poly g = z;
    Poly h{0, 1};  // x
    int e = 0;
    while (degree(g) > 0) {
        ++e;
        if (2 * e > degree(g)) { out.push_back({g, mult}); return; }
        h = pow_mod(h, Int(p), g, p);
        Poly d = gcd(g, sub(h, Poly{0, 1}, p), p);
        if (degree(d) > 0) {
            std::vector<Poly> irr;
            equal_degree(d, e, p, gen, irr);
            for (auto& c : irr) out.push_back({c, mult});
            g = quotient(g, d, p);
            if (degree(g) > 0) h = mod(h, g, p);
        }
    }
}

}  // namespace detail

// Full factorization of nonzero f over F_p; factors monic irreducible,
// sorted by (degree, coefficients) so output order is canonical.
inline std::vector<FactorMult> factor(const Poly& input, std::uint64_t p) {
    Poly f = input;
    trim(f);
    if (is_zero(f)) fail(errc::zero_form, "factor of zero polynomial");
    std::mt19937_64 gen = make_stream(detail::poly_hash(f, p), 0x5eed);
    std::vector<FactorMult> out;
    f = make_monic(f, p);
    if (degree(f) == 0) return out;

    std::vector<std::pair<Poly, int>> parts;
    detail::squarefree_parts(f, p, 1, parts);
    for (auto& [z, mult] : parts) detail::ddf_edf(z, p, gen, mult, out);

    std::sort(out.begin(), out.end(), [](const FactorMult& a, const FactorMult& b) {
        if (a.factor.size() != b.factor.size()) return a.factor.size() < b.factor.size();
        return a.factor < b.factor;
    });
    return out;
}

// True iff gcd(f, f') is constant and f has no p-th-power layer; cheap
// squarefree screen used by censuses before any full factorization.
inline bool is_squarefree(const Poly& f, std::uint64_t p) {
    Poly d = derivative(f, p);
    if (is_zero(d)) return degree(f) < 1;
    return degree(gcd(f, d, p)) == 0;
}

}  // namespace thetalab::fp
