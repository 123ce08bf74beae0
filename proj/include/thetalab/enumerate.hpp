// Short-vector machinery over exact Gram matrices.
//
// Fincke-Pohst style depth-first enumeration.  Interior pruning runs in
// double precision with a widening slack so no candidate near the boundary
// is lost; every emitted vector passes an exact integer test
// v^T (D*G) v <= D*R^2, so membership in the ball is exact.  The scaled
// integer norm D*Q(v) is handed to the visitor, which lets theta sums raise
// a single high-precision base e^{-pi/D} to integer powers instead of
// calling exp per lattice point.
#pragma once

#include "thetalab/errors.hpp"
#include "thetalab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace thetalab {

constexpr int kDefaultRankCap = 40;
constexpr std::uint64_t kDefaultPointCap = 20'000'000;

namespace detail {

struct EnumPrep {
    int n = 0;
    Int denom = 1;                       // D: common denominator of the Gram
    std::vector<std::vector<Int>> a;     // D * gram, integral
    bool fits64 = false;
    std::vector<std::vector<long long>> a64;
    std::vector<std::vector<double>> mu; // unit lower-triangular factor
    std::vector<double> diag;            // positive pivots of LDL^T
};

inline EnumPrep prepare_enumeration(const HermitianLattice& L) {
    EnumPrep P;
    P.n = L.rank;
    for (const auto& row : L.gram)
        for (const Rat& x : row)
            P.denom = lcm(P.denom, denominator(x));
    P.a.assign(P.n, std::vector<Int>(P.n));
    Int max_abs = 0;
    for (int i = 0; i < P.n; ++i)
        for (int j = 0; j < P.n; ++j) {
            P.a[i][j] = numerator(L.gram[i][j] * Rat(P.denom));
            if (abs(P.a[i][j]) > max_abs) max_abs = abs(P.a[i][j]);
        }
    P.fits64 = max_abs < Int(1) << 40;
    if (P.fits64) {
        P.a64.assign(P.n, std::vector<long long>(P.n));
        for (int i = 0; i < P.n; ++i)
            for (int j = 0; j < P.n; ++j)
                P.a64[i][j] = static_cast<long long>(P.a[i][j]);
    }
    // double LDL^T of the Gram itself (not the scaled matrix).
    std::vector<std::vector<double>> g(P.n, std::vector<double>(P.n));
    for (int i = 0; i < P.n; ++i)
        for (int j = 0; j < P.n; ++j)
            g[i][j] = static_cast<double>(to_real<real64>(L.gram[i][j]));
    P.mu.assign(P.n, std::vector<double>(P.n, 0.0));
    P.diag.assign(P.n, 0.0);
    for (int j = 0; j < P.n; ++j) {
        double d = g[j][j];
        for (int k = 0; k < j; ++k) d -= P.mu[j][k] * P.mu[j][k] * P.diag[k];
        P.diag[j] = d;
        P.mu[j][j] = 1.0;
        for (int i = j + 1; i < P.n; ++i) {
            double v = g[i][j];
            for (int k = 0; k < j; ++k) v -= P.mu[i][k] * P.mu[j][k] * P.diag[k];
            P.mu[i][j] = v / d;
        }
    }
    return P;
}

// Exact scaled norm D*Q(v) as Int.
inline Int scaled_norm(const EnumPrep& P, const std::vector<long long>& v) {
    if (P.fits64) {
        // Coordinates stay small enough in practice that the quadratic form
        // fits __int128 comfortably; guard anyway.
        __int128 q = 0;
        for (int i = 0; i < P.n; ++i) {
            if (v[i] == 0) continue;
            __int128 row = 0;
            for (int j = 0; j < P.n; ++j) row += static_cast<__int128>(P.a64[i][j]) * v[j];
            q += row * v[i];
        }
        bool fits = q >= -(static_cast<__int128>(1) << 126) && q <= (static_cast<__int128>(1) << 126);
        if (fits) {
            Int r = static_cast<long long>(q >> 64);
            r <<= 64;
            r += static_cast<unsigned long long>(q & ~0ULL);
            return r;
        }
    }
    Int q = 0;
    for (int i = 0; i < P.n; ++i) {
        if (v[i] == 0) continue;
        Int row = 0;
        for (int j = 0; j < P.n; ++j) row += P.a[i][j] * v[j];
        q += row * v[i];
    }
    return q;
}

// DFS over coordinates n-1 .. 0; calls visit(v, scaled_norm) on each exact
// member of the ball Q(v) <= r2.
template <class Visit>
void ball_walk(const EnumPrep& P, const Rat& r2, std::uint64_t cap, Visit&& visit) {
    const int n = P.n;
    if (n == 0) {
        std::vector<long long> empty;
        visit(empty, Int(0));
        return;
    }
    const double slack = 1e-9;
    const double r2d = static_cast<double>(to_real<real64>(r2)) * (1.0 + slack) + slack;
    const Int r2_scaled_num = numerator(r2 * Rat(P.denom));
    const Int r2_scaled_den = denominator(r2 * Rat(P.denom));

    std::vector<long long> v(n, 0);
    std::vector<double> center(n, 0.0);     // c_i given v_{i+1..n-1}
    std::vector<double> budget(n, 0.0);     // remaining quadratic budget
    std::vector<long long> lo(n), hi(n);
    std::uint64_t emitted = 0;

    int level = n - 1;
    budget[level] = r2d;
    center[level] = 0.0;
    auto set_range = [&](int i) {
        double rad = budget[i] / P.diag[i];
        rad = rad > 0 ? std::sqrt(rad) + slack : 0.0;
        lo[i] = static_cast<long long>(std::ceil(-center[i] - rad - 0.5));
        hi[i] = static_cast<long long>(std::floor(-center[i] + rad + 0.5));
        v[i] = lo[i] - 1;
    };
    set_range(level);

    while (level < n) {
        ++v[level];
        if (v[level] > hi[level]) { ++level; continue; }
        double u = v[level] + center[level];
        double used = P.diag[level] * u * u;
        if (used > budget[level] + slack * (1.0 + budget[level])) continue;
        if (level == 0) {
            Int qs = scaled_norm(P, v);
            if (qs * r2_scaled_den <= r2_scaled_num) {
                if (++emitted > cap)
                    fail(errc::budget_exceeded, "enumeration point cap exceeded");
                visit(const_cast<const std::vector<long long>&>(v), qs);
            }
            continue;
        }
        int next = level - 1;
        budget[next] = budget[level] - used;
        double c = 0.0;
        for (int j = level; j < n; ++j) c += P.mu[j][next] * v[j];
        center[next] = c;
        level = next;
        set_range(level);
    }
}

// Coset variant: walks integer v and emits the exact scaled norm
// qs = u^T A u with u = den*v + shift_num, i.e. qs = D*den^2*Q(v + s).
// The ball condition Q(v+s) <= r2 is tested exactly.
template <class Visit>
void ball_walk_shifted(const EnumPrep& P, const Int& den,
                       const std::vector<Int>& shift_num, const Rat& r2,
                       std::uint64_t cap, Visit&& visit) {
    const int n = P.n;
    if (n == 0) {
        std::vector<long long> empty;
        visit(empty, Int(0));
        return;
    }
    bool trivial_shift = den == 1;
    for (const Int& c : shift_num) if (c != 0) trivial_shift = false;
    if (trivial_shift) {
        ball_walk(P, r2, cap, visit);
        return;
    }

    std::vector<double> s(n);
    std::vector<long long> c64(n);
    long long den64 = den.convert_to<long long>();
    for (int i = 0; i < n; ++i) {
        c64[i] = shift_num[i].convert_to<long long>();
        s[i] = static_cast<double>(c64[i]) / static_cast<double>(den64);
    }

    const double slack = 1e-9;
    const double r2d = static_cast<double>(to_real<real64>(r2)) * (1.0 + slack) + slack;
    Rat scaled_r2 = r2 * Rat(P.denom) * Rat(den) * Rat(den);
    const Int r2_num = numerator(scaled_r2);
    const Int r2_den = denominator(scaled_r2);

    std::vector<long long> v(n, 0), u(n, 0);
    std::vector<double> center(n, 0.0), budget(n, 0.0);
    std::vector<long long> lo(n), hi(n);
    std::uint64_t emitted = 0;

    int level = n - 1;
    budget[level] = r2d;
    center[level] = s[level];
    auto set_range = [&](int i) {
        double rad = budget[i] / P.diag[i];
        rad = rad > 0 ? std::sqrt(rad) + slack : 0.0;
        lo[i] = static_cast<long long>(std::ceil(-center[i] - rad - 0.5));
        hi[i] = static_cast<long long>(std::floor(-center[i] + rad + 0.5));
        v[i] = lo[i] - 1;
    };
    set_range(level);

    while (level < n) {
        ++v[level];
        if (v[level] > hi[level]) { ++level; continue; }
        double y = v[level] + center[level];
        double used = P.diag[level] * y * y;
        if (used > budget[level] + slack * (1.0 + budget[level])) continue;
        if (level == 0) {
            for (int i = 0; i < n; ++i) u[i] = den64 * v[i] + c64[i];
            Int qs = scaled_norm(P, u);
            if (qs * r2_den <= r2_num) {
                if (++emitted > cap)
                    fail(errc::budget_exceeded, "enumeration point cap exceeded");
                visit(const_cast<const std::vector<long long>&>(v), qs);
            }
            continue;
        }
        int next = level - 1;
        budget[next] = budget[level] - used;
        double c = s[next];
        for (int j = level; j < n; ++j) c += P.mu[j][next] * (v[j] + s[j]);
        center[next] = c;
        level = next;
        set_range(level);
    }
}

}  // namespace detail

// All lattice vectors with ||v|| <= R (inclusive, exact), in lexicographic
// coordinate order.  Includes the zero vector.
inline std::vector<std::vector<long long>> enumerate_ball(
    const HermitianLattice& L, const Rat& radius,
    std::uint64_t cap = kDefaultPointCap) {
    if (radius < 0) fail(errc::invalid_argument, "negative radius");
    auto prep = detail::prepare_enumeration(L);
    std::vector<std::vector<long long>> out;
    detail::ball_walk(prep, radius * radius, cap,
                      [&](const std::vector<long long>& v, const Int&) { out.push_back(v); });
    std::sort(out.begin(), out.end());
    return out;
}

struct ShortestVector {
    std::vector<long long> coords;
    Rat norm_sq;
};

// Exact shortest nonzero vector; lexicographically smallest coordinate
// vector among the minimizers.
inline ShortestVector shortest_vector(const HermitianLattice& L,
                                      int rank_cap = kDefaultRankCap) {
    if (L.rank == 0) fail(errc::invalid_argument, "rank-0 lattice has no shortest vector");
    if (L.rank > rank_cap) fail(errc::rank_cap_exceeded, "rank exceeds enumeration cap");
    Rat bound = L.gram[0][0];
    for (int i = 1; i < L.rank; ++i) bound = std::min(bound, L.gram[i][i]);

    auto prep = detail::prepare_enumeration(L);
    ShortestVector best;
    best.norm_sq = bound;
    bool found = false;
    detail::ball_walk(prep, bound, kDefaultPointCap,
                      [&](const std::vector<long long>& v, const Int& qs) {
        if (qs == 0) {
            bool zero = true;
            for (long long x : v) if (x) { zero = false; break; }
            if (zero) return;
        }
        Rat q(qs, prep.denom);
        if (!found || q < best.norm_sq ||
            (q == best.norm_sq && v < best.coords)) {
            best.norm_sq = q;
            best.coords = v;
            found = true;
        }
    });
    return best;
}

template <class Real = real128>
inline Real lambda1(const HermitianLattice& L, int rank_cap = kDefaultRankCap) {
    return sqrt(to_real<Real>(shortest_vector(L, rank_cap).norm_sq));
}

}  // namespace thetalab
