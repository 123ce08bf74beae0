// Discrete Gaussian sampling on lattices: P(v) proportional to e^{-pi ||v||^2}.
//
// Diagonal lattices sample coordinate-wise.  Moderate weights use an
// inverse-CDF walk against the exact one-dimensional theta normalizer; small
// weights (wide Gaussians) use rejection from a rounded continuous Gaussian
// of weight w/2 with the acceptance correction
//     accept  iff  u <= exp(pi w (y^2/2 - k^2 - 1/8)),   k = round(y),
// which is a true rejection scheme for the discrete target (the exponent is
// <= 0 for every y in [k-1/2, k+1/2]); acceptance stays near 1/sqrt(2).
//
// General lattices (rank <= cap) use rejection from a continuous Gaussian of
// halved weight rounded coordinate-wise, with the analogous correction term
// rho^2 = (1/4) sum |G_ij|.
//
// All draws consume a deterministic mt19937_64 stream, so sample lists are
// bit-reproducible from (seed, count) and independent of worker count:
// sample i always uses stream (seed, i).
#pragma once

#include "thetalab/errors.hpp"
#include "thetalab/lattice.hpp"
#include "thetalab/parallel.hpp"
#include "thetalab/rng.hpp"
#include "thetalab/theta.hpp"

#include <cstdint>
#include <vector>

namespace thetalab {

namespace detail {

template <class Real>
struct CoordSampler {
    Rat w;
    Real wv;
    bool walk;      // inverse-CDF walk vs rejection
    Real theta;     // exact normalizer for the walk path
    Real sigma;     // proposal scale for the rejection path

    explicit CoordSampler(const Rat& weight) : w(weight) {
        wv = to_real<Real>(w);
        walk = w >= Rat(1, 20);
        if (walk) {
            auto t = one_dim_log_theta<Real>(w, Rat(0), default_theta_target<Real>());
            theta = exp(t.log_value);
        } else {
            // proposal density sqrt(w/2) e^{-pi (w/2) y^2}
            sigma = 1 / sqrt(pi_v<Real>() * wv);  // std-normal scale: y = z*sigma
        }
    }

    long long draw(std::mt19937_64& g) const {
        const Real pi = pi_v<Real>();
        if (walk) {
            Real u = uniform01<Real>(g) * theta;
            Real cum = 1;  // k = 0 term
            if (u <= cum) return 0;
            // visit k = 1, -1, 2, -2, ... deterministically
            for (long long k = 1; k <= 2'000'000; ++k) {
                Real t = exp(-pi * wv * Real(k) * Real(k));
                cum += t;
                if (u <= cum) return k;
                cum += t;
                if (u <= cum) return -k;
            }
            return 0;  // u landed in the truncated tail mass (< 2^-100)
        }
        for (int it = 0; it < 100000; ++it) {
            Real z = standard_normal<Real>(g);
            Real y = z * sigma;               // continuous, weight w/2
            long long k = llround(static_cast<double>(y));
            Real accept = exp(pi * wv * (y * y / 2 - Real(k) * Real(k) - Real(1) / 8));
            if (uniform01<Real>(g) <= accept) return k;
        }
        fail(errc::precision_unreachable, "rejection sampler failed to accept");
    }
};

}  // namespace detail

// count i.i.d. samples from the discrete Gaussian on L.
template <class Real = real128>
inline std::vector<std::vector<long long>> sample_gaussian(
    const HermitianLattice& L, std::uint64_t seed, std::uint64_t count,
    int rank_cap = kDefaultRankCap) {
    std::vector<std::vector<long long>> out(count, std::vector<long long>(L.rank, 0));
    if (L.rank == 0 || count == 0) return out;

    if (L.diagonal_hint) {
        std::vector<detail::CoordSampler<Real>> coords;
        coords.reserve(L.rank);
        for (int i = 0; i < L.rank; ++i) coords.emplace_back(L.weight(i));
        batched_reduce<int>(count, 256, 0,
            [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t) {
                for (std::uint64_t s = lo; s < hi; ++s) {
                    auto g = make_stream(seed, s);
                    for (int i = 0; i < L.rank; ++i) out[s][i] = coords[i].draw(g);
                }
                return 0;
            },
            [](int a, int) { return a; });
        return out;
    }

    if (L.rank > rank_cap)
        fail(errc::rank_cap_exceeded, "rank exceeds sampling cap");

    // General path: continuous proposal with halved Gram, rounded, corrected.
    using detail::EnumPrep;
    auto prep = detail::prepare_enumeration(L);
    const Real pi = pi_v<Real>();
    Real rho_sq = 0;
    for (int i = 0; i < L.rank; ++i)
        for (int j = 0; j < L.rank; ++j)
            rho_sq += fabs(to_real<Real>(L.gram[i][j]));
    rho_sq /= 4;
    // y = M z with M M^T = (pi G)^{-1}: M = L^{-T} diag(1/sqrt(pi d_i)).
    int n = L.rank;
    std::vector<std::vector<Real>> minv(n, std::vector<Real>(n, 0));
    {
        // invert the unit lower-triangular mu
        std::vector<std::vector<Real>> linv(n, std::vector<Real>(n, 0));
        for (int i = 0; i < n; ++i) {
            linv[i][i] = 1;
            for (int j = i - 1; j >= 0; --j) {
                Real acc = 0;
                for (int k = j + 1; k <= i; ++k)
                    acc += Real(prep.mu[k][j]) * linv[i][k];
                linv[i][j] = -acc;
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                minv[j][i] = linv[i][j] / sqrt(pi * Real(prep.diag[i]));  // (L^{-T})_{ji}
    }

    batched_reduce<int>(count, 64, 0,
        [&](std::uint64_t lo, std::uint64_t hi, std::uint64_t) {
            std::vector<Real> z(n);
            std::vector<long long> k(n);
            for (std::uint64_t s = lo; s < hi; ++s) {
                auto g = make_stream(seed, s);
                for (int it = 0;; ++it) {
                    if (it > 200000)
                        fail(errc::precision_unreachable, "vector rejection failed to accept");
                    Real qy = 0;
                    for (int i = 0; i < n; ++i) z[i] = standard_normal<Real>(g);
                    // y = M z has density prop. to e^{-(pi/2) Q(y)}
                    std::vector<Real> y(n, Real(0));
                    for (int i = 0; i < n; ++i) {
                        Real acc = 0;
                        for (int j = 0; j < n; ++j) acc += minv[i][j] * z[j];
                        y[i] = acc;
                        k[i] = llround(static_cast<double>(y[i]));
                    }
                    // Q(y) and Q(k) exactly from the Gram
                    Real qk = 0;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            Real gij = to_real<Real>(L.gram[i][j]);
                            qy += gij * y[i] * y[j];
                            qk += gij * Real(k[i]) * Real(k[j]);
                        }
                    Real accept = exp(pi * (qy / 2 - qk - rho_sq));
                    if (uniform01<Real>(g) <= accept) { out[s].assign(k.begin(), k.end()); break; }
                }
            }
            return 0;
        },
        [](int a, int) { return a; });
    return out;
}

}  // namespace thetalab
