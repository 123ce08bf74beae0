// Executable bounds on theta invariants.
//
//   bound_C(rk, lambda) = 3^rk (pi lambda^2)^{-rk/2} int_{pi lambda^2}^inf u^{rk/2} e^{-u} du
//
// bounds exp(h1) - 1 whenever every nonzero dual vector has norm >= lambda.
// simplified_C is the closed-form majorant 2 * 3^rk * e^{-pi e^{2 eps d}},
// valid once e^{2 eps d} clears rk/(2 pi).  The incomplete gamma is computed
// by the standard series / continued-fraction split at u = s + 1.
#pragma once

#include "thetalab/enumerate.hpp"
#include "thetalab/errors.hpp"
#include "thetalab/lattice.hpp"
#include "thetalab/theta.hpp"

#include <string>

namespace thetalab {

// exp(x) - 1 without cancellation for small x.
template <class Real>
inline Real expm1_stable(const Real& x) {
    if (fabs(x) > Real(1) / 4) return exp(x) - 1;
    Real term = x, sum = x;
    for (int n = 2; n < 1000; ++n) {
        term *= x / n;
        sum += term;
        if (fabs(term) < fabs(sum) * eps_v<Real>()) break;
    }
    return sum;
}

// Gamma(k/2) for integer k >= 1, by recurrence from Gamma(1/2) and Gamma(1).
template <class Real>
inline Real gamma_half_integer(int twice_s) {
    Real g = (twice_s % 2 == 0) ? Real(1) : sqrt(pi_v<Real>());
    Real s = (twice_s % 2 == 0) ? Real(1) : Real(1) / 2;
    while (2 * s < twice_s) { g *= s; s += 1; }
    return g;
}

// Upper incomplete gamma Gamma(s, x), s = k/2 with k >= 2, x > 0.
// Series on x < s+1 (via the lower gamma), Lentz continued fraction beyond.
template <class Real = real128>
inline Real upper_incomplete_gamma(const Real& s, const Real& x) {
    int twice_s = static_cast<int>(lround(static_cast<double>(2 * s)));
    if (x <= 0) return gamma_half_integer<Real>(twice_s);
    if (x < s + 1) {
        // gamma(s,x) = x^s e^-x sum_n x^n / (s (s+1) ... (s+n))
        Real term = 1 / s, sum = term;
        for (int n = 1; n < 100000; ++n) {
            term *= x / (s + n);
            sum += term;
            if (term < sum * eps_v<Real>()) break;
        }
        return gamma_half_integer<Real>(twice_s) - pow(x, s) * exp(-x) * sum;
    }
    // Gamma(s,x) = e^-x x^s / (x + 1 - s - 1/(x + 3 - s - 2 (2-s)/(x + 5 - s - ...)))
    const Real tiny = Real(1) / (eps_v<Real>() * eps_v<Real>());
    Real b = x + 1 - s, c = tiny, d = 1 / b, h = d;
    for (int i = 1; i < 100000; ++i) {
        Real an = -Real(i) * (Real(i) - s);
        b += 2;
        d = an * d + b;
        if (fabs(d) < 1 / tiny) d = 1 / tiny;
        c = b + an / c;
        if (fabs(c) < 1 / tiny) c = 1 / tiny;
        d = 1 / d;
        Real delta = d * c;
        h *= delta;
        if (fabs(delta - 1) < eps_v<Real>()) break;
    }
    return exp(-x) * pow(x, s) * h;
}

// C(rk, lambda): decreasing in lambda, increasing in rank.
template <class Real = real128>
inline Real bound_C(int rank, const Real& lambda) {
    if (rank < 0) fail(errc::invalid_argument, "negative rank");
    if (!(lambda > 0)) fail(errc::invalid_argument, "lambda must be positive");
    Real x = pi_v<Real>() * lambda * lambda;
    Real s = Real(rank) / 2 + 1;
    return pow(Real(3), rank) * pow(x, -Real(rank) / 2) * upper_incomplete_gamma(s, x);
}

// 2 * 3^rk * e^{-pi e^{2 eps d}}; requires e^{2 eps d} > rank / (2 pi).
template <class Real = real128>
inline Real simplified_C(int rank, const Real& eps, int d) {
    if (rank < 0) fail(errc::invalid_argument, "negative rank");
    Real growth = exp(2 * eps * Real(d));
    if (!(growth > Real(rank) / (2 * pi_v<Real>())))
        fail(errc::regime_invalid, "e^{2 eps d} <= rank/(2 pi)");
    return 2 * pow(Real(3), rank) * exp(-pi_v<Real>() * growth);
}

// Log-scale version for regimes where the bound underflows.
template <class Real = real128>
inline Real simplified_C_log(int rank, const Real& eps, int d) {
    Real growth = exp(2 * eps * Real(d));
    if (!(growth > Real(rank) / (2 * pi_v<Real>())))
        fail(errc::regime_invalid, "e^{2 eps d} <= rank/(2 pi)");
    return log(Real(2)) + Real(rank) * log(Real(3)) - pi_v<Real>() * growth;
}

template <class Real = real128>
struct BoundReport {
    std::string check;
    Real bound_value;
    Real exact_value;
    bool satisfied = false;
    int rank = 0;
    Real lambda;     // dual minimum (or comparison scale)
    Real slack;      // bound - exact
};

// exp(h1(L)) - 1 <= bound_C(rank, lambda1(dual L)).
template <class Real = real128>
inline BoundReport<Real> check_h1_bound(const HermitianLattice& L,
                                        int rank_cap = kDefaultRankCap) {
    BoundReport<Real> rep;
    rep.check = "h1-upper-bound";
    rep.rank = L.rank;
    HermitianLattice D = dual(L);
    rep.lambda = lambda1<Real>(D, rank_cap);
    rep.bound_value = bound_C<Real>(L.rank, rep.lambda);
    auto h1 = h0_theta<Real>(D, default_theta_target<Real>());
    rep.exact_value = expm1_stable(h1.log_value);
    Real err = (exp(h1.log_value) + 1) * h1.abs_error;
    rep.slack = rep.bound_value - rep.exact_value;
    rep.satisfied = rep.exact_value <= rep.bound_value + err;
    return rep;
}

// lambda1(dual L) >= 1 / max_i ||b_i|| for the defining Gram basis.
template <class Real = real128>
inline BoundReport<Real> dual_min_vs_basis(const HermitianLattice& L,
                                           int rank_cap = kDefaultRankCap) {
    BoundReport<Real> rep;
    rep.check = "dual-minimum-vs-basis";
    rep.rank = L.rank;
    Rat max_norm_sq = 0;
    for (int i = 0; i < L.rank; ++i)
        max_norm_sq = std::max(max_norm_sq, L.gram[i][i]);
    auto sv = shortest_vector(dual(L), rank_cap);
    rep.lambda = sqrt(to_real<Real>(sv.norm_sq));
    // exact comparison: lambda1(dual)^2 * max||b||^2 >= 1
    rep.exact_value = 1 / sqrt(to_real<Real>(max_norm_sq));
    rep.bound_value = rep.lambda;
    rep.slack = rep.bound_value - rep.exact_value;
    rep.satisfied = sv.norm_sq * max_norm_sq >= 1;
    return rep;
}

}  // namespace thetalab
