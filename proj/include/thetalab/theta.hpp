// Theta invariants with rigorous error bounds.
//
//   h0(L)      = log sum_{v in L} exp(-pi ||v||^2)
//   h1(L)      = h0(dual L)
//   coset      = log sum_{v in L} exp(-pi ||v + s||^2)
//
// Diagonal lattices factor into one-dimensional sums.  Each 1-d sum is
// evaluated directly for w >= 1 and through the Jacobi transformation
// theta(w) = w^{-1/2} theta(1/w) for w < 1, so only a handful of terms are
// ever needed; truncation is certified by the geometric tail bound
// 2 e^{-pi w K^2} / (1 - e^{-pi w (2K+1)}).  General lattices are summed by
// exact ball enumeration with the relative tail bound
// t^{-rank/2} e^{-pi (1-t) R^2} minimized over a t-grid.
//
// Floating error is tracked conservatively: terms are produced as integer
// powers of a single base e^{-pi/D} computed at guard precision (twice the
// working significand), so the reported abs_error dominates truncation plus
// every rounding step.
#pragma once

#include "thetalab/enumerate.hpp"
#include "thetalab/errors.hpp"
#include "thetalab/lattice.hpp"
#include "thetalab/numeric.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace thetalab {

template <class Real>
struct ThetaValue {
    Real log_value;
    Real abs_error;  // |log_value - true| <= abs_error
};

// Relative mass bound: (sum over ||v|| >= R of e^{-pi||v||^2}) * e^{-h0}
// <= t^{-rank/2} * e^{-pi (1-t) R^2}, for t in (0,1].
template <class Real = real128>
inline Real theta_tail_fraction_bound(int rank, const Real& R, const Real& t) {
    if (!(t > 0 && t <= 1)) fail(errc::invalid_argument, "t must lie in (0,1]");
    if (R < 0) fail(errc::invalid_argument, "R must be nonnegative");
    return pow(t, -Real(rank) / 2) * exp(-pi_v<Real>() * (1 - t) * R * R);
}

// Minimum of the bound over the grid t in {0.05, 0.10, ..., 1.0}.
template <class Real = real128>
inline Real theta_tail_fraction_optimized(int rank, const Real& R, Real* best_t = nullptr) {
    Real best = 0, arg = 1;
    for (int i = 1; i <= 20; ++i) {
        Real t = Real(i) / 20;
        Real b = theta_tail_fraction_bound(rank, R, t);
        if (i == 1 || b < best) { best = b; arg = t; }
    }
    if (best_t) *best_t = arg;
    return best;
}

namespace detail {

// Geometric tail bound for sum_{|k| > K} e^{-pi w k^2}; also valid for the
// shifted grid k + s, s in [0,1), once |k + s| >= K on the excluded terms.
template <class W>
inline W geometric_tail(const W& w, std::uint64_t K) {
    W x = pi_v<W>() * w;
    W head = 2 * exp(-x * W(K) * W(K));
    W q = exp(-x * W(2 * K + 1));
    if (q >= 1) return head / eps_v<W>();  // w ~ 0; callers never land here
    return head / (1 - q);
}

// One-dimensional sum S(w, s) = sum_k e^{-pi w (k+s)^2} for w >= 1,
// s in [0,1), with relative truncation below rel_target.
template <class W>
inline std::pair<W, W> one_dim_direct(const W& w, const W& s, const W& rel_target) {
    const W x = pi_v<W>() * w;
    const W q2 = exp(-2 * x);
    W sum = exp(-x * s * s);                 // k = 0
    W t = sum, r = exp(-x * (2 * s + 1));    // walks k = 1, 2, ...
    W tn = sum, rn = exp(-x * (1 - 2 * s));  // walks k = -1, -2, ...
    std::uint64_t K = 0;
    for (;;) {
        ++K;
        t *= r;   r *= q2;
        tn *= rn; rn *= q2;
        sum += t + tn;
        if (K >= 4 && K % 2 == 0) {
            W tail = geometric_tail(w, K);
            if (tail <= rel_target * sum) {
                W round_rel = W(8 * K + 64) * eps_v<W>();
                return {sum, tail / sum + round_rel};
            }
        }
        if (K > 4'000'000)
            fail(errc::precision_unreachable, "1-d theta truncation did not converge");
    }
}

template <class Real>
struct LogWithError {
    Real log_value;
    Real abs_error;
};

// log S(w, s) for arbitrary w > 0; Jacobi transformation below w = 1:
// S(w,s) = w^{-1/2} [1 + 2 sum_{m>=1} e^{-pi m^2 / w} cos(2 pi m s)].
template <class Real>
inline LogWithError<Real> one_dim_log_theta(const Rat& w, const Rat& shift,
                                            const Real& rel_target) {
    using W = wider_t<Real>;
    if (w <= 0) fail(errc::not_positive_definite, "nonpositive weight");
    const W sv = to_real<W>(reduce_unit_interval(shift));
    const W target = W(rel_target) / 2;
    if (w >= 1) {
        auto [sum, rel] = one_dim_direct(to_real<W>(w), sv, target);
        return {Real(log(sum)), Real(rel * W(1.25)) + 8 * eps_v<Real>()};
    }
    const Rat winv = Rat(1) / w;
    const W wi = to_real<W>(winv);
    const W x = pi_v<W>() * wi;
    W sum = 1, tail = 0;
    std::uint64_t K = 0;
    for (;;) {
        ++K;
        W m = W(K);
        sum += 2 * exp(-x * m * m) * cos(2 * pi_v<W>() * m * sv);
        tail = geometric_tail(wi, K);
        if (tail <= target) break;  // sum stays above 0.9 for w < 1
        if (K > 64)
            fail(errc::precision_unreachable, "dual theta truncation did not converge");
    }
    W log_val = -log(to_real<W>(w)) / 2 + log(sum);
    W rel = tail / sum + W(16 * K + 64) * eps_v<W>();
    return {Real(log_val), Real(rel * W(1.25)) + 8 * eps_v<Real>()};
}

// Power ladder: base^e for many integer exponents in [0, e_max] at two
// multiplications per query.
template <class W>
class PowerTable {
public:
    PowerTable(const W& base, const Int& e_max) {
        std::uint64_t emax = e_max.template convert_to<std::uint64_t>();
        unsigned bits = 1;
        while ((emax >> bits) != 0) ++bits;
        lo_bits_ = bits / 2 + 1;
        lo_.resize(std::size_t(1) << lo_bits_);
        lo_[0] = 1;
        for (std::size_t k = 1; k < lo_.size(); ++k) lo_[k] = lo_[k - 1] * base;
        W hi_base = lo_.back() * base;  // base^(2^lo_bits)
        hi_.resize((emax >> lo_bits_) + 1);
        hi_[0] = 1;
        for (std::size_t k = 1; k < hi_.size(); ++k) hi_[k] = hi_[k - 1] * hi_base;
    }
    W operator()(const Int& e) const {
        std::uint64_t v = e.template convert_to<std::uint64_t>();
        return hi_[v >> lo_bits_] * lo_[v & ((std::uint64_t(1) << lo_bits_) - 1)];
    }

private:
    unsigned lo_bits_;
    std::vector<W> lo_, hi_;
};

template <class Real>
inline Rat pick_enumeration_radius_sq(int rank, const Real& rel_target) {
    for (int r2 = 1; r2 <= 4096; ++r2) {
        Real R = sqrt(Real(r2));
        if (theta_tail_fraction_optimized(rank, R) <= rel_target) return Rat(r2);
    }
    fail(errc::precision_unreachable, "no enumeration radius meets the tail target");
}

// Enumerated log theta over a coset L + s (s empty or zero = plain lattice).
template <class Real>
inline LogWithError<Real> enumerated_log_theta(const HermitianLattice& L,
                                               const RatVector& shift,
                                               const Real& rel_target,
                                               std::uint64_t point_cap) {
    using W = wider_t<Real>;
    const int n = L.rank;
    Rat r2 = pick_enumeration_radius_sq(n, rel_target / 2);
    Real bound = theta_tail_fraction_optimized(n, sqrt(to_real<Real>(r2)));

    auto prep = prepare_enumeration(L);
    Int den = 1;
    for (const Rat& s : shift) den = lcm(den, denominator(s));
    std::vector<Int> shift_num(n, 0);
    for (std::size_t i = 0; i < shift.size(); ++i)
        shift_num[i] = numerator(shift[i]) * (den / denominator(shift[i]));

    // Q(v+s) = u^T A u / (D den^2) with integer u = den*v + c.
    Int scale = prep.denom * den * den;
    Int e_max = numerator(r2 * Rat(scale)) + 1;
    if (e_max > (Int(1) << 52))
        fail(errc::precision_unreachable, "scaled exponent range too large");
    W base = exp(-pi_v<W>() / to_real<W>(scale));
    PowerTable<W> powers(base, e_max);

    W sum = 0;
    std::uint64_t n_terms = 0;
    try {
        ball_walk_shifted(prep, den, shift_num, r2, point_cap,
                          [&](const std::vector<long long>&, const Int& qs) {
            sum += powers(qs);
            ++n_terms;
        });
    } catch (const error& e) {
        if (e.kind() == errc::budget_exceeded)
            fail(errc::precision_unreachable,
                 "enumeration budget exceeded before tail bound met");
        throw;
    }
    if (sum <= 0)
        fail(errc::precision_unreachable, "enumerated theta sum vanished");
    W rel = W(bound) / (1 - W(bound)) +
            W(n_terms + 80) * eps_v<W>() * 8 +
            to_real<W>(Rat(e_max)) * eps_v<W>() * 8;
    return {Real(log(sum)), Real(rel * W(1.25)) + 8 * eps_v<Real>()};
}

}  // namespace detail

template <class Real = real128>
inline ThetaValue<Real> h0_theta(const HermitianLattice& L, const Real& target_abs_error,
                                 std::uint64_t point_cap = kDefaultPointCap) {
    if (!(target_abs_error > 0))
        fail(errc::invalid_argument, "target_abs_error must be positive");
    if (L.rank == 0) return {Real(0), Real(0)};
    if (L.diagonal_hint) {
        Real per = target_abs_error / (Real(L.rank) * Real(13) / 10);
        Real log_sum = 0, err = 0;
        for (int i = 0; i < L.rank; ++i) {
            auto one = detail::one_dim_log_theta<Real>(L.weight(i), Rat(0), per);
            log_sum += one.log_value;
            err += one.abs_error + eps_v<Real>() * fabs(log_sum);
        }
        return {log_sum, err};
    }
    Real rel = target_abs_error * Real(8) / 10;
    auto r = detail::enumerated_log_theta<Real>(L, {}, rel, point_cap);
    return {r.log_value, r.abs_error};
}

template <class Real = real128>
inline ThetaValue<Real> h1_theta(const HermitianLattice& L, const Real& target_abs_error,
                                 std::uint64_t point_cap = kDefaultPointCap) {
    return h0_theta<Real>(dual(L), target_abs_error, point_cap);
}

template <class Real = real128>
inline ThetaValue<Real> coset_theta(const Coset& c, const Real& target_abs_error,
                                    std::uint64_t point_cap = kDefaultPointCap) {
    if (!(target_abs_error > 0))
        fail(errc::invalid_argument, "target_abs_error must be positive");
    const HermitianLattice& L = c.lattice;
    if (L.rank == 0) return {Real(0), Real(0)};
    if (L.diagonal_hint) {
        Real per = target_abs_error / (Real(L.rank) * Real(13) / 10);
        Real log_sum = 0, err = 0;
        for (int i = 0; i < L.rank; ++i) {
            auto one = detail::one_dim_log_theta<Real>(L.weight(i), c.shift[i], per);
            log_sum += one.log_value;
            err += one.abs_error + eps_v<Real>() * fabs(log_sum);
        }
        return {log_sum, err};
    }
    Real rel = target_abs_error * Real(8) / 10;
    auto r = detail::enumerated_log_theta<Real>(L, c.shift, rel, point_cap);
    return {r.log_value, r.abs_error};
}

// Default log-scale accuracy target for callers without a tighter need.
template <class Real>
inline Real default_theta_target() {
    return eps_v<Real>() * Real(1'000'000);
}

}  // namespace thetalab
