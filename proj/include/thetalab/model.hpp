// Degree-d section spaces of O(1) on P^m over Z with the scaled diagonal
// model metric: monomials x^alpha are pairwise orthogonal with
//
//     ||x^alpha||^2 = gamma^{2d} * (prod_i alpha_i!) * m! / (d+m)!
//
// so every basis norm is <= gamma^d and theta sums factor exactly.  Degrees,
// kernels of reduction maps and coordinate-restriction kernels are all
// explicit diagonal lattices.  Monomials are ordered graded-lexicographically
// (all exponent vectors of total degree d, lex descending), which fixes the
// coefficient indexing used by every serialization.
#pragma once

#include "thetalab/errors.hpp"
#include "thetalab/lattice.hpp"
#include "thetalab/theta.hpp"

#include <cstdint>
#include <vector>

namespace thetalab {

using Exponent = std::vector<int>;  // length m+1, entries sum to d

struct SectionSpace {
    int m = 1;           // projective dimension
    int n = 2;           // absolute dimension m+1
    int d = 1;           // degree
    Rat gamma = Rat(1, 2);
    std::vector<Exponent> monomials;  // graded-lex order
    RatVector weights;                // squared monomial norms
    HermitianLattice lattice;

    int rank() const { return static_cast<int>(monomials.size()); }
};

namespace detail {

inline void gen_monomials(int vars_left, int deg_left, Exponent& cur,
                          std::vector<Exponent>& out) {
    if (vars_left == 1) {
        cur.push_back(deg_left);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int e = deg_left; e >= 0; --e) {
        cur.push_back(e);
        gen_monomials(vars_left - 1, deg_left - e, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

inline SectionSpace build_space(int m, int d, const Rat& gamma) {
    if (m != 1 && m != 2)
        fail(errc::unsupported_dimension, "projective dimension must be 1 or 2");
    if (d < 1) fail(errc::invalid_argument, "degree must be >= 1");
    if (!(gamma > 0 && gamma <= 1))
        fail(errc::invalid_argument, "gamma must lie in (0, 1]");
    SectionSpace S;
    S.m = m;
    S.n = m + 1;
    S.d = d;
    S.gamma = gamma;
    Exponent cur;
    detail::gen_monomials(m + 1, d, cur, S.monomials);

    Rat gpow = 1;
    for (int i = 0; i < 2 * d; ++i) gpow *= gamma;
    Rat mfac_over_dm(factorial(static_cast<unsigned>(m)),
                     factorial(static_cast<unsigned>(d + m)));
    S.weights.reserve(S.monomials.size());
    for (const Exponent& a : S.monomials) {
        Int afac = 1;
        for (int e : a) afac *= factorial(static_cast<unsigned>(e));
        S.weights.push_back(gpow * Rat(afac) * mfac_over_dm);
    }
    S.lattice = make_diagonal_lattice(S.weights);
    return S;
}

// deg^ of the section lattice: -1/2 sum_alpha log w_alpha.
template <class Real = real128>
inline Real space_degree(const SectionSpace& S) {
    Real acc = 0;
    for (const Rat& w : S.weights) acc -= log(to_real<Real>(w)) / 2;
    return acc;
}

// Largest eps with all monomial norms <= e^{-eps d}; >= log(1/gamma).
template <class Real = real128>
inline Real epsilon0(const SectionSpace& S) {
    Rat max_w = S.weights[0];
    for (const Rat& w : S.weights) max_w = std::max(max_w, w);
    return -log(to_real<Real>(max_w)) / (2 * S.d);
}

struct IntegerSection {
    const SectionSpace* space = nullptr;
    std::vector<Int> coeffs;  // graded-lex monomial order
};

inline IntegerSection make_section(const SectionSpace& S, std::vector<Int> coeffs) {
    if (static_cast<int>(coeffs.size()) != S.rank())
        fail(errc::invalid_argument, "coefficient count does not match rank");
    return IntegerSection{&S, std::move(coeffs)};
}

// Kernel of reduction mod N: the sublattice N * H^0, diagonal weights N^2 w.
inline HermitianLattice kernel_sublattice(const SectionSpace& S, const Int& N) {
    if (N < 2) fail(errc::invalid_argument, "modulus must be >= 2");
    RatVector w;
    w.reserve(S.weights.size());
    Rat n2 = Rat(N) * Rat(N);
    for (const Rat& x : S.weights) w.push_back(n2 * x);
    return make_diagonal_lattice(w);
}

// Kernel of the coefficient-restriction map dropping one monomial.
inline HermitianLattice coefficient_kernel(const SectionSpace& S, int index) {
    if (index < 0 || index >= S.rank())
        fail(errc::index_out_of_range, "monomial index out of range");
    RatVector w;
    w.reserve(S.weights.size() - 1);
    for (int i = 0; i < S.rank(); ++i)
        if (i != index) w.push_back(S.weights[i]);
    return make_diagonal_lattice(w);
}

}  // namespace thetalab
