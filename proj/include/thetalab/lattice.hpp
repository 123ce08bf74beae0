// Hermitian Z-lattices given by exact rational Gram matrices.
//
// Everything downstream (theta sums, duals, enumeration, degrees) depends
// only on the Gram form, so validation and linear algebra stay exact:
// positive definiteness is decided through fraction-free leading minors,
// duals through exact inversion.  Lattices are immutable after construction
// and safe to share across threads.
#pragma once

#include "thetalab/errors.hpp"
#include "thetalab/numeric.hpp"

#include <vector>

namespace thetalab {

using RatMatrix = std::vector<std::vector<Rat>>;
using RatVector = std::vector<Rat>;

struct HermitianLattice {
    int rank = 0;
    RatMatrix gram;        // symmetric positive definite
    bool diagonal_hint = false;

    const Rat& weight(int i) const { return gram[i][i]; }
};

namespace detail {

// Leading principal minors det(G[0..k][0..k]) via Bareiss elimination.
inline std::vector<Rat> leading_minors(const RatMatrix& g) {
    int n = static_cast<int>(g.size());
    RatMatrix a = g;
    std::vector<Rat> minors(n);
    Rat det = 1;
    for (int k = 0; k < n; ++k) {
        det *= a[k][k];
        minors[k] = det;
        if (a[k][k] == 0) {
            // Leading minor vanished; remaining minors follow from the
            // definition directly (they are not needed once one is <= 0).
            for (int j = k + 1; j < n; ++j) minors[j] = 0;
            break;
        }
        for (int i = k + 1; i < n; ++i) {
            Rat f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return minors;
}

inline RatMatrix invert(const RatMatrix& g) {
    int n = static_cast<int>(g.size());
    RatMatrix a = g;
    RatMatrix inv(n, RatVector(n, 0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        while (piv < n && a[piv][k] == 0) ++piv;
        if (piv == n) fail(errc::not_positive_definite, "singular Gram matrix");
        std::swap(a[piv], a[k]);
        std::swap(inv[piv], inv[k]);
        Rat d = a[k][k];
        for (int j = 0; j < n; ++j) { a[k][j] /= d; inv[k][j] /= d; }
        for (int i = 0; i < n; ++i) {
            if (i == k || a[i][k] == 0) continue;
            Rat f = a[i][k];
            for (int j = 0; j < n; ++j) {
                a[i][j] -= f * a[k][j];
                inv[i][j] -= f * inv[k][j];
            }
        }
    }
    return inv;
}

}  // namespace detail

inline bool is_diagonal(const RatMatrix& g) {
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            if (i != j && g[i][j] != 0) return false;
    return true;
}

inline HermitianLattice make_lattice(const RatMatrix& gram) {
    int n = static_cast<int>(gram.size());
    for (const auto& row : gram)
        if (static_cast<int>(row.size()) != n)
            fail(errc::not_symmetric, "Gram matrix is not square");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (gram[i][j] != gram[j][i])
                fail(errc::not_symmetric, "Gram matrix is not symmetric");
    for (const Rat& m : detail::leading_minors(gram))
        if (m <= 0)
            fail(errc::not_positive_definite, "leading principal minor <= 0");
    HermitianLattice L;
    L.rank = n;
    L.gram = gram;
    L.diagonal_hint = is_diagonal(gram);
    return L;
}

inline HermitianLattice make_diagonal_lattice(const RatVector& weights) {
    int n = static_cast<int>(weights.size());
    RatMatrix g(n, RatVector(n, 0));
    for (int i = 0; i < n; ++i) g[i][i] = weights[i];
    return make_lattice(g);
}

inline Rat gram_determinant(const HermitianLattice& L) {
    if (L.rank == 0) return 1;
    return detail::leading_minors(L.gram).back();
}

// deg^(L) = -log covol = -1/2 log det(gram).
template <class Real = real128>
inline Real arakelov_degree(const HermitianLattice& L) {
    if (L.rank == 0) return Real(0);
    Rat det = gram_determinant(L);
    return -log(to_real<Real>(det)) / 2;
}

inline HermitianLattice dual(const HermitianLattice& L) {
    HermitianLattice D;
    D.rank = L.rank;
    if (L.rank == 0) return D;
    if (L.diagonal_hint) {
        D.gram.assign(L.rank, RatVector(L.rank, 0));
        for (int i = 0; i < L.rank; ++i) D.gram[i][i] = Rat(1) / L.gram[i][i];
    } else {
        D.gram = detail::invert(L.gram);
    }
    D.diagonal_hint = L.diagonal_hint;
    return D;
}

inline HermitianLattice scale_lattice(const HermitianLattice& L, const Rat& factor_sq) {
    HermitianLattice S = L;
    for (auto& row : S.gram)
        for (auto& x : row) x *= factor_sq;
    return S;
}

// Exact rational norm^2 of an integer coordinate vector.
inline Rat norm_sq(const HermitianLattice& L, const std::vector<long long>& v) {
    Rat q = 0;
    for (int i = 0; i < L.rank; ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < L.rank; ++j) {
            if (v[j] == 0) continue;
            q += L.gram[i][j] * Rat(Int(v[i]) * Int(v[j]));
        }
    }
    return q;
}

// Coset L + shift with shift in basis coordinates, each entry reduced to [0,1).
struct Coset {
    HermitianLattice lattice;
    RatVector shift;
};

inline Rat reduce_unit_interval(const Rat& x) {
    Int n = numerator(x), d = denominator(x);
    Int q = n / d;
    Rat r = x - Rat(q);
    if (r < 0) r += 1;
    return r;
}

inline Coset make_coset(const HermitianLattice& L, const RatVector& shift) {
    if (static_cast<int>(shift.size()) != L.rank)
        fail(errc::invalid_argument, "shift length does not match rank");
    Coset c;
    c.lattice = L;
    c.shift.reserve(shift.size());
    for (const Rat& s : shift) c.shift.push_back(reduce_unit_interval(s));
    return c;
}

}  // namespace thetalab
