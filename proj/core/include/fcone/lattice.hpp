#pragma once

#include "fcone/linalg.hpp"
#include "fcone/rational.hpp"

namespace fcone {

/// A full-rank lattice in Q^rank, given by an explicit basis relative to the
/// standard lattice Z^rank. Membership is decided exactly by solving over Q
/// and checking integrality. Immutable; the inverse basis is cached at
/// construction.
class Lattice {
public:
    /// Standard lattice Z^rank.
    static Lattice standard(int rank);

    /// basis[i] is the i-th basis vector (rows of the basis matrix).
    explicit Lattice(QMat basis);

    int rank() const { return rank_; }
    const QMat& basis() const { return basis_; }

    /// Coordinates of v in this basis.
    QVec coords(const QVec& v) const;

    bool contains(const QVec& v) const;

    /// mu(v): smallest positive integer with mu*v in the lattice.
    Rat mu(const QVec& v) const;

    /// (mu(v) * v, mu(v)).
    PrimitivePoint primitive_point(const QVec& v) const;

    /// Primitive lattice generator of the ray R_{>=0} v, v != 0.
    QVec ray_primitive(const QVec& v) const;

    /// |det(basis)| — the covolume of a fundamental domain.
    Rat covolume() const { return covol_; }

    /// Dual lattice {u : <u, b> in Z for every basis vector b}.
    Lattice dual() const;

    bool operator==(const Lattice& o) const { return basis_ == o.basis_; }

private:
    int rank_;
    QMat basis_;      // rows = basis vectors
    QMat inv_;        // inverse of basis matrix (coords = inv^T applied ... see impl)
    Rat covol_;
};

}  // namespace fcone
