#pragma once

#include <vector>

#include "fcone/lattice.hpp"
#include "fcone/linalg.hpp"
#include "fcone/rational.hpp"

namespace fcone {

/// A rational polyhedral cone in Q^rank, canonicalized at construction.
///
/// Storage is the generator (V-)representation; the facet-normal
/// H-representation, extremal rays, lineality space, dimension and
/// pointedness are computed once by double description and cached.
/// Generators and facet normals are primitive integer vectors sorted
/// lexicographically, so structural equality is point-set equality.
class Cone {
public:
    Cone(int rank, std::vector<QVec> generators);

    static Cone zero(int rank) { return Cone(rank, {}); }
    static Cone orthant(int rank);

    int rank() const { return rank_; }

    /// Extremal rays (primitive, sorted). Empty for the zero cone or when
    /// the cone is a pure subspace.
    const std::vector<QVec>& rays() const { return rays_; }

    /// Basis of the lineality space (largest subspace contained in the cone).
    const std::vector<QVec>& lineality() const { return lineality_; }

    /// Inner facet normals h: the cone is {v in span : <h, v> >= 0 for all h}.
    /// Normals are primitive, orthogonal to the lineality of the dual
    /// description, and sorted; they index the facets.
    const std::vector<QVec>& facet_normals() const { return normals_; }

    /// Normal directions cutting out the linear span (cone lies in all their
    /// zero sets). Empty iff the cone is full-dimensional.
    const std::vector<QVec>& span_normals() const { return span_normals_; }

    int dim() const { return dim_; }
    bool pointed() const { return lineality_.empty(); }
    bool full_dimensional() const { return dim_ == rank_; }

    Cone dual() const;

    bool contains(const QVec& v) const;
    bool rint_contains(const QVec& v) const;

    /// F(sigma, v): indices of facets containing v. Empty iff v lies in the
    /// relative interior. Requires contains(v).
    std::vector<int> face_set(const QVec& v) const;

    /// All generators as one list: rays plus +-lineality basis.
    std::vector<QVec> generator_list() const;

    bool operator==(const Cone& o) const {
        return rank_ == o.rank_ && rays_ == o.rays_ && lineality_ == o.lineality_;
    }
    bool operator!=(const Cone& o) const { return !(*this == o); }

private:
    int rank_;
    std::vector<QVec> rays_;
    std::vector<QVec> lineality_;
    std::vector<QVec> normals_;
    std::vector<QVec> span_normals_;
    int dim_;
};

namespace detail {

/// Raw double description: generators of {u : <u, g> >= 0 for all g}.
/// Returns extremal rays and a basis of the lineality space of the dual.
struct DDResult {
    std::vector<QVec> rays;
    std::vector<QVec> lineality;
};
DDResult dd_dual(int rank, const std::vector<QVec>& generators);

}  // namespace detail

}  // namespace fcone
