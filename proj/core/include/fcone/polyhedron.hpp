#pragma once

#include <vector>

#include "fcone/cone.hpp"

namespace fcone {

/// A rational polyhedron conv(vertices) + tailcone, canonical in its
/// V-representation: the stored vertex list is irredundant and sorted.
/// The facet H-representation is derived at construction from the lifted
/// cone over (P x {1}) and cached.
class Polyhedron {
public:
    Polyhedron(std::vector<QVec> vertices, Cone tail);

    /// The tail cone alone, as a polyhedron (single vertex at the origin).
    static Polyhedron cone_at_origin(const Cone& tail);

    /// v + tail.
    static Polyhedron translate_cone(const QVec& v, const Cone& tail);

    /// Polyhedron {x : <h,x> >= b} from inequalities; must be nonempty with
    /// pointed recession cone.
    static Polyhedron from_inequalities(int rank, const std::vector<std::pair<QVec, Rat>>& ineqs);

    /// Intersection with a cone (adds the cone's facet inequalities).
    Polyhedron intersect_cone(const Cone& c) const;

    int rank() const { return tail_.rank(); }
    const std::vector<QVec>& vertices() const { return vertices_; }
    const Cone& tail() const { return tail_; }

    /// Facet inequalities <h, x> >= b. Facets of the whole polyhedron, not
    /// only the tail-parallel ones.
    struct Facet {
        QVec normal;
        Rat offset;
    };
    const std::vector<Facet>& facets() const { return facets_; }

    /// Affine-span equations <s, x> = c.
    struct SpanEq {
        QVec normal;
        Rat value;
    };
    const std::vector<SpanEq>& span_equations() const { return span_eqs_; }

    int dim() const { return dim_; }
    bool bounded() const { return tail_.dim() == 0; }

    bool contains(const QVec& v) const;
    bool rint_contains(const QVec& v) const;

    Polyhedron minkowski_sum(const Polyhedron& other) const;

    /// F(P, v): indices (into tail().facet_normals()) of tail facets tau
    /// whose minimizing face F_tau of P contains v. Requires contains(v).
    std::vector<int> tail_face_set(const QVec& v) const;

    /// Support minimum min_{x in P} <u, x>; throws GeometryError when the
    /// minimum is unbounded (u outside the dual of the tail).
    Rat support_min(const QVec& u) const;

    /// Does the ray R_{>=0} dir meet the polyhedron?
    bool meets_ray(const QVec& dir) const;

    /// Face of P minimizing <n, .>: vertex indices and tail-ray indices.
    struct Face {
        std::vector<int> vertex_indices;
        std::vector<int> tail_ray_indices;
    };
    Face minimizing_face(const QVec& n) const;

    /// All proper nonempty faces (including lower-dimensional ones),
    /// deduplicated, each as vertex/tail-ray index sets.
    std::vector<Face> proper_faces() const;

    bool operator==(const Polyhedron& o) const {
        return vertices_ == o.vertices_ && tail_ == o.tail_;
    }
    bool operator!=(const Polyhedron& o) const { return !(*this == o); }

private:
    std::vector<QVec> vertices_;
    Cone tail_;
    std::vector<Facet> facets_;
    std::vector<SpanEq> span_eqs_;
    int dim_;
};

}  // namespace fcone
