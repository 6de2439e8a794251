#include "fcone/volume.hpp"

#include <algorithm>

#include "fcone/errors.hpp"
#include "fcone/polyhedron.hpp"

namespace fcone {

namespace {

// k-dimensional simplices triangulating conv(points), as (k+1)-tuples of
// vertices. Recurses through the face lattice: apex = lex-min vertex, cones
// over triangulations of the facets not containing it.
void triangulate_rec(const std::vector<QVec>& points, int rank,
                     std::vector<std::vector<QVec>>* out, std::vector<QVec> prefix) {
    Polyhedron p(points, Cone::zero(rank));
    const auto& verts = p.vertices();
    if (p.dim() == 0) {
        prefix.push_back(verts[0]);
        out->push_back(std::move(prefix));
        return;
    }
    const QVec& apex = verts[0];
    for (const auto& f : p.facets()) {
        if (dot(f.normal, apex) == f.offset) continue;
        std::vector<QVec> sub;
        for (const auto& v : verts)
            if (dot(f.normal, v) == f.offset) sub.push_back(v);
        std::vector<QVec> pre = prefix;
        pre.push_back(apex);
        triangulate_rec(sub, rank, out, std::move(pre));
    }
}

}  // namespace

std::vector<std::vector<QVec>> triangulate_polytope(const std::vector<QVec>& vertices) {
    if (vertices.empty()) throw GeometryError("empty polytope");
    const int rank = static_cast<int>(vertices[0].size());
    std::vector<std::vector<QVec>> out;
    triangulate_rec(vertices, rank, &out, {});
    return out;
}

Rat polytope_volume(const std::vector<QVec>& vertices, const Lattice& lat) {
    if (vertices.empty()) throw GeometryError("empty polytope");
    const int rank = static_cast<int>(vertices[0].size());
    if (lat.rank() != rank) throw GeometryError("lattice rank mismatch");

    Polyhedron p(vertices, Cone::zero(rank));
    if (p.dim() < rank) return Rat(0);

    Rat fact = 1;
    for (int i = 2; i <= rank; ++i) fact *= i;

    Rat total = 0;
    for (const auto& s : triangulate_polytope(p.vertices())) {
        QMat m;
        for (size_t i = 1; i < s.size(); ++i) m.push_back(vec_sub(s[i], s[0]));
        total += abs(det(m));
    }
    return total / (fact * lat.covolume());
}

}  // namespace fcone
