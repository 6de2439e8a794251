#include "fcone/polyhedron.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fcone/errors.hpp"

namespace fcone {

namespace {

QVec lift(const QVec& v, const Rat& h) {
    QVec w = v;
    w.push_back(h);
    return w;
}

QVec unlift(const QVec& w) { return QVec(w.begin(), w.end() - 1); }

}  // namespace

Polyhedron::Polyhedron(std::vector<QVec> vertices, Cone tail) : tail_(std::move(tail)) {
    if (vertices.empty()) throw GeometryError("polyhedron needs at least one vertex");
    const int r = tail_.rank();
    for (const auto& v : vertices)
        if (static_cast<int>(v.size()) != r) throw GeometryError("vertex rank mismatch");
    if (!tail_.pointed())
        throw GeometryError("polyhedron tail cone must be pointed");

    // Canonical V-representation from the cone over P x {1}.
    std::vector<QVec> gens;
    for (const auto& v : vertices) gens.push_back(lift(v, 1));
    for (const auto& g : tail_.rays()) gens.push_back(lift(g, 0));
    Cone lifted(r + 1, gens);

    for (const auto& ray : lifted.rays()) {
        const Rat& h = ray.back();
        if (h > 0) {
            vertices_.push_back(unlift(vec_scale(1 / h, ray)));
        } else if (!tail_.contains(unlift(ray))) {
            throw GeometryError("vertex list escapes the tail cone at infinity");
        }
    }
    std::sort(vertices_.begin(), vertices_.end(), vec_less);

    for (const auto& n : lifted.facet_normals()) {
        QVec h = unlift(n);
        if (is_zero(h)) continue;  // the horizon inequality x_{r+1} >= 0
        facets_.push_back({h, -n.back()});
    }
    for (const auto& s : lifted.span_normals()) {
        QVec h = unlift(s);
        span_eqs_.push_back({h, -s.back()});
    }
    dim_ = lifted.dim() - 1;
}

Polyhedron Polyhedron::cone_at_origin(const Cone& tail) {
    return Polyhedron({zero_vec(tail.rank())}, tail);
}

Polyhedron Polyhedron::translate_cone(const QVec& v, const Cone& tail) {
    return Polyhedron({v}, tail);
}

Polyhedron Polyhedron::from_inequalities(int rank,
                                         const std::vector<std::pair<QVec, Rat>>& ineqs) {
    // V-representation of the lifted cone {(x,t): <h,x> >= b t, t >= 0} as
    // the dual of the cone spanned by the lifted inequality normals.
    std::vector<QVec> lifted;
    for (const auto& [h, b] : ineqs) {
        QVec n = h;
        n.push_back(-b);
        lifted.push_back(std::move(n));
    }
    {
        QVec horizon = zero_vec(rank);
        horizon.push_back(Rat(1));
        lifted.push_back(std::move(horizon));
    }
    detail::DDResult gen = detail::dd_dual(rank + 1, lifted);
    if (!gen.lineality.empty())
        throw GeometryError("from_inequalities: recession cone is not pointed");
    std::vector<QVec> verts;
    std::vector<QVec> tail_gens;
    for (const auto& g : gen.rays) {
        const Rat& t = g.back();
        if (t > 0) verts.push_back(unlift(vec_scale(1 / t, g)));
        else tail_gens.push_back(unlift(g));
    }
    if (verts.empty()) throw GeometryError("from_inequalities: empty polyhedron");
    return Polyhedron(std::move(verts), Cone(rank, std::move(tail_gens)));
}

Polyhedron Polyhedron::intersect_cone(const Cone& c) const {
    std::vector<std::pair<QVec, Rat>> ineqs;
    for (const auto& f : facets_) ineqs.push_back({f.normal, f.offset});
    for (const auto& e : span_eqs_) {
        ineqs.push_back({e.normal, e.value});
        ineqs.push_back({vec_scale(Rat(-1), e.normal), -e.value});
    }
    for (const auto& h : c.facet_normals()) ineqs.push_back({h, Rat(0)});
    for (const auto& s : c.span_normals()) {
        ineqs.push_back({s, Rat(0)});
        ineqs.push_back({vec_scale(Rat(-1), s), Rat(0)});
    }
    return from_inequalities(rank(), ineqs);
}

bool Polyhedron::contains(const QVec& v) const {
    for (const auto& e : span_eqs_)
        if (dot(e.normal, v) != e.value) return false;
    for (const auto& f : facets_)
        if (dot(f.normal, v) < f.offset) return false;
    return true;
}

bool Polyhedron::rint_contains(const QVec& v) const {
    for (const auto& e : span_eqs_)
        if (dot(e.normal, v) != e.value) return false;
    for (const auto& f : facets_)
        if (dot(f.normal, v) <= f.offset) return false;
    return true;
}

Polyhedron Polyhedron::minkowski_sum(const Polyhedron& other) const {
    if (tail_ != other.tail_) throw GeometryError("Minkowski sum: tail cones differ");
    std::vector<QVec> sums;
    for (const auto& a : vertices_)
        for (const auto& b : other.vertices_) sums.push_back(vec_add(a, b));
    return Polyhedron(std::move(sums), tail_);
}

Rat Polyhedron::support_min(const QVec& u) const {
    for (const auto& g : tail_.rays())
        if (dot(u, g) < 0) throw GeometryError("support minimum is unbounded");
    Rat m = dot(u, vertices_[0]);
    for (const auto& v : vertices_) m = std::min(m, dot(u, v));
    return m;
}

bool Polyhedron::meets_ray(const QVec& dir) const {
    // One-variable feasibility: t >= 0 with t*dir satisfying every facet
    // inequality and span equation.
    Rat lo = 0, hi = 0;
    bool has_hi = false;
    auto add_eq = [&](const Rat& a, const Rat& b) -> bool {
        // constraint a*t >= b
        if (a == 0) return b <= 0;
        Rat t0 = b / a;
        if (a > 0) {
            lo = std::max(lo, t0);
        } else {
            hi = has_hi ? std::min(hi, t0) : t0;
            has_hi = true;
        }
        return true;
    };
    for (const auto& f : facets_)
        if (!add_eq(dot(f.normal, dir), f.offset)) return false;
    for (const auto& e : span_eqs_) {
        if (!add_eq(dot(e.normal, dir), e.value)) return false;
        if (!add_eq(-dot(e.normal, dir), -e.value)) return false;
    }
    return !has_hi || lo <= hi;
}

std::vector<int> Polyhedron::tail_face_set(const QVec& v) const {
    if (!contains(v)) throw GeometryError("tail_face_set: point not in polyhedron");
    std::vector<int> out;
    const auto& normals = tail_.facet_normals();
    for (size_t i = 0; i < normals.size(); ++i) {
        if (dot(normals[i], v) == support_min(normals[i]))
            out.push_back(static_cast<int>(i));
    }
    return out;
}

Polyhedron::Face Polyhedron::minimizing_face(const QVec& n) const {
    Face f;
    Rat m = support_min(n);
    for (size_t i = 0; i < vertices_.size(); ++i)
        if (dot(n, vertices_[i]) == m) f.vertex_indices.push_back(static_cast<int>(i));
    const auto& rays = tail_.rays();
    for (size_t i = 0; i < rays.size(); ++i)
        if (dot(n, rays[i]) == 0) f.tail_ray_indices.push_back(static_cast<int>(i));
    return f;
}

std::vector<Polyhedron::Face> Polyhedron::proper_faces() const {
    // Exposed faces from subsets of facets. Facet counts stay small at the
    // ranks this library supports, so subset enumeration is fine.
    const size_t nf = facets_.size();
    if (nf > 16) throw GeometryError("face enumeration: too many facets");
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    std::vector<Face> out;
    for (size_t mask = 1; mask < (size_t(1) << nf); ++mask) {
        Face f;
        for (size_t vi = 0; vi < vertices_.size(); ++vi) {
            bool on = true;
            for (size_t i = 0; i < nf && on; ++i)
                if (mask & (size_t(1) << i))
                    on = dot(facets_[i].normal, vertices_[vi]) == facets_[i].offset;
            if (on) f.vertex_indices.push_back(static_cast<int>(vi));
        }
        if (f.vertex_indices.empty()) continue;
        const auto& rays = tail_.rays();
        for (size_t ri = 0; ri < rays.size(); ++ri) {
            bool on = true;
            for (size_t i = 0; i < nf && on; ++i)
                if (mask & (size_t(1) << i)) on = dot(facets_[i].normal, rays[ri]) == 0;
            if (on) f.tail_ray_indices.push_back(static_cast<int>(ri));
        }
        auto key = std::make_pair(f.vertex_indices, f.tail_ray_indices);
        if (seen.insert(key).second) out.push_back(std::move(f));
    }
    return out;
}

}  // namespace fcone
