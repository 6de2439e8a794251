#include "fcone/pdivisor.hpp"

#include <algorithm>

#include "fcone/errors.hpp"

namespace fcone {

namespace {

Polyhedron sum_over(const std::vector<const Polyhedron*>& parts, const Cone& tail, int rank) {
    if (parts.empty()) return Polyhedron::cone_at_origin(tail);
    Polyhedron acc = *parts[0];
    for (size_t i = 1; i < parts.size(); ++i) acc = acc.minkowski_sum(*parts[i]);
    return acc;
}

}  // namespace

PDivisor::PDivisor(int rank, Cone tail, std::map<std::string, Polyhedron> coefficients)
    : rank_(rank),
      tail_(std::move(tail)),
      coeffs_(std::move(coefficients)),
      degree_(Polyhedron::cone_at_origin(tail_)),
      tail_polyhedron_(Polyhedron::cone_at_origin(tail_)) {
    if (tail_.rank() != rank_) throw InputError("tail cone rank mismatch");
    if (!tail_.pointed() || !tail_.full_dimensional())
        throw InputError("tail cone must be pointed and full-dimensional");
    if (coeffs_.empty()) throw InputError("a p-divisor needs at least one stored coefficient");
    for (const auto& [label, poly] : coeffs_) {
        if (poly.tail() != tail_)
            throw InputError("coefficient at '" + label + "' has a different tail cone");
    }
    std::vector<const Polyhedron*> parts;
    for (const auto& [label, poly] : coeffs_) parts.push_back(&poly);
    degree_ = sum_over(parts, tail_, rank_);
}

const Polyhedron& PDivisor::coefficient(const std::string& y) const {
    auto it = coeffs_.find(y);
    return it == coeffs_.end() ? tail_polyhedron_ : it->second;
}

std::vector<std::string> PDivisor::labels() const {
    std::vector<std::string> out;
    for (const auto& [label, poly] : coeffs_) out.push_back(label);
    return out;
}

std::map<std::string, Rat> PDivisor::evaluate(const QVec& u) const {
    for (const auto& g : tail_.rays())
        if (dot(u, g) < 0)
            throw GeometryError("evaluate: u outside the dual of the tail cone");
    std::map<std::string, Rat> out;
    for (const auto& [label, poly] : coeffs_) out[label] = poly.support_min(u);
    return out;
}

PDivisor::ProperResult PDivisor::is_proper() const {
    // deg is a subset of tail by construction iff all its vertices lie in
    // tail; deg = tail iff the apex lies in deg.
    for (const auto& v : degree_.vertices())
        if (!tail_.contains(v)) return {false, std::nullopt};
    QVec apex = zero_vec(rank_);
    if (degree_.contains(apex)) return {false, std::nullopt};
    return {true, apex};
}

Rat PDivisor::multiplicity_over(const std::string& y) const {
    auto it = coeffs_.find(y);
    if (it == coeffs_.end()) return Rat(1);
    Lattice lat = Lattice::standard(rank_);
    Rat m = 1;
    for (const auto& v : it->second.vertices()) {
        Rat mv = is_zero(v) ? Rat(1) : lat.mu(v);
        m = std::max(m, mv);
    }
    return m;
}

Rat Boundary::horizontal_coeff(const QVec& primitive_ray) const {
    auto it = horizontal.find(primitive_ray);
    return it == horizontal.end() ? Rat(0) : it->second;
}

Rat Boundary::vertical_coeff(const std::string& y, const QVec& vertex) const {
    auto it = vertical.find({y, vertex});
    return it == vertical.end() ? Rat(0) : it->second;
}

Rat Boundary::min_positive_or_one() const {
    Rat m = 1;
    for (const auto& [k, c] : horizontal)
        if (c > 0) m = std::min(m, c);
    for (const auto& [k, c] : vertical)
        if (c > 0) m = std::min(m, c);
    return m;
}

void Boundary::validate(const PDivisor& d) const {
    Lattice lat = Lattice::standard(d.rank());
    for (const auto& [ray, c] : horizontal) {
        if (c < 0 || c >= 1) throw InputError("horizontal boundary coefficient outside [0,1)");
        bool found = false;
        for (const auto& r : d.tail().rays())
            if (r == ray) found = true;
        if (!found) throw InputError("boundary ray " + vec_str(ray) + " is not a tail ray");
        // A ray meeting the degree is not a divisor on X.
        if (d.degree().meets_ray(ray))
            throw InputError("boundary ray " + vec_str(ray) + " meets deg D (not a divisor)");
    }
    for (const auto& [key, c] : vertical) {
        if (c < 0 || c >= 1) throw InputError("vertical boundary coefficient outside [0,1)");
        const auto& [label, vertex] = key;
        const auto& verts = d.coefficient(label).vertices();
        if (std::find(verts.begin(), verts.end(), vertex) == verts.end())
            throw InputError("boundary vertex " + vec_str(vertex) + " at '" + label +
                             "' is not a coefficient vertex");
    }
}

QuotientPair quotient_pair(const PDivisor& d, const Boundary& delta) {
    delta.validate(d);
    Lattice lat = Lattice::standard(d.rank());
    QuotientPair qp;
    qp.degree = 0;
    for (const auto& [label, poly] : d.coefficients()) {
        Rat b = 0;
        bool first = true;
        for (const auto& v : poly.vertices()) {
            Rat mu = is_zero(v) ? Rat(1) : lat.mu(v);
            Rat c = delta.vertical_coeff(label, v);
            Rat val = (mu - 1 + c) / mu;
            if (first || val > b) b = val;
            first = false;
        }
        qp.b[label] = b;
        qp.degree += b;
    }
    return qp;
}

bool is_klt(const PDivisor& d, const Boundary& delta) {
    QuotientPair qp = quotient_pair(d, delta);
    for (const auto& [label, b] : qp.b)
        if (b >= 1) return false;
    return qp.degree < 2;
}

TypeTriple type_triple(const PDivisor& d) {
    std::vector<Rat> mult;
    for (const auto& label : d.labels()) {
        Rat m = d.multiplicity_over(label);
        if (m > 1) mult.push_back(m);
    }
    std::sort(mult.begin(), mult.end());
    TypeTriple t;
    if (mult.size() > 3) {
        t.typed = false;
        t.entries = mult;
        return t;
    }
    t.typed = true;
    t.entries = mult;
    while (t.entries.size() < 3) t.entries.insert(t.entries.begin(), Rat(1));
    return t;
}

bool is_platonic_triple(const std::vector<Rat>& t) {
    if (t.size() != 3) return false;
    const Rat &p = t[0], &q = t[1], &r = t[2];
    if (p == 1) return true;                       // (1,q,r)
    if (p == 2 && q == 2) return true;             // (2,2,r)
    if (p == 2 && q == 3) return r >= 3 && r <= 5; // (2,3,3..5)
    return false;
}

bool platonic_filter(const PDivisor& d) {
    TypeTriple t = type_triple(d);
    return t.typed && is_platonic_triple(t.entries);
}

bool is_plt_with(const PDivisor& d, const Boundary& delta, const DivisorSpec& extra) {
    if (!is_klt(d, delta)) return false;
    if (extra.kind == DivisorSpec::Kind::Horizontal) {
        // Validated as an actual divisor (ray missing deg) the same way a
        // boundary key would be.
        Boundary probe;
        Lattice lat = Lattice::standard(d.rank());
        probe.horizontal[lat.ray_primitive(extra.ray)] = 0;
        probe.validate(d);
        return true;
    }
    QuotientPair qp = quotient_pair(d, delta);
    Rat sum = 0;
    for (const auto& [label, b] : qp.b)
        if (label != extra.point) sum += b;
    return sum < 1;
}

QVec VertexFamily::sum(int rank) const {
    QVec s = zero_vec(rank);
    for (const auto& [label, v] : choice) s = vec_add(s, v);
    return s;
}

TypeTriple VertexFamily::family_type(const Lattice& lat) const {
    std::vector<Rat> mult;
    for (const auto& [label, v] : choice) {
        Rat m = is_zero(v) ? Rat(1) : lat.mu(v);
        if (m > 1) mult.push_back(m);
    }
    std::sort(mult.begin(), mult.end());
    TypeTriple t;
    if (mult.size() > 3) {
        t.typed = false;
        t.entries = mult;
        return t;
    }
    t.typed = true;
    t.entries = mult;
    while (t.entries.size() < 3) t.entries.insert(t.entries.begin(), Rat(1));
    return t;
}

std::vector<VertexFamily> vertex_families(const PDivisor& d,
                                          const std::optional<QVec>& target_ray) {
    std::vector<std::string> labels = d.labels();
    std::vector<VertexFamily> out;
    VertexFamily cur;
    // Iterative cartesian product over the per-label vertex sets.
    std::vector<size_t> idx(labels.size(), 0);
    while (true) {
        cur.choice.clear();
        for (size_t i = 0; i < labels.size(); ++i)
            cur.choice[labels[i]] = d.coefficient(labels[i]).vertices()[idx[i]];
        bool keep = true;
        if (target_ray) {
            QVec s = cur.sum(d.rank());
            if (is_zero(s)) {
                keep = false;
            } else {
                // s on the ray: s = t * target with t > 0.
                Rat t;
                bool par = true;
                bool have_t = false;
                for (int k = 0; k < d.rank(); ++k) {
                    if ((*target_ray)[k] == 0) {
                        if (s[k] != 0) { par = false; break; }
                    } else if (!have_t) {
                        t = s[k] / (*target_ray)[k];
                        have_t = true;
                    } else if (s[k] != t * (*target_ray)[k]) {
                        par = false;
                        break;
                    }
                }
                keep = par && have_t && t > 0;
            }
        }
        if (keep) out.push_back(cur);
        size_t i = 0;
        for (; i < labels.size(); ++i) {
            if (++idx[i] < d.coefficient(labels[i]).vertices().size()) break;
            idx[i] = 0;
        }
        if (i == labels.size()) break;
    }
    return out;
}

}  // namespace fcone
