#include "fcone/kollar.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "fcone/errors.hpp"

namespace fcone {

namespace {

QVec lift(const QVec& v, const Rat& h) {
    QVec w = v;
    w.push_back(h);
    return w;
}

QVec unlift(const QVec& w) { return QVec(w.begin(), w.end() - 1); }

Rat mu_or_one(const Lattice& lat, const QVec& v) {
    return is_zero(v) ? Rat(1) : lat.mu(v);
}

Polyhedron sum_coeffs_excluding(const PDivisor& d, const std::string& z) {
    Polyhedron acc = Polyhedron::cone_at_origin(d.tail());
    for (const auto& [label, poly] : d.coefficients())
        if (label != z) acc = acc.minkowski_sum(poly);
    return acc;
}

// All choices of one vertex per stored label != z.
std::vector<std::map<std::string, QVec>> families_excluding(const PDivisor& d,
                                                            const std::string& z) {
    std::vector<std::string> labels;
    for (const auto& l : d.labels())
        if (l != z) labels.push_back(l);
    std::vector<std::map<std::string, QVec>> out;
    std::vector<size_t> idx(labels.size(), 0);
    while (true) {
        std::map<std::string, QVec> fam;
        for (size_t i = 0; i < labels.size(); ++i)
            fam[labels[i]] = d.coefficient(labels[i]).vertices()[idx[i]];
        out.push_back(std::move(fam));
        size_t i = 0;
        for (; i < labels.size(); ++i) {
            if (++idx[i] < d.coefficient(labels[i]).vertices().size()) break;
            idx[i] = 0;
        }
        if (i == labels.size()) break;
    }
    return out;
}

}  // namespace

DegenCone sigma_z(const PDivisor& d, const Boundary& delta, const std::string& z) {
    delta.validate(d);
    const int r = d.rank();
    Lattice lat = Lattice::standard(r);

    std::vector<QVec> gens;
    for (const auto& v : d.coefficient(z).vertices()) gens.push_back(lift(v, 1));
    for (const auto& g : d.tail().rays()) gens.push_back(lift(g, 0));
    Polyhedron s_part = sum_coeffs_excluding(d, z);
    for (const auto& v : s_part.vertices()) gens.push_back(lift(v, -1));

    DegenCone dc{Cone(r + 1, std::move(gens)), {}, false, z};
    dc.pointed = dc.cone.pointed();
    if (!dc.pointed) return dc;

    auto fams = families_excluding(d, z);
    for (const auto& p : dc.cone.rays()) {
        DegenRay dr;
        dr.primitive = p;
        dr.height = p.back();
        if (dr.height > 0) {
            QVec vz = vec_scale(1 / dr.height, unlift(p));
            dr.display_coeff = dr.consistent_coeff = delta.vertical_coeff(z, vz);
            dr.mismatch = false;
        } else if (dr.height == 0) {
            QVec ray = unlift(p);
            dr.display_coeff = dr.consistent_coeff = delta.horizontal_coeff(ray);
            dr.mismatch = false;
        } else {
            Rat m = -dr.height;
            QVec point = vec_scale(1 / m, unlift(p));
            bool found = false;
            Rat display = 0, svalue = 0;
            for (const auto& fam : fams) {
                QVec s = zero_vec(r);
                for (const auto& [label, v] : fam) s = vec_add(s, v);
                if (s != point) continue;
                Rat csum = 0, sv = 0;
                for (const auto& [label, v] : fam) {
                    Rat mu = mu_or_one(lat, v);
                    Rat c = delta.vertical_coeff(label, v);
                    csum += c;
                    sv += (mu - 1 + c) / mu;
                }
                if (!found) {
                    display = csum;
                    svalue = sv;
                } else {
                    display = std::max(display, csum);
                    if (sv != svalue)
                        throw NotQGorenstein(
                            "sigma_z: vertex-family decompositions of " + vec_str(point) +
                            " disagree on sum (mu-1+c)/mu");
                }
                found = true;
            }
            if (!found)
                throw GeometryError("sigma_z: no vertex family over the ray " + vec_str(p));
            dr.display_coeff = display;
            dr.consistent_coeff = Rat(1) + m * (svalue - 1);
            dr.mismatch = dr.display_coeff != dr.consistent_coeff;
        }
        dc.rays.push_back(std::move(dr));
    }
    return dc;
}

ToricCone DegenCone::toric(bool use_consistent) const {
    if (!pointed)
        throw GeometryError("sigma_z is not pointed (product degeneration)");
    std::map<QVec, Rat> boundary;
    for (const auto& dr : rays) {
        Rat c = use_consistent ? dr.consistent_coeff : dr.display_coeff;
        if (c != 0) boundary[dr.primitive] = c;
    }
    return ToricCone(cone, Lattice::standard(cone.rank()), std::move(boundary));
}

CrossCheck toric_crosscheck(const PDivisor& d, const Boundary& delta, const std::string& z,
                            const QVec& w) {
    if (!d.coefficient(z).contains(w))
        throw GeometryError("crosscheck point outside the coefficient at '" + z + "'");
    GorensteinData g = solve_gorenstein(d, delta);
    CrossCheck chk;
    chk.complexity_one = log_discrepancy(g, d, delta, DivisorSpec::vertical(z, w));

    DegenCone dc = sigma_z(d, delta, z);
    ToricCone t = dc.toric(true);
    QVec a = toric_gorenstein(t);
    Lattice lat = Lattice::standard(d.rank());
    Rat mu = mu_or_one(lat, w);
    chk.toric = log_discrepancy_xi(t, a, vec_scale(mu, lift(w, 1)));
    if (chk.complexity_one != chk.toric)
        throw MathError("toric crosscheck failed: " + rat_str(chk.complexity_one) +
                        " != " + rat_str(chk.toric));
    return chk;
}

VerticalComponent vertical_component(const PDivisor& d, const Boundary& delta,
                                     const std::string& z, const QVec& v) {
    if (!d.coefficient(z).rint_contains(v))
        throw GeometryError("vertical component: point not in the relative interior of D_z");
    VerticalComponent vc;
    vc.is_weak = true;
    QuotientPair qp = quotient_pair(d, delta);
    Rat sum = 0;
    for (const auto& [label, b] : qp.b)
        if (label != z) sum += b;
    vc.is_kollar = sum < 1;
    GorensteinData g = solve_gorenstein(d, delta);
    vc.discrepancy = log_discrepancy(g, d, delta, DivisorSpec::vertical(z, v));
    return vc;
}

HorizontalComponent horizontal_component(const PDivisor& d, const Boundary& delta,
                                         const QVec& rho) {
    Lattice lat = Lattice::standard(d.rank());
    QVec n = lat.ray_primitive(rho);
    if (!d.tail().rint_contains(n))
        throw GeometryError("horizontal component: ray not interior to the tail cone");
    HorizontalComponent hc;
    hc.is_kollar = true;
    GorensteinData g = solve_gorenstein(d, delta);
    hc.discrepancy = log_discrepancy(g, d, delta, DivisorSpec::horizontal(n));
    return hc;
}

Rat nvol_via_fibre(const PDivisor& d, const Boundary& delta, const std::string& z,
                   const QVec& w) {
    if (!d.coefficient(z).rint_contains(w))
        throw GeometryError("nvol_via_fibre: w not in the relative interior of D_z");
    Lattice lat = Lattice::standard(d.rank());
    QVec xi = vec_scale(mu_or_one(lat, w), lift(w, 1));
    DegenCone dc = sigma_z(d, delta, z);

    if (dc.pointed) {
        ToricCone t = dc.toric(true);
        QVec a = toric_gorenstein(t);
        for (const auto& n : t.ray_primitives())
            if (dot(a, n) <= 0) throw MathError("nvol_via_fibre: special fibre is not klt");
        Nvol nv = nvol_xi(t, xi);
        if (!nv.finite) throw MathError("nvol_via_fibre: infinite normalized volume");
        return nv.value;
    }

    // Product degeneration: quotient out the lineality space.
    for (const auto& [k, c] : delta.horizontal)
        if (c != 0) throw GeometryError("product fibre with boundary not supported");
    for (const auto& [k, c] : delta.vertical)
        if (c != 0) throw GeometryError("product fibre with boundary not supported");
    const int rhat = d.rank() + 1;
    std::vector<QVec> proj_rows = orthogonal_complement(dc.cone.lineality(), rhat);
    auto project = [&](const QVec& x) {
        QVec out;
        for (const auto& row : proj_rows) out.push_back(dot(row, x));
        return out;
    };
    std::vector<QVec> qgens;
    for (const auto& g : dc.cone.rays()) qgens.push_back(project(g));
    std::vector<QVec> lat_gens;
    for (int i = 0; i < rhat; ++i) {
        QVec e = zero_vec(rhat);
        e[i] = 1;
        lat_gens.push_back(project(e));
    }
    ToricCone t(Cone(static_cast<int>(proj_rows.size()), qgens),
                Lattice(lattice_basis_from_generators(lat_gens)), {});
    Nvol nv = nvol_xi(t, project(xi));
    if (!nv.finite) throw MathError("nvol_via_fibre: infinite normalized volume");
    return nv.value;
}

// ---------------------------------------------------------------------------
// f-divisors

namespace {

FDivisor::Cell make_cell(Polyhedron poly, int tailfan_index, QVec lin, Rat cst) {
    return {std::move(poly), tailfan_index, std::move(lin), std::move(cst)};
}

}  // namespace

FDivisor fdivisor_vertical(const PDivisor& d, const std::string& z, const QVec& v) {
    const int r = d.rank();
    if (!d.coefficient(z).rint_contains(v))
        throw GeometryError("fdivisor_vertical: v must be interior to D_z");

    Polyhedron s_part = sum_coeffs_excluding(d, z);
    std::vector<QVec> frak_verts;
    for (const auto& w : s_part.vertices()) frak_verts.push_back(vec_add(v, w));
    Polyhedron frak_d(frak_verts, d.tail());

    FDivisor f;
    f.rank = r;
    f.degree_part = frak_d;
    f.exceptional = DivisorSpec::vertical(z, v);

    // Maximal cones: cones over the facets of the degree part.
    std::vector<Polyhedron::Facet> max_facets;
    for (const auto& fc : frak_d.facets()) {
        if (fc.offset <= 0)
            throw GeometryError("fdivisor_vertical: degree part facet through the apex");
        std::vector<QVec> cgens;
        for (const auto& w : frak_d.vertices())
            if (dot(fc.normal, w) == fc.offset) cgens.push_back(w);
        for (const auto& g : d.tail().rays())
            if (dot(fc.normal, g) == 0) cgens.push_back(g);
        f.tailfan.emplace_back(r, cgens);
        f.marked.push_back(true);
        max_facets.push_back(fc);
    }

    // Slices. For y != z: Minkowski summand faces of the degree-part facets.
    for (const auto& [label, poly] : d.coefficients()) {
        if (label == z) continue;
        std::vector<FDivisor::Cell> cells;
        for (size_t i = 0; i < max_facets.size(); ++i) {
            const auto& fc = max_facets[i];
            QVec lin = vec_scale(1 / fc.offset, fc.normal);
            Polyhedron::Face fy = poly.minimizing_face(fc.normal);
            std::vector<QVec> verts;
            for (int vi : fy.vertex_indices) verts.push_back(poly.vertices()[vi]);
            Polyhedron cell_poly(verts, f.tailfan[i]);
            Rat cst = -dot(lin, verts[0]);
            cells.push_back(make_cell(std::move(cell_poly), static_cast<int>(i), lin, cst));
        }
        f.slices[label] = std::move(cells);
    }
    // Slice at z: translated cones plus hulls with the boundary faces of D_z.
    {
        const Polyhedron& dz = d.coefficient(z);
        std::vector<FDivisor::Cell> cells;
        for (size_t i = 0; i < max_facets.size(); ++i) {
            const auto& fc = max_facets[i];
            QVec lin = vec_scale(1 / fc.offset, fc.normal);
            Rat cst = Rat(1) - dot(lin, v);
            cells.push_back(make_cell(Polyhedron({v}, f.tailfan[i]), static_cast<int>(i), lin, cst));
        }
        for (const auto& fc : dz.facets()) {
            Rat denom = dot(fc.normal, v) - fc.offset;
            if (denom <= 0)
                throw GeometryError("fdivisor_vertical: v not strictly inside D_z");
            std::vector<QVec> verts;
            std::vector<QVec> tail_gens;
            for (const auto& w : dz.vertices())
                if (dot(fc.normal, w) == fc.offset) verts.push_back(w);
            for (const auto& g : d.tail().rays())
                if (dot(fc.normal, g) == 0) tail_gens.push_back(g);
            verts.push_back(v);
            QVec lin = vec_scale(1 / denom, fc.normal);
            Rat cst = -fc.offset / denom;
            cells.push_back(
                make_cell(Polyhedron(verts, Cone(r, tail_gens)), -1, lin, cst));
        }
        f.slices[z] = std::move(cells);
    }
    return f;
}

FDivisor fdivisor_horizontal(const PDivisor& d, const QVec& rho) {
    const int r = d.rank();
    Lattice lat = Lattice::standard(r);
    QVec n = lat.ray_primitive(rho);
    if (!d.tail().rint_contains(n))
        throw GeometryError("fdivisor_horizontal: ray not interior to the tail cone");

    FDivisor f;
    f.rank = r;
    f.exceptional = DivisorSpec::horizontal(n);

    const auto& tail_normals = d.tail().facet_normals();
    std::vector<QVec> cone_linear;
    for (const auto& ntau : tail_normals) {
        std::vector<QVec> cgens;
        for (const auto& g : d.tail().rays())
            if (dot(ntau, g) == 0) cgens.push_back(g);
        cgens.push_back(n);
        f.tailfan.emplace_back(r, cgens);
        f.marked.push_back(d.degree().support_min(ntau) == 0);
        cone_linear.push_back(vec_scale(1 / dot(ntau, n), ntau));
    }

    for (const auto& [label, poly] : d.coefficients()) {
        std::vector<FDivisor::Cell> cells;
        // Full cells: facet of D_y plus the ray.
        for (const auto& fc : poly.facets()) {
            Rat slope = dot(fc.normal, n);
            // Facet normals of a sigma-polyhedron lie in sigma^vee, and n is
            // interior, so the slope is positive.
            if (slope <= 0)
                throw GeometryError("fdivisor_horizontal: non-positive slope along the ray");
            std::vector<QVec> verts;
            std::vector<QVec> tail_gens;
            for (const auto& w : poly.vertices())
                if (dot(fc.normal, w) == fc.offset) verts.push_back(w);
            for (const auto& g : d.tail().rays())
                if (dot(fc.normal, g) == 0) tail_gens.push_back(g);
            tail_gens.push_back(n);
            Cone cell_tail(r, tail_gens);
            // Match the cell to a tail-fan cone when its tail is maximal.
            int idx = -1;
            for (size_t i = 0; i < f.tailfan.size(); ++i)
                if (f.tailfan[i] == cell_tail) idx = static_cast<int>(i);
            QVec lin = vec_scale(1 / slope, fc.normal);
            Rat cst = -fc.offset / slope;
            cells.push_back(make_cell(Polyhedron(verts, cell_tail), idx, lin, cst));
        }
        f.slices[label] = std::move(cells);
    }
    return f;
}

void verify_fdivisor_compatibility(const FDivisor& f, const PDivisor& d) {
    for (size_t i = 0; i < f.tailfan.size(); ++i) {
        if (!f.marked[i]) continue;
        // sum of the cells with this tail over all labels
        Polyhedron sum = Polyhedron::cone_at_origin(f.tailfan[i]);
        for (const auto& [label, cells] : f.slices) {
            const FDivisor::Cell* cell = nullptr;
            for (const auto& c : cells)
                if (c.tailfan_index == static_cast<int>(i)) cell = &c;
            if (!cell)
                throw MathError("compatibility: no cell with the marked tail cone at '" +
                                label + "'");
            sum = sum.minkowski_sum(cell->poly);
        }
        if (f.degree_part) {
            Polyhedron cap = f.degree_part->intersect_cone(f.tailfan[i]);
            if (!(cap == sum))
                throw MathError("compatibility: sigma cap deg != sum of slice cells");
        }
        // Proper subset of the cone: the apex must stay outside.
        if (sum.contains(zero_vec(f.rank)))
            throw MathError("compatibility: sum of slice cells is not proper in its cone");
    }
}

AmpleCertificate ample_certificate(const FDivisor& f, const PDivisor& d,
                                   const DivisorSpec& target) {
    AmpleCertificate cert;
    Lattice lat = Lattice::standard(f.rank);

    // h on the tail-fan rays, from the per-cone linear parts of the z-cells
    // (vertical) or the cell functions' common linear parts (horizontal).
    // Each maximal cone's linear part is recovered from any cell bound to it.
    std::vector<QVec> cone_linear(f.tailfan.size());
    std::vector<bool> have(f.tailfan.size(), false);
    for (const auto& [label, cells] : f.slices) {
        for (const auto& c : cells) {
            if (c.tailfan_index < 0) continue;
            if (!have[c.tailfan_index]) {
                cone_linear[c.tailfan_index] = c.lin;
                have[c.tailfan_index] = true;
            } else if (cone_linear[c.tailfan_index] != c.lin) {
                throw MathError("certificate: cells disagree on the linear part of h");
            }
        }
    }
    for (size_t i = 0; i < f.tailfan.size(); ++i) {
        if (!have[i]) throw MathError("certificate: maximal cone without a bound cell");
        for (const auto& ray : f.tailfan[i].rays()) {
            Rat val = dot(cone_linear[i], ray);
            auto it = cert.h_ray_values.find(ray);
            if (it == cert.h_ray_values.end()) cert.h_ray_values[ray] = val;
            else if (it->second != val)
                throw MathError("certificate: h is not single-valued on a shared ray");
        }
    }

    for (const auto& [label, cells] : f.slices) {
        auto& values = cert.hy_vertex_values[label];
        for (const auto& c : cells) {
            for (const auto& w : c.poly.vertices()) {
                Rat val = dot(c.lin, w) + c.cst;
                auto it = values.find(w);
                if (it == values.end()) values[w] = val;
                else if (it->second != val)
                    throw MathError("certificate: h_y is not single-valued at " + vec_str(w));
            }
        }
    }

    cert.cone_offsets.resize(f.tailfan.size());
    for (size_t i = 0; i < f.tailfan.size(); ++i) {
        for (const auto& [label, cells] : f.slices) {
            for (const auto& c : cells) {
                if (c.tailfan_index != static_cast<int>(i)) continue;
                if (c.lin != cone_linear[i])
                    throw MathError("certificate: cell linear part differs from h");
                cert.cone_offsets[i][label] = c.cst;
            }
        }
    }

    cert.exceptional_scale =
        target.kind == DivisorSpec::Kind::Vertical ? mu_or_one(lat, target.w) : Rat(1);
    return cert;
}

void validate_certificate(const AmpleCertificate& cert, const FDivisor& f, const PDivisor& d) {
    // Linear parts per maximal cone from the certified ray values.
    std::vector<QVec> u(f.tailfan.size());
    for (size_t i = 0; i < f.tailfan.size(); ++i) {
        QMat rows;
        QVec rhs;
        for (const auto& ray : f.tailfan[i].rays()) {
            auto it = cert.h_ray_values.find(ray);
            if (it == cert.h_ray_values.end())
                throw MathError("certificate: missing h value at ray " + vec_str(ray));
            rows.push_back(ray);
            rhs.push_back(it->second);
        }
        SolveResult res = solve(rows, rhs);
        if (res.kind != SolveResult::Kind::Unique)
            throw MathError("certificate: h is not linear on a maximal cone");
        u[i] = res.solution;
    }
    // Strict concavity of h across the tail fan. Cones carrying the same
    // linear piece count as one region (their common wall extracts nothing).
    for (size_t i = 0; i < f.tailfan.size(); ++i) {
        for (const auto& [ray, val] : cert.h_ray_values) {
            if (!f.tailfan[i].contains(ray)) {
                bool same_piece_neighbor = false;
                for (size_t j = 0; j < f.tailfan.size(); ++j)
                    if (j != i && u[j] == u[i] && f.tailfan[j].contains(ray))
                        same_piece_neighbor = true;
                if (same_piece_neighbor) {
                    if (dot(u[i], ray) != val)
                        throw MathError("certificate: h value mismatch at ray " + vec_str(ray));
                } else if (dot(u[i], ray) <= val) {
                    throw MathError("certificate: h not strictly concave at ray " +
                                    vec_str(ray) + ": " + rat_str(dot(u[i], ray)) +
                                    " <= " + rat_str(val));
                }
            } else if (dot(u[i], ray) != val) {
                throw MathError("certificate: h value mismatch on cone " + std::to_string(i));
            }
        }
    }

    for (const auto& [label, cells] : f.slices) {
        auto vit = cert.hy_vertex_values.find(label);
        if (vit == cert.hy_vertex_values.end())
            throw MathError("certificate: missing slice values at '" + label + "'");
        const auto& values = vit->second;
        // Certified vertex values must match the cell functions.
        for (const auto& c : cells) {
            for (const auto& w : c.poly.vertices()) {
                auto it = values.find(w);
                if (it == values.end())
                    throw MathError("certificate: missing h_y value at " + vec_str(w));
                if (it->second != dot(c.lin, w) + c.cst)
                    throw MathError("certificate: h_" + label + "(" + vec_str(w) +
                                    ") = " + rat_str(it->second) + " violates the cell function");
            }
            if (c.tailfan_index >= 0 && c.lin != u[c.tailfan_index])
                throw MathError("certificate: linear part of h_y differs from h (not Cartier)");
        }
        // Strict concavity of h_y across distinct affine pieces; cells that
        // share their affine function form one region and are exempt.
        for (size_t ci = 0; ci < cells.size(); ++ci) {
            for (size_t cj = 0; cj < cells.size(); ++cj) {
                if (ci == cj) continue;
                const auto& C = cells[ci];
                const auto& Cp = cells[cj];
                if (C.lin == Cp.lin && C.cst == Cp.cst) continue;
                for (const auto& w : Cp.poly.vertices()) {
                    Rat upper = dot(C.lin, w) + C.cst;
                    Rat val = dot(Cp.lin, w) + Cp.cst;
                    bool on_region = false;  // w in the region carrying C's piece
                    for (const auto& D : cells)
                        if (D.lin == C.lin && D.cst == C.cst && D.poly.contains(w))
                            on_region = true;
                    if (on_region) {
                        if (upper != val)
                            throw MathError("certificate: h_" + label + " inconsistent at " +
                                            vec_str(w));
                    } else if (upper <= val) {
                        throw MathError("certificate: h_" + label +
                                        " not strictly concave at " + vec_str(w) + ": " +
                                        rat_str(upper) + " <= " + rat_str(val));
                    }
                }
                for (const auto& e : Cp.poly.tail().rays()) {
                    if (dot(C.lin, e) < dot(Cp.lin, e))
                        throw MathError("certificate: h_" + label +
                                        " slope drops along tail ray " + vec_str(e));
                }
            }
        }
    }

    // Offsets: zero on marked maximal cones, negative on unmarked ones.
    if (cert.cone_offsets.size() != f.tailfan.size())
        throw MathError("certificate: offset table size mismatch");
    for (size_t i = 0; i < f.tailfan.size(); ++i) {
        Rat sum = 0;
        for (const auto& [label, off] : cert.cone_offsets[i]) sum += off;
        if (f.marked[i] && sum != 0)
            throw MathError("certificate: sum of offsets on marked cone " + std::to_string(i) +
                            " is " + rat_str(sum) + " != 0");
        if (!f.marked[i] && sum >= 0)
            throw MathError("certificate: sum of offsets on unmarked cone " +
                            std::to_string(i) + " is " + rat_str(sum) + " >= 0");
    }

    // Normalization at the exceptional divisor.
    if (f.exceptional.kind == DivisorSpec::Kind::Vertical) {
        const auto& values = cert.hy_vertex_values.at(f.exceptional.point);
        auto it = values.find(f.exceptional.w);
        if (it == values.end() || it->second != 1)
            throw MathError("certificate: h_z must take value 1 at the new vertex");
        for (const auto& [label, vals] : cert.hy_vertex_values)
            for (const auto& [w, val] : vals)
                if (!(label == f.exceptional.point && w == f.exceptional.w) && val != 0)
                    throw MathError("certificate: old vertex " + vec_str(w) +
                                    " carries nonzero value");
    } else {
        auto it = cert.h_ray_values.find(f.exceptional.ray);
        if (it == cert.h_ray_values.end() || it->second != 1)
            throw MathError("certificate: h must take value 1 at the new ray");
        for (const auto& [ray, val] : cert.h_ray_values)
            if (ray != f.exceptional.ray && val != 0)
                throw MathError("certificate: old ray " + vec_str(ray) +
                                " carries nonzero h value");
        for (const auto& [label, vals] : cert.hy_vertex_values)
            for (const auto& [w, val] : vals)
                if (val != 0)
                    throw MathError("certificate: vertex " + vec_str(w) +
                                    " carries nonzero value");
    }
}

// ---------------------------------------------------------------------------
// Integral ray combination and the witness algorithm.

std::pair<Rat, Rat> combine_rays(const QVec& v1, const QVec& v2, const QVec& w, const Rat& ell) {
    const int r = static_cast<int>(v1.size());
    Lattice lat = Lattice::standard(r);
    if (!is_integral(v1) || !is_integral(v2))
        throw GeometryError("combine_rays expects primitive integral inputs");
    if (in_span({v1}, v2)) throw GeometryError("combine_rays: rays are not independent");
    Rat mu_w = mu_or_one(lat, w);
    Rat bound2 = ell * ell / mu_w;

    // Lattice of admissible (lambda1, lambda2): preimage of Z^r cap span.
    std::vector<QVec> comp = orthogonal_complement({v1, v2}, r);
    std::vector<QVec> span_lattice;  // basis of Z^r cap span(v1,v2)
    if (comp.empty()) {
        span_lattice = {};
        for (int i = 0; i < r; ++i) {
            QVec e = zero_vec(r);
            e[i] = 1;
            span_lattice.push_back(e);
        }
    } else {
        QMat a;
        for (const auto& c : comp) {
            mpz_class l = 1;
            for (const auto& x : c)
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
            a.push_back(vec_scale(Rat(l), c));
        }
        span_lattice = integer_kernel(a);
    }
    QMat vmat = transpose(QMat{v1, v2});
    std::vector<QVec> lambda_basis;
    for (const auto& s : span_lattice) {
        SolveResult res = solve(vmat, s);
        if (res.kind != SolveResult::Kind::Unique) continue;
        lambda_basis.push_back(res.solution);
    }
    if (lambda_basis.size() < 2) throw GeometryError("combine_rays: degenerate lattice");

    // The bounds are closed at the top: the canonical witness attains
    // lambda2 = ell^2 / mu(w) in the unscaled case.
    std::optional<std::pair<Rat, Rat>> best;
    const int window = 64;
    for (int x = -window; x <= window; ++x) {
        for (int y = -window; y <= window; ++y) {
            Rat l1 = Rat(x) * lambda_basis[0][0] + Rat(y) * lambda_basis[1][0];
            Rat l2 = Rat(x) * lambda_basis[0][1] + Rat(y) * lambda_basis[1][1];
            if (l1 <= 0 || l1 > ell) continue;
            if (l2 <= 0 || l2 > bound2) continue;
            std::pair<Rat, Rat> cand{l1, l2};
            if (!best || cand < *best) best = cand;
        }
    }
    if (!best)
        throw MathError("combine_rays: no admissible integral pair within the bounds");
    return *best;
}

namespace {

// Lexicographically first vertex among those maximizing (mu-1+c)/mu.
QVec b_maximizing_vertex(const PDivisor& d, const Boundary& delta, const std::string& y) {
    Lattice lat = Lattice::standard(d.rank());
    const auto& verts = d.coefficient(y).vertices();
    QVec best = verts[0];
    Rat best_val(-1);
    for (const auto& v : verts) {
        Rat mu = mu_or_one(lat, v);
        Rat val = (mu - 1 + delta.vertical_coeff(y, v)) / mu;
        if (val > best_val) {
            best_val = val;
            best = v;
        }
    }
    return best;
}

// Lexicographically first vertex of maximal multiplicity at each label.
std::map<std::string, QVec> distinguished_family(const PDivisor& d) {
    Lattice lat = Lattice::standard(d.rank());
    std::map<std::string, QVec> fam;
    for (const auto& label : d.labels()) {
        const auto& verts = d.coefficient(label).vertices();
        QVec best = verts[0];
        Rat best_mu = mu_or_one(lat, best);
        for (const auto& v : verts) {
            Rat mu = mu_or_one(lat, v);
            if (mu > best_mu) {
                best_mu = mu;
                best = v;
            }
        }
        fam[label] = best;
    }
    return fam;
}

std::string max_mu_label(const PDivisor& d) {
    std::string z = d.labels().front();
    Rat best = d.multiplicity_over(z);
    for (const auto& label : d.labels()) {
        Rat m = d.multiplicity_over(label);
        if (m > best) {
            best = m;
            z = label;
        }
    }
    return z;
}

QVec family_sum(const std::map<std::string, QVec>& fam, int rank) {
    QVec s = zero_vec(rank);
    for (const auto& [label, v] : fam) s = vec_add(s, v);
    return s;
}

}  // namespace

MldWitness mld_bound_witness(const PDivisor& d, const Boundary& delta,
                             std::optional<Rat> epsilon) {
    if (!d.is_proper().proper) throw MathError("mld witness: p-divisor is not proper");
    if (!is_klt(d, delta)) throw MathError("mld witness: pair is not klt");
    GorensteinData g = solve_gorenstein(d, delta);

    const int r = d.rank();
    const int dim = r + 1;
    Lattice lat = Lattice::standard(r);
    TypeTriple type = type_triple(d);
    if (!type.typed || !is_platonic_triple(type.entries))
        throw MathError("mld witness: klt pair with non-platonic type");

    Rat eps = epsilon ? *epsilon : delta.min_positive_or_one();
    std::string z = max_mu_label(d);
    QuotientPair qp = quotient_pair(d, delta);
    Rat sum_b_rest = 0;
    for (const auto& [label, b] : qp.b)
        if (label != z) sum_b_rest += b;

    MldWitness out;

    if (type.entries[0] == 1 && sum_b_rest < 1) {
        // Vertical branch: witness on the toric degeneration, bound 2 dim - 1.
        out.branch = "vertical-2d-1";
        out.bound = Rat(2 * dim - 1);
        DegenCone dc = sigma_z(d, delta, z);
        if (!dc.pointed) {
            out.certified = false;
            out.diagnostic = "sigma_z is not pointed";
            return out;
        }
        // Rays ordered by height, top first.
        std::vector<const DegenRay*> rays;
        for (const auto& ray : dc.rays) rays.push_back(&ray);
        std::sort(rays.begin(), rays.end(), [](const DegenRay* a, const DegenRay* b) {
            if (a->height != b->height) return a->height > b->height;
            return vec_less(a->primitive, b->primitive);
        });
        // Greedy independent subset, starting from the top ray.
        std::vector<QVec> chosen;
        for (const auto* ray : rays) {
            if (static_cast<int>(chosen.size()) == dim) break;
            if (!in_span(chosen, ray->primitive)) chosen.push_back(ray->primitive);
        }
        if (static_cast<int>(chosen.size()) < dim) {
            out.certified = false;
            out.diagnostic = "could not find dim independent extremal rays";
            return out;
        }
        QVec combo = vec_scale(Rat(dim), chosen[0]);
        for (int i = 1; i < dim; ++i) combo = vec_add(combo, chosen[i]);
        Rat height = combo.back();
        if (height <= 0 || !dc.cone.rint_contains(combo)) {
            out.certified = false;
            out.diagnostic = "combined ray not interior at positive height";
            return out;
        }
        QVec w = vec_scale(1 / height, QVec(combo.begin(), combo.end() - 1));
        out.spec = DivisorSpec::vertical(z, w);
        out.discrepancy = log_discrepancy(g, d, delta, out.spec);
        VerticalComponent vc = vertical_component(d, delta, z, w);
        out.certified = vc.is_kollar && out.discrepancy <= out.bound;
        if (!out.certified) out.diagnostic = "witness failed the branch bound or plt test";
        return out;
    }

    if (type.entries[0] == 1) {
        // Horizontal branch: ray through a sum of b-maximizing vertices. The
        // bound argument only uses the b-values, so any per-label maximizer
        // qualifies; prefer a family whose ray is interior, then fall back to
        // a scan over all vertex families before flagging.
        out.branch = "horizontal-2-eps";
        out.bound = Rat(2) / eps;
        auto consider = [&](const QVec& s) -> bool {
            if (is_zero(s)) return false;
            QVec n = lat.ray_primitive(s);
            Rat a = log_discrepancy(g, d, delta, DivisorSpec::horizontal(n));
            if (!d.tail().rint_contains(n) || a > out.bound) return false;
            out.spec = DivisorSpec::horizontal(n);
            out.discrepancy = a;
            out.certified = true;
            return true;
        };
        // All products of per-label b-maximizing vertex sets.
        std::vector<std::vector<QVec>> maximizers;
        std::vector<std::string> labels = d.labels();
        for (const auto& label : labels) {
            const auto& verts = d.coefficient(label).vertices();
            Rat best(-1);
            std::vector<QVec> arg;
            for (const auto& v : verts) {
                Rat mu = mu_or_one(lat, v);
                Rat val = (mu - 1 + delta.vertical_coeff(label, v)) / mu;
                if (val > best) {
                    best = val;
                    arg.clear();
                }
                if (val == best) arg.push_back(v);
            }
            maximizers.push_back(std::move(arg));
        }
        std::vector<size_t> idx(labels.size(), 0);
        bool done = false;
        while (!done) {
            QVec s = zero_vec(r);
            for (size_t i = 0; i < labels.size(); ++i) s = vec_add(s, maximizers[i][idx[i]]);
            if (consider(s)) return out;
            size_t i = 0;
            for (; i < labels.size(); ++i) {
                if (++idx[i] < maximizers[i].size()) break;
                idx[i] = 0;
            }
            done = i == labels.size();
        }
        for (const auto& vf : vertex_families(d))
            if (consider(vf.sum(r))) return out;
        // The family rays may all sit on the tail boundary. Any interior
        // primitive ray is a Kollar component, so sums of family rays with
        // tail rays (which clear the shared facets) extend the search while
        // the exact discrepancy check keeps the bound honest.
        {
            std::vector<QVec> pool = d.tail().rays();
            for (const auto& vf : vertex_families(d)) {
                QVec s = vf.sum(r);
                if (!is_zero(s)) pool.push_back(lat.ray_primitive(s));
            }
            QVec all = zero_vec(r);
            for (const auto& n : d.tail().rays()) all = vec_add(all, n);
            pool.push_back(all);
            for (size_t i = 0; i < pool.size(); ++i)
                for (size_t j = 0; j < pool.size(); ++j)
                    if (i != j && consider(vec_add(pool[i], pool[j]))) return out;
        }
        // Report the b-maximizing construction with the diagnostic.
        std::map<std::string, QVec> fam;
        for (const auto& label : labels) fam[label] = b_maximizing_vertex(d, delta, label);
        QVec s = family_sum(fam, r);
        if (!is_zero(s)) {
            QVec n = lat.ray_primitive(s);
            out.spec = DivisorSpec::horizontal(n);
            out.discrepancy = log_discrepancy(g, d, delta, out.spec);
        }
        out.certified = false;
        out.diagnostic = "no vertex-family ray is interior within the 2/eps bound; the "
                         "discrepancy bound still holds for the reported divisor";
        return out;
    }

    // Types (2,p,q): the ray-set construction.
    out.branch = "m-construction";
    out.bound = Rat(2 * (dim - 1) * 78);
    std::vector<QVec> big_r;
    for (const auto& ray : d.tail().rays())
        if (!in_span(big_r, ray)) big_r.push_back(ray);
    if (static_cast<int>(big_r.size()) < r) {
        out.certified = false;
        out.diagnostic = "tail cone rays do not span";
        return out;
    }
    big_r.resize(r);

    std::map<std::string, QVec> tfam = distinguished_family(d);
    QVec tau_sum = family_sum(tfam, r);
    QVec n_tau = lat.ray_primitive(tau_sum);

    std::vector<QVec> m_set;
    bool per_ray_ok = true;
    auto push_ray = [&](const QVec& nr) {
        for (const auto& existing : m_set)
            if (existing == nr) return;
        m_set.push_back(nr);
    };

    for (const auto& rho : big_r) {
        if (!d.degree().meets_ray(rho)) {
            push_ray(rho);  // prime divisor on X, discrepancy 1 - c
            continue;
        }
        auto fams = vertex_families(d, rho);
        if (fams.empty()) {
            per_ray_ok = false;
            out.diagnostic = "no vertex family over ray " + vec_str(rho);
            push_ray(rho);
            continue;
        }
        const VertexFamily& vf = fams.front();
        TypeTriple ft = vf.family_type(lat);
        Rat mu_vz = mu_or_one(lat, vf.choice.at(z));
        if (ft.typed && ft.entries[0] >= 2) {
            push_ray(lat.ray_primitive(vf.sum(r)));  // discrepancy <= 2
            continue;
        }
        if (mu_vz == 1) {
            push_ray(lat.ray_primitive(vf.sum(r)));  // type (1,r,s), r,s <= 3: <= 5
            continue;
        }
        // Swap construction: rho1 keeps v at z and the distinguished family
        // elsewhere; rho2 the other way; rho2 gets tamed by the integral
        // combination against the distinguished ray.
        std::map<std::string, QVec> fam1 = tfam, fam2 = vf.choice;
        fam1[z] = vf.choice.at(z);
        fam2[z] = tfam.at(z);
        QVec rho1_sum = family_sum(fam1, r);
        QVec rho2_sum = family_sum(fam2, r);
        push_ray(lat.ray_primitive(rho1_sum));
        QVec n_rho2 = lat.ray_primitive(rho2_sum);
        if (in_span({n_tau}, n_rho2)) {
            push_ray(n_tau);
            continue;
        }
        QVec w_point = tfam.at(z);
        QVec wp1 = vec_sub(tau_sum, w_point);
        QVec wp2 = vec_sub(rho2_sum, w_point);
        Rat ell;
        {
            Rat m1 = mu_or_one(lat, wp1);
            Rat m2 = mu_or_one(lat, wp2);
            mpz_class l;
            mpz_lcm(l.get_mpz_t(), m1.get_num().get_mpz_t(), m2.get_num().get_mpz_t());
            ell = Rat(l);
        }
        auto [l1, l2] = combine_rays(n_tau, n_rho2, w_point, ell);
        QVec combo = vec_add(vec_scale(l1, n_tau), vec_scale(l2, n_rho2));
        push_ray(lat.ray_primitive(combo));
    }

    // Per-ray discrepancies and the final interior combination.
    Rat total = 0;
    QVec eta = zero_vec(r);
    for (const auto& nr : m_set) {
        Rat a = log_discrepancy(g, d, delta, DivisorSpec::horizontal(nr));
        if (a > 78) {
            per_ray_ok = false;
            out.diagnostic = "ray " + vec_str(nr) + " exceeds the per-ray bound 78";
        }
        total += a;
        eta = vec_add(eta, nr);
    }
    QVec n_eta = lat.ray_primitive(eta);
    out.spec = DivisorSpec::horizontal(n_eta);
    out.discrepancy = log_discrepancy(g, d, delta, out.spec);
    bool interior = d.tail().rint_contains(n_eta);
    out.certified = per_ray_ok && interior && out.discrepancy <= out.bound;
    if (!interior) out.diagnostic = "combined ray not interior to the tail cone";
    return out;
}

}  // namespace fcone
