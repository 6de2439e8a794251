#include "fcone/gorenstein.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fcone/errors.hpp"

namespace fcone {

namespace {

Rat mu_or_one(const Lattice& lat, const QVec& v) {
    return is_zero(v) ? Rat(1) : lat.mu(v);
}

struct Equation {
    QVec row;
    Rat rhs;
    std::string text;
};

}  // namespace

Rat GorensteinData::a_of(const std::string& y) const {
    auto it = a.find(y);
    return it == a.end() ? Rat(0) : it->second;
}

Rat GorensteinData::k_of(const std::string& y) const {
    auto it = k.find(y);
    return it == k.end() ? Rat(0) : it->second;
}

std::vector<QVec> free_tail_rays(const PDivisor& d) {
    std::vector<QVec> out;
    for (const auto& r : d.tail().rays())
        if (!d.degree().meets_ray(r)) out.push_back(r);
    return out;
}

GorensteinData solve_gorenstein_with_support(const PDivisor& d, const Boundary& delta,
                                             const std::vector<std::string>& k_support) {
    delta.validate(d);
    const int rank = d.rank();
    Lattice lat = Lattice::standard(rank);

    // A divisor with all coefficients equal to the tail cone defines the
    // toric variety of the tail; no vertical divisors exist and only the ray
    // equations survive.
    bool trivial = true;
    for (const auto& [label, poly] : d.coefficients())
        if (poly.vertices() != std::vector<QVec>{zero_vec(rank)}) trivial = false;
    if (trivial) {
        QMat rows;
        QVec rhs;
        for (const auto& r : d.tail().rays()) {
            rows.push_back(r);
            rhs.push_back(Rat(-1) + delta.horizontal_coeff(r));
        }
        SolveResult res = solve(rows, rhs);
        if (res.kind == SolveResult::Kind::Inconsistent)
            throw NotQGorenstein("toric ray equations are inconsistent");
        if (res.kind == SolveResult::Kind::Underdetermined)
            throw AmbiguousGorenstein("toric ray equations underdetermined");
        GorensteinData g;
        g.u = res.solution;
        for (const auto& s : k_support) g.k[s] += Rat(-1);
        g.a = g.k;
        return g;
    }

    std::vector<std::string> labels = d.labels();
    for (const auto& s : k_support)
        if (std::find(labels.begin(), labels.end(), s) == labels.end()) labels.push_back(s);
    if (k_support.size() != 2) throw InputError("canonical divisor support needs two labels");

    std::map<std::string, Rat> k;
    for (const auto& s : k_support) k[s] += Rat(-1);

    const int n_labels = static_cast<int>(labels.size());
    auto label_index = [&](const std::string& y) {
        return static_cast<int>(std::find(labels.begin(), labels.end(), y) - labels.begin());
    };

    // Unknowns: u_0..u_{rank-1}, then a_y per label.
    const int n_unknowns = rank + n_labels;
    std::vector<Equation> eqs;

    for (const auto& y : labels) {
        const Polyhedron& coeff = d.coefficient(y);
        Rat ky = k.count(y) ? k[y] : Rat(0);
        for (const auto& v : coeff.vertices()) {
            Rat mu = mu_or_one(lat, v);
            Rat c = delta.vertical_coeff(y, v);
            Equation e;
            e.row = zero_vec(n_unknowns);
            for (int i = 0; i < rank; ++i) e.row[i] = v[i];
            e.row[rank + label_index(y)] = 1;
            e.rhs = ky + (mu - 1 + c) / mu;
            std::ostringstream os;
            os << "<u," << vec_str(v) << "> + a_" << y << " = " << rat_str(e.rhs)
               << "   (vertex of D_" << y << ")";
            e.text = os.str();
            eqs.push_back(std::move(e));
        }
    }
    for (const auto& r : free_tail_rays(d)) {
        Equation e;
        e.row = zero_vec(n_unknowns);
        for (int i = 0; i < rank; ++i) e.row[i] = r[i];
        e.rhs = Rat(-1) + delta.horizontal_coeff(r);
        std::ostringstream os;
        os << "<u," << vec_str(r) << "> = " << rat_str(e.rhs) << "   (ray missing deg)";
        e.text = os.str();
        eqs.push_back(std::move(e));
    }
    {
        Equation e;
        e.row = zero_vec(n_unknowns);
        for (int i = 0; i < n_labels; ++i) e.row[rank + i] = 1;
        e.rhs = 0;
        e.text = "sum_y a_y = 0   (degree-zero divisor)";
        eqs.push_back(std::move(e));
    }

    QMat a_mat;
    QVec b;
    for (const auto& e : eqs) {
        a_mat.push_back(e.row);
        b.push_back(e.rhs);
    }
    SolveResult res = solve(a_mat, b);

    if (res.kind == SolveResult::Kind::Inconsistent) {
        // Find the earliest equation that breaks consistency, for the report.
        QMat pref;
        QVec prefb;
        for (size_t i = 0; i < eqs.size(); ++i) {
            pref.push_back(eqs[i].row);
            prefb.push_back(eqs[i].rhs);
            if (solve(pref, prefb).kind == SolveResult::Kind::Inconsistent)
                throw NotQGorenstein(eqs[i].text);
        }
        throw NotQGorenstein(eqs.back().text);
    }
    if (res.kind == SolveResult::Kind::Underdetermined) {
        for (int f : res.free_columns)
            if (f < rank)
                throw AmbiguousGorenstein("u_" + std::to_string(f) +
                                          " is not determined by the vertex and ray equations");
        // Free a_y with all u pinned cannot happen: every label has a vertex
        // equation determining a_y from u.
        throw AmbiguousGorenstein("underdetermined system");
    }

    GorensteinData g;
    g.u = QVec(res.solution.begin(), res.solution.begin() + rank);
    for (int i = 0; i < n_labels; ++i) g.a[labels[i]] = res.solution[rank + i];
    g.k = k;
    return g;
}

GorensteinData solve_gorenstein(const PDivisor& d, const Boundary& delta) {
    std::vector<std::string> labels = d.labels();  // sorted
    std::vector<std::string> support;
    for (const auto& y : labels) {
        support.push_back(y);
        if (support.size() == 2) break;
    }
    int fresh = 1;
    while (support.size() < 2) support.push_back("__k" + std::to_string(fresh++));
    return solve_gorenstein_with_support(d, delta, support);
}

Rat log_discrepancy(const GorensteinData& g, const PDivisor& d, const Boundary& delta,
                    const DivisorSpec& spec) {
    Lattice lat = Lattice::standard(d.rank());
    QVec minus_u = vec_scale(Rat(-1), g.u);
    if (spec.kind == DivisorSpec::Kind::Horizontal) {
        if (is_zero(spec.ray) || !d.tail().contains(spec.ray))
            throw GeometryError("horizontal spec ray outside the tail cone");
        QVec n = lat.ray_primitive(spec.ray);
        return dot(minus_u, n);
    }
    const Polyhedron& coeff = d.coefficient(spec.point);
    if (!coeff.contains(spec.w))
        throw GeometryError("vertical spec point " + vec_str(spec.w) +
                            " outside the coefficient at '" + spec.point + "'");
    Rat mu = mu_or_one(lat, spec.w);
    Rat atilde = g.a_of(spec.point) - g.k_of(spec.point);
    return mu * (dot(minus_u, spec.w) - atilde + 1);
}

LinearityCheck horizontal_linearity_check(const GorensteinData& g, const PDivisor& d,
                                          const Boundary& delta, const QVec& rho1,
                                          const QVec& rho2, const Rat& lambda1,
                                          const Rat& lambda2) {
    Lattice lat = Lattice::standard(d.rank());
    QVec n1 = lat.ray_primitive(rho1);
    QVec n2 = lat.ray_primitive(rho2);
    QVec combo = vec_add(vec_scale(lambda1, n1), vec_scale(lambda2, n2));
    if (is_zero(combo) || !d.tail().contains(combo))
        throw GeometryError("ray combination leaves the tail cone");
    QVec prim = lat.ray_primitive(combo);
    Rat scale = 0;
    for (int i = 0; i < d.rank(); ++i)
        if (prim[i] != 0) { scale = combo[i] / prim[i]; break; }

    LinearityCheck chk;
    chk.combined_primitive = prim;
    chk.lhs = scale * log_discrepancy(g, d, delta, DivisorSpec::horizontal(prim));
    chk.rhs = lambda1 * log_discrepancy(g, d, delta, DivisorSpec::horizontal(n1)) +
              lambda2 * log_discrepancy(g, d, delta, DivisorSpec::horizontal(n2));
    if (chk.lhs != chk.rhs)
        throw MathError("horizontal linearity identity failed: " + rat_str(chk.lhs) +
                        " != " + rat_str(chk.rhs));
    return chk;
}

FamilyDiscrepancy family_discrepancy(const PDivisor& d, const Boundary& delta,
                                     const VertexFamily& fam) {
    Lattice lat = Lattice::standard(d.rank());
    QVec s = fam.sum(d.rank());
    if (is_zero(s)) throw GeometryError("vertex family sums to zero: no induced ray");

    FamilyDiscrepancy fd;
    fd.primitive_ray = lat.ray_primitive(s);
    for (int i = 0; i < d.rank(); ++i)
        if (s[i] != 0) { fd.lambda_rho = fd.primitive_ray[i] / s[i]; break; }

    Rat acc = 0;
    for (const auto& [label, v] : fam.choice) {
        Rat mu = mu_or_one(lat, v);
        Rat c = delta.vertical_coeff(label, v);
        acc += (mu - 1 + c) / mu;
    }
    fd.value = fd.lambda_rho * (2 - acc);

    GorensteinData g = solve_gorenstein(d, delta);
    Rat direct = log_discrepancy(g, d, delta, DivisorSpec::horizontal(fd.primitive_ray));
    if (direct != fd.value)
        throw MathError("family discrepancy " + rat_str(fd.value) +
                        " disagrees with the ray formula " + rat_str(direct));

    fd.type = fam.family_type(lat);
    if (fd.type.typed) {
        const auto& t = fd.type.entries;
        if (t[0] == 2) {
            fd.bound_2pq_applies = true;
            fd.bound_2pq_ok = fd.value <= 2;
        } else if (t[0] == 1) {
            fd.bound_1pq_applies = true;
            mpz_class p = t[1].get_num(), q = t[2].get_num(), gg;
            mpz_gcd(gg.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
            fd.bound_1pq = Rat(p + q) / Rat(gg);
            fd.bound_1pq_ok = fd.value <= fd.bound_1pq;
        }
    }
    return fd;
}

}  // namespace fcone
