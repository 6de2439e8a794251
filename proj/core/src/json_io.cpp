#include "fcone/json_io.hpp"

#include "fcone/errors.hpp"

namespace fcone {
namespace io {

Rat rat_from_json(const json& j) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long>());
    throw InputError("expected an integer or a \"p/q\" string, got " + j.dump());
}

QVec vec_from_json(const json& j) {
    if (!j.is_array()) throw InputError("expected an array for a vector, got " + j.dump());
    QVec v;
    for (const auto& x : j) v.push_back(rat_from_json(x));
    return v;
}

QMat mat_from_json(const json& j) {
    if (!j.is_array()) throw InputError("expected an array of rows, got " + j.dump());
    QMat m;
    for (const auto& row : j) m.push_back(vec_from_json(row));
    return m;
}

json rat_to_json(const Rat& r) { return rat_str(r); }

json vec_to_json(const QVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(rat_str(x));
    return a;
}

json mat_to_json(const QMat& m) {
    json a = json::array();
    for (const auto& row : m) a.push_back(vec_to_json(row));
    return a;
}

PDivisorInput pdivisor_from_json(const json& j) {
    if (!j.contains("rank") || !j.contains("tail") || !j.contains("coefficients"))
        throw InputError("p-divisor JSON needs rank, tail and coefficients");
    int rank = j.at("rank").get<int>();
    Cone tail(rank, mat_from_json(j.at("tail")));
    std::map<std::string, Polyhedron> coeffs;
    for (const auto& [label, cj] : j.at("coefficients").items()) {
        if (!cj.contains("vertices"))
            throw InputError("coefficient at '" + label + "' needs vertices");
        QMat verts = mat_from_json(cj.at("vertices"));
        coeffs.emplace(label, Polyhedron(std::vector<QVec>(verts.begin(), verts.end()), tail));
    }
    PDivisorInput in{PDivisor(rank, tail, std::move(coeffs)), Boundary{}};
    if (j.contains("boundary")) {
        const json& b = j.at("boundary");
        Lattice lat = Lattice::standard(rank);
        if (b.contains("horizontal"))
            for (const auto& h : b.at("horizontal"))
                in.boundary.horizontal[lat.ray_primitive(vec_from_json(h.at("ray")))] =
                    rat_from_json(h.at("c"));
        if (b.contains("vertical"))
            for (const auto& v : b.at("vertical"))
                in.boundary.vertical[{v.at("point").get<std::string>(),
                                      vec_from_json(v.at("vertex"))}] = rat_from_json(v.at("c"));
        in.boundary.validate(in.divisor);
    }
    return in;
}

json pdivisor_to_json(const PDivisor& d, const Boundary& delta) {
    json j;
    j["rank"] = d.rank();
    j["tail"] = mat_to_json(d.tail().rays());
    json coeffs = json::object();
    for (const auto& [label, poly] : d.coefficients()) {
        json c;
        c["vertices"] = mat_to_json(poly.vertices());
        coeffs[label] = c;
    }
    j["coefficients"] = coeffs;
    json b;
    json hor = json::array();
    for (const auto& [ray, c] : delta.horizontal)
        hor.push_back({{"ray", vec_to_json(ray)}, {"c", rat_str(c)}});
    json ver = json::array();
    for (const auto& [key, c] : delta.vertical)
        ver.push_back(
            {{"point", key.first}, {"vertex", vec_to_json(key.second)}, {"c", rat_str(c)}});
    b["horizontal"] = hor;
    b["vertical"] = ver;
    j["boundary"] = b;
    return j;
}

DivisorSpec divisor_spec_from_json(const json& j) {
    if (j.contains("horizontal")) return DivisorSpec::horizontal(vec_from_json(j.at("horizontal")));
    if (j.contains("vertical")) {
        const json& v = j.at("vertical");
        return DivisorSpec::vertical(v.at("point").get<std::string>(), vec_from_json(v.at("w")));
    }
    throw InputError("divisor spec needs \"horizontal\" or \"vertical\"");
}

json divisor_spec_to_json(const DivisorSpec& s) {
    json j;
    if (s.kind == DivisorSpec::Kind::Horizontal) {
        j["horizontal"] = vec_to_json(s.ray);
    } else {
        j["vertical"] = {{"point", s.point}, {"w", vec_to_json(s.w)}};
    }
    return j;
}

ToricCone toric_cone_from_json(const json& j) {
    if (!j.contains("rays")) throw InputError("toric cone JSON needs rays");
    QMat rays = mat_from_json(j.at("rays"));
    if (rays.empty()) throw InputError("toric cone needs at least one ray");
    int rank = static_cast<int>(rays[0].size());
    Lattice lat = j.contains("lattice") ? Lattice(mat_from_json(j.at("lattice")))
                                        : Lattice::standard(rank);
    std::map<QVec, Rat> boundary;
    if (j.contains("boundary"))
        for (const auto& b : j.at("boundary")) {
            Rat c = rat_from_json(b.at("c"));
            if (c < 0 || c >= 1) throw InputError("boundary coefficient outside [0,1)");
            boundary[lat.ray_primitive(vec_from_json(b.at("ray")))] = c;
        }
    return ToricCone(Cone(rank, std::vector<QVec>(rays.begin(), rays.end())), lat,
                     std::move(boundary));
}

json toric_cone_to_json(const ToricCone& t) {
    json j;
    j["rays"] = mat_to_json(t.cone().rays());
    j["lattice"] = mat_to_json(t.lattice().basis());
    json b = json::array();
    for (const auto& [ray, c] : t.boundary())
        b.push_back({{"ray", vec_to_json(ray)}, {"c", rat_str(c)}});
    j["boundary"] = b;
    return j;
}

hyper::MultigradedHypersurface hypersurface_from_json(const json& j) {
    hyper::MultigradedHypersurface h;
    h.variable_weights = mat_from_json(j.at("variable_weights"));
    h.equation_weight = vec_from_json(j.at("equation_weight"));
    if (j.contains("monomials"))
        for (const auto& m : j.at("monomials"))
            h.monomials.push_back(m.get<std::vector<long>>());
    return h;
}

json degen_cone_to_json(const DegenCone& dc) {
    json j;
    j["z"] = dc.z;
    j["pointed"] = dc.pointed;
    j["rays"] = json::array();
    for (const auto& r : dc.rays) {
        json rj;
        rj["primitive"] = vec_to_json(r.primitive);
        rj["height"] = rat_str(r.height);
        rj["display_coeff"] = rat_str(r.display_coeff);
        rj["consistent_coeff"] = rat_str(r.consistent_coeff);
        if (r.mismatch) rj["coefficient_mismatch"] = true;
        j["rays"].push_back(rj);
    }
    if (!dc.pointed) j["lineality"] = mat_to_json(dc.cone.lineality());
    return j;
}

json mld_witness_to_json(const MldWitness& w) {
    json j;
    j["branch"] = w.branch;
    j["witness"] = divisor_spec_to_json(w.spec);
    j["discrepancy"] = rat_str(w.discrepancy);
    j["bound"] = rat_str(w.bound);
    j["certified"] = w.certified;
    if (!w.diagnostic.empty()) j["diagnostic"] = w.diagnostic;
    return j;
}

}  // namespace io
}  // namespace fcone
