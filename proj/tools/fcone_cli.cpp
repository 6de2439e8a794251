#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fcone/json_io.hpp"
#include "fcone/selftest.hpp"

namespace {

using fcone::Boundary;
using fcone::DivisorSpec;
using fcone::PDivisor;
using fcone::Rat;
using nlohmann::json;

// FNV-1a over the canonical input text, echoed in every report.
std::string digest(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

struct Report {
    std::string command;
    std::string input_digest;
    json results = json::object();
    json certificates = json::object();
    std::vector<std::string> warnings;
    double seconds = 0;

    json to_json() const {
        json j;
        j["command"] = command;
        j["input_digest"] = input_digest;
        j["results"] = results;
        if (!certificates.empty()) j["certificates"] = certificates;
        j["warnings"] = warnings;
        j["timing_seconds"] = seconds;
        return j;
    }
};

void print_human(const json& j, const std::string& indent = "") {
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            std::cout << indent << key << ":\n";
            print_human(value, indent + "  ");
        } else if (value.is_string()) {
            // Exact "p/q" values get an approximate rendering alongside;
            // machine output stays exact.
            std::string s = value.get<std::string>();
            std::cout << indent << key << " = " << s;
            if (s.find('/') != std::string::npos) {
                try {
                    std::cout << " (" << fcone::rat_approx_str(fcone::parse_rat(s)) << ")";
                } catch (const fcone::InputError&) {
                }
            }
            std::cout << "\n";
        } else {
            std::cout << indent << key << " = " << value.dump() << "\n";
        }
    }
}

void emit(const Report& rep, bool as_json) {
    if (as_json) {
        std::cout << rep.to_json().dump(2) << "\n";
        return;
    }
    std::cout << "# " << rep.command << "  [" << rep.input_digest << "]\n";
    print_human(rep.results);
    for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
    std::cout << std::fixed << std::setprecision(3) << "elapsed " << rep.seconds << " s\n";
}

std::string read_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fcone::InputError("cannot open input file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw fcone::InputError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact invariants of Fano cone singularities: p-divisors, log discrepancies, "
                 "Kollar components, normalized volumes, weighted hypersurfaces"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable report on stdout");

    std::string input_file;
    std::string spec_text, rays_text, xi_text, lattice_text, boundary_text;
    std::string weights_text, ci_degrees_text, kernel_text, monomials_text, wmatrix_text,
        eqweight_text;
    std::string volume_text = "16", tol_text = "1/1000000";
    std::string z_label, w_text;
    bool minimize = false, mld_bound = false, want_sigma = false, want_csv = false;
    int dim = 3;
    long max_degree = 12, cap = 8;
    std::uint64_t seed = 20240801;
    int n_instances = 100;
    std::string filter;
    long degree_long = 0;

    auto* pdiv_cmd = app.add_subcommand("pdiv", "structural invariants of a p-divisor");
    pdiv_cmd->add_option("--input", input_file, "p-divisor JSON file")->required();

    auto* disc_cmd = app.add_subcommand("discrepancy", "log discrepancy of a divisor spec");
    disc_cmd->add_option("--input", input_file)->required();
    disc_cmd->add_option("--spec", spec_text,
                         R"(JSON: {"horizontal":[..]} or {"vertical":{"point":"..","w":[..]}})")
        ->required();

    auto* kollar_cmd = app.add_subcommand("kollar", "Kollar components and the mld witness");
    kollar_cmd->add_option("--input", input_file)->required();
    kollar_cmd->add_flag("--mld-bound", mld_bound, "run the bounded-witness search");
    kollar_cmd->add_flag("--sigma-z", want_sigma, "emit the degeneration cone for --z");
    kollar_cmd->add_option("--z", z_label, "point label");
    kollar_cmd->add_option("--w", w_text, "vertical point, e.g. [\"1\",\"1\"]");
    kollar_cmd->add_option("--horizontal", rays_text, "horizontal ray, e.g. [1,2]");

    auto* nvol_cmd = app.add_subcommand("nvol", "toric normalized volume");
    nvol_cmd->add_option("--input", input_file, "toric cone JSON file");
    nvol_cmd->add_option("--rays", rays_text, "inline rays, e.g. [[0,0,1],[0,2,1],[1,0,0]]");
    nvol_cmd->add_option("--lattice", lattice_text, "inline lattice basis rows");
    nvol_cmd->add_option("--boundary", boundary_text, "inline boundary [{\"ray\":..,\"c\":..}]");
    nvol_cmd->add_option("--xi", xi_text, "polarization");
    nvol_cmd->add_flag("--minimize", minimize, "minimize over the Reeb cone");
    nvol_cmd->add_option("--tol", tol_text, "enclosure tolerance P/Q");

    auto* hyper_cmd = app.add_subcommand("hyper", "weighted-homogeneous hypersurfaces");
    hyper_cmd->require_subcommand(1);
    auto* hnvol = hyper_cmd->add_subcommand("nvol", "normalized volume of a weight system");
    hnvol->add_option("--weights", weights_text)->required();
    hnvol->add_option("--degree", degree_long);
    hnvol->add_option("--ci-degrees", ci_degrees_text, "complete-intersection degrees");
    auto* hcond = hyper_cmd->add_subcommand("conditions", "the four boundedness conditions");
    hcond->add_option("--weights", weights_text)->required();
    hcond->add_option("--degree", degree_long)->required();
    hcond->add_option("--volume", volume_text);
    auto* hscreen = hyper_cmd->add_subcommand("screen", "finite candidate enumeration");
    hscreen->add_option("--dim", dim);
    hscreen->add_option("--volume", volume_text);
    hscreen->add_option("--max-degree", max_degree);
    hscreen->add_flag("--csv", want_csv, "CSV candidate list on stdout");
    auto* hdeg = hyper_cmd->add_subcommand("degeneration", "T^1 support and the obstruction");
    hdeg->add_option("--weights-matrix", wmatrix_text, "variable weights as rows")->required();
    hdeg->add_option("--equation-weight", eqweight_text)->required();
    hdeg->add_option("--monomials", monomials_text, "exponent vectors of f")->required();
    hdeg->add_option("--kernel", kernel_text, "basis rows of ker(M-hat -> M)")->required();
    hdeg->add_option("--xi", xi_text, "minimizer candidate");
    hdeg->add_option("--cap", cap, "total-exponent search cap");

    auto* self_cmd = app.add_subcommand("selftest", "run the acceptance suite");
    self_cmd->add_option("--seed", seed);
    self_cmd->add_option("--n", n_instances, "random instance count");
    self_cmd->add_option("--filter", filter, "criterion name substring");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    Report rep;
    for (int i = 0; i < argc; ++i) rep.command += (i ? " " : "") + std::string(argv[i]);
    auto t0 = std::chrono::steady_clock::now();

    try {
        if (pdiv_cmd->parsed()) {
            std::string text = read_input(input_file);
            rep.input_digest = digest(text);
            auto in = fcone::io::pdivisor_from_json(parse_json(text));
            rep.results["echo"] = fcone::io::pdivisor_to_json(in.divisor, in.boundary);
            auto proper = in.divisor.is_proper();
            rep.results["proper"] = proper.proper;
            if (proper.witness)
                rep.results["properness_witness"] = fcone::io::vec_to_json(*proper.witness);
            rep.results["degree_vertices"] =
                fcone::io::mat_to_json(in.divisor.degree().vertices());
            auto type = fcone::type_triple(in.divisor);
            json tj = json::array();
            for (const auto& t : type.entries) tj.push_back(fcone::rat_str(t));
            rep.results["type"] = type.typed ? json(tj) : json{{"untyped", tj}};
            rep.results["platonic"] = fcone::platonic_filter(in.divisor);
            auto qp = fcone::quotient_pair(in.divisor, in.boundary);
            json bj = json::object();
            for (const auto& [label, b] : qp.b) bj[label] = fcone::rat_str(b);
            rep.results["quotient_pair"] = {{"b", bj}, {"degree", fcone::rat_str(qp.degree)}};
            rep.results["klt"] = fcone::is_klt(in.divisor, in.boundary);
        } else if (disc_cmd->parsed()) {
            std::string text = read_input(input_file);
            rep.input_digest = digest(text);
            auto in = fcone::io::pdivisor_from_json(parse_json(text));
            DivisorSpec spec = fcone::io::divisor_spec_from_json(parse_json(spec_text));
            auto g = fcone::solve_gorenstein(in.divisor, in.boundary);
            rep.results["u"] = fcone::io::vec_to_json(g.u);
            json aj = json::object();
            for (const auto& [label, a] : g.a) aj[label] = fcone::rat_str(a);
            rep.results["a"] = aj;
            rep.results["log_discrepancy"] =
                fcone::rat_str(fcone::log_discrepancy(g, in.divisor, in.boundary, spec));
        } else if (kollar_cmd->parsed()) {
            std::string text = read_input(input_file);
            rep.input_digest = digest(text);
            auto in = fcone::io::pdivisor_from_json(parse_json(text));
            if (mld_bound) {
                auto w = fcone::mld_bound_witness(in.divisor, in.boundary);
                rep.results = fcone::io::mld_witness_to_json(w);
                // Ample-certificate summary for the certified witness.
                if (w.certified) {
                    fcone::FDivisor f =
                        w.spec.kind == DivisorSpec::Kind::Vertical
                            ? fcone::fdivisor_vertical(in.divisor, w.spec.point, w.spec.w)
                            : fcone::fdivisor_horizontal(in.divisor, w.spec.ray);
                    auto cert = fcone::ample_certificate(f, in.divisor, w.spec);
                    fcone::validate_certificate(cert, f, in.divisor);
                    rep.certificates["ample"] = {
                        {"maximal_cones", f.tailfan.size()},
                        {"exceptional_scale", fcone::rat_str(cert.exceptional_scale)},
                        {"valid", true}};
                }
            } else if (want_sigma) {
                if (z_label.empty()) throw fcone::InputError("--sigma-z needs --z");
                auto dc = fcone::sigma_z(in.divisor, in.boundary, z_label);
                rep.results = fcone::io::degen_cone_to_json(dc);
            } else if (!w_text.empty()) {
                if (z_label.empty()) throw fcone::InputError("--w needs --z");
                fcone::QVec w = fcone::io::vec_from_json(parse_json(w_text));
                auto vc = fcone::vertical_component(in.divisor, in.boundary, z_label, w);
                rep.results["is_weak"] = vc.is_weak;
                rep.results["is_kollar"] = vc.is_kollar;
                rep.results["discrepancy"] = fcone::rat_str(vc.discrepancy);
                auto chk = fcone::toric_crosscheck(in.divisor, in.boundary, z_label, w);
                rep.results["toric_crosscheck"] = fcone::rat_str(chk.toric);
                rep.results["fibre_nvol"] =
                    fcone::rat_str(fcone::nvol_via_fibre(in.divisor, in.boundary, z_label, w));
            } else if (!rays_text.empty()) {
                fcone::QVec ray = fcone::io::vec_from_json(parse_json(rays_text));
                auto hc = fcone::horizontal_component(in.divisor, in.boundary, ray);
                rep.results["is_kollar"] = hc.is_kollar;
                rep.results["discrepancy"] = fcone::rat_str(hc.discrepancy);
            } else {
                throw fcone::InputError(
                    "kollar needs one of --mld-bound, --sigma-z, --w or --horizontal");
            }
        } else if (nvol_cmd->parsed()) {
            json input;
            if (!input_file.empty()) {
                std::string text = read_input(input_file);
                rep.input_digest = digest(text);
                input = parse_json(text);
            } else if (!rays_text.empty()) {
                input["rays"] = parse_json(rays_text);
                if (!lattice_text.empty()) input["lattice"] = parse_json(lattice_text);
                if (!boundary_text.empty()) input["boundary"] = parse_json(boundary_text);
                rep.input_digest = digest(input.dump());
            } else {
                throw fcone::InputError("nvol needs --input or --rays");
            }
            fcone::ToricCone t = fcone::io::toric_cone_from_json(input);
            rep.results["echo"] = fcone::io::toric_cone_to_json(t);
            fcone::QVec a = fcone::toric_gorenstein(t);
            rep.results["discrepancy_vector"] = fcone::io::vec_to_json(a);
            if (minimize) {
                auto m = fcone::minimize_nvol(t, fcone::parse_rat(tol_text));
                rep.results["xi_star"] = fcone::io::vec_to_json(m.xi_star);
                rep.results["value"] = fcone::rat_str(m.value_upper);
                rep.results["value_lower"] = fcone::rat_str(m.value_lower);
                rep.results["simplicial_exact"] = m.simplicial_exact;
                rep.results["evaluations"] = m.evaluations;
            }
            if (!xi_text.empty()) {
                fcone::QVec xi = fcone::io::vec_from_json(parse_json(xi_text));
                rep.results["a_xi"] = fcone::rat_str(fcone::log_discrepancy_xi(t, a, xi));
                rep.results["vol_xi"] = fcone::rat_str(fcone::volume_xi(t, xi));
                auto nv = fcone::nvol_xi(t, xi);
                rep.results["nvol_xi"] = nv.finite ? json(fcone::rat_str(nv.value))
                                                   : json("infinity");
            }
        } else if (hyper_cmd->parsed()) {
            if (hnvol->parsed() || hcond->parsed()) {
                fcone::QVec wv = fcone::io::vec_from_json(parse_json(weights_text));
                std::vector<Rat> w(wv.begin(), wv.end());
                rep.input_digest = digest(weights_text + "|" + std::to_string(degree_long));
                if (hnvol->parsed() && !ci_degrees_text.empty()) {
                    fcone::QVec dv = fcone::io::vec_from_json(parse_json(ci_degrees_text));
                    rep.results["nvol"] = fcone::rat_str(
                        fcone::hyper::nvol_ci(w, std::vector<Rat>(dv.begin(), dv.end())));
                } else {
                    fcone::hyper::WeightSystem ws(w, Rat(degree_long));
                    if (hnvol->parsed()) {
                        rep.results["nvol"] = fcone::rat_str(fcone::hyper::nvol_weighted(ws));
                    } else {
                        auto cond =
                            fcone::hyper::check_conditions(ws, fcone::parse_rat(volume_text));
                        rep.results["log_terminal"] = cond.log_terminal;
                        rep.results["lichnerowicz"] = cond.lichnerowicz;
                        rep.results["nondegenerate"] = cond.nondegenerate;
                        rep.results["volume"] = cond.volume;
                        rep.results["all"] = cond.all();
                    }
                }
            } else if (hscreen->parsed()) {
                rep.input_digest = digest(std::to_string(dim) + "|" + volume_text + "|" +
                                          std::to_string(max_degree));
                auto list =
                    fcone::hyper::screen(dim, fcone::parse_rat(volume_text), {max_degree, 0});
                json arr = json::array();
                for (const auto& ws : list) {
                    json e;
                    e["weights"] = fcone::io::vec_to_json(
                        fcone::QVec(ws.weights.begin(), ws.weights.end()));
                    e["degree"] = fcone::rat_str(ws.degree);
                    e["nvol"] = fcone::rat_str(fcone::hyper::nvol_weighted(ws));
                    arr.push_back(e);
                }
                rep.results["count"] = list.size();
                rep.results["candidates"] = arr;
                if (want_csv) {
                    for (const auto& ws : list) {
                        for (const auto& x : ws.weights) std::cout << fcone::rat_str(x) << ",";
                        std::cout << fcone::rat_str(ws.degree) << ","
                                  << fcone::rat_str(fcone::hyper::nvol_weighted(ws)) << "\n";
                    }
                }
            } else if (hdeg->parsed()) {
                fcone::hyper::MultigradedHypersurface h;
                h.variable_weights = fcone::io::mat_from_json(parse_json(wmatrix_text));
                h.equation_weight = fcone::io::vec_from_json(parse_json(eqweight_text));
                for (const auto& m : parse_json(monomials_text))
                    h.monomials.push_back(m.get<std::vector<long>>());
                fcone::QMat kernel = fcone::io::mat_from_json(parse_json(kernel_text));
                rep.input_digest = digest(wmatrix_text + kernel_text + monomials_text);
                auto support = fcone::hyper::t1_support(h, kernel, cap);
                rep.results["t1_support"] = fcone::io::mat_to_json(support);
                fcone::Cone sx = fcone::hyper::degeneration_cone(support, h.grading_rank());
                rep.results["sigma_x_rays"] = fcone::io::mat_to_json(sx.rays());
                rep.results["sigma_x_lineality"] = fcone::io::mat_to_json(sx.lineality());
                if (!xi_text.empty()) {
                    fcone::QVec xi = fcone::io::vec_from_json(parse_json(xi_text));
                    bool fired =
                        fcone::hyper::kss_obstruction(sx, xi, fcone::kernel_basis(kernel));
                    rep.results["obstruction_fires"] = fired;
                    rep.warnings.push_back(
                        "stated threshold for this family: k=5; computed interior-membership "
                        "threshold: exponent > 4");
                }
            }
        } else if (self_cmd->parsed()) {
            if (const char* env = std::getenv("FCL_SEED")) seed = std::strtoull(env, nullptr, 10);
            fcone::selftest::Options opt{seed, n_instances, filter};
            auto results = fcone::selftest::run_acceptance(opt);
            bool all_pass = true;
            json arr = json::array();
            for (const auto& r : results) {
                all_pass = all_pass && r.pass;
                std::ostringstream line;
                line << (r.pass ? "PASS" : "FAIL") << "  " << r.id << ". " << r.name << "  ("
                     << std::fixed << std::setprecision(2) << r.seconds << " s)";
                if (!r.pass) line << "  " << r.detail;
                if (!as_json) std::cout << line.str() << "\n";
                arr.push_back({{"id", r.id},
                               {"name", r.name},
                               {"pass", r.pass},
                               {"detail", r.detail},
                               {"seconds", r.seconds}});
            }
            rep.results["criteria"] = arr;
            rep.results["all_pass"] = all_pass;
            rep.input_digest = digest("selftest|" + std::to_string(seed));
            if (as_json) {
                rep.seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                emit(rep, true);
            }
            return all_pass ? 0 : 2;
        }
    } catch (const fcone::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const fcone::MathError& e) {
        std::cerr << "math error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    }

    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(rep, as_json);
    return 0;
}
