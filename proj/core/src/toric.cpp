#include "fcone/toric.hpp"

#include <algorithm>

#include "fcone/errors.hpp"

namespace fcone {

ToricCone::ToricCone(Cone cone, Lattice lattice, std::map<QVec, Rat> boundary)
    : cone_(std::move(cone)), lattice_(std::move(lattice)), boundary_(std::move(boundary)) {
    if (!cone_.pointed() || !cone_.full_dimensional())
        throw InputError("toric cone must be pointed and full-dimensional");
    if (lattice_.rank() != cone_.rank()) throw InputError("lattice rank mismatch");
    for (const auto& r : cone_.rays()) ray_primitives_.push_back(lattice_.ray_primitive(r));
    for (const auto& [ray, c] : boundary_) {
        if (std::find(ray_primitives_.begin(), ray_primitives_.end(), ray) ==
            ray_primitives_.end())
            throw InputError("boundary key " + vec_str(ray) +
                             " is not a lattice-primitive extremal ray");
    }
    dual_rays_ = cone_.dual().rays();
}

Rat ToricCone::boundary_coeff(const QVec& ray) const {
    auto it = boundary_.find(ray);
    return it == boundary_.end() ? Rat(0) : it->second;
}

QVec toric_gorenstein(const ToricCone& t) {
    QMat rows;
    QVec rhs;
    for (const auto& n : t.ray_primitives()) {
        rows.push_back(n);
        rhs.push_back(Rat(1) - t.boundary_coeff(n));
    }
    SolveResult res = solve(rows, rhs);
    if (res.kind == SolveResult::Kind::Inconsistent) {
        for (size_t i = 0; i < rows.size(); ++i) {
            QMat pref(rows.begin(), rows.begin() + i + 1);
            QVec prefb(rhs.begin(), rhs.begin() + i + 1);
            if (solve(pref, prefb).kind == SolveResult::Kind::Inconsistent)
                throw NotQGorenstein("<a," + vec_str(rows[i]) + "> = " + rat_str(rhs[i]));
        }
    }
    if (res.kind == SolveResult::Kind::Underdetermined)
        throw AmbiguousGorenstein("discrepancy vector not unique");
    return res.solution;
}

Rat log_discrepancy_xi(const ToricCone& t, const QVec& a, const QVec& xi) {
    if (!t.cone().contains(xi)) throw GeometryError("xi outside the cone");
    return dot(a, xi);
}

Rat volume_xi(const ToricCone& t, const QVec& xi) {
    std::vector<QVec> verts;
    verts.push_back(zero_vec(t.rank()));
    for (const auto& dray : t.dual_rays()) {
        Rat s = dot(dray, xi);
        if (s <= 0) throw GeometryError("truncation unbounded: xi not in the interior");
        verts.push_back(vec_scale(1 / s, dray));
    }
    Rat fact = 1;
    for (int i = 2; i <= t.rank(); ++i) fact *= i;
    return fact * polytope_volume(verts, t.lattice().dual());
}

Nvol nvol_xi(const ToricCone& t, const QVec& xi) {
    QVec a = toric_gorenstein(t);
    Rat axi = log_discrepancy_xi(t, a, xi);
    if (axi <= 0) return {false, Rat(0)};
    Rat v = volume_xi(t, xi);
    Rat p = 1;
    for (int i = 0; i < t.rank(); ++i) p *= axi;
    return {true, p * v};
}

namespace detail {

namespace {

Rat pow_n(const Rat& r, int n) {
    Rat p = 1;
    for (int i = 0; i < n; ++i) p *= r;
    return p;
}

}  // namespace

Rat nth_root_lower(const Rat& x, int n, const Rat& eps) {
    if (x <= 0) throw GeometryError("nth root of non-positive value");
    if (n == 1) return x;
    Rat lo = 0, hi = std::max(Rat(1), x);
    while (hi - lo > eps || lo == 0) {
        Rat mid = (lo + hi) / 2;
        if (pow_n(mid, n) <= x) lo = mid;
        else hi = mid;
    }
    return lo;
}

Rat nth_root_upper(const Rat& x, int n, const Rat& eps) {
    if (x <= 0) throw GeometryError("nth root of non-positive value");
    if (n == 1) return x;
    Rat lo = 0, hi = std::max(Rat(1), x);
    while (hi - lo > eps) {
        Rat mid = (lo + hi) / 2;
        if (pow_n(mid, n) >= x) hi = mid;
        else lo = mid;
    }
    return hi;
}

DescentResult slice_descent(const Cone& cone, const QVec& a, const Rat& level,
                            const QVec& start, const std::vector<QVec>& directions,
                            const std::function<Rat(const QVec&)>& objective, int max_halvings) {
    auto renorm = [&](const QVec& p) -> std::optional<QVec> {
        Rat s = dot(a, p);
        if (s <= 0) return std::nullopt;
        QVec q = vec_scale(level / s, p);
        if (!cone.rint_contains(q)) return std::nullopt;
        return q;
    };

    DescentResult res;
    res.evaluations = 0;
    std::optional<QVec> c0 = renorm(start);
    if (!c0) throw GeometryError("descent start outside the cone interior");
    QVec cur = *c0;
    Rat fcur = objective(cur);
    ++res.evaluations;

    Rat h(1, 4);
    for (int round = 0; round < max_halvings; ++round, h /= 2) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (const auto& d : directions) {
                for (int sgn : {+1, -1}) {
                    std::optional<QVec> cand = renorm(vec_add(cur, vec_scale(Rat(sgn) * h, d)));
                    if (!cand) continue;
                    Rat f = objective(*cand);
                    ++res.evaluations;
                    if (f < fcur) {
                        cur = *cand;
                        fcur = f;
                        improved = true;
                    }
                }
            }
        }
    }
    res.point = cur;
    res.value = fcur;
    res.final_step = h;
    return res;
}

}  // namespace detail

MinimizeResult minimize_nvol(const ToricCone& t, const Rat& tolerance) {
    const int n = t.rank();
    QVec a = toric_gorenstein(t);
    for (const auto& r : t.ray_primitives())
        if (dot(a, r) <= 0) throw MathError("minimize_nvol: cone is not klt");

    if (static_cast<int>(t.ray_primitives().size()) == n) {
        // Simplicial: in ray coordinates nvol is a constant times
        // (sum t_i)^n / prod t_i, minimal exactly when all t_i agree.
        QVec xi = zero_vec(n);
        for (const auto& r : t.ray_primitives())
            xi = vec_add(xi, vec_scale(1 / dot(a, r), r));
        Nvol v = nvol_xi(t, xi);
        return {xi, v.value, v.value, true, 1};
    }
    return minimize_nvol_numeric(t, tolerance);
}

MinimizeResult minimize_nvol_numeric(const ToricCone& t, const Rat& tolerance) {
    const int n = t.rank();
    QVec a = toric_gorenstein(t);
    for (const auto& r : t.ray_primitives())
        if (dot(a, r) <= 0) throw MathError("minimize_nvol: cone is not klt");

    Rat nn = detail::pow_n(Rat(n), n);

    // Compact slice {a(xi) = n} with vertices on the extremal rays.
    std::vector<QVec> slice_verts;
    for (const auto& r : t.ray_primitives())
        slice_verts.push_back(vec_scale(Rat(n) / dot(a, r), r));
    QVec start = zero_vec(n);
    for (const auto& w : slice_verts) start = vec_add(start, w);
    std::vector<QVec> dirs = kernel_basis(QMat{a});

    auto renorm = [&](const QVec& p) -> std::optional<QVec> {
        Rat s = dot(a, p);
        if (s <= 0) return std::nullopt;
        QVec q = vec_scale(Rat(n) / s, p);
        if (!t.cone().rint_contains(q)) return std::nullopt;
        return q;
    };

    MinimizeResult out;
    out.simplicial_exact = false;
    out.evaluations = 0;

    QVec cur = *renorm(start);
    Rat fcur = volume_xi(t, cur);
    ++out.evaluations;
    out.xi_star = cur;
    out.value_upper = nn * fcur;
    out.value_lower = 0;

    Rat h(1, 4);
    for (int attempt = 0; attempt < 60; ++attempt, h /= 2) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (const auto& d : dirs) {
                for (int sgn : {+1, -1}) {
                    std::optional<QVec> cand = renorm(vec_add(cur, vec_scale(Rat(sgn) * h, d)));
                    if (!cand) continue;
                    Rat f = volume_xi(t, *cand);
                    ++out.evaluations;
                    if (f < fcur) {
                        cur = *cand;
                        fcur = f;
                        improved = true;
                    }
                }
            }
        }
        out.xi_star = cur;
        out.value_upper = nn * fcur;

        // Certified lower bound from concavity of vol^{-1/n}: one-sided
        // slopes box a supergradient p of g = vol^{-1/n} at cur; the affine
        // majorant g(cur) + <p, . - cur> peaks at a slice vertex.
        bool sample_ok = true;
        std::vector<Rat> lo_slope, hi_slope;
        // Root-enclosure precision must shrink with the step size, or the
        // slope bounds pick up an error of order eps/h.
        Rat eps = tolerance * h / 4096;
        if (eps <= 0) eps = Rat(1, 1000000);
        Rat g_hi = 1 / detail::nth_root_lower(fcur, n, eps * std::min(Rat(1), fcur));
        for (const auto& d : dirs) {
            QVec p = vec_add(cur, vec_scale(h, d));
            QVec m = vec_sub(cur, vec_scale(h, d));
            if (!t.cone().rint_contains(p) || !t.cone().rint_contains(m)) {
                sample_ok = false;
                break;
            }
            Rat fp = volume_xi(t, p);
            Rat fm = volume_xi(t, m);
            out.evaluations += 2;
            Rat gp_lo = 1 / detail::nth_root_upper(fp, n, eps);
            Rat gm_lo = 1 / detail::nth_root_upper(fm, n, eps);
            lo_slope.push_back((gp_lo - g_hi) / h);
            hi_slope.push_back((g_hi - gm_lo) / h);
        }
        if (!sample_ok) continue;

        QMat dmat = transpose(dirs);
        Rat majorant_peak = g_hi;
        for (const auto& w : slice_verts) {
            SolveResult coords = solve(dmat, vec_sub(w, cur));
            Rat ej = 0;
            for (size_t i = 0; i < dirs.size(); ++i) {
                const Rat& ti = coords.solution[i];
                ej += (ti >= 0) ? ti * hi_slope[i] : ti * lo_slope[i];
            }
            Rat cand = g_hi + ej;
            majorant_peak = std::max(majorant_peak, cand);
        }
        out.value_lower = nn / detail::pow_n(majorant_peak, n);
        if (out.value_upper - out.value_lower <= tolerance) return out;
    }
    return out;  // best certified enclosure achieved within the step budget
}

}  // namespace fcone
