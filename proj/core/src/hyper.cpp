#include "fcone/hyper.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "fcone/errors.hpp"

namespace fcone {
namespace hyper {

WeightSystem::WeightSystem(std::vector<Rat> w, Rat d) : weights(std::move(w)), degree(std::move(d)) {
    if (weights.size() < 2) throw InputError("weight system needs at least two weights");
    for (const auto& x : weights)
        if (x <= 0) throw InputError("weights must be positive");
    if (degree <= 0) throw InputError("degree must be positive");
    std::sort(weights.begin(), weights.end());
}

Rat WeightSystem::weight_sum() const {
    Rat s = 0;
    for (const auto& w : weights) s += w;
    return s;
}

WeightSystem WeightSystem::normalized() const {
    Rat w0 = weights[0];
    std::vector<Rat> w;
    for (const auto& x : weights) w.push_back(x / w0);
    return WeightSystem(std::move(w), degree / w0);
}

Rat nvol_weighted(const WeightSystem& ws) {
    const int n = ws.dim();
    Rat index = ws.weight_sum() - ws.degree;
    if (index <= 0) throw MathError("non-positive log-Fano index: sum w - d <= 0");
    Rat num = ws.degree;
    for (int i = 0; i < n; ++i) num *= index;
    Rat den = 1;
    for (const auto& w : ws.weights) den *= w;
    return num / den;
}

Rat nvol_ci(const std::vector<Rat>& weights, const std::vector<Rat>& degrees) {
    const int n = static_cast<int>(weights.size()) - static_cast<int>(degrees.size());
    if (n < 1) throw InputError("complete intersection needs more weights than degrees");
    Rat wsum = 0, dsum = 0;
    for (const auto& w : weights) {
        if (w <= 0) throw InputError("weights must be positive");
        wsum += w;
    }
    for (const auto& d : degrees) {
        if (d <= 0) throw InputError("degrees must be positive");
        dsum += d;
    }
    Rat index = wsum - dsum;
    if (index <= 0) throw MathError("non-positive log-Fano index: sum w - sum d <= 0");
    Rat num = 1;
    for (const auto& d : degrees) num *= d;
    for (int i = 0; i < n; ++i) num *= index;
    Rat den = 1;
    for (const auto& w : weights) den *= w;
    return num / den;
}

Conditions check_conditions(const WeightSystem& ws, const Rat& volume_bound) {
    const int n = ws.dim();
    Rat index = ws.weight_sum() - ws.degree;
    Conditions c;
    c.log_terminal = index > 0;
    c.lichnerowicz = index <= Rat(n) * ws.weights.front();
    c.nondegenerate = ws.weights.front() + ws.weights.back() <= ws.degree;
    c.volume = c.log_terminal && nvol_weighted(ws) >= volume_bound;
    return c;
}

Rat lichnerowicz_curve(const WeightSystem& ws, const Rat& s) {
    if (s < 0) throw InputError("curve parameter must be nonnegative");
    const int n = ws.dim();
    Rat index = ws.weight_sum() - ws.degree + s;
    Rat num = ws.degree;
    for (int i = 0; i < n; ++i) num *= index;
    Rat den = ws.weights.front() + s;
    for (size_t i = 1; i < ws.weights.size(); ++i) den *= ws.weights[i];
    return num / den;
}

Rat lichnerowicz_derivative_at_zero(const WeightSystem& ws) {
    // d/ds [ d (S+s)^n / ((w0+s) P) ] at 0 = d S^{n-1} (n w0 - S) / (w0^2 P),
    // with S = sum w - d and P = w1 ... wn.
    const int n = ws.dim();
    Rat S = ws.weight_sum() - ws.degree;
    Rat w0 = ws.weights.front();
    Rat P = 1;
    for (size_t i = 1; i < ws.weights.size(); ++i) P *= ws.weights[i];
    Rat num = ws.degree;
    for (int i = 0; i < n - 1; ++i) num *= S;
    num *= Rat(n) * w0 - S;
    return num / (w0 * w0 * P);
}

std::vector<WeightSystem> screen(int dim, const Rat& volume_bound, const ScreenCaps& caps) {
    if (volume_bound <= 0) throw InputError("volume bound must be positive");
    const int n_weights = dim + 1;
    const long dmax = caps.max_degree;
    const long wmax = caps.max_weight > 0 ? caps.max_weight : caps.max_degree;

    Rat prune = 1;  // n^n / v
    for (int i = 0; i < dim; ++i) prune *= dim;
    prune /= volume_bound;

    std::vector<WeightSystem> out;
    std::vector<long> w(n_weights, 1);
    std::function<void(int, long, long)> rec = [&](int pos, long lo, long d) {
        if (pos == n_weights) {
            long g = d;
            for (long x : w) g = std::gcd(g, x);
            if (g != 1) return;  // scalings are represented by their reduced form
            std::vector<Rat> rw(w.begin(), w.end());
            WeightSystem ws(rw, Rat(d));
            // prod w / (d w_0^n) <= n^n / v: the volume bound after the
            // Lichnerowicz estimate, stated scale-invariantly.
            Rat prod = 1;
            for (long x : w) prod *= x;
            Rat w0n = 1;
            for (int i = 0; i < dim; ++i) w0n *= Rat(w[0]);
            if (prod / (Rat(d) * w0n) > prune) return;
            if (check_conditions(ws, volume_bound).all()) out.push_back(std::move(ws));
            return;
        }
        for (long x = lo; x <= wmax; ++x) {
            w[pos] = x;
            rec(pos + 1, x, d);
        }
    };
    for (long d = 1; d <= dmax; ++d) rec(0, 1, d);
    std::sort(out.begin(), out.end(), [](const WeightSystem& a, const WeightSystem& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        return std::lexicographical_compare(a.weights.begin(), a.weights.end(),
                                            b.weights.begin(), b.weights.end());
    });
    return out;
}

Cone MultigradedHypersurface::weight_cone() const {
    return Cone(grading_rank(), std::vector<QVec>(variable_weights.begin(),
                                                  variable_weights.end()));
}

Cone MultigradedHypersurface::reeb_cone() const { return weight_cone().dual(); }

namespace {

bool reeb_interior(const MultigradedHypersurface& h, const QVec& xi) {
    for (const auto& u : h.variable_weights)
        if (dot(u, xi) <= 0) return false;
    return true;
}

}  // namespace

WeightSystem MultigradedHypersurface::weights_at(const QVec& xi) const {
    std::vector<Rat> w;
    for (const auto& u : variable_weights) {
        Rat wi = dot(u, xi);
        if (wi <= 0) throw GeometryError("xi induces a non-positive weight");
        w.push_back(wi);
    }
    Rat d = dot(equation_weight, xi);
    if (d <= 0) throw GeometryError("xi induces a non-positive degree");
    return WeightSystem(std::move(w), std::move(d));
}

Rat nvol_multigraded(const MultigradedHypersurface& h, const QVec& xi) {
    if (!reeb_interior(h, xi))
        throw GeometryError("xi not interior to the Reeb cone");
    return nvol_weighted(h.weights_at(xi));
}

MultigradedMinimum minimize_nvol_multigraded(const MultigradedHypersurface& h, int halvings) {
    Cone sigma = h.reeb_cone();
    if (!sigma.full_dimensional() || !sigma.pointed())
        throw GeometryError("Reeb cone must be pointed and full-dimensional");
    // Normalize on the slice <u_f, xi> = 1 (nvol is 0-homogeneous in xi).
    QVec start = zero_vec(h.grading_rank());
    for (const auto& r : sigma.rays()) start = vec_add(start, r);
    std::vector<QVec> dirs = kernel_basis(QMat{h.equation_weight});
    auto objective = [&](const QVec& xi) { return nvol_multigraded(h, xi); };
    detail::DescentResult res = detail::slice_descent(sigma, h.equation_weight, Rat(1), start,
                                                      dirs, objective, halvings);
    return {res.point, res.value, res.final_step, res.evaluations};
}

namespace {

// Monomials (exponent vectors) of a given full weight W, enumerated with a
// positivity functional so the search is finite, capped on total exponent.
void monomials_of_weight(const QMat& weights, const QVec& target, long cap,
                         std::vector<long>& expo, int pos, QVec acc,
                         std::vector<std::vector<long>>* out) {
    const int nvars = static_cast<int>(weights.size());
    if (pos == nvars) {
        if (acc == target) out->push_back(expo);
        return;
    }
    long used = 0;
    for (int i = 0; i < pos; ++i) used += expo[i];
    for (long e = 0; used + e <= cap; ++e) {
        expo[pos] = e;
        QVec next = acc;
        for (int k = 0; k < static_cast<int>(target.size()); ++k)
            next[k] += Rat(e) * weights[pos][k];
        monomials_of_weight(weights, target, cap, expo, pos + 1, next, out);
    }
    expo[pos] = 0;
}

long count_monomials(const QMat& weights, const QVec& target, long cap) {
    std::vector<std::vector<long>> out;
    std::vector<long> expo(weights.size(), 0);
    monomials_of_weight(weights, target, cap, expo, 0, zero_vec(target.size()), &out);
    return static_cast<long>(out.size());
}

// A total-exponent bound making the weight-W monomial set provably complete:
// any positive functional xi0 on the weights gives sum a_i <= <W,xi0>/min<u_i,xi0>.
long complete_cap(const MultigradedHypersurface& h, const QVec& positive_xi, const QVec& w) {
    Rat top = dot(w, positive_xi);
    if (top < 0) return -1;  // no monomials of this weight at all
    Rat least = dot(h.variable_weights[0], positive_xi);
    for (const auto& u : h.variable_weights) least = std::min(least, dot(u, positive_xi));
    Rat bound = top / least;
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), bound.get_num().get_mpz_t(), bound.get_den().get_mpz_t());
    return q.get_si() + 1;
}

}  // namespace

std::vector<QVec> t1_support(const MultigradedHypersurface& h, const QMat& kernel_basis_rows,
                             long exponent_cap) {
    if (h.monomials.empty())
        throw InputError("t1_support needs the monomial support of f");
    const int rank = h.grading_rank();

    Cone sigma = h.reeb_cone();
    if (!sigma.pointed() || !sigma.full_dimensional())
        throw GeometryError("t1_support: weight cone must be full-dimensional and pointed");
    QVec positive_xi = zero_vec(rank);
    for (const auto& r : sigma.rays()) positive_xi = vec_add(positive_xi, r);

    // Candidate degrees: u = deg(m) - u_f over monomials m within the cap,
    // restricted to the kernel lattice of M-hat -> M.
    std::set<QVec> candidates;
    std::function<void(int, long, QVec)> walk = [&](int pos, long used, QVec acc) {
        if (pos == h.var_count()) {
            QVec u = vec_sub(acc, h.equation_weight);
            if (kernel_basis_rows.empty()) {
                if (is_zero(u)) candidates.insert(u);
                return;
            }
            // u must be an integral combination of the kernel basis.
            QMat bt = transpose(kernel_basis_rows);
            SolveResult res = solve(bt, u);
            if (res.kind == SolveResult::Kind::Unique && is_integral(res.solution))
                candidates.insert(u);
            return;
        }
        for (long e = 0; used + e <= exponent_cap; ++e) {
            QVec next = acc;
            for (int k = 0; k < rank; ++k) next[k] += Rat(e) * h.variable_weights[pos][k];
            walk(pos + 1, used + e, next);
        }
    };
    walk(0, 0, zero_vec(rank));

    // T^1(u) != 0 iff dim R_{u_f+u} > dim R_u as C-vector spaces (f is a
    // nonzerodivisor, so multiplication by f is injective on graded pieces).
    std::vector<QVec> support;
    for (const auto& u : candidates) {
        QVec w = vec_add(h.equation_weight, u);
        long cap_w = complete_cap(h, positive_xi, w);
        long cap_u = complete_cap(h, positive_xi, u);
        long high = cap_w < 0 ? 0 : count_monomials(h.variable_weights, w, cap_w);
        long low = cap_u < 0 ? 0 : count_monomials(h.variable_weights, u, cap_u);
        if (high > low) support.push_back(u);
    }
    std::sort(support.begin(), support.end(), vec_less);
    return support;
}

Cone degeneration_cone(const std::vector<QVec>& support_degrees, int rank) {
    std::vector<QVec> gens;
    for (const auto& u : support_degrees)
        if (!is_zero(u)) gens.push_back(u);
    return Cone(rank, gens).dual();
}

bool kss_obstruction(const Cone& sigma_x, const QVec& xi_star,
                     const std::vector<QVec>& n_subspace) {
    if (!sigma_x.rint_contains(xi_star)) return false;
    return !in_span(n_subspace, xi_star);
}

}  // namespace hyper
}  // namespace fcone
