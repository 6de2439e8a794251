#include "fcone/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "fcone/errors.hpp"
#include "fcone/gorenstein.hpp"
#include "fcone/hyper.hpp"
#include "fcone/kollar.hpp"
#include "fcone/toric.hpp"
#include "fcone/volume.hpp"

namespace fcone {
namespace selftest {

std::uint64_t Rng::next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) { return next() % n; }

namespace {

Rat mu_or_one(const Lattice& lat, const QVec& v) {
    return is_zero(v) ? Rat(1) : lat.mu(v);
}

long coprime_numerator(Rng& rng, long mu) {
    while (true) {
        long c = 1 + static_cast<long>(rng.below(6));
        if (std::gcd(c, mu) == 1) return c;
    }
}

Rat pick_coeff(Rng& rng) {
    switch (rng.below(4)) {
        case 0: return Rat(1, 2);
        case 1: return Rat(2, 3);
        default: return Rat(0);
    }
}

}  // namespace

RandomInstance random_proper_klt(Rng& rng) {
    Lattice lat = Lattice::standard(2);
    for (int attempt = 0; attempt < 256; ++attempt) {
        long a = static_cast<long>(rng.below(4));
        long b = 1 + static_cast<long>(rng.below(4));
        Cone tail(2, {QVec{Rat(1), Rat(0)}, QVec{Rat(a), Rat(b)}});
        if (tail.rays().size() != 2) continue;

        int n_labels = 2 + static_cast<int>(rng.below(2));
        std::vector<std::string> names = {"p0", "p1", "p2"};
        std::map<std::string, QVec> base;
        std::map<std::string, Rat> vert_coeff;
        for (int i = 0; i < n_labels; ++i) {
            long mu = 1 + static_cast<long>(rng.below(4));
            long c = coprime_numerator(rng, mu);
            base[names[i]] = QVec{Rat(c, mu), Rat(0)};
            vert_coeff[names[i]] = pick_coeff(rng);
        }

        // The degree touches the ray (1,0) (all base vertices sit on it), so
        // only the second tail ray contributes an equation. Together with the
        // degree-zero condition it pins u, making the instance Q-Gorenstein.
        QVec n2 = tail.rays()[0] == QVec{Rat(1), Rat(0)} ? tail.rays()[1] : tail.rays()[0];
        Rat c_rho = pick_coeff(rng);
        QVec sumv = zero_vec(2);
        Rat beta_sum = 0;
        for (const auto& [label, v] : base) {
            sumv = vec_add(sumv, v);
            Rat mu = mu_or_one(lat, v);
            beta_sum += (mu - 1 + vert_coeff[label]) / mu;
        }
        QMat rows{n2, sumv};
        QVec rhs{Rat(-1) + c_rho, beta_sum - 2};
        SolveResult res = solve(rows, rhs);
        if (res.kind != SolveResult::Kind::Unique) continue;
        QVec u = res.solution;
        if (is_zero(u)) continue;

        // Optional extra vertices along a lattice direction orthogonal to u.
        QVec orth = lat.ray_primitive(kernel_basis(QMat{u})[0]);
        std::map<std::string, Polyhedron> coeffs;
        for (const auto& [label, v] : base) {
            std::vector<QVec> verts{v};
            if (rng.below(3) == 0) verts.push_back(vec_add(v, orth));
            if (rng.below(6) == 0) verts.push_back(vec_sub(v, orth));
            coeffs.emplace(label, Polyhedron(verts, tail));
        }
        PDivisor d(2, tail, std::move(coeffs));

        if (!d.is_proper().proper) continue;
        if (d.degree().meets_ray(n2)) continue;  // extra vertices may have broken the ray equation

        Boundary delta;
        if (c_rho != 0) delta.horizontal[n2] = c_rho;
        for (const auto& [label, c] : vert_coeff) {
            if (c == 0) continue;
            for (const auto& v : d.coefficient(label).vertices())
                delta.vertical[{label, v}] = c;
        }
        try {
            delta.validate(d);
            if (!is_klt(d, delta)) continue;
            solve_gorenstein(d, delta);
        } catch (const MathError&) {
            continue;
        } catch (const InputError&) {
            continue;
        }
        return {std::move(d), std::move(delta)};
    }
    throw MathError("random instance generator failed to converge");
}

std::vector<RandomInstance> handbuilt_2pq_instances() {
    std::vector<RandomInstance> out;
    Lattice lat = Lattice::standard(2);
    // extra_mode: 0 none, +1/-1 a forced translate sign, 2 try both then none.
    auto build = [&](long p2, long q, long tail_b, int extra_mode,
                     const Rat& c_rho) -> std::optional<RandomInstance> {
        Cone tail(2, {QVec{Rat(1), Rat(0)}, QVec{Rat(1), Rat(tail_b)}});
        std::map<std::string, QVec> base = {
            {"p0", QVec{Rat(1, 2), Rat(0)}},
            {"p1", QVec{Rat(1, p2), Rat(0)}},
            {"p2", QVec{Rat(1, q), Rat(0)}},
        };
        QVec n2{Rat(1), Rat(tail_b)};
        QVec sumv = zero_vec(2);
        Rat beta_sum = 0;
        for (const auto& [label, v] : base) {
            sumv = vec_add(sumv, v);
            Rat mu = mu_or_one(lat, v);
            beta_sum += (mu - 1) / mu;
        }
        QMat rows{n2, sumv};
        QVec rhs{Rat(-1) + c_rho, beta_sum - 2};
        SolveResult res = solve(rows, rhs);
        if (res.kind != SolveResult::Kind::Unique) return std::nullopt;
        QVec u = res.solution;
        if (is_zero(u)) return std::nullopt;
        QVec orth = lat.ray_primitive(kernel_basis(QMat{u})[0]);

        auto assemble = [&](int mode) -> std::optional<RandomInstance> {
            std::map<std::string, Polyhedron> coeffs;
            int which = 0;
            for (const auto& [label, v] : base) {
                std::vector<QVec> verts{v};
                if (mode != 0 && which++ == 1)
                    verts.push_back(vec_add(v, vec_scale(Rat(mode), orth)));
                coeffs.emplace(label, Polyhedron(verts, tail));
            }
            PDivisor d(2, tail, std::move(coeffs));
            if (!d.is_proper().proper) return std::nullopt;
            if (d.degree().meets_ray(n2)) return std::nullopt;
            Boundary delta;
            if (c_rho != 0) delta.horizontal[n2] = c_rho;
            try {
                delta.validate(d);
                if (!is_klt(d, delta)) return std::nullopt;
                solve_gorenstein(d, delta);
            } catch (const MathError&) {
                return std::nullopt;
            } catch (const InputError&) {
                return std::nullopt;
            }
            return RandomInstance{std::move(d), std::move(delta)};
        };
        if (extra_mode == 2) {
            for (int mode : {1, -1, 0})
                if (auto inst = assemble(mode)) return inst;
            return std::nullopt;
        }
        return assemble(extra_mode);
    };

    // (2,2,r) and (2,3,q) over a few tails, with and without an off-axis
    // vertex and a horizontal boundary coefficient.
    for (long r : {2L, 3L, 4L, 5L, 6L})
        for (long tb : {1L, 3L})
            if (auto inst = build(2, r, tb, tb == 3 ? 2 : 0, Rat(0)))
                out.push_back(std::move(*inst));
    for (long q : {3L, 4L, 5L})
        for (long tb : {1L, 2L, 4L})
            if (auto inst = build(3, q, tb, tb == 2 ? 2 : 0, Rat(0)))
                out.push_back(std::move(*inst));
    for (long q : {3L, 4L})
        if (auto inst = build(3, q, 1, 0, Rat(1, 2))) out.push_back(std::move(*inst));

    // A type (2,2,4) instance whose only family over the first tail ray mixes
    // a lattice vertex at the 2-point with the non-lattice 4-point, forcing
    // the swapped-family construction through the integral-combination bound.
    {
        Cone tail(2, {QVec{Rat(1), Rat(0)}, QVec{Rat(1), Rat(2)}});
        std::map<std::string, Polyhedron> coeffs;
        coeffs.emplace("a", Polyhedron({QVec{Rat(3), Rat(0)}, QVec{Rat(-1, 2), Rat(1, 2)}}, tail));
        coeffs.emplace("c", Polyhedron({QVec{Rat(1, 2), Rat(0)}}, tail));
        coeffs.emplace("z", Polyhedron({QVec{Rat(1, 4), Rat(0)}}, tail));
        PDivisor d(2, tail, std::move(coeffs));
        out.push_back(RandomInstance{std::move(d), Boundary::trivial()});
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void fail(const std::string& msg) {
        if (ok) detail << msg;
        ok = false;
    }
    void expect(bool cond, const std::string& msg) {
        if (!cond) fail(msg);
    }
};

// ---- criterion 1: quotient volumes -----------------------------------------

void criterion_quotient_volumes(Check& c) {
    for (int n = 2; n <= 3; ++n) {
        for (long m = 1; m <= 6; ++m) {
            QMat basis(n, QVec(n, Rat(0)));
            for (int i = 0; i < n; ++i) basis[i][i] = 1;
            QVec frac(n, Rat(1, m));
            basis[n - 1] = frac;  // Z^n + Z(1/m,...,1/m)
            ToricCone t(Cone::orthant(n), Lattice(basis));
            Nvol v = nvol_xi(t, QVec(n, Rat(1)));
            Rat expected = 1;
            for (int i = 0; i < n; ++i) expected *= n;
            expected /= m;
            c.expect(v.finite && v.value == expected,
                     "nvol(1/" + std::to_string(m) + "(1,..,1)) in dim " + std::to_string(n) +
                         " = " + rat_str(v.value) + " != " + rat_str(expected));
        }
    }
}

// ---- criterion 2: the A1 x A1 toric example ---------------------------------

ToricCone a1_line_cone() {
    return ToricCone(Cone(3, {QVec{Rat(0), Rat(0), Rat(1)}, QVec{Rat(0), Rat(2), Rat(1)},
                              QVec{Rat(1), Rat(0), Rat(0)}}),
                     Lattice::standard(3));
}

bool same_direction_within(const QVec& a, const QVec& b, const Rat& tol) {
    // Compare after normalizing the first coordinates' sum to 1.
    Rat sa = 0, sb = 0;
    for (const auto& x : a) sa += x;
    for (const auto& x : b) sb += x;
    if (sa <= 0 || sb <= 0) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        Rat diff = a[i] / sa - b[i] / sb;
        if (diff < 0) diff = -diff;
        if (diff > tol) return false;
    }
    return true;
}

void criterion_toric_example(Check& c) {
    ToricCone t = a1_line_cone();
    QVec a = toric_gorenstein(t);
    c.expect(a == QVec{Rat(1), Rat(0), Rat(1)}, "discrepancy vector != (1,0,1)");

    MinimizeResult fast = minimize_nvol(t, Rat(1, 1000000));
    c.expect(fast.simplicial_exact, "simplicial fast path not taken");
    QVec expected{Rat(1), Rat(2), Rat(2)};
    c.expect(same_direction_within(fast.xi_star, expected, Rat(0)),
             "fast-path minimizer direction != (1,2,2)");
    c.expect(fast.value_upper == Rat(27, 2), "fast-path value != 27/2");

    MinimizeResult numeric = minimize_nvol_numeric(t, Rat(1, 10000000000000L));
    c.expect(same_direction_within(numeric.xi_star, expected, Rat(1, 1000000)),
             "numeric minimizer direction misses (1,2,2) by more than 1e-6");
    c.expect(numeric.value_upper - numeric.value_lower <= Rat(1, 1000000),
             "numeric enclosure wider than the tolerance");
    c.expect(numeric.value_upper >= Rat(27, 2) && numeric.value_lower <= Rat(27, 2),
             "numeric enclosure misses 27/2");

    // Independent route: the multigraded hypersurface formula for xy+z^2.
    hyper::MultigradedHypersurface h;
    h.variable_weights = QMat{QVec{Rat(0), Rat(1), Rat(0)}, QVec{Rat(0), Rat(-1), Rat(2)},
                              QVec{Rat(0), Rat(0), Rat(1)}, QVec{Rat(1), Rat(0), Rat(0)}};
    h.equation_weight = QVec{Rat(0), Rat(0), Rat(2)};
    QVec xi{Rat(1), Rat(2), Rat(2)};
    hyper::WeightSystem ws = h.weights_at(xi);
    c.expect(ws.weights == std::vector<Rat>{Rat(1), Rat(2), Rat(2), Rat(2)} &&
                 ws.degree == Rat(4),
             "induced weights != (1,2,2,2; 4)");
    c.expect(hyper::nvol_multigraded(h, xi) == Rat(27, 2), "multigraded nvol != 27/2");
}

// ---- criteria 3-5: the random p-divisor suite -------------------------------

QVec interior_direction(const Cone& tail) {
    QVec dir = zero_vec(tail.rank());
    for (const auto& r : tail.rays()) dir = vec_add(dir, r);
    return dir;
}

std::vector<QVec> interior_points(const PDivisor& d, const std::string& z, int count) {
    const Polyhedron& dz = d.coefficient(z);
    QVec bary = zero_vec(d.rank());
    for (const auto& v : dz.vertices()) bary = vec_add(bary, v);
    bary = vec_scale(Rat(1, static_cast<long>(dz.vertices().size())), bary);
    QVec dir = interior_direction(d.tail());
    std::vector<QVec> out;
    for (int k = 1; k <= count; ++k) {
        QVec w = vec_add(bary, vec_scale(Rat(k, 3), dir));
        if (dz.rint_contains(w)) out.push_back(w);
    }
    return out;
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

void criterion_discrepancy_suite(Check& c, const std::vector<RandomInstance>& suite) {
    Lattice lat = Lattice::standard(2);
    int idx = 0;
    for (const auto& inst : suite) {
        ++idx;
        const PDivisor& d = inst.divisor;
        const Boundary& delta = inst.boundary;
        std::string tag = " (instance " + std::to_string(idx) + ")";
        try {
            GorensteinData g = solve_gorenstein(d, delta);

            // (a) prime divisors on X have log discrepancy exactly 1 - c.
            for (const auto& [label, poly] : d.coefficients()) {
                for (const auto& v : poly.vertices()) {
                    Rat got = log_discrepancy(g, d, delta, DivisorSpec::vertical(label, v));
                    Rat want = Rat(1) - delta.vertical_coeff(label, v);
                    c.expect(got == want, "vertical prime discrepancy " + rat_str(got) +
                                              " != " + rat_str(want) + tag);
                }
            }
            for (const auto& r : free_tail_rays(d)) {
                Rat got = log_discrepancy(g, d, delta, DivisorSpec::horizontal(r));
                Rat want = Rat(1) - delta.horizontal_coeff(r);
                c.expect(got == want, "horizontal prime discrepancy " + rat_str(got) +
                                          " != " + rat_str(want) + tag);
            }

            // (b) toric crosscheck at interior points of D_z.
            std::string z = max_mu_label(d);
            for (const auto& w : interior_points(d, z, 3))
                toric_crosscheck(d, delta, z, w);  // throws on mismatch

            // sigma_z height bounds for type (1,p,q): primitive generators
            // stay above -p and the multiplicity over z is attained.
            TypeTriple type = type_triple(d);
            if (type.typed && type.entries[0] == 1) {
                Rat p = type.entries[1];
                Rat q = type.entries[2];
                DegenCone dc = sigma_z(d, delta, z);
                if (dc.pointed) {
                    Rat top = dc.rays.front().height;
                    for (const auto& ray : dc.rays) {
                        top = std::max(top, ray.height);
                        c.expect(ray.height >= -p,
                                 "sigma_z generator below height -p" + tag);
                    }
                    c.expect(top == q, "sigma_z misses a height-q generator" + tag);
                }
            }

            // (c) horizontal linearity on ray pairs.
            const auto& rays = d.tail().rays();
            for (const auto& [l1, l2] : {std::pair<long, long>{1, 1}, {1, 2}, {2, 1}})
                horizontal_linearity_check(g, d, delta, rays[0], rays[1], Rat(l1), Rat(l2));

            // (d) canonical-divisor support invariance.
            std::vector<std::string> labels = d.labels();
            std::vector<std::string> alt = {labels.back(), labels.front()};
            GorensteinData g2 = solve_gorenstein_with_support(d, delta, alt);
            for (const auto& [label, poly] : d.coefficients()) {
                QVec w = poly.vertices().front();
                Rat v1 = log_discrepancy(g, d, delta, DivisorSpec::vertical(label, w));
                Rat v2 = log_discrepancy(g2, d, delta, DivisorSpec::vertical(label, w));
                c.expect(v1 == v2, "discrepancy depends on the canonical divisor support" + tag);
            }
            for (const auto& [l1, l2] : {std::pair<long, long>{1, 1}})
                c.expect(log_discrepancy(g, d, delta,
                                         DivisorSpec::horizontal(interior_direction(d.tail()))) ==
                             log_discrepancy(g2, d, delta,
                                             DivisorSpec::horizontal(interior_direction(d.tail()))),
                         "horizontal discrepancy depends on the support choice" + tag);
        } catch (const std::exception& e) {
            c.fail(std::string(e.what()) + tag);
        }
    }
}

void criterion_klt_platonic(Check& c, const std::vector<RandomInstance>& suite) {
    int idx = 0;
    for (const auto& inst : suite) {
        ++idx;
        std::string tag = " (instance " + std::to_string(idx) + ")";
        QuotientPair qp = quotient_pair(inst.divisor, inst.boundary);
        bool crit = qp.degree < 2;
        for (const auto& [label, b] : qp.b)
            if (b >= 1) crit = false;
        c.expect(is_klt(inst.divisor, inst.boundary) == crit,
                 "is_klt disagrees with the b-criterion" + tag);
        if (crit)
            c.expect(platonic_filter(inst.divisor), "klt instance with non-platonic type" + tag);
    }
}

void criterion_mld_witnesses(Check& c, const std::vector<RandomInstance>& suite) {
    std::vector<RandomInstance> all = suite;
    for (auto& inst : handbuilt_2pq_instances()) all.push_back(std::move(inst));
    int idx = 0;
    for (const auto& inst : all) {
        ++idx;
        std::string tag = " (instance " + std::to_string(idx) + ")";
        try {
            MldWitness w = mld_bound_witness(inst.divisor, inst.boundary);
            c.expect(w.certified, "witness not certified: " + w.diagnostic + tag);
            c.expect(w.discrepancy <= w.bound, "witness discrepancy exceeds the bound" + tag);
            if (w.spec.kind == DivisorSpec::Kind::Vertical) {
                VerticalComponent vc =
                    vertical_component(inst.divisor, inst.boundary, w.spec.point, w.spec.w);
                c.expect(vc.is_kollar && vc.discrepancy == w.discrepancy,
                         "vertical witness fails the component test" + tag);
            } else {
                HorizontalComponent hc =
                    horizontal_component(inst.divisor, inst.boundary, w.spec.ray);
                c.expect(hc.is_kollar && hc.discrepancy == w.discrepancy,
                         "horizontal witness fails the component test" + tag);
            }
        } catch (const std::exception& e) {
            c.fail(std::string(e.what()) + tag);
        }
    }
}

// ---- criterion 6: Lichnerowicz curves ---------------------------------------

void criterion_lichnerowicz(Check& c, Rng& rng) {
    for (int i = 0; i < 50; ++i) {
        std::vector<Rat> w;
        for (int k = 0; k < 4; ++k) w.push_back(Rat(1 + static_cast<long>(rng.below(6))));
        std::sort(w.begin(), w.end());
        Rat wsum = 0;
        for (const auto& x : w) wsum += x;
        long dmax = wsum.get_num().get_si() - 1;
        if (dmax < 1) continue;
        Rat d(1 + static_cast<long>(rng.below(dmax)));
        hyper::WeightSystem ws(w, d);
        Rat index = ws.weight_sum() - ws.degree;
        if (index <= 0) continue;

        Rat slack = Rat(3) * ws.weights.front() - index;
        if (slack > 0) {
            Rat prev = hyper::lichnerowicz_curve(ws, Rat(0));
            c.expect(prev == hyper::nvol_weighted(ws), "curve at 0 != nvol");
            for (long k = 1; k <= 10; ++k) {
                Rat val = hyper::lichnerowicz_curve(ws, Rat(k, 2));
                c.expect(val >= prev, "nvol(v_s) decreased along the curve with slack");
                prev = val;
            }
        }
        // Exact one-sided finite difference vs the closed form; exact
        // arithmetic allows a tiny step without cancellation.
        Rat h = 1;
        for (int k = 0; k < 16; ++k) h /= 10;
        Rat fd = (hyper::lichnerowicz_curve(ws, h) - hyper::lichnerowicz_curve(ws, Rat(0))) / h;
        Rat exact = hyper::lichnerowicz_derivative_at_zero(ws);
        Rat diff = fd - exact;
        if (diff < 0) diff = -diff;
        c.expect(diff <= Rat(1, 100000000),
                 "finite difference misses the closed-form derivative");
    }
    // The family (k,k,k,2; 2k) flags K-instability exactly for k >= 5.
    for (long k = 1; k <= 10; ++k) {
        hyper::WeightSystem ws({Rat(k), Rat(k), Rat(k), Rat(2)}, Rat(2 * k));
        bool unstable = hyper::lichnerowicz_derivative_at_zero(ws) < 0;
        Rat index = ws.weight_sum() - ws.degree;
        bool expected = index > Rat(3) * ws.weights.front();
        c.expect(unstable == expected && unstable == (k >= 5),
                 "family (k,k,k,2;2k) instability flag wrong at k=" + std::to_string(k));
    }
}

// ---- criterion 7: hypersurface screen vs brute force ------------------------

// Independent oracle: plain enumeration and integer arithmetic, no pruning.
std::vector<std::vector<long>> screen_oracle(int dim, long vp, long vq, long dmax) {
    std::vector<std::vector<long>> out;
    const int n = dim + 1;
    std::vector<long> w(n, 1);
    std::function<void(int, long, long)> rec = [&](int pos, long lo, long d) {
        if (pos == n) {
            long g = d;
            for (long x : w) g = std::gcd(g, x);
            if (g != 1) return;
            long s = 0, prod = 1;
            for (long x : w) {
                s += x;
                prod *= x;
            }
            if (s - d <= 0) return;
            if (s - d > dim * w[0]) return;
            if (w[0] + w[n - 1] > d) return;
            // nvol >= v  <=>  d (s-d)^dim vq >= vp prod
            long long lhs = d;
            for (int i = 0; i < dim; ++i) lhs *= (s - d);
            if (static_cast<long long>(lhs) * vq < static_cast<long long>(vp) * prod) return;
            std::vector<long> tuple = w;
            tuple.push_back(d);
            out.push_back(tuple);
            return;
        }
        for (long x = lo; x <= dmax; ++x) {
            w[pos] = x;
            rec(pos + 1, x, d);
        }
    };
    for (long d = 1; d <= dmax; ++d) rec(0, 1, d);
    std::sort(out.begin(), out.end());
    return out;
}

void criterion_screen(Check& c) {
    auto res = hyper::screen(3, Rat(16), {12, 0});
    std::vector<std::vector<long>> got;
    for (const auto& ws : res) {
        std::vector<long> t;
        for (const auto& x : ws.weights) t.push_back(x.get_num().get_si());
        t.push_back(ws.degree.get_num().get_si());
        got.push_back(t);
    }
    std::sort(got.begin(), got.end());
    auto expected = screen_oracle(3, 16, 1, 12);
    c.expect(got == expected, "screen output differs from the brute-force oracle (" +
                                  std::to_string(got.size()) + " vs " +
                                  std::to_string(expected.size()) + " entries)");
    auto has = [&](std::vector<long> t) {
        return std::find(got.begin(), got.end(), t) != got.end();
    };
    c.expect(has({1, 1, 1, 1, 2}), "screen output misses (1,1,1,1;2)");
    c.expect(has({1, 1, 2, 3, 4}), "screen output misses (1,1,2,3;4)");
    for (const auto& ws : res)
        c.expect(hyper::check_conditions(ws, Rat(16)).all(), "screen member fails conditions");
}

// ---- criterion 8: degeneration obstruction ----------------------------------

void criterion_degeneration(Check& c) {
    for (long e = 2; e <= 8; ++e) {
        hyper::MultigradedHypersurface h;
        h.variable_weights = QMat{QVec{Rat(0), Rat(1), Rat(0)}, QVec{Rat(0), Rat(-1), Rat(2)},
                                  QVec{Rat(0), Rat(0), Rat(1)}, QVec{Rat(1), Rat(0), Rat(0)}};
        h.equation_weight = QVec{Rat(0), Rat(0), Rat(2)};
        h.monomials = {{1, 1, 0, 0}, {0, 0, 2, 0}};
        QMat kernel{QVec{Rat(e), Rat(0), Rat(-2)}};
        auto support = hyper::t1_support(h, kernel, e + 2);
        std::vector<QVec> expected{zero_vec(3), QVec{Rat(e), Rat(0), Rat(-2)}};
        std::sort(expected.begin(), expected.end(), vec_less);
        c.expect(support == expected,
                 "T^1 support wrong for e=" + std::to_string(e));

        Cone sigma_x = hyper::degeneration_cone(support, 3);
        Cone direct = Cone(3, {QVec{Rat(e), Rat(0), Rat(-2)}}).dual();
        c.expect(sigma_x == direct, "Sigma_X != dual of R_{>=0}(e,0,-2)");

        QVec xi{Rat(1), Rat(2), Rat(2)};
        std::vector<QVec> n_subspace = kernel_basis(kernel);
        bool fired = hyper::kss_obstruction(sigma_x, xi, n_subspace);
        c.expect(fired == (e > 4),
                 "obstruction fired=" + std::to_string(fired) + " at e=" + std::to_string(e));
    }
}

// ---- criterion 9: kernel property suites ------------------------------------

QVec random_vec(Rng& rng, int rank, long lo, long hi) {
    QVec v(rank);
    for (int i = 0; i < rank; ++i)
        v[i] = Rat(lo + static_cast<long>(rng.below(hi - lo + 1)));
    return v;
}

void criterion_kernel_properties(Check& c, Rng& rng) {
    // Dual-cone involution on random cones of rank <= 3.
    for (int i = 0; i < 200; ++i) {
        int rank = 2 + static_cast<int>(rng.below(2));
        int count = 1 + static_cast<int>(rng.below(4));
        std::vector<QVec> gens;
        for (int k = 0; k < count; ++k) {
            QVec g = random_vec(rng, rank, -3, 3);
            if (!is_zero(g)) gens.push_back(g);
        }
        Cone cone(rank, gens);
        c.expect(cone.dual().dual() == cone, "dual-of-dual differs from the cone");
    }

    // Minkowski identities: neutrality, commutativity, associativity, and the
    // support-function oracle h_{P+Q} = h_P + h_Q.
    for (int i = 0; i < 200; ++i) {
        Cone tail(2, {QVec{Rat(1), Rat(0)},
                      QVec{Rat(static_cast<long>(rng.below(3))), Rat(1 + static_cast<long>(rng.below(3)))}});
        auto mk = [&]() {
            std::vector<QVec> verts;
            int nv = 1 + static_cast<int>(rng.below(3));
            for (int k = 0; k < nv; ++k) verts.push_back(random_vec(rng, 2, 0, 4));
            return Polyhedron(verts, tail);
        };
        Polyhedron p = mk(), q = mk(), r = mk();
        Polyhedron neutral = Polyhedron::cone_at_origin(tail);
        c.expect(p.minkowski_sum(neutral) == p, "P + tail != P");
        c.expect(p.minkowski_sum(q) == q.minkowski_sum(p), "Minkowski sum not commutative");
        c.expect(p.minkowski_sum(q).minkowski_sum(r) == p.minkowski_sum(q.minkowski_sum(r)),
                 "Minkowski sum not associative");
        QVec u = zero_vec(2);
        for (const auto& h : tail.facet_normals()) u = vec_add(u, h);
        c.expect(p.minkowski_sum(q).support_min(u) == p.support_min(u) + q.support_min(u),
                 "support function not additive");
    }

    // Face-set intersection formula on random cones.
    for (int i = 0; i < 200; ++i) {
        int rank = 2 + static_cast<int>(rng.below(2));
        std::vector<QVec> gens;
        for (int k = 0; k < rank + 1; ++k) {
            QVec g = random_vec(rng, rank, 0, 3);
            if (!is_zero(g)) gens.push_back(g);
        }
        if (gens.empty()) continue;
        Cone cone(rank, gens);
        const auto& rays = cone.rays();
        if (rays.empty()) continue;
        QVec v = zero_vec(rank), w = zero_vec(rank);
        for (const auto& r : rays) {
            v = vec_add(v, vec_scale(Rat(static_cast<long>(rng.below(3))), r));
            w = vec_add(w, vec_scale(Rat(static_cast<long>(rng.below(3))), r));
        }
        auto fs_v = cone.face_set(v);
        auto fs_w = cone.face_set(w);
        auto fs_sum = cone.face_set(vec_add(v, w));
        std::vector<int> inter;
        std::set_intersection(fs_v.begin(), fs_v.end(), fs_w.begin(), fs_w.end(),
                              std::back_inserter(inter));
        c.expect(fs_sum == inter, "F(v+w) != F(v) cap F(w)");
    }

    // Volume invariance under unimodular maps and basis changes.
    for (int i = 0; i < 200; ++i) {
        int rank = 2 + static_cast<int>(rng.below(2));
        std::vector<QVec> verts;
        for (int k = 0; k < rank + 2; ++k) verts.push_back(random_vec(rng, rank, -3, 3));
        Lattice std_lat = Lattice::standard(rank);
        Rat vol = polytope_volume(verts, std_lat);

        QMat um(rank, QVec(rank, Rat(0)));  // unimodular: upper triangular, unit diagonal
        for (int a = 0; a < rank; ++a) {
            um[a][a] = 1;
            for (int b = a + 1; b < rank; ++b)
                um[a][b] = Rat(static_cast<long>(rng.below(3)) - 1);
        }
        std::vector<QVec> mapped;
        for (const auto& v : verts) mapped.push_back(mat_vec(um, v));
        c.expect(polytope_volume(mapped, std_lat) == vol,
                 "volume changed under a unimodular map");
        c.expect(polytope_volume(verts, Lattice(um)) == vol,
                 "volume changed under a unimodular basis change");
    }
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const Options& opt) {
    struct Entry {
        int id;
        std::string name;
        std::function<void(Check&)> run;
    };

    // The shared random suite is built once per run.
    std::vector<RandomInstance> suite;
    {
        Rng rng(opt.seed);
        for (int i = 0; i < opt.instances; ++i) suite.push_back(random_proper_klt(rng));
    }

    std::vector<Entry> entries;
    entries.push_back({1, "quotient-volumes", [](Check& c) { criterion_quotient_volumes(c); }});
    entries.push_back({2, "toric-example", [](Check& c) { criterion_toric_example(c); }});
    entries.push_back({3, "discrepancy-oracle-suite",
                       [&](Check& c) { criterion_discrepancy_suite(c, suite); }});
    entries.push_back(
        {4, "klt-platonic", [&](Check& c) { criterion_klt_platonic(c, suite); }});
    entries.push_back(
        {5, "mld-bound-witnesses", [&](Check& c) { criterion_mld_witnesses(c, suite); }});
    entries.push_back({6, "lichnerowicz", [&](Check& c) {
                           Rng rng(opt.seed ^ 0x5bd1e995);
                           criterion_lichnerowicz(c, rng);
                       }});
    entries.push_back({7, "hypersurface-screen", [](Check& c) { criterion_screen(c); }});
    entries.push_back(
        {8, "degeneration-obstruction", [](Check& c) { criterion_degeneration(c); }});
    entries.push_back({9, "kernel-properties", [&](Check& c) {
                           Rng rng(opt.seed ^ 0x2545f491);
                           criterion_kernel_properties(c, rng);
                       }});

    std::vector<CriterionResult> results;
    for (auto& e : entries) {
        if (!opt.filter.empty() && e.name.find(opt.filter) == std::string::npos) continue;
        Check chk;
        auto t0 = Clock::now();
        try {
            e.run(chk);
        } catch (const std::exception& ex) {
            chk.fail(std::string("exception: ") + ex.what());
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        results.push_back({e.id, e.name, chk.ok, chk.detail.str(), secs});
    }
    return results;
}

}  // namespace selftest
}  // namespace fcone
