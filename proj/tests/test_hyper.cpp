#include <doctest.h>

#include "fcone/hyper.hpp"
#include "support.hpp"

using namespace fcone;
using namespace fcone::testing;
namespace hy = fcone::hyper;

namespace {

hy::WeightSystem ws(std::initializer_list<long> weights, long degree) {
    std::vector<Rat> w;
    for (long x : weights) w.push_back(Rat(x));
    return hy::WeightSystem(std::move(w), Rat(degree));
}

hy::MultigradedHypersurface conic_times_line() {
    // xy + z^2 in the Z^3 grading of the A_1 x A^1 singularity, with the
    // fourth variable w of weight e_1.
    hy::MultigradedHypersurface h;
    h.variable_weights = QMat{v({"0", "1", "0"}), v({"0", "-1", "2"}), v({"0", "0", "1"}),
                              v({"1", "0", "0"})};
    h.equation_weight = v({"0", "0", "2"});
    h.monomials = {{1, 1, 0, 0}, {0, 0, 2, 0}};
    return h;
}

}  // namespace

TEST_CASE("weighted normalized volumes") {
    CHECK(hy::nvol_weighted(ws({1, 1, 1, 1}, 2)) == 16);  // ordinary double point
    CHECK(hy::nvol_weighted(ws({1, 1, 1, 2}, 2)) == 27);  // (k,k,k,2;2k) at k=1: smooth
    CHECK(hy::nvol_weighted(ws({1, 1, 2, 3}, 4)) == 18);
    CHECK(hy::nvol_weighted(ws({1, 1, 1, 2}, 3)) == 12);
    CHECK_THROWS_AS((void)hy::nvol_weighted(ws({1, 1, 1, 1}, 5)), MathError);

    // Degree-zero homogeneity under simultaneous scaling.
    hy::WeightSystem scaled({Rat(2), Rat(2), Rat(2), Rat(2)}, Rat(4));
    CHECK(hy::nvol_weighted(scaled) == 16);

    std::vector<Rat> w5(5, Rat(1));
    CHECK(hy::nvol_ci(w5, {Rat(2), Rat(2)}) == 4);
}

TEST_CASE("boundedness conditions") {
    auto c1 = hy::check_conditions(ws({1, 1, 1, 1}, 2), Rat(16));
    CHECK(c1.log_terminal);
    CHECK(c1.lichnerowicz);
    CHECK(c1.nondegenerate);
    CHECK(c1.volume);
    CHECK(c1.all());

    auto c2 = hy::check_conditions(ws({1, 1, 2, 3}, 4), Rat(16));
    CHECK(c2.all());  // Lichnerowicz with equality: 3 = 3 * 1

    auto c3 = hy::check_conditions(ws({1, 1, 1, 2}, 3), Rat(16));
    CHECK(c3.log_terminal);
    CHECK(!c3.volume);  // nvol = 12

    auto c4 = hy::check_conditions(ws({1, 1, 1, 1}, 1), Rat(1));
    CHECK(!c4.nondegenerate);  // a linear variable
}

TEST_CASE("Lichnerowicz curve and derivative") {
    hy::WeightSystem w = ws({1, 1, 1, 1}, 2);
    CHECK(hy::lichnerowicz_curve(w, Rat(0)) == hy::nvol_weighted(w));
    CHECK(hy::lichnerowicz_curve(w, Rat(1)) == 27);  // 2*27/2

    // (k,k,k,2;2k): the derivative sign flips exactly at k = 5.
    for (long k = 1; k <= 8; ++k) {
        hy::WeightSystem f({Rat(k), Rat(k), Rat(k), Rat(2)}, Rat(2 * k));
        Rat der = hy::lichnerowicz_derivative_at_zero(f);
        CHECK((der < 0) == (k >= 5));
        Rat index = f.weight_sum() - f.degree;
        CHECK((der < 0) == (index > Rat(3) * f.weights.front()));
    }

    // Exact finite differences converge to the closed form.
    hy::WeightSystem g = ws({1, 2, 3, 4}, 5);
    Rat h(1, 1 << 20);
    Rat fd = (hy::lichnerowicz_curve(g, h) - hy::lichnerowicz_curve(g, Rat(0))) / h;
    Rat exact = hy::lichnerowicz_derivative_at_zero(g);
    Rat err = fd - exact;
    if (err < 0) err = -err;
    CHECK(err < Rat(1, 10000));
}

TEST_CASE("screen output") {
    auto list = hy::screen(3, Rat(16), {12, 0});
    bool has_odp = false, has_1123 = false;
    for (const auto& w : list) {
        CHECK(hy::check_conditions(w, Rat(16)).all());
        if (w.weights == std::vector<Rat>{1, 1, 1, 1} && w.degree == 2) has_odp = true;
        if (w.weights == std::vector<Rat>{1, 1, 2, 3} && w.degree == 4) has_1123 = true;
    }
    CHECK(has_odp);
    CHECK(has_1123);

    // Dropping the volume condition makes the candidate list grow with the cap.
    auto relaxed_small = hy::screen(3, Rat(1, 1000), {6, 0});
    auto relaxed_large = hy::screen(3, Rat(1, 1000), {9, 0});
    CHECK(relaxed_large.size() > relaxed_small.size());
    CHECK(hy::screen(3, Rat(28), {12, 0}).empty());
}

TEST_CASE("multigraded volumes match the toric route") {
    hy::MultigradedHypersurface h = conic_times_line();
    QVec xi = v({"1", "2", "2"});
    auto w = h.weights_at(xi);
    CHECK(w.weights == std::vector<Rat>{1, 2, 2, 2});
    CHECK(w.degree == 4);
    CHECK(hy::nvol_multigraded(h, xi) == q("27/2"));
    CHECK_THROWS_AS((void)hy::nvol_multigraded(h, v({"1", "0", "0"})), GeometryError);

    // One-dimensional gradings reduce to the weighted formula.
    hy::MultigradedHypersurface one;
    one.variable_weights = QMat{v({"1"}), v({"1"}), v({"1"}), v({"1"})};
    one.equation_weight = v({"2"});
    CHECK(hy::nvol_multigraded(one, v({"1"})) == 16);
}

TEST_CASE("multigraded minimization finds the K-semistable direction") {
    // xy + z^2 with all three quadric variables of weight e_2 and w of
    // weight e_1: nvol(s, w) = 2w(w+s)^3/(w^3 s), minimal at s/w = 1/2.
    hy::MultigradedHypersurface h;
    h.variable_weights = QMat{v({"0", "1"}), v({"0", "1"}), v({"0", "1"}), v({"1", "0"})};
    h.equation_weight = v({"0", "2"});
    auto m = hy::minimize_nvol_multigraded(h, 24);
    Rat ratio = m.xi_star[0] / m.xi_star[1];
    Rat err = ratio - q("1/2");
    if (err < 0) err = -err;
    CHECK(err < q("1/1000"));
    // Calculus oracle: t -> 2(1+t)^3/t has its one-variable minimum at 1/2.
    auto f = [](const Rat& t) -> Rat { return Rat(2) * (1 + t) * (1 + t) * (1 + t) / t; };
    CHECK(f(q("249/500")) > f(q("1/2")));
    CHECK(f(q("251/500")) > f(q("1/2")));
    CHECK(m.value == hy::nvol_multigraded(h, m.xi_star));
}

TEST_CASE("T^1 support of the degeneration family") {
    hy::MultigradedHypersurface h = conic_times_line();
    for (long e : {4L, 6L}) {
        QMat kernel{QVec{Rat(e), Rat(0), Rat(-2)}};
        auto support = hy::t1_support(h, kernel, e + 1);
        REQUIRE(support.size() == 2);
        CHECK(support[0] == zero_vec(3));
        CHECK(support[1] == QVec{Rat(e), Rat(0), Rat(-2)});
    }
    // A cap too small to reach w^e misses the positive degree.
    QMat kernel{QVec{Rat(6), Rat(0), Rat(-2)}};
    auto truncated = hy::t1_support(h, kernel, 3);
    CHECK(truncated.size() == 1);
    CHECK(truncated[0] == zero_vec(3));
}

TEST_CASE("degeneration cone and the obstruction") {
    std::vector<QVec> support = {zero_vec(3), v({"4", "0", "-2"})};
    Cone sigma_x = hy::degeneration_cone(support, 3);
    Cone direct = Cone(3, {v({"4", "0", "-2"})}).dual();
    CHECK(sigma_x == direct);
    CHECK(!sigma_x.pointed());  // a half-space

    QVec xi = v({"1", "2", "2"});
    std::vector<QVec> n_sub = kernel_basis(QMat{v({"4", "0", "-2"})});
    CHECK(!hy::kss_obstruction(sigma_x, xi, n_sub));  // e = 4: xi on the boundary

    Cone sigma5 = hy::degeneration_cone({v({"5", "0", "-2"})}, 3);
    CHECK(hy::kss_obstruction(sigma5, xi, kernel_basis(QMat{v({"5", "0", "-2"})})));

    // Full-space degeneration cone never obstructs anything interior unless
    // xi escapes the subtorus span.
    Cone full = hy::degeneration_cone({zero_vec(3)}, 3);
    CHECK(full.dim() == 3);
    CHECK(!full.pointed());
    std::vector<QVec> all = {v({"1", "0", "0"}), v({"0", "1", "0"}), v({"0", "0", "1"})};
    CHECK(!hy::kss_obstruction(full, xi, all));
}

TEST_CASE("weight systems normalize") {
    hy::WeightSystem w({Rat(2), Rat(4), Rat(6)}, Rat(5));
    auto n = w.normalized();
    CHECK(n.weights.front() == 1);
    CHECK(n.degree == q("5/2"));
    CHECK(hy::nvol_weighted(w) == hy::nvol_weighted(n));
}
