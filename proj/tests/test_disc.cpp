#include <doctest.h>

#include "fcone/gorenstein.hpp"
#include "fcone/selftest.hpp"
#include "support.hpp"

using namespace fcone;
using namespace fcone::testing;

TEST_CASE("Q-Gorenstein solve on the even case") {
    PDivisor d = even_case_k2();
    GorensteinData g = solve_gorenstein(d, Boundary::trivial());
    CHECK(g.u == v({"-3", "0"}));
    CHECK(g.a["0"] == -1);
    CHECK(g.a["1"] == -1);
    CHECK(g.a["oo"] == 2);
    CHECK(g.k["0"] == -1);
    CHECK(g.k["1"] == -1);

    Rat asum = 0;
    for (const auto& [label, a] : g.a) asum += a;
    CHECK(asum == 0);
}

TEST_CASE("trivial divisor takes the toric route") {
    PDivisor t = trivial_over(Cone::orthant(2));
    GorensteinData g = solve_gorenstein(t, Boundary::trivial());
    CHECK(g.u == v({"-1", "-1"}));
    for (const auto& [label, a] : g.a) CHECK(a == g.k_of(label));
}

TEST_CASE("inconsistent vertex and ray equations") {
    // Two segments force u = 0 on both coordinates while a free ray demands
    // <u, (1,0)> = -1.
    Cone tail = Cone::orthant(2);
    std::map<std::string, Polyhedron> coeffs;
    coeffs.emplace("a", Polyhedron({v({"0", "0"}), v({"1", "0"})}, tail));
    coeffs.emplace("b", Polyhedron({v({"0", "0"}), v({"0", "1"})}, tail));
    coeffs.emplace("c", Polyhedron({v({"1/2", "1/2"})}, tail));
    PDivisor d(2, tail, std::move(coeffs));
    CHECK_THROWS_AS((void)solve_gorenstein(d, Boundary::trivial()), NotQGorenstein);
}

TEST_CASE("log discrepancies on the even case") {
    PDivisor d = even_case_k2();
    Boundary delta = Boundary::trivial();
    GorensteinData g = solve_gorenstein(d, delta);

    // Prime divisors on X carry discrepancy 1 - c.
    CHECK(log_discrepancy(g, d, delta, DivisorSpec::vertical("oo", v({"1/2", "0"}))) == 1);
    CHECK(log_discrepancy(g, d, delta, DivisorSpec::vertical("0", v({"0", "1"}))) == 1);

    CHECK(log_discrepancy(g, d, delta, DivisorSpec::horizontal(v({"1", "2"}))) == 3);
    CHECK(log_discrepancy(g, d, delta, DivisorSpec::vertical("oo", v({"1", "1"}))) == 2);

    CHECK_THROWS_AS(
        (void)log_discrepancy(g, d, delta, DivisorSpec::vertical("oo", v({"0", "0"}))),
        GeometryError);
    CHECK_THROWS_AS(
        (void)log_discrepancy(g, d, delta, DivisorSpec::horizontal(v({"-1", "0"}))),
        GeometryError);
}

TEST_CASE("boundary coefficients shift prime discrepancies") {
    PDivisor d = even_case_k2();
    Boundary delta;
    delta.vertical[{"oo", v({"1/2", "0"})}] = q("2/3");
    GorensteinData g = solve_gorenstein(d, delta);
    CHECK(log_discrepancy(g, d, delta, DivisorSpec::vertical("oo", v({"1/2", "0"}))) ==
          q("1/3"));
    CHECK(log_discrepancy(g, d, delta, DivisorSpec::vertical("0", v({"0", "0"}))) == 1);
}

TEST_CASE("horizontal linearity identity") {
    PDivisor d = even_case_k2();
    Boundary delta = Boundary::trivial();
    GorensteinData g = solve_gorenstein(d, delta);

    auto chk = horizontal_linearity_check(g, d, delta, v({"1", "0"}), v({"1", "4"}), Rat(1),
                                          Rat(1));
    CHECK(chk.lhs == 6);
    CHECK(chk.rhs == 6);
    CHECK(chk.combined_primitive == v({"1", "2"}));

    auto id = horizontal_linearity_check(g, d, delta, v({"1", "0"}), v({"1", "4"}), Rat(1),
                                         Rat(0));
    CHECK(id.lhs == id.rhs);

    CHECK_THROWS_AS((void)horizontal_linearity_check(g, d, delta, v({"1", "0"}), v({"1", "4"}),
                                                     Rat(1), Rat(-2)),
                    GeometryError);
}

TEST_CASE("family discrepancies") {
    PDivisor d = even_case_k2();
    Boundary delta = Boundary::trivial();

    VertexFamily fam;
    fam.choice = {{"0", v({"0", "0"})}, {"1", v({"0", "0"})}, {"oo", v({"1/2", "0"})}};
    auto fd = family_discrepancy(d, delta, fam);
    CHECK(fd.lambda_rho == 2);
    CHECK(fd.value == 3);
    CHECK(fd.primitive_ray == v({"1", "0"}));

    VertexFamily fam2;
    fam2.choice = {{"0", v({"0", "1"})}, {"1", v({"0", "0"})}, {"oo", v({"1/2", "0"})}};
    auto fd2 = family_discrepancy(d, delta, fam2);
    CHECK(fd2.value == 3);
    CHECK(fd2.type.entries == std::vector<Rat>{Rat(1), Rat(1), Rat(2)});
    CHECK(fd2.bound_1pq_applies);
    CHECK(fd2.bound_1pq == 3);  // (1+2)/gcd(1,2), met with equality here
    CHECK(fd2.bound_1pq_ok);

    VertexFamily lattice_fam;
    lattice_fam.choice = {{"0", v({"0", "1"})}, {"1", v({"0", "1"})}, {"oo", v({"1/2", "0"})}};
    auto fd3 = family_discrepancy(d, delta, lattice_fam);
    CHECK(fd3.value <= fd3.bound_1pq);

    VertexFamily zero_fam;
    zero_fam.choice = {{"0", v({"0", "0"})}, {"1", v({"0", "0"})}, {"oo", v({"0", "0"})}};
    CHECK_THROWS_AS((void)family_discrepancy(trivial_over(Cone::orthant(2)), delta, zero_fam),
                    GeometryError);
}

TEST_CASE("klt pairs have positive discrepancies on the generating set") {
    fcone::selftest::Rng rng(2024);
    for (int i = 0; i < 30; ++i) {
        auto inst = fcone::selftest::random_proper_klt(rng);
        REQUIRE(is_klt(inst.divisor, inst.boundary));
        GorensteinData g = solve_gorenstein(inst.divisor, inst.boundary);
        for (const auto& [label, poly] : inst.divisor.coefficients())
            for (const auto& vert : poly.vertices())
                CHECK(log_discrepancy(g, inst.divisor, inst.boundary,
                                      DivisorSpec::vertical(label, vert)) > 0);
        // A fine interior sample of rays.
        const auto& rays = inst.divisor.tail().rays();
        for (long a = 1; a <= 3; ++a)
            for (long b = 1; b <= 3; ++b) {
                QVec n = vec_add(vec_scale(Rat(a), rays[0]), vec_scale(Rat(b), rays[1]));
                CHECK(log_discrepancy(g, inst.divisor, inst.boundary,
                                      DivisorSpec::horizontal(n)) > 0);
            }
    }
}

TEST_CASE("canonical divisor support does not move discrepancies") {
    PDivisor d = odd_case_k2();
    Boundary delta = Boundary::trivial();
    GorensteinData g1 = solve_gorenstein(d, delta);
    GorensteinData g2 = solve_gorenstein_with_support(d, delta, {"oo", "1"});
    GorensteinData g3 = solve_gorenstein_with_support(d, delta, {"oo", "oo"});

    for (const auto& spec :
         {DivisorSpec::horizontal(v({"1", "5"})), DivisorSpec::vertical("0", v({"1/2", "0"})),
          DivisorSpec::vertical("oo", v({"1", "3"}))}) {
        Rat a1 = log_discrepancy(g1, d, delta, spec);
        CHECK(a1 == log_discrepancy(g2, d, delta, spec));
        CHECK(a1 == log_discrepancy(g3, d, delta, spec));
    }
    CHECK(g1.a != g2.a);  // the a-divisor itself does move
}
