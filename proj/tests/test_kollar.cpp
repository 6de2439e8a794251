#include <doctest.h>

#include <algorithm>

#include "fcone/kollar.hpp"
#include "fcone/selftest.hpp"
#include "support.hpp"

using namespace fcone;
using namespace fcone::testing;

TEST_CASE("sigma_z of the even case") {
    PDivisor d = even_case_k2();
    DegenCone dc = sigma_z(d, Boundary::trivial(), "oo");
    REQUIRE(dc.pointed);
    std::vector<QVec> prims;
    for (const auto& r : dc.rays) prims.push_back(r.primitive);
    std::sort(prims.begin(), prims.end(), vec_less);
    CHECK(prims == std::vector<QVec>{v({"0", "0", "-1"}), v({"0", "2", "-1"}),
                                     v({"1", "0", "2"})});
    for (const auto& r : dc.rays) {
        CHECK(r.display_coeff == 0);
        CHECK(r.consistent_coeff == 0);
        CHECK(!r.mismatch);
    }
    // Heights: maximum equals the multiplicity over z, minimum at least -p.
    Rat top = dc.rays[0].height, bottom = dc.rays[0].height;
    for (const auto& r : dc.rays) {
        top = std::max(top, r.height);
        bottom = std::min(bottom, r.height);
    }
    CHECK(top == 2);
    CHECK(bottom >= -1);
}

TEST_CASE("sigma_z height bounds on the odd case") {
    PDivisor d = odd_case_k2();  // type (1,2,5), z the 5-point
    DegenCone dc = sigma_z(d, Boundary::trivial(), "1");
    REQUIRE(dc.pointed);
    bool has_q = false;
    for (const auto& r : dc.rays) {
        CHECK(r.height >= -2);  // m_rho >= -p with p = 2
        if (r.height == 5) has_q = true;
    }
    CHECK(has_q);
}

TEST_CASE("sigma_z of the trivial divisor is a product") {
    PDivisor t = trivial_over(Cone::orthant(2));
    DegenCone dc = sigma_z(t, Boundary::trivial(), "0");
    CHECK(!dc.pointed);
    CHECK(dc.cone.lineality().size() == 1);
    CHECK_THROWS_AS((void)dc.toric(), GeometryError);
}

TEST_CASE("sigma_z boundary coefficients, display versus consistent") {
    // Type (2,2,3) with all vertices on the x-axis: the height -1 ray over a
    // sum of two half-lattice vertices has display 0 but consistent 1.
    Cone tail(2, {v({"1", "0"}), v({"0", "1"})});
    std::map<std::string, Polyhedron> coeffs;
    coeffs.emplace("a", Polyhedron({v({"1/2", "0"})}, tail));
    coeffs.emplace("b", Polyhedron({v({"3/2", "0"})}, tail));
    coeffs.emplace("z", Polyhedron({v({"1/3", "0"})}, tail));
    PDivisor d(2, tail, std::move(coeffs));
    REQUIRE(is_klt(d, Boundary::trivial()));
    DegenCone dc = sigma_z(d, Boundary::trivial(), "z");
    bool found = false;
    for (const auto& r : dc.rays) {
        if (r.height < 0) {
            CHECK(r.display_coeff == 0);
            CHECK(r.consistent_coeff == 1);
            CHECK(r.mismatch);
            found = true;
        }
    }
    CHECK(found);
    // The crosscheck still holds because the toric side uses the consistent
    // coefficient.
    auto chk = toric_crosscheck(d, Boundary::trivial(), "z", v({"1", "1"}));
    CHECK(chk.complexity_one == chk.toric);
}

TEST_CASE("toric crosscheck on the even case") {
    PDivisor d = even_case_k2();
    Boundary delta = Boundary::trivial();
    auto chk = toric_crosscheck(d, delta, "oo", v({"1", "1"}));
    CHECK(chk.complexity_one == 2);
    CHECK(chk.toric == 2);
    auto chk2 = toric_crosscheck(d, delta, "oo", v({"1/2", "0"}));
    CHECK(chk2.complexity_one == 1);
}

TEST_CASE("vertical components") {
    PDivisor d = even_case_k2();
    Boundary delta = Boundary::trivial();
    auto vc = vertical_component(d, delta, "oo", v({"1", "1"}));
    CHECK(vc.is_weak);
    CHECK(vc.is_kollar);
    CHECK(vc.discrepancy == 2);

    // Vertices are not interior.
    CHECK_THROWS_AS((void)vertical_component(d, delta, "oo", v({"1/2", "0"})), GeometryError);

    // A type (2,2,r) divisor has no vertical Kollar component at a 2-point.
    Cone tail(2, {v({"1", "0"}), v({"0", "1"})});
    std::map<std::string, Polyhedron> coeffs;
    coeffs.emplace("a", Polyhedron({v({"1/2", "0"})}, tail));
    coeffs.emplace("b", Polyhedron({v({"3/2", "0"})}, tail));
    coeffs.emplace("z", Polyhedron({v({"1/3", "0"})}, tail));
    PDivisor d223(2, tail, std::move(coeffs));
    auto vc2 = vertical_component(d223, Boundary::trivial(), "a", v({"1", "1"}));
    CHECK(vc2.is_weak);
    CHECK(!vc2.is_kollar);  // sum of the other b-values is 1/2 + 2/3 >= 1
}

TEST_CASE("horizontal components") {
    PDivisor d = even_case_k2();
    Boundary delta = Boundary::trivial();
    auto hc = horizontal_component(d, delta, v({"1", "2"}));
    CHECK(hc.is_kollar);
    CHECK(hc.discrepancy == 3);
    auto hc2 = horizontal_component(d, delta, v({"1", "1"}));
    CHECK(hc2.discrepancy == 3);
    CHECK_THROWS_AS((void)horizontal_component(d, delta, v({"1", "0"})), GeometryError);
}

TEST_CASE("vertical f-divisor and its certificate") {
    PDivisor d = even_case_k2();
    QVec w = v({"1", "1"});
    FDivisor f = fdivisor_vertical(d, "oo", w);
    CHECK(f.rank == 2);
    CHECK(f.tailfan.size() == 3);
    for (bool m : f.marked) CHECK(m);
    verify_fdivisor_compatibility(f, d);

    DivisorSpec target = DivisorSpec::vertical("oo", w);
    AmpleCertificate cert = ample_certificate(f, d, target);
    CHECK(cert.exceptional_scale == 1);  // mu((1,1)) = 1
    CHECK(cert.hy_vertex_values.at("oo").at(w) == 1);
    for (const auto& [label, vals] : cert.hy_vertex_values)
        for (const auto& [vert, val] : vals)
            if (!(label == "oo" && vert == w)) CHECK(val == 0);
    for (const auto& offsets : cert.cone_offsets) {
        Rat sum = 0;
        for (const auto& [label, off] : offsets) sum += off;
        CHECK(sum == 0);
    }
    validate_certificate(cert, f, d);

    // Tampering with one vertex value must be caught.
    AmpleCertificate tampered = cert;
    tampered.hy_vertex_values["0"][v({"0", "1"})] = q("1/7");
    CHECK_THROWS_AS(validate_certificate(tampered, f, d), MathError);
}

TEST_CASE("horizontal f-divisor and its certificate") {
    PDivisor d = even_case_k2();
    QVec n = v({"1", "2"});
    FDivisor f = fdivisor_horizontal(d, n);
    REQUIRE(f.tailfan.size() == 2);
    std::vector<std::vector<QVec>> fans;
    for (const auto& c : f.tailfan) fans.push_back(c.rays());
    std::sort(fans.begin(), fans.end());
    CHECK(fans[0] == std::vector<QVec>{v({"1", "0"}), v({"1", "2"})});
    CHECK(fans[1] == std::vector<QVec>{v({"1", "2"}), v({"1", "4"})});
    for (bool m : f.marked) CHECK(m);  // both tail rays meet the degree here

    AmpleCertificate cert = ample_certificate(f, d, DivisorSpec::horizontal(n));
    CHECK(cert.h_ray_values.at(n) == 1);
    CHECK(cert.h_ray_values.at(v({"1", "0"})) == 0);
    CHECK(cert.h_ray_values.at(v({"1", "4"})) == 0);
    validate_certificate(cert, f, d);

    AmpleCertificate tampered = cert;
    tampered.h_ray_values[v({"1", "0"})] = 1;
    CHECK_THROWS_AS(validate_certificate(tampered, f, d), MathError);

    // Trivial divisor: the star subdivision is purely toric.
    PDivisor t = trivial_over(Cone::orthant(2));
    FDivisor ft = fdivisor_horizontal(t, v({"1", "1"}));
    CHECK(ft.tailfan.size() == 2);
    AmpleCertificate ct = ample_certificate(ft, t, DivisorSpec::horizontal(v({"1", "1"})));
    validate_certificate(ct, ft, t);
}

TEST_CASE("combine_rays") {
    // The canonical combination witness: (1,1) = (q-m)/q v1 + 1/q v2.
    auto [l1, l2] = combine_rays(v({"1", "0"}), v({"1", "3"}), v({"1/3", "1/3"}), Rat(1));
    CHECK(l1 == q("2/3"));
    CHECK(l2 == q("1/3"));
    QVec combo = vec_add(vec_scale(l1, v({"1", "0"})), vec_scale(l2, v({"1", "3"})));
    CHECK(is_integral(combo));

    auto [m1, m2] = combine_rays(v({"1", "0"}), v({"0", "2"}), v({"1/2", "1/2"}), Rat(1));
    CHECK(m1 == 1);
    CHECK(m2 == q("1/2"));

    // Exhaustive small cases: bounds hold and the output is integral.
    selftest::Rng rng(7);
    for (int i = 0; i < 40; ++i) {
        Lattice lat = Lattice::standard(2);
        long mw = 1 + static_cast<long>(rng.below(4));
        long m1w = 1 + static_cast<long>(rng.below(3));
        long m2w = 1 + static_cast<long>(rng.below(3));
        QVec w{Rat(1, mw), Rat(0)};
        QVec wp1{Rat(static_cast<long>(rng.below(3))), Rat(1, m1w)};
        QVec wp2{Rat(1, m2w), Rat(1 + static_cast<long>(rng.below(2)))};
        QVec s1 = vec_add(w, wp1), s2 = vec_add(w, wp2);
        if (is_zero(s1) || is_zero(s2) || in_span({s1}, s2)) continue;
        QVec v1 = lat.ray_primitive(s1), v2 = lat.ray_primitive(s2);
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), Rat(m1w).get_num().get_mpz_t(), Rat(m2w).get_num().get_mpz_t());
        Rat ell(l);
        auto [a1, a2] = combine_rays(v1, v2, w, ell);
        CHECK(a1 > 0);
        CHECK(a1 <= ell);
        CHECK(a2 > 0);
        CHECK(a2 <= ell * ell / lat.mu(w));
        CHECK(is_integral(vec_add(vec_scale(a1, v1), vec_scale(a2, v2))));
    }
}

TEST_CASE("mld witness: vertical branch on the even case") {
    PDivisor d = even_case_k2();
    MldWitness w = mld_bound_witness(d, Boundary::trivial());
    CHECK(w.branch == "vertical-2d-1");
    CHECK(w.bound == 5);
    CHECK(w.certified);
    CHECK(w.discrepancy <= 5);
    REQUIRE(w.spec.kind == DivisorSpec::Kind::Vertical);
    auto vc = vertical_component(d, Boundary::trivial(), w.spec.point, w.spec.w);
    CHECK(vc.is_kollar);
    CHECK(vc.discrepancy == w.discrepancy);
}

TEST_CASE("mld witness: horizontal branch with boundary mass") {
    // The even case with coefficient 2/3 on every vertex over the two
    // segment points: the sum of b-values away from z reaches 4/3, so the
    // vertical branch is out; epsilon = 2/3 gives the bound 3.
    PDivisor d = even_case_k2();
    Boundary delta;
    for (const auto& label : {"0", "1"}) {
        delta.vertical[{label, v({"0", "0"})}] = q("2/3");
        delta.vertical[{label, v({"0", "1"})}] = q("2/3");
    }
    REQUIRE(is_klt(d, delta));
    GorensteinData g = solve_gorenstein(d, delta);
    REQUIRE(g.u == v({"-1/3", "0"}));

    MldWitness w = mld_bound_witness(d, delta);
    CHECK(w.branch == "horizontal-2-eps");
    CHECK(w.bound == 3);
    CHECK(w.certified);
    CHECK(w.discrepancy <= w.bound);
    REQUIRE(w.spec.kind == DivisorSpec::Kind::Horizontal);
    auto hc = horizontal_component(d, delta, w.spec.ray);
    CHECK(hc.is_kollar);
    CHECK(hc.discrepancy == w.discrepancy);
}

TEST_CASE("mld witness: swapped-family path on the crafted (2,2,4) instance") {
    auto all = selftest::handbuilt_2pq_instances();
    const auto& inst = all.back();
    REQUIRE(type_triple(inst.divisor).entries == std::vector<Rat>{Rat(2), Rat(2), Rat(4)});
    GorensteinData g = solve_gorenstein(inst.divisor, inst.boundary);
    CHECK(g.u == v({"-1/5", "-2/5"}));
    MldWitness w = mld_bound_witness(inst.divisor, inst.boundary);
    CHECK(w.branch == "m-construction");
    CHECK(w.certified);
    CHECK(w.discrepancy == q("8/5"));
}

TEST_CASE("mld witness: ray-set construction on type (2,p,q)") {
    for (const auto& inst : selftest::handbuilt_2pq_instances()) {
        auto type = type_triple(inst.divisor);
        REQUIRE(type.typed);
        REQUIRE(type.entries[0] == 2);
        MldWitness w = mld_bound_witness(inst.divisor, inst.boundary);
        CHECK(w.branch == "m-construction");
        CHECK(w.bound == 156 * (inst.divisor.rank() + 1 - 1));
        CHECK(w.certified);
        CHECK(w.discrepancy <= w.bound);
        auto hc = horizontal_component(inst.divisor, inst.boundary, w.spec.ray);
        CHECK(hc.is_kollar);
        CHECK(hc.discrepancy == w.discrepancy);
    }
}

TEST_CASE("ample certificates validate on random klt instances") {
    selftest::Rng rng(515);
    Lattice lat = Lattice::standard(2);
    for (int i = 0; i < 12; ++i) {
        auto inst = selftest::random_proper_klt(rng);
        const PDivisor& d = inst.divisor;
        // Vertical: an interior point of the largest coefficient.
        std::string z = d.labels().front();
        for (const auto& label : d.labels())
            if (d.multiplicity_over(label) > d.multiplicity_over(z)) z = label;
        QVec bary = zero_vec(2);
        for (const auto& vert : d.coefficient(z).vertices()) bary = vec_add(bary, vert);
        bary = vec_scale(Rat(1, static_cast<long>(d.coefficient(z).vertices().size())), bary);
        QVec dir = zero_vec(2);
        for (const auto& ray : d.tail().rays()) dir = vec_add(dir, ray);
        QVec w = vec_add(bary, dir);
        REQUIRE(d.coefficient(z).rint_contains(w));
        FDivisor fv = fdivisor_vertical(d, z, w);
        verify_fdivisor_compatibility(fv, d);
        auto cv = ample_certificate(fv, d, DivisorSpec::vertical(z, w));
        validate_certificate(cv, fv, d);

        // Horizontal: the interior ray through the sum of the tail rays.
        QVec n = lat.ray_primitive(dir);
        REQUIRE(d.tail().rint_contains(n));
        FDivisor fh = fdivisor_horizontal(d, n);
        auto ch = ample_certificate(fh, d, DivisorSpec::horizontal(n));
        validate_certificate(ch, fh, d);
    }
}

TEST_CASE("mld witness rejects non-klt input") {
    Cone tail = Cone::orthant(2);
    std::map<std::string, Polyhedron> coeffs;
    for (int i = 0; i < 4; ++i)
        coeffs.emplace("p" + std::to_string(i),
                       Polyhedron({QVec{Rat(2 * i + 1, 2), Rat(0)}}, tail));
    PDivisor four(2, tail, std::move(coeffs));
    CHECK_THROWS_AS((void)mld_bound_witness(four, Boundary::trivial()), MathError);
}
