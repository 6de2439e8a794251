#include <doctest.h>

#include <algorithm>

#include "fcone/cone.hpp"
#include "fcone/polyhedron.hpp"
#include "fcone/volume.hpp"
#include "support.hpp"

using namespace fcone;
using namespace fcone::testing;

namespace {

// Brute-force dual oracle for full-dimensional rank-2 cones: rotate each
// generator by 90 degrees both ways and keep the directions nonnegative on
// every generator.
std::vector<QVec> dual_oracle_rank2(const std::vector<QVec>& gens) {
    std::vector<QVec> out;
    for (const auto& g : gens) {
        for (const QVec& cand : {QVec{-g[1], g[0]}, QVec{g[1], -g[0]}}) {
            bool ok = !is_zero(cand);
            for (const auto& h : gens) ok = ok && dot(cand, h) >= 0;
            if (ok) out.push_back(integer_primitive(cand));
        }
    }
    std::sort(out.begin(), out.end(), vec_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

TEST_CASE("dual cone: frozen examples") {
    Cone orthant = Cone::orthant(2);
    CHECK(orthant.dual() == orthant);

    Cone a1_line(3, {v({"0", "0", "1"}), v({"0", "2", "1"}), v({"1", "0", "0"})});
    Cone a1_dual = a1_line.dual();
    std::vector<QVec> expected = {v({"0", "-1", "2"}), v({"0", "1", "0"}), v({"1", "0", "0"})};
    CHECK(a1_dual.rays() == expected);
    CHECK(a1_dual.dual() == a1_line);

    Cone tail(2, {v({"1", "0"}), v({"1", "4"})});
    std::vector<QVec> tail_dual = {v({"0", "1"}), v({"4", "-1"})};
    CHECK(tail.dual().rays() == tail_dual);
    CHECK(tail.dual().rays() == dual_oracle_rank2(tail.rays()));

    Cone zero = Cone::zero(2);
    CHECK(zero.dual().lineality().size() == 2);  // the full plane
    CHECK(zero.dim() == 0);
    CHECK(zero.pointed());
}

TEST_CASE("dual cone handles lower-dimensional and non-pointed input") {
    Cone halfline(3, {v({"2", "0", "-4"})});
    CHECK(halfline.dim() == 1);
    Cone d = halfline.dual();
    CHECK(!d.pointed());
    CHECK(d.dim() == 3);
    CHECK(d.dual() == halfline);

    Cone line(2, {v({"1", "1"}), v({"-1", "-1"})});
    CHECK(!line.pointed());
    CHECK(line.rays().empty());
    CHECK(line.lineality().size() == 1);
}

TEST_CASE("primitive points and multiplicities") {
    Lattice lat = Lattice::standard(2);
    auto p = lat.primitive_point(v({"1/2", "0"}));
    CHECK(p.point == v({"1", "0"}));
    CHECK(p.mu == 2);

    CHECK(lat.mu(v({"3", "6"})) == 1);
    CHECK(lat.ray_primitive(v({"3", "6"})) == v({"1", "2"}));

    auto p2 = lat.primitive_point(v({"-2/5", "0"}));
    CHECK(p2.point == v({"-2", "0"}));
    CHECK(p2.mu == 5);
    CHECK(lat.ray_primitive(v({"-2/5", "0"})) == v({"-1", "0"}));

    // mu(lambda v) scaling leaves the primitive direction alone.
    CHECK(lat.ray_primitive(v({"1/2", "0"})) == lat.ray_primitive(v({"7/3", "0"})));
}

TEST_CASE("nonstandard lattices") {
    Lattice half(QMat{v({"1", "0"}), v({"1/2", "1/2"})});
    CHECK(half.covolume() == q("1/2"));
    CHECK(half.contains(v({"1/2", "1/2"})));
    CHECK(!half.contains(v({"1/2", "0"})));
    CHECK(half.mu(v({"1/2", "0"})) == 2);
    // The dual lattice is the even-coordinate-sum sublattice.
    Lattice dual = half.dual();
    CHECK(dual.covolume() == 2);
    CHECK(dual.contains(v({"1", "1"})));
    CHECK(!dual.contains(v({"1", "0"})));
}

TEST_CASE("Minkowski sums") {
    Cone tail(2, {v({"1", "0"}), v({"1", "4"})});
    Polyhedron seg({v({"0", "0"}), v({"0", "1"})}, tail);
    Polyhedron neutral = Polyhedron::cone_at_origin(tail);
    CHECK(seg.minkowski_sum(neutral) == seg);

    Polyhedron sum = seg.minkowski_sum(seg);
    CHECK(sum.vertices() == std::vector<QVec>{v({"0", "0"}), v({"0", "2"})});
    CHECK(sum.tail() == tail);

    Polyhedron a({v({"1/2", "0"})}, tail);
    Polyhedron b({v({"-2/5", "0"})}, tail);
    CHECK(a.minkowski_sum(b).vertices() == std::vector<QVec>{v({"1/10", "0"})});

    Cone other = Cone::orthant(2);
    Polyhedron c({v({"0", "0"})}, other);
    CHECK_THROWS_AS((void)seg.minkowski_sum(c), GeometryError);
}

TEST_CASE("face sets") {
    Cone orthant = Cone::orthant(2);
    CHECK(orthant.face_set(v({"1", "1"})).empty());          // interior
    CHECK(orthant.face_set(v({"1", "0"})).size() == 1);      // exactly one facet
    CHECK(orthant.face_set(v({"0", "0"})).size() == 2);

    // F(v+v') = F(v) cap F(v') with disjoint facet sets.
    auto fa = orthant.face_set(v({"1", "0"}));
    auto fb = orthant.face_set(v({"0", "1"}));
    CHECK(fa != fb);
    CHECK(orthant.face_set(v({"1", "1"})).empty());

    CHECK_THROWS_AS((void)orthant.face_set(v({"-1", "0"})), GeometryError);

    // Relative-interior points of a polyhedron meet no tail facet minimizer.
    Cone tail(2, {v({"1", "0"}), v({"1", "4"})});
    Polyhedron p({v({"1/2", "0"})}, tail);
    CHECK(p.tail_face_set(v({"2", "1"})).empty());
    CHECK(p.tail_face_set(v({"1/2", "0"})).size() == 2);
}

TEST_CASE("polytope volumes") {
    Lattice l2 = Lattice::standard(2);
    Lattice l3 = Lattice::standard(3);

    CHECK(polytope_volume({v({"0", "0"}), v({"1", "0"}), v({"0", "1"})}, l2) == q("1/2"));
    CHECK(polytope_volume({v({"0", "0", "0"}), v({"1", "0", "0"}), v({"0", "1", "0"}),
                           v({"0", "0", "1"})},
                          l3) == q("1/6"));

    // Unit cube against a lattice of covolume 1/2.
    std::vector<QVec> cube;
    for (int i = 0; i < 8; ++i)
        cube.push_back(QVec{Rat(i & 1), Rat((i >> 1) & 1), Rat((i >> 2) & 1)});
    Lattice fine(QMat{v({"1", "0", "0"}), v({"0", "1", "0"}), v({"0", "0", "1/2"})});
    CHECK(polytope_volume(cube, l3) == 1);
    CHECK(polytope_volume(cube, fine) == 2);

    // The truncation of the A1 x A1 cone's dual at (1,2,2).
    std::vector<QVec> trunc = {v({"0", "0", "0"}), v({"1", "0", "0"}), v({"0", "1/2", "0"}),
                               v({"0", "-1/2", "1"})};
    CHECK(polytope_volume(trunc, l3) == q("1/12"));

    // Additive under a facet split: the unit square cut along a diagonal.
    std::vector<QVec> square = {v({"0", "0"}), v({"1", "0"}), v({"0", "1"}), v({"1", "1"})};
    Rat whole = polytope_volume(square, l2);
    Rat t1 = polytope_volume({v({"0", "0"}), v({"1", "0"}), v({"1", "1"})}, l2);
    Rat t2 = polytope_volume({v({"0", "0"}), v({"0", "1"}), v({"1", "1"})}, l2);
    CHECK(whole == t1 + t2);

    // Lower-dimensional input has measure zero.
    CHECK(polytope_volume({v({"0", "0"}), v({"1", "1"})}, l2) == 0);
}

TEST_CASE("H-representation round trip and ray feasibility") {
    std::vector<std::pair<QVec, Rat>> ineqs = {
        {v({"1", "0"}), Rat(0)}, {v({"-1", "0"}), Rat(-1)},
        {v({"0", "1"}), Rat(0)}, {v({"0", "-1"}), Rat(-1)}};
    Polyhedron square = Polyhedron::from_inequalities(2, ineqs);
    CHECK(square.vertices().size() == 4);
    CHECK(square.bounded());

    Cone tail(2, {v({"1", "0"}), v({"1", "4"})});
    Polyhedron p({v({"1/2", "0"}), v({"1/2", "2"})}, tail);
    CHECK(p.meets_ray(v({"1", "0"})));
    CHECK(p.meets_ray(v({"1", "4"})));
    CHECK(!p.meets_ray(v({"0", "1"})));

    // Intersection with a cone of the fan.
    Cone sub(2, {v({"1", "0"}), v({"1", "2"})});
    Polyhedron cap = p.intersect_cone(sub);
    for (const auto& w : cap.vertices()) {
        CHECK(p.contains(w));
        CHECK(sub.contains(w));
    }
}

TEST_CASE("canonical vertex representation drops redundancy") {
    Cone tail = Cone::orthant(2);
    Polyhedron p({v({"0", "0"}), v({"2", "2"}), v({"1", "0"})}, tail);
    // (2,2) and (1,0) lie in (0,0) + orthant.
    CHECK(p.vertices() == std::vector<QVec>{v({"0", "0"})});
}
