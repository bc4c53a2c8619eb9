#include "flatcount/surface.hpp"
#include "flatcount/templates.hpp"

#include "doctest.h"

using namespace flatcount;

namespace {
Vec2 v2(long x, long y) { return {Scalar(x), Scalar(y)}; }
}

TEST_CASE("unit-square torus: identity case") {
    FlatSurface t = torus_surface();
    CHECK(t.area() == Scalar(1));
    CHECK(t.genus() == 1);
    auto sig = stratum_signature(t);
    CHECK(sig.kind == Kind::abelian);
    CHECK(sig.orders.empty());
    CHECK(sig.marked_points == 1);
    CHECK(t.num_vclasses() == 1);
    CHECK(t.cone_point(0).angle_pi == 2);
}

TEST_CASE("pillowcase: four poles, genus 0, area 2") {
    FlatSurface p = pillowcase_surface();
    CHECK(p.area() == Scalar(2));
    auto sig = stratum_signature(p);
    CHECK(sig.display() == "Q(-1^4)");
    CHECK(sig.genus == 0);
    int poles = 0;
    for (const auto& cp : p.cone_points()) {
        CHECK(cp.angle_pi == 1);
        poles += cp.is_pole;
    }
    CHECK(poles == 4);
}

TEST_CASE("L(a,b): one 6pi cone point, H(2), area 1-ab") {
    FlatSurface L = lab_surface(Scalar(1, 2), Scalar(1, 2));
    CHECK(L.area() == Scalar(3, 4));
    CHECK(L.genus() == 2);
    CHECK(stratum_signature(L).display() == "H(2)");
    CHECK(L.num_vclasses() == 1);
    CHECK(L.cone_point(0).angle_pi == 6);
    CHECK(L.markings().size() == 5);

    FlatSurface L2 = lab_surface(Scalar(1, 3), Scalar(1, 5));
    CHECK(L2.area() == Scalar(1) - Scalar(1, 15));
    CHECK(stratum_signature(L2).display() == "H(2)");

    CHECK_THROWS_AS(lab_surface(Scalar(1), Scalar(1, 2)), ValidationError);
    CHECK_THROWS_AS(lab_surface(Scalar(0), Scalar(1, 2)), ValidationError);
}

TEST_CASE("gluing validation errors") {
    // mismatched edge lengths: bottom (length 2) against right (length 1)
    std::vector<std::vector<Vec2>> cells = {{v2(0, 0), v2(2, 0), v2(2, 1), v2(0, 1)}};
    CHECK_THROWS_AS(build_surface(cells, {{0, 0, 0, 1}, {0, 2, 0, 3}}, Kind::abelian), ValidationError);

    // translation surface with an equal-vector (fold) gluing
    std::vector<std::vector<Vec2>> two = {
        {v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)},
        {v2(1, 0), v2(2, 0), v2(2, 1), v2(1, 1)},
    };
    CHECK_THROWS_AS(build_surface(two, {{0, 0, 1, 0}, {0, 2, 1, 2}, {0, 1, 1, 3}, {0, 3, 1, 1}}, Kind::abelian),
                    ValidationError);

    // non-convex / collinear cells are rejected
    std::vector<std::vector<Vec2>> degen = {{v2(0, 0), v2(1, 0), v2(2, 0), v2(2, 1), v2(0, 1)}};
    CHECK_THROWS_AS(build_surface(degen, {{0, 0, 0, 3}, {0, 1, 0, 4}, {0, 2, 0, 2}}, Kind::abelian), ValidationError);

    // edge glued to itself
    std::vector<std::vector<Vec2>> sq = {{v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)}};
    CHECK_THROWS_AS(build_surface(sq, {{0, 0, 0, 0}, {0, 1, 0, 3}}, Kind::abelian), ValidationError);
}

TEST_CASE("staircase is H(1,1)") {
    FlatSurface s = staircase_surface();
    CHECK(s.area() == Scalar(4));
    CHECK(stratum_signature(s).display() == "H(1,1)");
    CHECK(s.genus() == 2);
}

TEST_CASE("Gauss-Bonnet across templates") {
    for (const FlatSurface& s :
         {torus_surface(), pillowcase_surface(), lab_surface(Scalar(1, 2), Scalar(1, 3)), staircase_surface()}) {
        long sum = 0;
        for (const auto& cp : s.cone_points()) sum += (s.kind() == Kind::abelian) ? 2 * cp.order : cp.order;
        CHECK(sum == 4 * s.genus() - 4);
    }
}

TEST_CASE("surface JSON round trip is bit exact") {
    for (const FlatSurface& s : {pillowcase_surface(), lab_surface(Scalar(1, 3), Scalar(1, 5)), q_template(1)}) {
        std::string j = surface_to_json(s);
        FlatSurface back = surface_from_json(j);
        CHECK(surface_to_json(back) == j);
        CHECK(back.area() == s.area());
        CHECK(stratum_signature(back) == stratum_signature(s));
    }
    CHECK_THROWS_AS(surface_from_json("{ not json"), ParseError);
}

TEST_CASE("quadratic-field surface round trip") {
    Scalar a = Scalar(3) - Scalar(2) * Scalar::sqrt_integer(2);
    FlatSurface L = lab_surface(a, a);
    CHECK(stratum_signature(L).display() == "H(2)");
    std::string j = surface_to_json(L);
    FlatSurface back = surface_from_json(j);
    CHECK(surface_to_json(back) == j);
}

TEST_CASE("q_template strata and areas") {
    FlatSurface y1 = q_template(1);
    CHECK(stratum_signature(y1).display() == "Q(1,-1^5)");
    CHECK(y1.area() == Scalar(3, 8));  // half of area(L(1/2,1/2))
    CHECK(y1.genus() == 0);
    CHECK(y1.vclass_by_name("z").has_value());
    for (const char* p : {"p1", "p2", "p3", "p4", "p5"}) CHECK(y1.vclass_by_name(p).has_value());

    FlatSurface y2 = q_template(2);
    CHECK(stratum_signature(y2).display() == "Q(2,-1^6)");
    CHECK(y2.area() == Scalar(2));  // half of the staircase
    CHECK(y2.genus() == 0);
}
