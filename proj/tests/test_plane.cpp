#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pvcsp/catalog.hpp>
#include <pvcsp/plane.hpp>

using namespace pvcsp;

namespace {

// The plane graph of Example 2.2 / Figure 1(b): x1 with a self-loop, the
// triangle x1-x2-x3, a lens of parallel x2-x3 edges, and a lens of parallel
// x3-x4 edges. Dart pairs: loop (0,1); x1-x2 (2,3); x1-x3 (4,5);
// x2-x3 straight (6,7); x2-x3 curved (8,9); x3-x4 straight (10,11);
// x3-x4 curved (12,13).
auto figure_1b_graph() -> PlaneGraph {
    return PlaneGraph(4,
            {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}, {12, 13}},
            {{0, 4, 2, 1},        // x1
             {3, 6, 8},           // x2
             {10, 12, 9, 7, 5},   // x3
             {13, 11}});          // x4
}

auto figure_1b_instance() -> PlaneInstance {
    Language rels(2, {
        {"g1", cat::gamma0()},
        {"g2", cat::rho_nae()},
        {"g3", cat::gamma_cut()},
        {"g4", cat::gamma_cut()},
    });
    return PlaneInstance{
        2,
        figure_1b_graph(),
        1,  // outer face: [1,4,10,13,9,3]
        {
            PlaneConstraint{"g1", Rat(2), 0, std::vector<int>{0}},
            PlaneConstraint{"g2", Rat(0), 6, std::vector<int>{1, 2, 0}},   // gamma2(x2,x3,x1)
            PlaneConstraint{"g3", Rat(1), 7, std::vector<int>{2, 1}},      // gamma3(x3,x2)
            PlaneConstraint{"g4", Rat(5, 3), 12, std::vector<int>{2, 3}},  // gamma4(x3,x4)
        },
        rels,
    };
}

auto two_self_loops() -> PlaneGraph {
    return PlaneGraph(1, {{0, 1}, {2, 3}}, {{0, 1, 2, 3}});
}

}

TEST_CASE("single vertex, two self-loops") {
    auto g = two_self_loops();
    auto faces = trace_faces(g);
    REQUIRE(faces.size() == 3);
    CHECK(euler_characteristic(g) == 2);
    // one face visits the vertex twice, the loop interiors once each
    int twice = 0, once = 0;
    for (const auto & f : faces)
        (f.darts.size() == 2 ? twice : once)++;
    CHECK(twice == 1);
    CHECK(once == 2);
}

TEST_CASE("single edge between two vertices") {
    PlaneGraph g(2, {{0, 1}}, {{0}, {1}});
    auto faces = trace_faces(g);
    REQUIRE(faces.size() == 1);
    CHECK(faces[0].vertex_walk == std::vector<int>{0, 1});
    CHECK(euler_characteristic(g) == 2);
}

TEST_CASE("figure 1(b) structure") {
    auto g = figure_1b_graph();
    CHECK(g.vertex_count() == 4);
    CHECK(g.edge_count() == 7);
    auto faces = trace_faces(g);
    REQUIRE(faces.size() == 5);
    CHECK(euler_characteristic(g) == 2);

    // boundary walks partition the darts and sum to 2|E|
    std::size_t total = 0;
    for (const auto & f : faces)
        total += f.darts.size();
    CHECK(total == 14);

    // triangle face: clockwise vertex walk is a cyclic rotation of x2 x3 x1
    auto & triangle = faces[2];
    CHECK(triangle.darts == std::vector<int>{2, 6, 5});
    CHECK(triangle.vertex_walk == std::vector<int>{0, 1, 2});
    CHECK(walk_from_anchor(g, triangle, 6) == std::vector<int>{1, 2, 0});

    // lens between the two x2-x3 edges reads x3 x2
    auto & lens = faces[3];
    CHECK(lens.darts == std::vector<int>{7, 8});
    CHECK(walk_from_anchor(g, lens, 7) == std::vector<int>{2, 1});
}

TEST_CASE("validate figure 1(b) instance") {
    auto inst = figure_1b_instance();
    auto report = validate_instance(inst);
    CHECK(report.ok());

    SUBCASE("reversed gamma3 scope is a boundary mismatch") {
        auto bad = inst;
        bad.constraints[2].scope = std::vector<int>{1, 2};
        auto r = validate_instance(bad);
        REQUIRE(! r.ok());
        CHECK(r.violations[0].find("boundary mismatch") != std::string::npos);
    }

    SUBCASE("two constraints on one face violate injectivity") {
        auto bad = inst;
        bad.constraints[3].anchor_dart = 8;  // same lens face as g3
        bad.constraints[3].scope = std::nullopt;
        auto r = validate_instance(bad);
        REQUIRE(! r.ok());
        CHECK(r.violations[0].find("already hosts") != std::string::npos);
    }

    SUBCASE("negative weight is rejected") {
        auto bad = inst;
        bad.constraints[0].weight = Rat(-1);
        CHECK(! validate_instance(bad).ok());
    }

    SUBCASE("arity mismatch is reported") {
        auto bad = inst;
        bad.constraints[0].anchor_dart = 7;  // unary relation on a binary face
        bad.constraints[0].scope = std::nullopt;
        bad.constraints[2].anchor_dart = 0;
        bad.constraints[2].scope = std::nullopt;
        CHECK(! validate_instance(bad).ok());
    }
}

TEST_CASE("solve figure 1(b)") {
    auto inst = figure_1b_instance();
    // brute-force oracle inline: enumerate all 16 assignments by hand using
    // objective_value, then compare with solve()
    ExtValue best = INF;
    Assignment besta;
    for (int a = 0; a < 16; ++a) {
        Assignment s{(a >> 3) & 1, (a >> 2) & 1, (a >> 1) & 1, a & 1};
        auto v = objective_value(inst, s);
        if (v < best) {
            best = v;
            besta = s;
        }
    }
    auto result = solve(inst);
    CHECK(result.optimum == best);
    REQUIRE(result.assignment);
    CHECK(*result.assignment == besta);
    // nae(x2,x3,x1) + cut(x3,x2) weight 1 + ...: assigning x1=0,x2=0,x3=1,x4=0
    // gives 2*0 + 0 + 0 + 0 = 0
    CHECK(result.optimum == ExtValue(0));
}

TEST_CASE("solve infeasible: nae on a triple self-loop walk") {
    // one vertex, three self-loops arranged so one face visits it three times
    PlaneGraph g(1, {{0, 1}, {2, 3}, {4, 5}}, {{0, 2, 3, 4, 5, 1}});
    auto faces = trace_faces(g);
    REQUIRE(faces.size() == 4);
    int walk3 = -1;
    for (const auto & f : faces)
        if (f.darts.size() == 3)
            walk3 = f.id;
    REQUIRE(walk3 >= 0);
    CHECK(faces[std::size_t(walk3)].vertex_walk == std::vector<int>{0, 0, 0});

    Language rels(2, {{"nae", cat::rho_nae()}});
    PlaneInstance inst{2, g, 0, {PlaneConstraint{"nae", Rat(1), faces[std::size_t(walk3)].darts[0], std::nullopt}}, rels};
    REQUIRE(validate_instance(inst).ok());
    auto result = solve(inst);
    CHECK(result.optimum == INF);
    CHECK(! result.assignment);
}

TEST_CASE("solve empty-constraint instance") {
    PlaneGraph g(2, {{0, 1}}, {{0}, {1}});
    Language rels(2, {{"unused", cat::gamma0()}});
    PlaneInstance inst{2, g, 0, {}, rels};
    auto result = solve(inst);
    CHECK(result.optimum == ExtValue(0));
    REQUIRE(result.assignment);
    CHECK(*result.assignment == Assignment{0, 0});
}

TEST_CASE("solve cap") {
    PlaneGraph g(2, {{0, 1}}, {{0}, {1}});
    Language rels(2, {{"u", cat::gamma0()}});
    PlaneInstance inst{2, g, 0, {}, rels};
    CHECK_THROWS_AS(solve(inst, 2), budget_error);
}

TEST_CASE("disconnected and malformed graphs are rejected") {
    CHECK(! PlaneGraph(2, {{0, 1}}, {{0, 1}, {}}).is_connected());   // isolated vertex
    CHECK_THROWS_AS(PlaneGraph(1, {{0, 0}}, {{0}}), error);          // twin of itself
    CHECK_THROWS_AS(PlaneGraph(1, {{0, 1}}, {{0}}), error);          // dangling dart
    PlaneGraph two_islands(2, {{0, 1}, {2, 3}}, {{0, 1}, {2, 3}});   // two separate loop vertices
    CHECK(! two_islands.is_connected());
    CHECK_THROWS_AS(trace_faces(two_islands), error);
}
