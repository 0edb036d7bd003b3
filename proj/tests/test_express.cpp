#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pvcsp/catalog.hpp>
#include <pvcsp/express.hpp>
#include <pvcsp/realize.hpp>

#include <random>

using namespace pvcsp;

namespace {

auto random_relation(std::mt19937 & rng, int domain, int arity) -> WeightedRelation {
    // values in {0, 1, 2, inf}
    WeightedRelation g(domain, arity);
    std::uniform_int_distribution<int> val(0, 3);
    for (std::size_t i = 0; i < g.size(); ++i) {
        int v = val(rng);
        g.set(i, v == 3 ? INF : ExtValue(v));
    }
    return g;
}

// realize + pi_v must reproduce the replayed table exactly (no interior Opt
// in these derivations)
auto check_realize(const DerivPtr & d, const Language & base) -> void {
    auto expected = replay(d, base);
    auto r = realize(d, base);
    REQUIRE(! r.inner_opt_scaling);
    auto got = r.recover();
    CHECK(got == expected);
}

}

TEST_CASE("restriction table semantics") {
    // eq-restrict nae at 1 then minimise coordinate 1 gives disequality
    auto step = apply_minimise(apply_eq_restrict(cat::rho_nae(), 1), 1);
    CHECK(step == cat::rho_neq());

    auto pinned = apply_pin(cat::gamma_cut(), 1, 0);
    CHECK(pinned.evaluate({0}) == ExtValue(1));
    CHECK(pinned.evaluate({1}) == ExtValue(0));

    auto restricted = apply_domain_restriction(cat::gamma_cut(), 1, {0});
    CHECK(restricted.evaluate({1, 0}) == INF);
    CHECK(restricted.evaluate({0, 0}) == ExtValue(1));

    CHECK(apply_minimise(cat::gamma_cut(), 2) == WeightedRelation(2, 1));
    CHECK(apply_join(cat::rho_eq(), cat::rho_eq(), false, false) == cat::rho_eq());
}

TEST_CASE("join of two three-tuple relations, shared first coordinates") {
    // rho1 = {(c,s1),(a,s1),(b,t1)}, rho2 = {(b,s2),(c,s2),(a,t2)} with
    // a,b,c,s,t as 0,1,2,3,4; the join on the shared first coordinate is
    // {(s,s),(s,t),(t,s)}
    auto rho1 = WeightedRelation::crisp(5, 2, {{2, 3}, {0, 3}, {1, 4}});
    auto rho2 = WeightedRelation::crisp(5, 2, {{1, 3}, {2, 3}, {0, 4}});
    auto joined = apply_join(rho1, rho2, true, false);
    CHECK(joined == WeightedRelation::crisp(5, 2, {{3, 3}, {3, 4}, {4, 3}}));
}

TEST_CASE("twist table semantics") {
    auto t = apply_twist(cat::rho_nae(), 1);
    CHECK(t.evaluate({0, 1, 1}) == INF);
    CHECK(t.evaluate({1, 0, 0}) == INF);
    CHECK(t.evaluate({0, 0, 0}) == ExtValue(0));
    CHECK(t.evaluate({1, 1, 1}) == ExtValue(0));
    CHECK(apply_twist(apply_twist(cat::gamma_imp(), 1), 1) == cat::gamma_imp());
    CHECK(apply_twist(cat::gamma0(), 1) == cat::gamma1());
    CHECK_THROWS_AS(apply_twist(cat::gamma_col(3), 1), error);
}

TEST_CASE("fan table semantics matches the star") {
    auto cut = cat::gamma_cut();
    auto fanned = apply_fan({cut, cut, cut}, {false, false, false});
    for (std::size_t i = 0; i < fanned.size(); ++i) {
        auto t = index_tuple(i, 2, 3);
        bool all_equal = t[0] == t[1] && t[1] == t[2];
        CHECK(fanned[i] == (all_equal ? ExtValue(0) : ExtValue(1)));
    }
}

TEST_CASE("tuple kit") {
    CHECK(tuple_xor({0, 1, 1}, {1, 1, 0}) == Tuple{1, 0, 1});
    CHECK(tuple_negate({0, 1}) == Tuple{1, 0});
    CHECK(unit_tuple(3, 2) == Tuple{0, 1, 0});
    CHECK(tuple_negate(unit_tuple(2, 1)) == tuple_xor(ones(2), unit_tuple(2, 1)));
}

TEST_CASE("pi_v: two self-loops express equality") {
    Language base(2, {{"cut", cat::gamma_cut()}});
    auto r = realize(deriv::equality(2), base);
    CHECK(r.instance.graph.vertex_count() == 1);
    CHECK(r.instance.graph.edge_count() == 2);
    CHECK(pi_v(r.query()) == cat::rho_eq());
}

TEST_CASE("pi_v: identity wrap returns the relation") {
    std::mt19937 rng(11);
    for (int arity = 1; arity <= 4; ++arity) {
        auto g = random_relation(rng, 2, arity);
        Language base(2, {{"g", g}});
        check_realize(deriv::base("g"), base);
    }
}

TEST_CASE("pi_v: example 2.4 star") {
    Language base(2, {{"cut", cat::gamma_cut()}});
    auto star = deriv::fan({deriv::base("cut"), deriv::base("cut"), deriv::base("cut")},
            {false, false, false});
    auto r = realize(star, base);
    CHECK(r.instance.graph.vertex_count() == 4);
    CHECK(r.instance.graph.edge_count() == 9);
    CHECK(validate_instance(r.instance).ok());
    auto rho = pi_v(r.query());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        auto t = index_tuple(i, 2, 3);
        bool all_equal = t[0] == t[1] && t[1] == t[2];
        CHECK(rho[i] == (all_equal ? ExtValue(0) : ExtValue(1)));
    }
}

TEST_CASE("pi_v rejects bad queries") {
    Language base(2, {{"cut", cat::gamma_cut()}});
    auto r = realize(deriv::base("cut"), base);
    auto q = r.query();
    q.v = {q.v[1], q.v[0]};  // reversed tuple: walk reads the wrong order? no
    // reversing both coordinates of a binary keeps the cyclic match, so use
    // a wrong-length tuple instead
    q.v.push_back(q.v[0]);
    CHECK_THROWS_AS(pi_v(q), error);

    auto q2 = r.query();
    q2.instance.constraints[0].anchor_dart = q2.instance.graph.twin(q2.instance.constraints[0].anchor_dart);
    CHECK_THROWS_AS(pi_v(q2), error);  // constraint moved onto the outer face
}

TEST_CASE("realize: single operations agree with table semantics") {
    std::mt19937 rng(20260809);
    Language aux(2, {{"neq", cat::rho_neq()}, {"g0", cat::gamma0()}});
    int cases = 0;
    while (cases < 60) {
        int arity = 1 + int(rng() % 3);
        auto g = random_relation(rng, 2, arity);
        auto mu = random_relation(rng, 2, 1);
        auto beta = random_relation(rng, 2, 2);
        Language base(2, {{"g", g}, {"beta", beta}, {"neq", cat::rho_neq()}});
        auto bg = deriv::base("g");
        int coord = 1 + int(rng() % arity);

        check_realize(deriv::add_unary(bg, deriv::unary(mu), coord), base);
        if (arity >= 2) {
            check_realize(deriv::add_binary(bg, deriv::base("beta"), coord), base);
            check_realize(deriv::minimise(bg, coord), base);
            check_realize(deriv::eq_restrict(bg, coord), base);
            check_realize(deriv::neq_restrict(bg, coord, deriv::base("neq")), base);
        }
        check_realize(deriv::twist(bg, coord, deriv::base("neq")), base);
        check_realize(deriv::restrict_domain(bg, coord, {Label(rng() % 2)}), base);
        if (arity >= 2)
            check_realize(deriv::pin(bg, coord, Label(rng() % 2), nullptr), base);
        check_realize(deriv::scale_node(bg, Rat(int(rng() % 4), 1 + int(rng() % 3))), base);
        check_realize(deriv::add_const_node(bg, Rat(int(rng() % 7) - 3)), base);
        check_realize(deriv::feas_node(bg), base);
        ++cases;
    }
}

TEST_CASE("realize: join and fan against table semantics") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = random_relation(rng, 2, 2);
        auto b = random_relation(rng, 2, 2);
        auto c = random_relation(rng, 2, 2);
        Language base(2, {{"a", a}, {"b", b}, {"c", c}});
        bool f1 = rng() % 2, f2 = rng() % 2, f3 = rng() % 2;
        check_realize(deriv::join(deriv::base("a"), deriv::base("b"), f1, f2), base);
        check_realize(deriv::fan({deriv::base("a"), deriv::base("b"), deriv::base("c")}, {f1, f2, f3}), base);
    }
}

TEST_CASE("realize: random derivation trees agree with replay") {
    std::mt19937 rng(99);
    Language base(2, {
        {"cut", cat::gamma_cut()},
        {"nand", cat::rho_nand()},
        {"imp", cat::gamma_imp()},
        {"g1", cat::gamma1()},
        {"neq", cat::rho_neq()},
    });
    std::vector<std::string> names{"cut", "nand", "imp", "g1", "neq"};

    std::function<DerivPtr(int)> gen = [&](int depth) -> DerivPtr {
        auto leaf = [&]() -> DerivPtr {
            switch (rng() % 4) {
                case 0: return deriv::equality(2);
                case 1: return deriv::top(2, 2 + int(rng() % 2));
                default: return deriv::base(names[rng() % names.size()]);
            }
        };
        if (depth == 0)
            return leaf();
        auto child = gen(depth - 1);
        int arity = int(replay(child, base).arity());
        int coord = 1 + int(rng() % arity);
        switch (rng() % 9) {
            case 0: return deriv::add_unary(child, deriv::unary(random_relation(rng, 2, 1)), coord);
            case 1:
                if (arity >= 2)
                    return deriv::add_binary(child, deriv::base("imp"), coord);
                return child;
            case 2:
                if (arity >= 2)
                    return deriv::minimise(child, coord);
                return child;
            case 3:
                if (arity >= 2)
                    return deriv::eq_restrict(child, coord);
                return child;
            case 4: return deriv::twist(child, coord, deriv::base("neq"));
            case 5: return deriv::restrict_domain(child, coord, {Label(rng() % 2)});
            case 6: return deriv::scale_node(child, Rat(1 + int(rng() % 3), 2));
            case 7: return deriv::add_const_node(child, Rat(int(rng() % 5) - 2));
            default:
                if (arity == 2) {
                    auto other = gen(depth - 1);
                    if (replay(other, base).arity() == 2)
                        return deriv::join(child, other, rng() % 2, rng() % 2);
                }
                return child;
        }
    };

    int done = 0;
    while (done < 120) {
        auto d = gen(1 + int(rng() % 3));
        if (derivation_depth(d) > 4)
            continue;
        check_realize(d, base);
        ++done;
    }
}

TEST_CASE("realize: root Opt is a residual certificate") {
    Language base(2, {{"cut", cat::gamma_cut()}});
    auto d = deriv::opt_node(deriv::base("cut"));
    auto r = realize(d, base);
    CHECK(r.opt_pending);
    CHECK(! r.inner_opt_scaling);
    CHECK(r.recover() == cat::rho_neq());
}

TEST_CASE("realize: interior Opt via scaling") {
    Language base(2, {{"cut", cat::gamma_cut()}, {"g0", cat::gamma0()}});
    // twist of g0 needs the disequality relation, derived as Opt(cut):
    // an interior Opt under a Twist node
    auto neq = deriv::opt_node(deriv::base("cut"));
    auto d = deriv::twist(deriv::base("g0"), 1, neq);
    auto expected = replay(d, base);
    CHECK(expected == cat::gamma1());
    auto r = realize(d, base);
    CHECK(r.inner_opt_scaling);
    auto got = r.recover();
    // exact on the finite range; infinite entries may be large finite
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (expected[i].is_finite())
            CHECK(got[i] == expected[i]);
    CHECK(opt(got) == opt(expected));
}

TEST_CASE("realize: interior Opt inside a larger gadget keeps optima") {
    // soft nand (0 on nand tuples, 1 on (1,1)); its Opt is the crisp
    // {(0,0),(0,1),(1,0)}, used as an interior Opt on each triangle edge
    WeightedRelation soft_nand(2, 2);
    soft_nand.set({1, 1}, ExtValue(1));
    Language base(2, {{"nands", soft_nand}, {"g1", cat::gamma1()}});
    auto up = deriv::opt_node(deriv::base("nands"));
    auto tri = deriv::add_binary(deriv::add_binary(deriv::add_binary(
            deriv::top(2, 3), up, 1), up, 2), up, 3);
    auto with_unaries = deriv::add_unary(deriv::add_unary(deriv::add_unary(
            tri, deriv::base("g1"), 1), deriv::base("g1"), 2), deriv::base("g1"), 3);
    auto d = deriv::opt_node(with_unaries);
    CHECK(replay(d, base) == cat::rho_one_in_three());
    auto r = realize(d, base);
    CHECK(r.inner_opt_scaling);
    CHECK(r.recover() == cat::rho_one_in_three());
}

TEST_CASE("opt_by_scaling agrees with direct Opt substitution") {
    // star instance with one cut constraint replaced by Opt(cut)
    Language base(2, {{"cut", cat::gamma_cut()}});
    auto star = deriv::fan({deriv::base("cut"), deriv::base("cut"), deriv::base("cut")},
            {false, false, false});
    auto r = realize(star, base);

    auto with_opt = r.instance;
    auto rels = with_opt.relations.relations();
    rels.emplace_back("opt_cut", opt(cat::gamma_cut()));
    with_opt.relations = Language(2, std::move(rels));
    with_opt.constraints[0].relation = "opt_cut";

    auto scaled = opt_by_scaling(r.instance, 0);
    REQUIRE(validate_instance(scaled).ok());

    // compare optima over every boundary labeling via pinning unary
    // constraints is overkill here: the instances are tiny, compare full
    // solve results and per-assignment ordering
    auto a = solve(with_opt);
    auto b = solve(scaled);
    REQUIRE(a.assignment);
    REQUIRE(b.assignment);
    CHECK(*a.assignment == *b.assignment);

    // exhaustive: the argmin sets coincide
    std::vector<Assignment> opta, optb;
    for (int x = 0; x < 16; ++x) {
        Assignment s{(x >> 3) & 1, (x >> 2) & 1, (x >> 1) & 1, x & 1};
        if (objective_value(with_opt, s) == a.optimum)
            opta.push_back(s);
    }
    for (int x = 0; x < 16; ++x) {
        Assignment s{(x >> 3) & 1, (x >> 2) & 1, (x >> 1) & 1, x & 1};
        if (objective_value(scaled, s) == b.optimum)
            optb.push_back(s);
    }
    CHECK(opta == optb);
}

TEST_CASE("minimise with a zero unary is neutral") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        int arity = 2 + int(rng() % 2);
        auto g = random_relation(rng, 2, arity);
        int coord = 1 + int(rng() % arity);
        auto zero_unary = WeightedRelation(2, 1);
        CHECK(apply_minimise(apply_add_unary(g, zero_unary, coord), coord) == apply_minimise(g, coord));
    }
}

TEST_CASE("join is associative on crisp bijections") {
    // permutation relations over |D| <= 3, checked by enumeration
    for (int d = 2; d <= 3; ++d) {
        std::vector<std::vector<int>> perms;
        std::vector<int> p(std::size_t(d), 0);
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] = int(i);
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        auto rel_of = [&](const std::vector<int> & perm) {
            std::vector<Tuple> tuples;
            for (int a = 0; a < d; ++a)
                tuples.push_back({a, perm[std::size_t(a)]});
            return WeightedRelation::crisp(d, 2, tuples);
        };
        for (const auto & p1 : perms)
            for (const auto & p2 : perms)
                for (const auto & p3 : perms) {
                    auto r1 = rel_of(p1), r2 = rel_of(p2), r3 = rel_of(p3);
                    auto left = apply_join(apply_join(r1, r2, false, false), r3, false, false);
                    auto right = apply_join(r1, apply_join(r2, r3, false, false), false, false);
                    CHECK(left == right);
                }
    }
}
