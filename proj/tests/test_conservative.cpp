#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pvcsp/catalog.hpp>
#include <pvcsp/classify_conservative.hpp>
#include <pvcsp/express.hpp>

using namespace pvcsp;

namespace {

auto cons_budget() -> SaturationBudget {
    return {3, 5, 1500, 40'000};
}

}

TEST_CASE("pair graph for the cut language has a soft self-loop") {
    auto s = saturate(cat::lang_cut(), cons_budget(), true);
    auto g = build_pair_graph(s);
    CHECK(g.has_soft_self_loop({0, 1}));
    auto loop = detect_soft_self_loop(g, s);
    REQUIRE(loop);
    CHECK(loop->vertex == PairVertex{0, 1});
    // the defining inequality 0 + 0 < 1 + 1
    CHECK(loop->witness.P + loop->witness.Q == ExtValue(0));
    CHECK(loop->witness.A + loop->witness.B == ExtValue(2));
    // the bundled soft-form relation has the three-tuple shape
    CHECK(loop->loop_relation.is_crisp());
    CHECK(loop->loop_relation.feasible_tuples().size() == 3);
    CHECK(replay(loop->derivation, cat::lang_cut()) == loop->loop_relation);
}

TEST_CASE("pair graph for the disequality language has hard loops only") {
    auto s = saturate(cat::lang_neq(), cons_budget(), true);
    auto g = build_pair_graph(s);
    CHECK(g.has_self_loop({0, 1}));
    CHECK(g.has_self_loop({1, 0}));
    CHECK(! g.has_soft_self_loop({0, 1}));
    CHECK(! g.has_soft_self_loop({1, 0}));
    CHECK(! detect_soft_self_loop(g, s));

    auto split = split_and_bipartition(g);
    REQUIRE(std::holds_alternative<Bipartition>(split));
    auto & bip = std::get<Bipartition>(split);
    CHECK(bip.M.empty());
    CHECK(bip.barM.size() == 2);
}

TEST_CASE("pair graph for gamma_imp: a single hard edge between the loopless pairs") {
    auto s = saturate(cat::lang_imp(), cons_budget(), true);
    auto g = build_pair_graph(s);
    CHECK(! g.has_self_loop({0, 1}));
    CHECK(! g.has_self_loop({1, 0}));
    CHECK(g.has_edge({0, 1}, {1, 0}));
    CHECK(! detect_soft_self_loop(g, s));

    auto split = split_and_bipartition(g);
    REQUIRE(std::holds_alternative<Bipartition>(split));
    auto & bip = std::get<Bipartition>(split);
    CHECK(bip.M.size() == 2);
    CHECK(bip.M1 == std::vector<PairVertex>{{0, 1}});
    CHECK(bip.M2 == std::vector<PairVertex>{{1, 0}});

    auto stp = build_stp(bip, 2);
    CHECK(stp.ops[0] == cat::min2());
    CHECK(stp.ops[1] == cat::max2());
}

TEST_CASE("equality language on three labels: all six pairs loopless") {
    Language lang(3, {{"eq", cat::rho_eq(3)}});
    auto s = saturate(lang, {3, 4, 2500, 40'000}, true);
    auto g = build_pair_graph(s);
    auto split = split_and_bipartition(g);
    REQUIRE(std::holds_alternative<Bipartition>(split));
    auto & bip = std::get<Bipartition>(split);
    CHECK(bip.M.size() == 6);
    CHECK(bip.barM.empty());
    for (const auto & v : bip.M) {
        bool v1 = bip.in_M1(v);
        bool r1 = bip.in_M1(v.reversed());
        CHECK(v1 != r1);
    }
}

TEST_CASE("ab_c on the three-label witness language") {
    // chi = {(0,0),(1,0),(2,1)}, delta = {(0,1),(1,0)}: delta yields a hard
    // self-loop at (0,1), chi then witnesses 01|2
    Language lang(3, {
        {"chi", WeightedRelation::crisp(3, 2, {{0, 0}, {1, 0}, {2, 1}})},
        {"delta", WeightedRelation::crisp(3, 2, {{0, 1}, {1, 0}})},
    });
    auto s = saturate(lang, {3, 4, 4000, 60'000}, true);
    auto g = build_pair_graph(s);
    CHECK(g.has_self_loop({0, 1}));

    std::vector<PairVertex> barM;
    for (const auto & v : g.vertices())
        if (g.has_self_loop(v))
            barM.push_back(v);
    CHECK(ab_c(0, 1, 2, s, barM));
    CHECK(! ab_c(0, 2, 1, s, barM));
    CHECK(! ab_c(1, 2, 0, s, barM));
}

TEST_CASE("mjn on the disequality language") {
    auto s = saturate(cat::lang_neq(), cons_budget(), true);
    auto g = build_pair_graph(s);
    auto bip = std::get<Bipartition>(split_and_bipartition(g));
    auto mjn = build_mjn(bip, s, 2);
    // on (x,x,z) with x != z, case 14a forces the minority output
    CHECK(mjn.ops[0].apply({0, 0, 1}) == 0);
    CHECK(mjn.ops[1].apply({0, 0, 1}) == 0);
    CHECK(mjn.ops[2].apply({0, 0, 1}) == 1);
    // all-equal triples pass through
    CHECK(mjn.ops[2].apply({1, 1, 1}) == 1);
}

TEST_CASE("classify_conservative verdicts") {
    SUBCASE("cut is planarly intractable") {
        auto v = classify_conservative(cat::lang_cut(), cons_budget());
        REQUIRE(std::holds_alternative<ConsPlanarlyIntractable>(v));
        auto & pi = std::get<ConsPlanarlyIntractable>(v);
        CHECK(pi.loop.vertex == PairVertex{0, 1});
    }
    SUBCASE("gamma_imp is tractable with an empty looped part") {
        auto v = classify_conservative(cat::lang_imp(), cons_budget());
        REQUIRE(std::holds_alternative<ConsTractable>(v));
        auto & t = std::get<ConsTractable>(v);
        CHECK(t.bipartition.barM.empty());
        CHECK(t.stp.ops[0] == cat::min2());
        CHECK(t.stp.ops[1] == cat::max2());
        CHECK(t.mjn_equality);
    }
    SUBCASE("disequality is tractable via the mjn") {
        auto v = classify_conservative(cat::lang_neq(), cons_budget());
        REQUIRE(std::holds_alternative<ConsTractable>(v));
        auto & t = std::get<ConsTractable>(v);
        CHECK(t.bipartition.M.empty());
        CHECK(t.mjn_equality);
        CHECK(holds_with_equality(is_multimorphism(t.mjn, cat::lang_neq())));
    }
}

TEST_CASE("lemma 4.10 modularity spot check") {
    // for languages without a soft self-loop: whenever all four combined
    // tuples are feasible and every I-coordinate pair is looped, the
    // exchange holds with equality
    for (auto lang : {cat::lang_neq(), cat::lang_imp()}) {
        auto s = saturate(lang, cons_budget(), true);
        auto g = build_pair_graph(s);
        REQUIRE(! detect_soft_self_loop(g, s));
        std::vector<PairVertex> barM;
        for (const auto & v : g.vertices())
            if (g.has_self_loop(v))
                barM.push_back(v);
        auto in_barM = [&](Label a, Label b) {
            return std::find(barM.begin(), barM.end(), PairVertex{a, b}) != barM.end();
        };
        for (std::size_t ri = 0; ri < lang.size(); ++ri) {
            const auto & gamma = lang.at(ri);
            int r = gamma.arity();
            auto feas_tuples = gamma.feasible_tuples();
            for (const auto & x : feas_tuples)
                for (const auto & y : feas_tuples)
                    for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << r); ++mask) {
                        std::vector<bool> in_I(std::size_t(r), false);
                        bool all_looped = true;
                        for (int c = 0; c < r; ++c) {
                            in_I[std::size_t(c)] = mask & (std::size_t(1) << c);
                            if (in_I[std::size_t(c)] && x[std::size_t(c)] != y[std::size_t(c)]
                                    && ! in_barM(x[std::size_t(c)], y[std::size_t(c)]))
                                all_looped = false;
                        }
                        if (! all_looped)
                            continue;
                        auto xy = combine(x, y, in_I);
                        auto yx = combine(y, x, in_I);
                        if (! gamma.feasible(xy) || ! gamma.feasible(yx))
                            continue;
                        CHECK(gamma.evaluate(x) + gamma.evaluate(y)
                                == gamma.evaluate(xy) + gamma.evaluate(yx));
                    }
        }
    }
}

TEST_CASE("2-decomposability of crisp members without a soft self-loop") {
    // Lemma 4.6 on conservative corpora over small domains
    std::vector<Language> corpora{
        cat::lang_imp(),
        cat::lang_neq(),
        Language(3, {{"eq", cat::rho_eq(3)}}),
    };
    for (const auto & lang : corpora) {
        auto s = saturate(lang, {3, 4, 1200, 25'000}, true);
        auto g = build_pair_graph(s);
        REQUIRE(! detect_soft_self_loop(g, s));
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.entry(i).rel.is_crisp())
                CHECK(std::holds_alternative<Decomposable>(is_2_decomposable(s.entry(i).rel)));
    }
}
