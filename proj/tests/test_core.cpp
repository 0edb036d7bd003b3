#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pvcsp/catalog.hpp>
#include <pvcsp/multimorphism.hpp>

#include <algorithm>
#include <random>

using namespace pvcsp;

namespace {

// Independent oracle: check the multimorphism inequality by direct nested
// enumeration over D^(k*r) input matrices, ignoring the library's feasible
// tuple machinery.
auto oracle_mm(const std::vector<OpTable> & ops, const WeightedRelation & g)
        -> std::pair<bool, bool> {  // (holds, with_equality)
    int k = int(ops.size());
    int r = g.arity();
    bool equality = true;
    auto total = table_size(g.domain_size(), k * r);
    for (std::size_t idx = 0; idx < total; ++idx) {
        auto flat = index_tuple(idx, g.domain_size(), k * r);
        std::vector<Tuple> xs;
        bool all_feasible = true;
        for (int i = 0; i < k; ++i) {
            Tuple t(flat.begin() + i * r, flat.begin() + (i + 1) * r);
            if (! g.feasible(t))
                all_feasible = false;
            xs.push_back(std::move(t));
        }
        if (! all_feasible)
            continue;
        ExtValue lhs(0), rhs(0);
        for (const auto & f : ops)
            lhs += g.evaluate(apply_componentwise(f, xs));
        for (const auto & t : xs)
            rhs += g.evaluate(t);
        if (rhs < lhs)
            return {false, false};
        if (lhs < rhs)
            equality = false;
    }
    return {true, equality};
}

auto oracle_project(const WeightedRelation & rho, int i, int j) -> WeightedRelation {
    auto result = WeightedRelation::empty(rho.domain_size(), 2);
    for (std::size_t idx = 0; idx < rho.size(); ++idx)
        if (rho[idx].is_finite()) {
            auto t = index_tuple(idx, rho.domain_size(), rho.arity());
            result.set({t[std::size_t(i - 1)], t[std::size_t(j - 1)]}, ExtValue(0));
        }
    return result;
}

auto oracle_2_decomposable(const WeightedRelation & rho) -> bool {
    int r = rho.arity();
    for (std::size_t idx = 0; idx < rho.size(); ++idx) {
        auto t = index_tuple(idx, rho.domain_size(), r);
        bool consistent = true;
        for (int i = 1; consistent && i <= r; ++i)
            for (int j = 1; consistent && j <= r; ++j)
                if (! oracle_project(rho, i, j).feasible({t[std::size_t(i - 1)], t[std::size_t(j - 1)]}))
                    consistent = false;
        if (consistent && rho[idx].is_infinite())
            return false;
    }
    return true;
}

auto random_crisp(std::mt19937 & rng, int domain_size, int arity) -> WeightedRelation {
    WeightedRelation g(domain_size, arity);
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t i = 0; i < g.size(); ++i)
        g.set(i, coin(rng) ? ExtValue(0) : INF);
    return g;
}

}

TEST_CASE("extended values") {
    CHECK(ExtValue(3) + INF == INF);
    CHECK(INF.scaled(0) == INF);
    CHECK(INF.scaled(Rat(7, 2)) == INF);
    CHECK(ExtValue(Rat(1, 2)) + ExtValue(Rat(1, 3)) == ExtValue(Rat(5, 6)));
    CHECK(ExtValue(5) < INF);
    CHECK(INF == INF);
    CHECK(! (INF < INF));
    CHECK(ExtValue::from_string("5/3").rational() == Rat(5, 3));
    CHECK(ExtValue::from_string("inf").is_infinite());
    CHECK(ExtValue(Rat(-7, 3)).to_string() == "-7/3");
    CHECK_THROWS_AS(ExtValue(1).scaled(-1), error);
    CHECK_THROWS_AS(parse_rat("1/0"), error);
}

TEST_CASE("evaluate") {
    auto cut = cat::gamma_cut();
    CHECK(cut.evaluate({0, 0}) == ExtValue(1));
    CHECK(cut.evaluate({0, 1}) == ExtValue(0));
    CHECK(cat::rho_nae().evaluate({1, 1, 1}) == INF);
    CHECK_THROWS_AS(cut.evaluate({0, 1, 0}), error);
    CHECK_THROWS_AS(cut.evaluate({0, 2}), error);
}

TEST_CASE("feas and opt") {
    auto cut = cat::gamma_cut();
    auto f = feas(cut);
    CHECK(f.is_crisp());
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(f[i] == ExtValue(0));
    CHECK(feas(cat::rho_nae()) == cat::rho_nae());
    auto all_inf = WeightedRelation::empty(2, 1);
    CHECK(feas(all_inf) == all_inf);
    CHECK(f == scale(cut, 0));

    CHECK(opt(cut) == cat::rho_neq());
    CHECK(opt(cat::gamma1()) == cat::rho1());
    CHECK(opt(cat::rho_nand()) == cat::rho_nand());
    CHECK(opt(all_inf) == all_inf);
}

TEST_CASE("scale and add_constant") {
    auto cut = cat::gamma_cut();
    auto z = scale(cut, 0);
    CHECK(z.evaluate({0, 0}) == ExtValue(0));
    CHECK(scale(cat::rho_nae(), 0) == cat::rho_nae());
    auto s = scale(cut, Rat(5, 3));
    CHECK(s.evaluate({0, 0}) == ExtValue(Rat(5, 3)));
    CHECK(s.evaluate({0, 1}) == ExtValue(0));
    CHECK_THROWS_AS(scale(cut, Rat(-1)), error);

    auto a = add_constant(cut, Rat(-1));
    CHECK(a.evaluate({0, 0}) == ExtValue(0));
    CHECK(a.evaluate({0, 1}) == ExtValue(-1));
    auto n = add_constant(cat::rho_nae(), Rat(7));
    CHECK(n.evaluate({0, 0, 1}) == ExtValue(7));
    CHECK(n.evaluate({0, 0, 0}) == INF);
    CHECK(add_constant(cut, 0) == cut);
}

TEST_CASE("apply_componentwise") {
    CHECK(apply_componentwise(cat::min2(), {{0, 1}, {1, 0}}) == Tuple{0, 0});
    CHECK(apply_componentwise(cat::mnrt(), {{0, 1}, {0, 1}, {1, 0}}) == Tuple{1, 0});
    auto e32 = OpTable::projection(2, 3, 2);
    CHECK(apply_componentwise(e32, {{0, 0}, {1, 0}, {1, 1}}) == Tuple{1, 0});
    CHECK_THROWS_AS(apply_componentwise(cat::min2(), {{0, 1}}), error);
}

TEST_CASE("is_polymorphism") {
    auto neq_lang = cat::lang_neq();
    auto v = is_polymorphism(cat::min2(), neq_lang);
    REQUIRE(std::holds_alternative<PolyFails>(v));
    auto fails = std::get<PolyFails>(v);
    auto image = apply_componentwise(cat::min2(), fails.witness);
    CHECK(! neq_lang.at(0).feasible(image));

    for (int i = 1; i <= 2; ++i)
        CHECK(std::holds_alternative<PolyHolds>(is_polymorphism(OpTable::projection(2, 2, i), cat::lang_is())));

    CHECK(std::holds_alternative<PolyHolds>(is_polymorphism(cat::mnrt(), neq_lang)));
}

TEST_CASE("is_multimorphism") {
    auto cut_lang = cat::lang_cut();
    auto v = is_multimorphism(MultimorphismCandidate("minmax", {cat::min2(), cat::max2()}), cut_lang);
    REQUIRE(std::holds_alternative<MmFails>(v));

    auto neg_v = is_multimorphism(MultimorphismCandidate("neg", {cat::neg()}), cut_lang);
    CHECK(holds_with_equality(neg_v));

    auto imp_v = is_multimorphism(MultimorphismCandidate("minmax", {cat::min2(), cat::max2()}), cat::lang_imp());
    CHECK(holds(imp_v));
    CHECK(! holds_with_equality(imp_v));

    // cross-check against the independent oracle on the catalog
    for (const auto & g : {cat::gamma_cut(), cat::gamma_imp(), cat::rho_nand(), cat::rho_nae(), cat::gamma0()}) {
        Language lang(2, {{"g", g}});
        for (const auto & ops : std::vector<std::vector<OpTable>>{
                 {cat::min2(), cat::max2()},
                 {cat::min2(), cat::min2()},
                 {cat::mjrt(), cat::mjrt(), cat::mnrt()},
                 {cat::neg()},
                 {cat::c0()}}) {
            auto got = is_multimorphism(MultimorphismCandidate("x", ops), lang);
            auto [h, eq] = oracle_mm(ops, g);
            CHECK(holds(got) == h);
            if (h)
                CHECK(holds_with_equality(got) == eq);
        }
    }
}

TEST_CASE("multimorphism budget") {
    auto nae = cat::lang_nae();
    CHECK_THROWS_AS(is_multimorphism(
            MultimorphismCandidate("mjn", {cat::mjrt(), cat::mjrt(), cat::mnrt()}), nae, 10),
        budget_error);
}

TEST_CASE("identity projection tuple is an equality multimorphism") {
    for (const auto & lang : {cat::lang_cut(), cat::lang_is(), cat::lang_nae(), cat::lang_imp()}) {
        for (int k = 1; k <= 3; ++k) {
            std::vector<OpTable> ops;
            for (int i = 1; i <= k; ++i)
                ops.push_back(OpTable::projection(2, k, i));
            CHECK(holds_with_equality(is_multimorphism(MultimorphismCandidate("id", ops), lang)));
        }
    }
}

TEST_CASE("diagonal multimorphism matches polymorphism on crisp relations") {
    std::mt19937 rng(20260809);
    std::vector<OpTable> candidates{cat::min2(), cat::max2(), cat::mnrt(), cat::mjrt(),
            OpTable::projection(2, 2, 1), cat::neg(), cat::c0(), cat::c1()};
    for (int trial = 0; trial < 200; ++trial) {
        int arity = 1 + int(rng() % 3);
        auto rho = random_crisp(rng, 2, arity);
        Language lang(2, {{"r", rho}});
        for (const auto & f : candidates) {
            std::vector<OpTable> copies(std::size_t(f.arity()), f);
            auto mm = is_multimorphism(MultimorphismCandidate("diag", copies), lang);
            auto poly = is_polymorphism(f, lang);
            CHECK(holds(mm) == std::holds_alternative<PolyHolds>(poly));
        }
    }
}

TEST_CASE("project") {
    auto p12 = project(cat::rho_one_in_three(), 1, 2);
    CHECK(p12 == WeightedRelation::crisp(2, 2, {{0, 0}, {0, 1}, {1, 0}}));
    CHECK(project(cat::rho_cross(), 1, 3) == cat::rho_eq());
    CHECK(project(cat::rho_nand(), 1, 2) == cat::rho_nand());
    CHECK_THROWS_AS(project(cat::rho_nand(), 0, 2), error);
    CHECK_THROWS_AS(project(cat::gamma_cut(), 1, 2), error);
}

TEST_CASE("2-decomposability") {
    CHECK(std::holds_alternative<Decomposable>(is_2_decomposable(cat::rho_nand())));
    CHECK(std::holds_alternative<Decomposable>(is_2_decomposable(cat::rho0())));
    auto v = is_2_decomposable(cat::rho_one_in_three());
    REQUIRE(std::holds_alternative<NotDecomposable>(v));
    CHECK(std::get<NotDecomposable>(v).witness == Tuple{0, 0, 0});
    CHECK(std::holds_alternative<Decomposable>(is_2_decomposable(cat::rho_cross())));
}

TEST_CASE("project and decomposability agree with brute force") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        int domain = 2 + int(rng() % 2);
        int arity = 1 + int(rng() % 4);
        auto rho = random_crisp(rng, domain, arity);
        if (arity >= 2) {
            int i = 1 + int(rng() % arity), j = 1 + int(rng() % arity);
            CHECK(project(rho, i, j) == oracle_project(rho, i, j));
        }
        CHECK(std::holds_alternative<Decomposable>(is_2_decomposable(rho)) == oracle_2_decomposable(rho));
    }
}

TEST_CASE("catalog") {
    int zeros = 0;
    for (std::size_t i = 0; i < cat::rho_one_in_three().size(); ++i)
        if (cat::rho_one_in_three()[i].is_finite())
            ++zeros;
    CHECK(zeros == 3);
    CHECK(cat::gamma_neq().evaluate({0, 0}) == ExtValue(1));
    CHECK(cat::gamma_neq().evaluate({0, 1}) == ExtValue(0));
    CHECK(cat::mjrt().apply({0, 0, 1}) == 0);
    CHECK(cat::mnrt().apply({0, 0, 1}) == 1);
    CHECK(cat::neg().apply({1}) == 0);
    CHECK(cat::min2().is_conservative());
    CHECK(! cat::c0().is_conservative());
    CHECK(cat::gamma_col(3).evaluate({2, 2}) == INF);
    CHECK(cat::gamma_col(3).evaluate({2, 1}) == ExtValue(0));
}

TEST_CASE("feas/opt invariants under scaling and shifting") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> val(0, 3);
    for (int trial = 0; trial < 200; ++trial) {
        int arity = 1 + int(rng() % 3);
        WeightedRelation g(2, arity);
        for (std::size_t i = 0; i < g.size(); ++i) {
            int v = val(rng);
            g.set(i, v == 3 ? INF : ExtValue(v));
        }
        Rat c(int(rng() % 5), 1 + int(rng() % 3));
        CHECK(feas(scale(g, c)) == feas(g));
        if (sgn(c) > 0)
            CHECK(opt(scale(g, c)) == opt(g));
        Rat d(int(rng() % 9) - 4, 1 + int(rng() % 3));
        CHECK(opt(add_constant(g, d)) == opt(g));
    }
}
