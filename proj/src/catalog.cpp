#include <pvcsp/catalog.hpp>

namespace pvcsp::cat {

namespace {

auto soft(const WeightedRelation & rho) -> WeightedRelation {
    // 0 on allowed tuples, 1 on disallowed
    std::vector<ExtValue> table;
    table.reserve(rho.size());
    for (const auto & v : rho.table())
        table.push_back(v.is_finite() ? ExtValue(0) : ExtValue(1));
    return WeightedRelation(rho.domain_size(), rho.arity(), std::move(table));
}

}

auto rho0() -> WeightedRelation { return WeightedRelation::crisp(2, 1, {{0}}); }
auto rho1() -> WeightedRelation { return WeightedRelation::crisp(2, 1, {{1}}); }

auto rho_eq(int domain_size) -> WeightedRelation {
    auto result = WeightedRelation::empty(domain_size, 2);
    for (Label a = 0; a < domain_size; ++a)
        result.set({a, a}, ExtValue(0));
    return result;
}

auto rho_neq() -> WeightedRelation { return WeightedRelation::crisp(2, 2, {{0, 1}, {1, 0}}); }

auto rho_one_in_three() -> WeightedRelation {
    return WeightedRelation::crisp(2, 3, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
}

auto rho_nae() -> WeightedRelation {
    auto result = WeightedRelation::crisp(2, 3, {});
    for (std::size_t i = 0; i < result.size(); ++i)
        result.set(i, ExtValue(0));
    result.set({0, 0, 0}, INF);
    result.set({1, 1, 1}, INF);
    return result;
}

auto rho_cross() -> WeightedRelation {
    return WeightedRelation::crisp(2, 4, {{0, 0, 0, 0}, {0, 1, 0, 1}, {1, 0, 1, 0}, {1, 1, 1, 1}});
}

auto rho_nand() -> WeightedRelation {
    return WeightedRelation::crisp(2, 2, {{0, 0}, {0, 1}, {1, 0}});
}

auto gamma0() -> WeightedRelation { return soft(rho0()); }
auto gamma1() -> WeightedRelation { return soft(rho1()); }
auto gamma_neq() -> WeightedRelation { return soft(rho_neq()); }
auto gamma_cut() -> WeightedRelation { return gamma_neq(); }

auto gamma_imp() -> WeightedRelation {
    WeightedRelation g(2, 2);
    g.set({1, 0}, ExtValue(1));
    return g;
}

auto gamma_col(int domain_size) -> WeightedRelation {
    auto result = WeightedRelation::empty(domain_size, 2);
    for (Label a = 0; a < domain_size; ++a)
        for (Label b = 0; b < domain_size; ++b)
            if (a != b)
                result.set({a, b}, ExtValue(0));
    return result;
}

auto c0() -> OpTable { return OpTable::constant(2, 0); }
auto c1() -> OpTable { return OpTable::constant(2, 1); }
auto neg() -> OpTable { return OpTable(2, 1, {1, 0}); }
auto min2() -> OpTable { return OpTable(2, 2, {0, 0, 0, 1}); }
auto max2() -> OpTable { return OpTable(2, 2, {0, 1, 1, 1}); }

auto mnrt() -> OpTable {
    std::vector<Label> table(8);
    for (std::size_t i = 0; i < 8; ++i) {
        auto t = index_tuple(i, 2, 3);
        table[i] = t[0] ^ t[1] ^ t[2];
    }
    return OpTable(2, 3, std::move(table));
}

auto mjrt() -> OpTable {
    std::vector<Label> table(8);
    for (std::size_t i = 0; i < 8; ++i) {
        auto t = index_tuple(i, 2, 3);
        table[i] = (t[0] + t[1] + t[2] >= 2) ? 1 : 0;
    }
    return OpTable(2, 3, std::move(table));
}

auto lang_cut() -> Language { return Language(2, {{"cut", gamma_cut()}}); }
auto lang_nae() -> Language { return Language(2, {{"nae", rho_nae()}}); }
auto lang_is() -> Language { return Language(2, {{"nand", rho_nand()}, {"one_minus_x", gamma1()}}); }
auto lang_imp() -> Language { return Language(2, {{"imp", gamma_imp()}}); }
auto lang_neq() -> Language { return Language(2, {{"neq", rho_neq()}}); }
auto lang_cut_g0() -> Language { return Language(2, {{"cut", gamma_cut()}, {"g0", gamma0()}}); }

}
