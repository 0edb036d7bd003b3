#include <pvcsp/multimorphism.hpp>

namespace pvcsp {

namespace {

// Iterate all ways to pick k tuples (with repetition) from feas, in lex
// order of indices; f gets the current selection and returns true to stop.
template <typename F>
auto for_each_selection(const std::vector<Tuple> & feas, int k, std::uint64_t budget,
        const char * what, F && f) -> bool {
    if (feas.empty())
        return false;
    std::uint64_t count = 1;
    for (int i = 0; i < k; ++i) {
        count *= feas.size();
        if (count > budget)
            throw budget_error(std::string(what) + ": |Feas|^k exceeds work budget");
    }
    std::vector<std::size_t> sel(std::size_t(k), 0);
    std::vector<Tuple> current(std::size_t(k), Tuple{});
    while (true) {
        for (std::size_t i = 0; i < sel.size(); ++i)
            current[i] = feas[sel[i]];
        if (f(current))
            return true;
        int pos = k - 1;
        while (pos >= 0 && sel[std::size_t(pos)] + 1 == feas.size())
            sel[std::size_t(pos--)] = 0;
        if (pos < 0)
            return false;
        ++sel[std::size_t(pos)];
    }
}

}

auto is_polymorphism(const OpTable & f, const Language & lang, std::uint64_t budget) -> PolyVerdict {
    if (f.domain_size() != lang.domain_size())
        throw error("is_polymorphism: domain size mismatch");
    for (std::size_t ri = 0; ri < lang.size(); ++ri) {
        const auto & g = lang.at(ri);
        auto feas_tuples = g.feasible_tuples();
        std::vector<Tuple> witness;
        bool failed = for_each_selection(feas_tuples, f.arity(), budget, "is_polymorphism",
                [&](const std::vector<Tuple> & sel) {
                    if (! g.feasible(apply_componentwise(f, sel))) {
                        witness = sel;
                        return true;
                    }
                    return false;
                });
        if (failed)
            return PolyFails{ri, std::move(witness)};
    }
    return PolyHolds{};
}

auto is_multimorphism(const MultimorphismCandidate & m, const Language & lang,
        std::uint64_t budget) -> MmVerdict {
    if (m.domain_size() != lang.domain_size())
        throw error("is_multimorphism: domain size mismatch");
    bool equality_everywhere = true;
    for (std::size_t ri = 0; ri < lang.size(); ++ri) {
        const auto & g = lang.at(ri);
        auto feas_tuples = g.feasible_tuples();
        std::vector<Tuple> witness;
        bool failed = for_each_selection(feas_tuples, m.k(), budget, "is_multimorphism",
                [&](const std::vector<Tuple> & sel) {
                    ExtValue lhs(0), rhs(0);
                    for (const auto & f : m.ops)
                        lhs += g.evaluate(apply_componentwise(f, sel));
                    for (const auto & t : sel)
                        rhs += g.evaluate(t);
                    if (rhs < lhs) {
                        witness = sel;
                        return true;
                    }
                    if (lhs < rhs)
                        equality_everywhere = false;
                    return false;
                });
        if (failed)
            return MmFails{ri, std::move(witness)};
    }
    return MmHolds{equality_everywhere};
}

auto holds(const MmVerdict & v) -> bool {
    return std::holds_alternative<MmHolds>(v);
}

auto holds_with_equality(const MmVerdict & v) -> bool {
    return holds(v) && std::get<MmHolds>(v).with_equality;
}

auto project(const WeightedRelation & rho, int i, int j) -> WeightedRelation {
    if (! rho.is_crisp())
        throw error("project: relation must be crisp");
    if (i < 1 || i > rho.arity() || j < 1 || j > rho.arity())
        throw error("project: coordinate out of range");
    auto result = WeightedRelation::empty(rho.domain_size(), 2);
    for (const auto & t : rho.feasible_tuples())
        result.set({t[std::size_t(i - 1)], t[std::size_t(j - 1)]}, ExtValue(0));
    return result;
}

auto is_2_decomposable(const WeightedRelation & rho) -> DecompVerdict {
    if (! rho.is_crisp())
        throw error("is_2_decomposable: relation must be crisp");
    int r = rho.arity();
    std::vector<std::vector<WeightedRelation>> proj;
    for (int i = 1; i <= r; ++i) {
        proj.emplace_back();
        for (int j = 1; j <= r; ++j)
            proj.back().push_back(project(rho, i, j));
    }
    for (std::size_t idx = 0; idx < rho.size(); ++idx) {
        if (rho[idx].is_finite())
            continue;
        auto t = index_tuple(idx, rho.domain_size(), r);
        bool consistent = true;
        for (int i = 1; consistent && i <= r; ++i)
            for (int j = 1; consistent && j <= r; ++j)
                if (! proj[std::size_t(i - 1)][std::size_t(j - 1)].feasible(
                            {t[std::size_t(i - 1)], t[std::size_t(j - 1)]}))
                    consistent = false;
        if (consistent)
            return NotDecomposable{std::move(t)};
    }
    return Decomposable{};
}

}
