#pragma once

#include <pvcsp/language.hpp>
#include <pvcsp/optable.hpp>

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace pvcsp {

inline constexpr std::uint64_t default_mm_budget = 100'000'000;

struct PolyHolds {};
struct PolyFails {
    std::size_t relation_index;
    std::vector<Tuple> witness;  // k feasible tuples with infeasible image
};
using PolyVerdict = std::variant<PolyHolds, PolyFails>;

auto is_polymorphism(const OpTable & f, const Language & lang,
        std::uint64_t budget = default_mm_budget) -> PolyVerdict;

struct MmHolds {
    bool with_equality;
};
struct MmFails {
    std::size_t relation_index;
    std::vector<Tuple> witness;  // k feasible tuples violating the defining inequality
};
using MmVerdict = std::variant<MmHolds, MmFails>;

// Checks the multimorphism inequality over all k-tuples of feasible tuples of
// every relation; reports equality when it is never strict.
auto is_multimorphism(const MultimorphismCandidate & m, const Language & lang,
        std::uint64_t budget = default_mm_budget) -> MmVerdict;

auto holds(const MmVerdict & v) -> bool;
auto holds_with_equality(const MmVerdict & v) -> bool;

// Projection of a crisp relation onto coordinates i, j (1-based).
auto project(const WeightedRelation & rho, int i, int j) -> WeightedRelation;

struct Decomposable {};
struct NotDecomposable {
    Tuple witness;  // consistent with all pairwise projections but not in rho
};
using DecompVerdict = std::variant<Decomposable, NotDecomposable>;

auto is_2_decomposable(const WeightedRelation & rho) -> DecompVerdict;

}
