#pragma once

#include <pvcsp/derivation.hpp>
#include <pvcsp/language.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace pvcsp {

// A relation in canonical affine form: minimum finite value 0, smallest
// strictly positive finite value 1. original = canonical * scale + shift.
struct CanonicalForm {
    WeightedRelation rel;
    Rat shift;
    Rat scale;
};

auto canonicalize(const WeightedRelation & g) -> CanonicalForm;
// Wraps a derivation of g into one replaying to canonicalize(g).rel.
auto canonical_derivation(const WeightedRelation & g, const DerivPtr & d) -> DerivPtr;

struct SaturationBudget {
    int max_arity = 3;
    int max_depth = 6;
    std::size_t max_set = 50'000;
    std::uint64_t max_steps = 200'000;
};

auto default_budget(const Language & base) -> SaturationBudget;

struct SaturatedEntry {
    WeightedRelation rel;  // canonical
    DerivPtr derivation;   // replays to rel exactly
};

// A bounded under-approximation of the closure of the base language under
// Feas, Opt, addition of unary relations, minimisation, join, restriction,
// pinning, and (on Boolean domains) twists. Conservative mode treats every
// unary weighted relation as a free generator.
class SaturatedSet {
public:
    SaturatedSet(Language base, bool conservative, SaturationBudget budget);

    auto base() const -> const Language & { return _base; }
    auto conservative() const -> bool { return _conservative; }
    auto budget() const -> const SaturationBudget & { return _budget; }
    auto exhausted() const -> bool { return _exhausted; }
    auto size() const -> std::size_t { return _entries.size(); }
    auto entry(std::size_t i) const -> const SaturatedEntry & { return _entries.at(i); }

    // indices sorted by (arity, canonical encoding)
    auto ordered() const -> const std::vector<std::size_t> &;

    auto find(const WeightedRelation & canonical_rel) const -> std::optional<std::size_t>;
    // membership query for a crisp relation; nullopt means "not found", to
    // be read together with exhausted()
    auto contains_crisp(const WeightedRelation & rho) const -> std::optional<DerivPtr>;

    // Inserts a relation (canonicalized) with its derivation; returns the
    // entry index, or nullopt if rejected by budget.
    auto insert(const WeightedRelation & g, const DerivPtr & d) -> std::optional<std::size_t>;

    friend auto saturate(const Language & base, const SaturationBudget & budget, bool conservative)
        -> SaturatedSet;

private:
    auto run() -> void;
    auto generate_from(std::size_t idx) -> void;
    auto lookup_crisp_unary(const std::vector<Label> & support) const -> DerivPtr;

    Language _base;
    bool _conservative;
    SaturationBudget _budget;
    std::vector<SaturatedEntry> _entries;
    std::map<std::string, std::size_t> _index;
    mutable std::vector<std::size_t> _ordered;
    mutable bool _ordered_dirty = true;
    bool _exhausted = false;
    std::uint64_t _steps = 0;
    bool _truncated = false;
};

auto saturate(const Language & base, const SaturationBudget & budget, bool conservative)
    -> SaturatedSet;

// Lemma 4.4 constructions. Given a binary weighted relation gamma with
// derivation d and labels with gamma(a1,b2) + gamma(b1,a2) finite and less
// than gamma(a1,a2) + gamma(b1,b2):
//   two_fan_opt     -> the crisp relation {(a1,b2),(b1,a2)}
//   two_fan_soft    -> a three-tuple soft form ({(b1,b2),(a1,b2),(b1,a2)} or
//                      the feasibility relation when only one diagonal is
//                      feasible); requires a feasible diagonal
// Returns nullopt when the defining inequality fails.
struct TwoFanResult {
    WeightedRelation rel;
    DerivPtr derivation;
};

auto two_fan_opt(const WeightedRelation & gamma, const DerivPtr & d,
        Label a1, Label b1, Label a2, Label b2) -> std::optional<TwoFanResult>;
auto two_fan_soft(const WeightedRelation & gamma, const DerivPtr & d,
        Label a1, Label b1, Label a2, Label b2) -> std::optional<TwoFanResult>;

// Lemma 2.10: from an r-ary gamma, a coordinate partition (I, J) and
// feasible tuples x, y with
//   gamma(x) + gamma(y) < gamma(x_I.y_J) + gamma(y_I.x_J)
// extracts coordinates i in I, j in J and a binary relation gamma_{i,j}
// with (x_i,x_j), (y_i,y_j) feasible and
//   gamma_{i,j}(x_i,x_j) + gamma_{i,j}(y_i,y_j) <
//   gamma_{i,j}(x_i,y_j) + gamma_{i,j}(y_i,x_j).
struct SwapWitness {
    int i;  // 1-based original coordinates
    int j;
    WeightedRelation rel;
    DerivPtr derivation;
};

// pin_witness(a), when given, supplies the derivation of the constant
// relation {(a)} used by interior pinnings (outside the conservative
// setting).
auto swap_witness(const WeightedRelation & gamma, const DerivPtr & d,
        const std::vector<int> & I, const std::vector<int> & J,
        const Tuple & x, const Tuple & y,
        const std::function<DerivPtr(Label)> & pin_witness = nullptr) -> SwapWitness;

// Combines x and y into x_I . y_J (coordinates from x on I, from y on J).
auto combine(const Tuple & x, const Tuple & y, const std::vector<bool> & in_I) -> Tuple;

}
