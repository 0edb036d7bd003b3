#pragma once

#include <pvcsp/value.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pvcsp {

using Label = int;
using Tuple = std::vector<Label>;

// Dense table index of a tuple, lexicographic with coordinate 1 most
// significant.
auto tuple_index(const Tuple & t, int domain_size) -> std::size_t;
auto index_tuple(std::size_t idx, int domain_size, int arity) -> Tuple;
auto table_size(int domain_size, int arity) -> std::size_t;

// A weighted relation gamma : D^r -> Q u {inf}, stored as a dense table.
class WeightedRelation {
public:
    WeightedRelation(int domain_size, int arity);
    WeightedRelation(int domain_size, int arity, std::vector<ExtValue> table);

    // Crisp relation from a list of allowed tuples (0 on members, inf off).
    static auto crisp(int domain_size, int arity, const std::vector<Tuple> & tuples) -> WeightedRelation;
    // All-inf relation of the given shape.
    static auto empty(int domain_size, int arity) -> WeightedRelation;

    auto domain_size() const -> int { return _domain_size; }
    auto arity() const -> int { return _arity; }
    auto size() const -> std::size_t { return _table.size(); }
    auto table() const -> const std::vector<ExtValue> & { return _table; }

    auto operator[](std::size_t idx) const -> const ExtValue & { return _table.at(idx); }
    auto evaluate(const Tuple & t) const -> const ExtValue &;
    auto set(const Tuple & t, ExtValue v) -> void;
    auto set(std::size_t idx, ExtValue v) -> void { _table.at(idx) = std::move(v); }

    auto is_crisp() const -> bool;
    auto feasible(const Tuple & t) const -> bool { return evaluate(t).is_finite(); }
    auto feasible_tuples() const -> std::vector<Tuple>;
    auto has_feasible() const -> bool;

    auto min_value() const -> ExtValue;       // inf when Feas is empty
    auto max_finite_value() const -> std::optional<Rat>;
    auto min_finite_value() const -> std::optional<Rat>;
    // Smallest finite value strictly above the minimum, if any.
    auto second_min_value() const -> std::optional<Rat>;

    friend auto operator==(const WeightedRelation & a, const WeightedRelation & b) -> bool = default;

    // Canonical byte encoding, used for dedup and deterministic ordering.
    auto encode() const -> std::string;

private:
    int _domain_size;
    int _arity;
    std::vector<ExtValue> _table;
};

// Feas(gamma) = 0 * gamma.
auto feas(const WeightedRelation & g) -> WeightedRelation;
// Opt(gamma): crisp relation of minimal-value tuples; all-inf when Feas empty.
auto opt(const WeightedRelation & g) -> WeightedRelation;
auto scale(const WeightedRelation & g, const Rat & c) -> WeightedRelation;
auto add_constant(const WeightedRelation & g, const Rat & c) -> WeightedRelation;

}
