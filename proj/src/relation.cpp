#include <pvcsp/relation.hpp>

#include <algorithm>

namespace pvcsp {

auto table_size(int domain_size, int arity) -> std::size_t {
    std::size_t n = 1;
    for (int i = 0; i < arity; ++i) {
        if (n > std::size_t(1) << 40)
            throw error("relation table too large");
        n *= std::size_t(domain_size);
    }
    return n;
}

auto tuple_index(const Tuple & t, int domain_size) -> std::size_t {
    std::size_t idx = 0;
    for (Label x : t) {
        if (x < 0 || x >= domain_size)
            throw error("label out of range");
        idx = idx * std::size_t(domain_size) + std::size_t(x);
    }
    return idx;
}

auto index_tuple(std::size_t idx, int domain_size, int arity) -> Tuple {
    Tuple t(std::size_t(arity), 0);
    for (int i = arity - 1; i >= 0; --i) {
        t[std::size_t(i)] = Label(idx % std::size_t(domain_size));
        idx /= std::size_t(domain_size);
    }
    return t;
}

WeightedRelation::WeightedRelation(int domain_size, int arity) :
    _domain_size(domain_size),
    _arity(arity),
    _table(table_size(domain_size, arity))
{
    if (domain_size < 1 || arity < 1)
        throw error("domain size and arity must be positive");
}

WeightedRelation::WeightedRelation(int domain_size, int arity, std::vector<ExtValue> table) :
    _domain_size(domain_size),
    _arity(arity),
    _table(std::move(table))
{
    if (domain_size < 1 || arity < 1)
        throw error("domain size and arity must be positive");
    if (_table.size() != table_size(domain_size, arity))
        throw error("table length does not match |D|^r");
}

auto WeightedRelation::crisp(int domain_size, int arity, const std::vector<Tuple> & tuples) -> WeightedRelation {
    auto result = empty(domain_size, arity);
    for (const auto & t : tuples) {
        if (int(t.size()) != arity)
            throw error("crisp tuple arity mismatch");
        result.set(t, ExtValue(0));
    }
    return result;
}

auto WeightedRelation::empty(int domain_size, int arity) -> WeightedRelation {
    WeightedRelation result(domain_size, arity);
    std::fill(result._table.begin(), result._table.end(), INF);
    return result;
}

auto WeightedRelation::evaluate(const Tuple & t) const -> const ExtValue & {
    if (int(t.size()) != _arity)
        throw error("tuple arity mismatch");
    return _table[tuple_index(t, _domain_size)];
}

auto WeightedRelation::set(const Tuple & t, ExtValue v) -> void {
    if (int(t.size()) != _arity)
        throw error("tuple arity mismatch");
    _table[tuple_index(t, _domain_size)] = std::move(v);
}

auto WeightedRelation::is_crisp() const -> bool {
    for (const auto & v : _table)
        if (v.is_finite() && sgn(v.rational()) != 0)
            return false;
    return true;
}

auto WeightedRelation::feasible_tuples() const -> std::vector<Tuple> {
    std::vector<Tuple> result;
    for (std::size_t i = 0; i < _table.size(); ++i)
        if (_table[i].is_finite())
            result.push_back(index_tuple(i, _domain_size, _arity));
    return result;
}

auto WeightedRelation::has_feasible() const -> bool {
    for (const auto & v : _table)
        if (v.is_finite())
            return true;
    return false;
}

auto WeightedRelation::min_value() const -> ExtValue {
    ExtValue best = INF;
    for (const auto & v : _table)
        if (v < best)
            best = v;
    return best;
}

auto WeightedRelation::min_finite_value() const -> std::optional<Rat> {
    auto m = min_value();
    if (m.is_infinite())
        return std::nullopt;
    return m.rational();
}

auto WeightedRelation::max_finite_value() const -> std::optional<Rat> {
    std::optional<Rat> best;
    for (const auto & v : _table)
        if (v.is_finite() && (! best || v.rational() > *best))
            best = v.rational();
    return best;
}

auto WeightedRelation::second_min_value() const -> std::optional<Rat> {
    auto m = min_finite_value();
    if (! m)
        return std::nullopt;
    std::optional<Rat> second;
    for (const auto & v : _table)
        if (v.is_finite() && v.rational() > *m && (! second || v.rational() < *second))
            second = v.rational();
    return second;
}

auto WeightedRelation::encode() const -> std::string {
    std::string s = std::to_string(_domain_size) + "^" + std::to_string(_arity) + ":";
    for (const auto & v : _table) {
        s += v.to_string();
        s += ',';
    }
    return s;
}

auto feas(const WeightedRelation & g) -> WeightedRelation {
    return scale(g, 0);
}

auto opt(const WeightedRelation & g) -> WeightedRelation {
    auto m = g.min_value();
    auto result = WeightedRelation::empty(g.domain_size(), g.arity());
    if (m.is_infinite())
        return result;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] == m)
            result.set(i, ExtValue(0));
    return result;
}

auto scale(const WeightedRelation & g, const Rat & c) -> WeightedRelation {
    if (sgn(c) < 0)
        throw error("scale: factor must be nonnegative");
    std::vector<ExtValue> table;
    table.reserve(g.size());
    for (const auto & v : g.table())
        table.push_back(v.scaled(c));
    return WeightedRelation(g.domain_size(), g.arity(), std::move(table));
}

auto add_constant(const WeightedRelation & g, const Rat & c) -> WeightedRelation {
    std::vector<ExtValue> table;
    table.reserve(g.size());
    for (const auto & v : g.table())
        table.push_back(v.shifted(c));
    return WeightedRelation(g.domain_size(), g.arity(), std::move(table));
}

}
