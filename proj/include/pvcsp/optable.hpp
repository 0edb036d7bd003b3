#pragma once

#include <pvcsp/relation.hpp>

#include <string>
#include <vector>

namespace pvcsp {

// A k-ary operation f : D^k -> D as a dense table, same index convention as
// WeightedRelation.
class OpTable {
public:
    OpTable(int domain_size, int arity, std::vector<Label> table);

    static auto projection(int domain_size, int k, int i) -> OpTable;  // e^k_i, 1-based i
    static auto constant(int domain_size, Label a) -> OpTable;

    auto domain_size() const -> int { return _domain_size; }
    auto arity() const -> int { return _arity; }
    auto table() const -> const std::vector<Label> & { return _table; }

    auto apply(const Tuple & args) const -> Label;
    auto is_conservative() const -> bool;  // f(x1..xk) in {x1..xk} everywhere

    friend auto operator==(const OpTable & a, const OpTable & b) -> bool = default;

private:
    int _domain_size;
    int _arity;
    std::vector<Label> _table;
};

// Componentwise application of f to k r-tuples.
auto apply_componentwise(const OpTable & f, const std::vector<Tuple> & tuples) -> Tuple;

// A candidate multimorphism <f_1, ..., f_k>: k operations of arity k.
struct MultimorphismCandidate {
    std::string name;
    std::vector<OpTable> ops;

    MultimorphismCandidate(std::string name, std::vector<OpTable> ops);
    auto k() const -> int { return int(ops.size()); }
    auto domain_size() const -> int { return ops.front().domain_size(); }
};

}
