#include <pvcsp/optable.hpp>

#include <algorithm>

namespace pvcsp {

OpTable::OpTable(int domain_size, int arity, std::vector<Label> table) :
    _domain_size(domain_size),
    _arity(arity),
    _table(std::move(table))
{
    if (domain_size < 1 || arity < 1)
        throw error("domain size and arity must be positive");
    if (_table.size() != table_size(domain_size, arity))
        throw error("operation table length does not match |D|^k");
    for (Label x : _table)
        if (x < 0 || x >= domain_size)
            throw error("operation table entry out of range");
}

auto OpTable::projection(int domain_size, int k, int i) -> OpTable {
    if (i < 1 || i > k)
        throw error("projection index out of range");
    std::vector<Label> table(table_size(domain_size, k));
    for (std::size_t idx = 0; idx < table.size(); ++idx)
        table[idx] = index_tuple(idx, domain_size, k)[std::size_t(i - 1)];
    return OpTable(domain_size, k, std::move(table));
}

auto OpTable::constant(int domain_size, Label a) -> OpTable {
    return OpTable(domain_size, 1, std::vector<Label>(std::size_t(domain_size), a));
}

auto OpTable::apply(const Tuple & args) const -> Label {
    if (int(args.size()) != _arity)
        throw error("operation arity mismatch");
    return _table[tuple_index(args, _domain_size)];
}

auto OpTable::is_conservative() const -> bool {
    for (std::size_t idx = 0; idx < _table.size(); ++idx) {
        auto args = index_tuple(idx, _domain_size, _arity);
        if (std::find(args.begin(), args.end(), _table[idx]) == args.end())
            return false;
    }
    return true;
}

auto apply_componentwise(const OpTable & f, const std::vector<Tuple> & tuples) -> Tuple {
    if (int(tuples.size()) != f.arity())
        throw error("componentwise application: wrong number of tuples");
    auto r = tuples.front().size();
    for (const auto & t : tuples)
        if (t.size() != r)
            throw error("componentwise application: mixed arities");
    Tuple result(r);
    Tuple args(tuples.size());
    for (std::size_t c = 0; c < r; ++c) {
        for (std::size_t i = 0; i < tuples.size(); ++i)
            args[i] = tuples[i][c];
        result[c] = f.apply(args);
    }
    return result;
}

MultimorphismCandidate::MultimorphismCandidate(std::string name_, std::vector<OpTable> ops_) :
    name(std::move(name_)),
    ops(std::move(ops_))
{
    if (ops.empty())
        throw error("multimorphism candidate needs at least one operation");
    for (const auto & f : ops)
        if (f.arity() != int(ops.size()) || f.domain_size() != ops.front().domain_size())
            throw error("multimorphism candidate: k operations of arity k required");
}

}
