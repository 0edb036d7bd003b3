#pragma once

#include <pvcsp/closure.hpp>
#include <pvcsp/multimorphism.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pvcsp {

// An ordered pair of distinct labels: a vertex of the pair graph.
struct PairVertex {
    Label a;
    Label b;
    friend auto operator<=>(const PairVertex &, const PairVertex &) = default;
    auto reversed() const -> PairVertex { return {b, a}; }
};

// A witness for an edge: a binary relation in the closure violating the
// exchange inequality at the four corner values.
struct EdgeWitness {
    std::size_t entry;        // index into the saturated set
    Label a1, b1, a2, b2;
    ExtValue A, P, Q, B;      // gamma(a1,a2), gamma(a1,b2), gamma(b1,a2), gamma(b1,b2)
    bool soft;
};

class PairGraph {
public:
    explicit PairGraph(int domain_size);

    auto domain_size() const -> int { return _domain_size; }
    auto vertices() const -> const std::vector<PairVertex> & { return _vertices; }
    auto add_edge(PairVertex u, PairVertex v, EdgeWitness w) -> void;
    auto has_edge(PairVertex u, PairVertex v) const -> bool;
    auto has_soft_edge(PairVertex u, PairVertex v) const -> bool;
    auto witness(PairVertex u, PairVertex v) const -> const EdgeWitness &;
    auto neighbours(PairVertex v) const -> std::vector<PairVertex>;
    auto has_self_loop(PairVertex v) const -> bool { return has_edge(v, v); }
    auto has_soft_self_loop(PairVertex v) const -> bool { return has_soft_edge(v, v); }
    auto truncated() const -> bool { return _truncated; }
    auto set_truncated(bool t) -> void { _truncated = t; }

private:
    int _domain_size;
    std::vector<PairVertex> _vertices;
    std::map<std::pair<PairVertex, PairVertex>, EdgeWitness> _edges;
    bool _truncated = false;
};

auto build_pair_graph(const SaturatedSet & s) -> PairGraph;

struct SoftSelfLoop {
    PairVertex vertex;
    EdgeWitness witness;
    WeightedRelation loop_relation;  // the three-tuple soft form of Lemma 4.4
    DerivPtr derivation;
};

auto detect_soft_self_loop(const PairGraph & g, const SaturatedSet & s)
    -> std::optional<SoftSelfLoop>;

struct Bipartition {
    std::vector<PairVertex> M;
    std::vector<PairVertex> barM;
    std::vector<PairVertex> M1;
    std::vector<PairVertex> M2;
    auto in_barM(PairVertex v) const -> bool;
    auto in_M1(PairVertex v) const -> bool;
};

struct BipartitionFailure {
    std::string reason;
};

auto split_and_bipartition(const PairGraph & g) -> std::variant<Bipartition, BipartitionFailure>;

// ab|c: some (s,t) in barM has the crisp relation {(a,s),(b,s),(c,t)} in the
// saturated set.
auto ab_c(Label a, Label b, Label c, const SaturatedSet & s, const std::vector<PairVertex> & barM)
    -> bool;

auto build_stp(const Bipartition & bip, int domain_size) -> MultimorphismCandidate;
auto build_mjn(const Bipartition & bip, const SaturatedSet & s, int domain_size)
    -> MultimorphismCandidate;

struct ConsTractable {
    MultimorphismCandidate stp;
    MultimorphismCandidate mjn;
    Bipartition bipartition;
    bool mjn_equality;
};

struct ConsPlanarlyIntractable {
    SoftSelfLoop loop;
};

struct ConsUnknown {
    std::string diagnostics;
};

using ConservativeVerdict = std::variant<ConsTractable, ConsPlanarlyIntractable, ConsUnknown>;

auto classify_conservative(const Language & lang, const SaturationBudget & budget)
    -> ConservativeVerdict;
auto classify_conservative(const Language & lang) -> ConservativeVerdict;

}
