#include <pvcsp/catalog.hpp>
#include <pvcsp/classify_conservative.hpp>
#include <pvcsp/express.hpp>

#include <algorithm>
#include <deque>
#include <set>

namespace pvcsp {

PairGraph::PairGraph(int domain_size) : _domain_size(domain_size) {
    for (Label a = 0; a < domain_size; ++a)
        for (Label b = 0; b < domain_size; ++b)
            if (a != b)
                _vertices.push_back({a, b});
}

namespace {

auto edge_key(PairVertex u, PairVertex v) -> std::pair<PairVertex, PairVertex> {
    return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
}

}

auto PairGraph::add_edge(PairVertex u, PairVertex v, EdgeWitness w) -> void {
    auto key = edge_key(u, v);
    auto it = _edges.find(key);
    if (it == _edges.end())
        _edges.emplace(key, std::move(w));
    else if (w.soft && ! it->second.soft)
        it->second = std::move(w);  // prefer a soft witness
}

auto PairGraph::has_edge(PairVertex u, PairVertex v) const -> bool {
    return _edges.count(edge_key(u, v)) > 0;
}

auto PairGraph::has_soft_edge(PairVertex u, PairVertex v) const -> bool {
    auto it = _edges.find(edge_key(u, v));
    return it != _edges.end() && it->second.soft;
}

auto PairGraph::witness(PairVertex u, PairVertex v) const -> const EdgeWitness & {
    auto it = _edges.find(edge_key(u, v));
    if (it == _edges.end())
        throw error("pair graph: no such edge");
    return it->second;
}

auto PairGraph::neighbours(PairVertex v) const -> std::vector<PairVertex> {
    std::vector<PairVertex> out;
    for (const auto & u : _vertices)
        if (has_edge(v, u))
            out.push_back(u);
    return out;
}

auto build_pair_graph(const SaturatedSet & s) -> PairGraph {
    int d = s.base().domain_size();
    PairGraph g(d);
    g.set_truncated(! s.exhausted());

    // scan the base relations first so that edge witnesses come from the
    // language itself whenever possible
    std::vector<std::size_t> scan_order;
    for (std::size_t i = 0; i < s.base().size(); ++i)
        if (auto idx = s.find(canonicalize(s.base().at(i)).rel))
            scan_order.push_back(*idx);
    for (auto idx : s.ordered())
        if (std::find(scan_order.begin(), scan_order.end(), idx) == scan_order.end())
            scan_order.push_back(idx);

    for (auto idx : scan_order) {
        const auto & rel = s.entry(idx).rel;
        if (rel.arity() != 2)
            continue;
        for (Label a1 = 0; a1 < d; ++a1)
            for (Label b1 = 0; b1 < d; ++b1)
                for (Label a2 = 0; a2 < d; ++a2)
                    for (Label b2 = 0; b2 < d; ++b2) {
                        if (a1 == b1 || a2 == b2)
                            continue;
                        auto A = rel.evaluate({a1, a2});
                        auto P = rel.evaluate({a1, b2});
                        auto Q = rel.evaluate({b1, a2});
                        auto B = rel.evaluate({b1, b2});
                        if (P.is_infinite() || Q.is_infinite() || ! (P + Q < A + B))
                            continue;
                        bool soft = A.is_finite() || B.is_finite();
                        g.add_edge({a1, b1}, {a2, b2},
                                EdgeWitness{idx, a1, b1, a2, b2, A, P, Q, B, soft});
                    }
    }
    return g;
}

// Lemma 4.8 enrichment: extract binary exchange witnesses from the
// higher-arity base relations and add them to the saturated set.
namespace {

auto enrich_with_swap_witnesses(SaturatedSet & s) -> void {
    const auto & base = s.base();
    for (std::size_t ri = 0; ri < base.size(); ++ri) {
        const auto & gamma = base.at(ri);
        int r = gamma.arity();
        if (r < 3 || r > 4)
            continue;
        auto d = deriv::base(base.name_of(ri));
        auto feas_tuples = gamma.feasible_tuples();
        for (const auto & x : feas_tuples)
            for (const auto & y : feas_tuples)
                for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << r); ++mask) {
                    std::vector<bool> in_I(std::size_t(r), false);
                    std::vector<int> I, J;
                    for (int c = 0; c < r; ++c) {
                        in_I[std::size_t(c)] = mask & (std::size_t(1) << c);
                        (in_I[std::size_t(c)] ? I : J).push_back(c + 1);
                    }
                    auto lhs = gamma.evaluate(x) + gamma.evaluate(y);
                    auto rhs = gamma.evaluate(combine(x, y, in_I)) + gamma.evaluate(combine(y, x, in_I));
                    if (! (lhs < rhs))
                        continue;
                    auto w = swap_witness(gamma, d, I, J, x, y);
                    s.insert(w.rel, w.derivation);
                }
    }
}

}

auto detect_soft_self_loop(const PairGraph & g, const SaturatedSet & s)
        -> std::optional<SoftSelfLoop> {
    for (const auto & v : g.vertices()) {
        if (! g.has_soft_self_loop(v))
            continue;
        auto w = g.witness(v, v);
        const auto & entry = s.entry(w.entry);
        auto soft = two_fan_soft(entry.rel, entry.derivation, w.a1, w.b1, w.a2, w.b2);
        if (! soft)
            throw error("soft self-loop witness rejected by the two-fan construction");
        // replay soundness of the bundled relation
        if (! (replay(soft->derivation, s.base()) == soft->rel))
            throw error("soft self-loop relation fails to replay");
        return SoftSelfLoop{v, w, soft->rel, soft->derivation};
    }
    return std::nullopt;
}

auto Bipartition::in_barM(PairVertex v) const -> bool {
    return std::find(barM.begin(), barM.end(), v) != barM.end();
}

auto Bipartition::in_M1(PairVertex v) const -> bool {
    return std::find(M1.begin(), M1.end(), v) != M1.end();
}

auto split_and_bipartition(const PairGraph & g) -> std::variant<Bipartition, BipartitionFailure> {
    Bipartition bip;
    for (const auto & v : g.vertices())
        (g.has_self_loop(v) ? bip.barM : bip.M).push_back(v);

    // structural claims: the reversal edge everywhere, no M-barM edge, no
    // soft edge within barM
    for (const auto & v : g.vertices())
        if (! g.has_edge(v, v.reversed()))
            return BipartitionFailure{"missing reversal edge (truncated closure?)"};
    for (const auto & u : bip.M)
        for (const auto & v : bip.barM)
            if (g.has_edge(u, v))
                return BipartitionFailure{"edge between a loopless vertex and a looped vertex"};
    for (const auto & u : bip.barM)
        for (const auto & v : bip.barM)
            if (g.has_soft_edge(u, v))
                return BipartitionFailure{"soft edge between looped vertices"};

    // two-colour each component of the loopless part
    std::map<PairVertex, int> colour;
    for (const auto & seed : bip.M) {
        if (colour.count(seed))
            continue;
        colour[seed] = 0;
        std::deque<PairVertex> queue{seed};
        while (! queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            for (const auto & u : g.neighbours(v)) {
                if (std::find(bip.M.begin(), bip.M.end(), u) == bip.M.end())
                    continue;
                if (! colour.count(u)) {
                    colour[u] = 1 - colour[v];
                    queue.push_back(u);
                }
                else if (colour[u] == colour[v])
                    return BipartitionFailure{"odd cycle among loopless vertices"};
            }
        }
    }
    for (const auto & v : bip.M)
        (colour[v] == 0 ? bip.M1 : bip.M2).push_back(v);

    for (const auto & v : bip.M) {
        bool v1 = bip.in_M1(v);
        bool r2 = std::find(bip.M2.begin(), bip.M2.end(), v.reversed()) != bip.M2.end();
        if (v1 != r2)
            return BipartitionFailure{"reversal inconsistency between the two colour classes"};
    }
    return bip;
}

auto ab_c(Label a, Label b, Label c, const SaturatedSet & s, const std::vector<PairVertex> & barM)
        -> bool {
    if (a == b || b == c || a == c)
        return false;
    int d = s.base().domain_size();
    for (const auto & st : barM) {
        auto target = WeightedRelation::empty(d, 2);
        target.set({a, st.a}, ExtValue(0));
        target.set({b, st.a}, ExtValue(0));
        target.set({c, st.b}, ExtValue(0));
        if (s.contains_crisp(target))
            return true;
    }
    return false;
}

auto build_stp(const Bipartition & bip, int domain_size) -> MultimorphismCandidate {
    std::vector<Label> meet(table_size(domain_size, 2));
    std::vector<Label> join_t(table_size(domain_size, 2));
    for (Label x = 0; x < domain_size; ++x)
        for (Label y = 0; y < domain_size; ++y) {
            auto idx = tuple_index({x, y}, domain_size);
            Label lo = x, hi = y;
            if (x != y && bip.in_M1({y, x})) {
                lo = y;
                hi = x;
            }
            meet[idx] = lo;
            join_t[idx] = hi;
        }
    return MultimorphismCandidate("<meet,join>",
            {OpTable(domain_size, 2, std::move(meet)), OpTable(domain_size, 2, std::move(join_t))});
}

auto build_mjn(const Bipartition & bip, const SaturatedSet & s, int domain_size)
        -> MultimorphismCandidate {
    std::map<std::tuple<Label, Label, Label>, bool> memo;
    auto abc = [&](Label a, Label b, Label c) {
        if (a == b || b == c || a == c)
            return false;
        auto key = std::make_tuple(std::min(a, b), std::max(a, b), c);
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
        bool result = ab_c(a, b, c, s, bip.barM);
        memo.emplace(key, result);
        return result;
    };
    auto looped = [&](Label a, Label b) {
        return a != b && bip.in_barM({a, b});
    };

    std::vector<Label> mj1(table_size(domain_size, 3));
    std::vector<Label> mj2(table_size(domain_size, 3));
    std::vector<Label> mn3(table_size(domain_size, 3));
    for (std::size_t idx = 0; idx < mj1.size(); ++idx) {
        auto t = index_tuple(idx, domain_size, 3);
        Label x = t[0], y = t[1], z = t[2];
        std::vector<Tuple> outputs;
        if ((x == y && looped(y, z)) || abc(x, y, z))
            outputs.push_back({x, y, z});
        if ((z == x && looped(x, y)) || abc(z, x, y))
            outputs.push_back({z, x, y});
        if ((y == z && looped(z, x)) || abc(y, z, x))
            outputs.push_back({y, z, x});
        if (outputs.empty())
            outputs.push_back({x, y, z});
        for (const auto & o : outputs)
            if (o != outputs.front())
                throw error("mjn construction: overlapping cases disagree");
        mj1[idx] = outputs.front()[0];
        mj2[idx] = outputs.front()[1];
        mn3[idx] = outputs.front()[2];
    }
    return MultimorphismCandidate("<mj1,mj2,mn3>",
            {OpTable(domain_size, 3, std::move(mj1)), OpTable(domain_size, 3, std::move(mj2)),
             OpTable(domain_size, 3, std::move(mn3))});
}

namespace {

auto stp_shape_ok(const MultimorphismCandidate & stp, const Bipartition & bip, int d,
        std::string & why) -> bool {
    const auto & meet = stp.ops[0];
    const auto & join_t = stp.ops[1];
    for (Label x = 0; x < d; ++x)
        for (Label y = 0; y < d; ++y) {
            Label lo = meet.apply({x, y}), hi = join_t.apply({x, y});
            if (std::multiset<Label>{lo, hi} != std::multiset<Label>{x, y}) {
                why = "stp is not conservative";
                return false;
            }
            bool in_M = x != y && ! bip.in_barM({x, y});
            if (in_M && (meet.apply({x, y}) != meet.apply({y, x})
                        || join_t.apply({x, y}) != join_t.apply({y, x}))) {
                why = "stp is not commutative on the loopless pairs";
                return false;
            }
        }
    return true;
}

auto mjn_shape_ok(const MultimorphismCandidate & mjn, const Bipartition & bip, int d,
        std::string & why) -> bool {
    for (const auto & v : bip.barM) {
        // restricted to {v.a, v.b}: two majorities and a minority
        for (Label x : {v.a, v.b})
            for (Label y : {v.a, v.b}) {
                std::vector<Tuple> patterns{{x, x, y}, {x, y, x}, {y, x, x}};
                for (const auto & p : patterns) {
                    if (mjn.ops[0].apply(p) != x || mjn.ops[1].apply(p) != x) {
                        why = "mjn majorities fail on a looped pair";
                        return false;
                    }
                    if (mjn.ops[2].apply(p) != y) {
                        why = "mjn minority fails on a looped pair";
                        return false;
                    }
                }
            }
    }
    for (std::size_t idx = 0; idx < table_size(d, 3); ++idx) {
        auto t = index_tuple(idx, d, 3);
        std::multiset<Label> in(t.begin(), t.end());
        std::multiset<Label> out{mjn.ops[0].apply(t), mjn.ops[1].apply(t), mjn.ops[2].apply(t)};
        if (in != out) {
            why = "mjn is not conservative";
            return false;
        }
    }
    return true;
}

}

auto classify_conservative(const Language & lang, const SaturationBudget & budget)
        -> ConservativeVerdict {
    try {
        auto s = saturate(lang, budget, true);
        enrich_with_swap_witnesses(s);
        auto g = build_pair_graph(s);

        if (auto loop = detect_soft_self_loop(g, s))
            return ConsPlanarlyIntractable{std::move(*loop)};

        auto split = split_and_bipartition(g);
        if (std::holds_alternative<BipartitionFailure>(split))
            return ConsUnknown{std::get<BipartitionFailure>(split).reason};
        auto bip = std::get<Bipartition>(split);

        auto stp = build_stp(bip, lang.domain_size());
        auto mjn = build_mjn(bip, s, lang.domain_size());

        std::string why;
        if (! stp_shape_ok(stp, bip, lang.domain_size(), why))
            return ConsUnknown{why};
        if (! mjn_shape_ok(mjn, bip, lang.domain_size(), why))
            return ConsUnknown{why};

        auto stp_verdict = is_multimorphism(stp, lang);
        if (! holds(stp_verdict))
            return ConsUnknown{"stp candidate is not a multimorphism of the language"};
        auto mjn_verdict = is_multimorphism(mjn, lang);
        if (! holds(mjn_verdict))
            return ConsUnknown{"mjn candidate is not a multimorphism of the language"};
        if (! holds_with_equality(mjn_verdict))
            return ConsUnknown{"mjn candidate holds but not with equality"};

        return ConsTractable{std::move(stp), std::move(mjn), std::move(bip), true};
    }
    catch (const budget_error & e) {
        return ConsUnknown{e.what()};
    }
}

auto classify_conservative(const Language & lang) -> ConservativeVerdict {
    return classify_conservative(lang, default_budget(lang));
}

}
