#include <pvcsp/catalog.hpp>
#include <pvcsp/io.hpp>

#include <fstream>

namespace pvcsp::io {

namespace {

auto expect(const json & j, const char * field) -> const json & {
    if (! j.contains(field))
        throw error(std::string("missing field: ") + field);
    return j.at(field);
}

auto value_to_json(const ExtValue & v) -> json {
    return v.to_string();
}

auto value_from_json(const json & j) -> ExtValue {
    return ExtValue::from_string(j.get<std::string>());
}

auto rat_from_json(const json & j) -> Rat {
    return parse_rat(j.get<std::string>());
}

}

auto relation_to_json(const WeightedRelation & rel) -> json {
    json table = json::array();
    for (const auto & v : rel.table())
        table.push_back(value_to_json(v));
    return {{"domain_size", rel.domain_size()}, {"arity", rel.arity()}, {"table", table}};
}

auto relation_from_json(const json & j) -> WeightedRelation {
    int d = expect(j, "domain_size").get<int>();
    int r = expect(j, "arity").get<int>();
    std::vector<ExtValue> table;
    for (const auto & v : expect(j, "table"))
        table.push_back(value_from_json(v));
    return WeightedRelation(d, r, std::move(table));
}

auto language_to_json(const Language & lang) -> json {
    json rels = json::array();
    for (const auto & [name, rel] : lang.relations()) {
        auto jr = relation_to_json(rel);
        jr.erase("domain_size");
        jr["name"] = name;
        rels.push_back(std::move(jr));
    }
    return {{"schema", "language"}, {"domain_size", lang.domain_size()}, {"relations", rels}};
}

auto language_from_json(const json & j) -> Language {
    int d = expect(j, "domain_size").get<int>();
    std::vector<std::pair<std::string, WeightedRelation>> rels;
    for (const auto & jr : expect(j, "relations")) {
        auto with_domain = jr;
        with_domain["domain_size"] = d;
        rels.emplace_back(expect(jr, "name").get<std::string>(), relation_from_json(with_domain));
    }
    return Language(d, std::move(rels));
}

auto optable_to_json(const OpTable & op) -> json {
    return {{"domain_size", op.domain_size()}, {"arity", op.arity()}, {"table", op.table()}};
}

auto optable_from_json(const json & j) -> OpTable {
    return OpTable(expect(j, "domain_size").get<int>(), expect(j, "arity").get<int>(),
            expect(j, "table").get<std::vector<Label>>());
}

auto candidate_to_json(const MultimorphismCandidate & c) -> json {
    json ops = json::array();
    for (const auto & op : c.ops)
        ops.push_back(optable_to_json(op));
    return {{"name", c.name}, {"ops", ops}};
}

auto candidate_from_json(const json & j) -> MultimorphismCandidate {
    std::vector<OpTable> ops;
    for (const auto & jo : expect(j, "ops"))
        ops.push_back(optable_from_json(jo));
    return MultimorphismCandidate(j.value("name", "candidate"), std::move(ops));
}

auto instance_to_json(const PlaneInstance & inst) -> json {
    json darts = json::array();
    for (int d = 0; d < inst.graph.dart_count(); ++d)
        darts.push_back({{"vertex", inst.graph.dart_vertex(d)}});
    json edges = json::array();
    for (const auto & [a, b] : inst.graph.edges())
        edges.push_back(json::array({a, b}));
    json constraints = json::array();
    for (const auto & c : inst.constraints) {
        json jc{{"relation", c.relation}, {"weight", rat_to_string(c.weight)},
                {"anchor_dart", c.anchor_dart}};
        if (c.scope)
            jc["scope"] = *c.scope;
        constraints.push_back(std::move(jc));
    }
    return {
        {"schema", "instance"},
        {"domain_size", inst.domain_size},
        {"vertices", inst.graph.vertex_count()},
        {"darts", darts},
        {"edges", edges},
        {"rotations", inst.graph.rotations()},
        {"outer_face", inst.outer_face},
        {"constraints", constraints},
        {"relations", language_to_json(inst.relations)},
    };
}

auto instance_from_json(const json & j) -> PlaneInstance {
    int n = expect(j, "vertices").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto & je : expect(j, "edges"))
        edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
    auto rotations = expect(j, "rotations").get<std::vector<std::vector<int>>>();
    PlaneGraph graph(n, std::move(edges), std::move(rotations));
    if (j.contains("darts")) {
        const auto & darts = j.at("darts");
        if (int(darts.size()) != graph.dart_count())
            throw error("dart list length disagrees with the edge list");
        for (int d = 0; d < graph.dart_count(); ++d)
            if (darts.at(std::size_t(d)).at("vertex").get<int>() != graph.dart_vertex(d))
                throw error("dart vertex disagrees with the rotation system");
    }
    std::vector<PlaneConstraint> constraints;
    for (const auto & jc : expect(j, "constraints")) {
        PlaneConstraint c{expect(jc, "relation").get<std::string>(),
                rat_from_json(expect(jc, "weight")), expect(jc, "anchor_dart").get<int>(),
                std::nullopt};
        if (jc.contains("scope"))
            c.scope = jc.at("scope").get<std::vector<int>>();
        constraints.push_back(std::move(c));
    }
    return PlaneInstance{
        expect(j, "domain_size").get<int>(),
        std::move(graph),
        expect(j, "outer_face").get<int>(),
        std::move(constraints),
        language_from_json(expect(j, "relations")),
    };
}

auto derivation_to_json(const DerivPtr & d) -> json {
    if (! d)
        throw error("null derivation");
    json j{{"kind", dkind_name(d->kind)}};
    switch (d->kind) {
        case DKind::Base:
            j["name"] = d->base_name;
            break;
        case DKind::Unary:
            j["table"] = relation_to_json(*d->table);
            break;
        case DKind::Equality:
            j["domain_size"] = d->domain_size;
            break;
        case DKind::Top:
            j["domain_size"] = d->domain_size;
            j["arity"] = d->arity;
            break;
        default:
            break;
    }
    if (d->child)
        j["child"] = derivation_to_json(d->child);
    if (d->aux)
        j["aux"] = derivation_to_json(d->aux);
    if (! d->children.empty()) {
        json children = json::array();
        for (const auto & c : d->children)
            children.push_back(derivation_to_json(c));
        j["children"] = std::move(children);
        j["flips"] = d->flips;
    }
    if (d->coord)
        j["coord"] = d->coord;
    if (d->kind == DKind::Pin)
        j["label"] = d->label;
    if (d->kind == DKind::RestrictDomain)
        j["subdomain"] = d->subdomain;
    if (d->kind == DKind::Scale || d->kind == DKind::AddConst)
        j["constant"] = rat_to_string(d->constant);
    return j;
}

auto derivation_from_json(const json & j) -> DerivPtr {
    auto kind = dkind_from_name(expect(j, "kind").get<std::string>());
    auto child = [&]() { return derivation_from_json(expect(j, "child")); };
    auto aux = [&]() -> DerivPtr {
        return j.contains("aux") ? derivation_from_json(j.at("aux")) : nullptr;
    };
    auto coord = [&]() { return expect(j, "coord").get<int>(); };
    switch (kind) {
        case DKind::Base:
            return deriv::base(expect(j, "name").get<std::string>());
        case DKind::Unary:
            return deriv::unary(relation_from_json(expect(j, "table")));
        case DKind::Equality:
            return deriv::equality(expect(j, "domain_size").get<int>());
        case DKind::Top:
            return deriv::top(expect(j, "domain_size").get<int>(), expect(j, "arity").get<int>());
        case DKind::AddUnary:
            return deriv::add_unary(child(), derivation_from_json(expect(j, "aux")), coord());
        case DKind::AddBinary:
            return deriv::add_binary(child(), derivation_from_json(expect(j, "aux")), coord());
        case DKind::Minimise:
            return deriv::minimise(child(), coord());
        case DKind::Join: {
            auto children = expect(j, "children");
            auto flips = expect(j, "flips").get<std::vector<bool>>();
            return deriv::join(derivation_from_json(children.at(0)),
                    derivation_from_json(children.at(1)), flips.at(0), flips.at(1));
        }
        case DKind::Fan: {
            std::vector<DerivPtr> children;
            for (const auto & c : expect(j, "children"))
                children.push_back(derivation_from_json(c));
            return deriv::fan(std::move(children), expect(j, "flips").get<std::vector<bool>>());
        }
        case DKind::RestrictDomain:
            return deriv::restrict_domain(child(), coord(),
                    expect(j, "subdomain").get<std::vector<Label>>(), aux());
        case DKind::Pin:
            return deriv::pin(child(), coord(), expect(j, "label").get<Label>(), aux());
        case DKind::EqRestrict:
            return deriv::eq_restrict(child(), coord());
        case DKind::NeqRestrict:
            return deriv::neq_restrict(child(), coord(), derivation_from_json(expect(j, "aux")));
        case DKind::Twist:
            return deriv::twist(child(), coord(), derivation_from_json(expect(j, "aux")));
        case DKind::Opt:
            return deriv::opt_node(child());
        case DKind::Feas:
            return deriv::feas_node(child());
        case DKind::Scale:
            return deriv::scale_node(child(), rat_from_json(expect(j, "constant")));
        case DKind::AddConst:
            return deriv::add_const_node(child(), rat_from_json(expect(j, "constant")));
    }
    throw error("unknown derivation kind");
}

auto saturated_set_to_json(const SaturatedSet & s) -> json {
    json entries = json::array();
    for (auto idx : s.ordered()) {
        const auto & e = s.entry(idx);
        entries.push_back({{"relation", relation_to_json(e.rel)},
                {"derivation", derivation_to_json(e.derivation)}});
    }
    return {
        {"schema", "saturated_set"},
        {"domain_size", s.base().domain_size()},
        {"conservative", s.conservative()},
        {"exhausted", s.exhausted()},
        {"budget", {{"max_arity", s.budget().max_arity}, {"max_depth", s.budget().max_depth},
                {"max_set", s.budget().max_set}, {"max_steps", s.budget().max_steps}}},
        {"size", s.size()},
        {"entries", entries},
    };
}

auto boolean_verdict_to_json(const BooleanVerdict & v) -> json {
    json j{{"schema", "boolean_verdict"}};
    if (std::holds_alternative<BoolTractable>(v)) {
        const auto & t = std::get<BoolTractable>(v);
        j["verdict"] = "Tractable";
        j["multimorphisms"] = t.multimorphisms;
        j["candidate"] = candidate_to_json(t.candidate);
    }
    else if (std::holds_alternative<BoolPlanarlyIntractable>(v)) {
        const auto & pi = std::get<BoolPlanarlyIntractable>(v);
        j["verdict"] = "PlanarlyIntractable";
        j["rho0"] = derivation_to_json(pi.rho0);
        j["rho1"] = derivation_to_json(pi.rho1);
        j["rho_neq"] = derivation_to_json(pi.rho_neq);
        j["rho_one_in_three"] = derivation_to_json(pi.rho_one_in_three);
    }
    else if (std::holds_alternative<BoolOpenSelfComplementary>(v))
        j["verdict"] = "OpenSelfComplementary";
    else {
        j["verdict"] = "BudgetExhausted";
        j["diagnostics"] = std::get<BoolBudgetExhausted>(v).diagnostics;
    }
    return j;
}

namespace {

auto vertex_to_json(PairVertex v) -> json {
    return json::array({v.a, v.b});
}

auto witness_to_json(const EdgeWitness & w, const SaturatedSet & s) -> json {
    return {
        {"relation", relation_to_json(s.entry(w.entry).rel)},
        {"derivation", derivation_to_json(s.entry(w.entry).derivation)},
        {"a1", w.a1}, {"b1", w.b1}, {"a2", w.a2}, {"b2", w.b2},
        {"A", w.A.to_string()}, {"P", w.P.to_string()},
        {"Q", w.Q.to_string()}, {"B", w.B.to_string()},
        {"soft", w.soft},
    };
}

}

auto conservative_verdict_to_json(const ConservativeVerdict & v, const SaturatedSet & s) -> json {
    json j{{"schema", "conservative_verdict"}};
    if (std::holds_alternative<ConsTractable>(v)) {
        const auto & t = std::get<ConsTractable>(v);
        j["verdict"] = "Tractable";
        j["stp"] = candidate_to_json(t.stp);
        j["mjn"] = candidate_to_json(t.mjn);
        j["mjn_equality"] = t.mjn_equality;
        json m1 = json::array(), m2 = json::array(), barm = json::array();
        for (auto & x : t.bipartition.M1)
            m1.push_back(vertex_to_json(x));
        for (auto & x : t.bipartition.M2)
            m2.push_back(vertex_to_json(x));
        for (auto & x : t.bipartition.barM)
            barm.push_back(vertex_to_json(x));
        j["M1"] = m1;
        j["M2"] = m2;
        j["barM"] = barm;
    }
    else if (std::holds_alternative<ConsPlanarlyIntractable>(v)) {
        const auto & pi = std::get<ConsPlanarlyIntractable>(v);
        j["verdict"] = "PlanarlyIntractable";
        j["vertex"] = vertex_to_json(pi.loop.vertex);
        j["witness"] = witness_to_json(pi.loop.witness, s);
        j["loop_relation"] = relation_to_json(pi.loop.loop_relation);
        j["loop_derivation"] = derivation_to_json(pi.loop.derivation);
    }
    else {
        j["verdict"] = "Unknown";
        j["diagnostics"] = std::get<ConsUnknown>(v).diagnostics;
    }
    return j;
}

auto pair_graph_to_json(const PairGraph & g, const SaturatedSet & s) -> json {
    json vertices = json::array();
    for (const auto & v : g.vertices())
        vertices.push_back(vertex_to_json(v));
    json edges = json::array();
    for (std::size_t i = 0; i < g.vertices().size(); ++i)
        for (std::size_t k = i; k < g.vertices().size(); ++k) {
            auto u = g.vertices()[i], v = g.vertices()[k];
            if (! g.has_edge(u, v))
                continue;
            edges.push_back({{"u", vertex_to_json(u)}, {"v", vertex_to_json(v)},
                    {"witness", witness_to_json(g.witness(u, v), s)}});
        }
    return {{"schema", "pair_graph"}, {"domain_size", g.domain_size()},
            {"vertices", vertices}, {"edges", edges}, {"truncated", g.truncated()}};
}

auto pair_graph_to_dot(const PairGraph & g) -> std::string {
    std::string out = "graph pair_graph {\n";
    std::vector<PairVertex> looped;
    for (const auto & v : g.vertices())
        if (g.has_self_loop(v))
            looped.push_back(v);
    auto name = [](PairVertex v) {
        return "\"(" + std::to_string(v.a) + "," + std::to_string(v.b) + ")\"";
    };
    for (const auto & v : g.vertices()) {
        out += "  " + name(v);
        if (std::find(looped.begin(), looped.end(), v) != looped.end())
            out += " [style=filled, fillcolor=lightgray]";
        out += ";\n";
    }
    for (std::size_t i = 0; i < g.vertices().size(); ++i)
        for (std::size_t k = i; k < g.vertices().size(); ++k) {
            auto u = g.vertices()[i], v = g.vertices()[k];
            if (! g.has_edge(u, v))
                continue;
            out += "  " + name(u) + " -- " + name(v);
            if (g.has_soft_edge(u, v))
                out += " [style=dashed]";
            out += ";\n";
        }
    out += "}\n";
    return out;
}

auto realization_to_json(const Realization & r) -> json {
    return {
        {"schema", "realization"},
        {"instance", instance_to_json(r.instance)},
        {"v", r.v},
        {"shift", rat_to_string(r.shift)},
        {"opt_pending", r.opt_pending},
        {"inner_opt_scaling", r.inner_opt_scaling},
    };
}

auto query_from_json(const json & j) -> ExpressibleQuery {
    auto inst = instance_from_json(j);
    if (! j.contains("pi"))
        throw error("express query needs a \"pi\" variable tuple");
    return ExpressibleQuery{std::move(inst), j.at("pi").get<std::vector<int>>()};
}

auto load_file(const std::string & path) -> json {
    std::ifstream in(path);
    if (! in)
        throw error("cannot open " + path);
    json j;
    try {
        in >> j;
    }
    catch (const json::parse_error & e) {
        throw error("parse error in " + path + ": " + e.what());
    }
    return j;
}

}
