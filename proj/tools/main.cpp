#include <pvcsp/catalog.hpp>
#include <pvcsp/io.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

using namespace pvcsp;

namespace {

// exit codes: 0 ok/tractable, 1 input error, 2 infeasible instance,
// 3 planarly-intractable, 4 open-self-complementary, 5 budget-exhausted,
// 6 unknown
enum ExitCode {
    exit_ok = 0,
    exit_input = 1,
    exit_infeasible = 2,
    exit_intractable = 3,
    exit_open_self_complementary = 4,
    exit_budget = 5,
    exit_unknown = 6,
};

struct Options {
    std::string input;
    std::string format = "json";
    int max_arity = 0;
    int max_depth = 6;
    std::size_t max_set = 50'000;
    std::uint64_t max_steps = 200'000;
    int max_vars = 20;
    int workers = 1;
};

auto budget_for(const Options & opt, const Language & lang) -> SaturationBudget {
    auto b = default_budget(lang);
    if (opt.max_arity > 0)
        b.max_arity = opt.max_arity;
    b.max_depth = opt.max_depth;
    b.max_set = opt.max_set;
    b.max_steps = opt.max_steps;
    return b;
}

auto solve_cap(const Options & opt, int domain_size) -> std::uint64_t {
    std::uint64_t cap = 1;
    for (int i = 0; i < opt.max_vars; ++i) {
        if (cap > (std::uint64_t(1) << 40))
            return cap;
        cap *= std::uint64_t(domain_size);
    }
    return cap;
}

auto emit(const io::json & j) -> void {
    std::cout << j.dump(2) << "\n";
}

auto add_common(CLI::App * cmd, Options & opt, bool with_budget = true) -> void {
    cmd->add_option("input", opt.input, "input JSON file")->required();
    cmd->add_option("--format", opt.format, "output format (json, text, dot)");
    cmd->add_option("--workers", opt.workers, "cap on internal parallelism")
        ->check(CLI::PositiveNumber);
    if (with_budget) {
        cmd->add_option("--max-arity", opt.max_arity, "saturation arity bound");
        cmd->add_option("--max-depth", opt.max_depth, "derivation depth bound");
        cmd->add_option("--max-set", opt.max_set, "saturated set size bound");
        cmd->add_option("--max-steps", opt.max_steps, "saturation work bound");
    }
    cmd->add_option("--max-vars", opt.max_vars, "brute-force variable cap");
}

auto run_solve(const Options & opt) -> int {
    auto inst = io::instance_from_json(io::load_file(opt.input));
    auto report = validate_instance(inst);
    if (! report.ok()) {
        io::json j{{"error", "invalid instance"}, {"violations", report.violations}};
        std::cout << j.dump(2) << "\n";
        return exit_input;
    }
    auto result = solve(inst, solve_cap(opt, inst.domain_size));
    if (opt.format == "text") {
        std::cout << "optimum " << result.optimum.to_string() << "\n";
        if (result.assignment) {
            std::cout << "assignment";
            for (auto a : *result.assignment)
                std::cout << " " << a;
            std::cout << "\n";
        }
    }
    else {
        io::json j{{"schema", "solve_result"}, {"optimum", result.optimum.to_string()}};
        if (result.assignment)
            j["assignment"] = *result.assignment;
        emit(j);
    }
    return result.optimum.is_infinite() ? exit_infeasible : exit_ok;
}

auto run_express(const Options & opt) -> int {
    auto q = io::query_from_json(io::load_file(opt.input));
    auto rel = pi_v(q, solve_cap(opt, q.instance.domain_size));
    auto j = io::relation_to_json(rel);
    j["schema"] = "relation";
    emit(j);
    return exit_ok;
}

auto run_validate(const Options & opt) -> int {
    auto inst = io::instance_from_json(io::load_file(opt.input));
    auto report = validate_instance(inst);
    if (opt.format == "text") {
        if (report.ok())
            std::cout << "ok\n";
        else
            for (const auto & v : report.violations)
                std::cout << "violation: " << v << "\n";
    }
    else
        emit({{"schema", "validation"}, {"ok", report.ok()}, {"violations", report.violations}});
    return exit_ok;
}

auto run_check_mm(const Options & opt) -> int {
    auto j = io::load_file(opt.input);
    auto lang = io::language_from_json(j.contains("language") ? j.at("language") : j);
    auto candidate = io::candidate_from_json(j.contains("multimorphism") ? j.at("multimorphism") : j);
    auto verdict = is_multimorphism(candidate, lang);
    io::json out{{"schema", "multimorphism_check"}};
    if (holds(verdict)) {
        out["verdict"] = holds_with_equality(verdict) ? "holds_with_equality" : "holds";
    }
    else {
        const auto & f = std::get<MmFails>(verdict);
        out["verdict"] = "fails";
        out["relation"] = lang.name_of(f.relation_index);
        io::json witness = io::json::array();
        for (const auto & t : f.witness)
            witness.push_back(t);
        out["witness"] = witness;
    }
    emit(out);
    return exit_ok;
}

auto run_classify_boolean(const Options & opt) -> int {
    auto lang = io::language_from_json(io::load_file(opt.input));
    auto verdict = classify_boolean(lang, budget_for(opt, lang));
    emit(io::boolean_verdict_to_json(verdict));
    if (std::holds_alternative<BoolTractable>(verdict))
        return exit_ok;
    if (std::holds_alternative<BoolPlanarlyIntractable>(verdict))
        return exit_intractable;
    if (std::holds_alternative<BoolOpenSelfComplementary>(verdict))
        return exit_open_self_complementary;
    return exit_budget;
}

auto run_classify_conservative(const Options & opt) -> int {
    auto lang = io::language_from_json(io::load_file(opt.input));
    auto budget = budget_for(opt, lang);
    auto s = saturate(lang, budget, true);
    auto verdict = classify_conservative(lang, budget);
    emit(io::conservative_verdict_to_json(verdict, s));
    if (std::holds_alternative<ConsTractable>(verdict))
        return exit_ok;
    if (std::holds_alternative<ConsPlanarlyIntractable>(verdict))
        return exit_intractable;
    return exit_unknown;
}

auto run_pair_graph(const Options & opt) -> int {
    auto lang = io::language_from_json(io::load_file(opt.input));
    auto s = saturate(lang, budget_for(opt, lang), true);
    auto g = build_pair_graph(s);
    if (opt.format == "dot")
        std::cout << io::pair_graph_to_dot(g);
    else
        emit(io::pair_graph_to_json(g, s));
    return exit_ok;
}

auto run_synthesize(const Options & opt) -> int {
    auto lang = io::language_from_json(io::load_file(opt.input));
    auto verdict = classify_boolean(lang, budget_for(opt, lang));
    auto j = io::boolean_verdict_to_json(verdict);
    if (std::holds_alternative<BoolPlanarlyIntractable>(verdict)) {
        const auto & pi = std::get<BoolPlanarlyIntractable>(verdict);
        j["realization"] = io::realization_to_json(realize(pi.rho_one_in_three, lang));
    }
    j["schema"] = "synthesis";
    emit(j);
    if (std::holds_alternative<BoolTractable>(verdict))
        return exit_ok;
    if (std::holds_alternative<BoolPlanarlyIntractable>(verdict))
        return exit_intractable;
    if (std::holds_alternative<BoolOpenSelfComplementary>(verdict))
        return exit_open_self_complementary;
    return exit_budget;
}

auto run_saturate(const Options & opt, bool conservative) -> int {
    auto lang = io::language_from_json(io::load_file(opt.input));
    auto s = saturate(lang, budget_for(opt, lang), conservative);
    emit(io::saturated_set_to_json(s));
    return exit_ok;
}

}

int main(int argc, char ** argv) {
    CLI::App app{"planar valued constraint satisfaction toolkit"};
    app.require_subcommand(1);

    Options opt;
    bool conservative_saturation = false;

    auto * solve_cmd = app.add_subcommand("solve", "minimise a plane instance by brute force");
    add_common(solve_cmd, opt, false);
    auto * express_cmd = app.add_subcommand("express", "evaluate the outer-face relation of a plane instance");
    add_common(express_cmd, opt, false);
    auto * validate_cmd = app.add_subcommand("validate", "structural checks for a plane instance");
    add_common(validate_cmd, opt, false);
    auto * mm_cmd = app.add_subcommand("check-mm", "verify a multimorphism candidate");
    add_common(mm_cmd, opt, false);
    auto * cb_cmd = app.add_subcommand("classify-boolean", "classify a Boolean language");
    add_common(cb_cmd, opt);
    auto * cc_cmd = app.add_subcommand("classify-conservative", "classify a conservative language");
    add_common(cc_cmd, opt);
    auto * pg_cmd = app.add_subcommand("pair-graph", "build the label-pair graph");
    add_common(pg_cmd, opt);
    auto * syn_cmd = app.add_subcommand("synthesize", "emit hardness derivations and the realized gadget");
    add_common(syn_cmd, opt);
    auto * sat_cmd = app.add_subcommand("saturate", "bounded closure of a language");
    add_common(sat_cmd, opt);
    sat_cmd->add_flag("--conservative", conservative_saturation, "treat every unary as a free generator");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed())
            return run_solve(opt);
        if (express_cmd->parsed())
            return run_express(opt);
        if (validate_cmd->parsed())
            return run_validate(opt);
        if (mm_cmd->parsed())
            return run_check_mm(opt);
        if (cb_cmd->parsed())
            return run_classify_boolean(opt);
        if (cc_cmd->parsed())
            return run_classify_conservative(opt);
        if (pg_cmd->parsed())
            return run_pair_graph(opt);
        if (syn_cmd->parsed())
            return run_synthesize(opt);
        if (sat_cmd->parsed())
            return run_saturate(opt, conservative_saturation);
    }
    catch (const budget_error & e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return exit_budget;
    }
    catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
    return exit_input;
}
