#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pvcsp/catalog.hpp>
#include <pvcsp/io.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

using namespace pvcsp;

namespace {

auto cli_path() -> std::string {
    const char * p = std::getenv("PVCSP_CLI");
    REQUIRE(p != nullptr);
    return p;
}

auto fixtures() -> std::string {
    const char * p = std::getenv("PVCSP_FIXTURES");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int exit_code;
    std::string output;
};

auto run(const std::string & args) -> RunResult {
    auto cmd = cli_path() + " " + args + " 2>/dev/null";
    auto * pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        output.append(buf.data(), got);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), std::move(output)};
}

}

TEST_CASE("solve and exit codes") {
    auto r = run("solve " + fixtures() + "/example2_2.json");
    CHECK(r.exit_code == 0);
    auto j = io::json::parse(r.output);
    CHECK(j.at("optimum") == "0");

    auto missing = run("solve " + fixtures() + "/no_such_file.json");
    CHECK(missing.exit_code == 1);
}

TEST_CASE("express returns the star relation") {
    auto r = run("express " + fixtures() + "/star.json");
    CHECK(r.exit_code == 0);
    auto j = io::json::parse(r.output);
    auto rel = io::relation_from_json(j);
    for (std::size_t i = 0; i < rel.size(); ++i) {
        auto t = index_tuple(i, 2, 3);
        bool all_equal = t[0] == t[1] && t[1] == t[2];
        CHECK(rel[i] == (all_equal ? ExtValue(0) : ExtValue(1)));
    }
}

TEST_CASE("express on the two-loop instance yields equality") {
    auto r = run("express " + fixtures() + "/two_loops.json");
    CHECK(r.exit_code == 0);
    CHECK(io::relation_from_json(io::json::parse(r.output)) == cat::rho_eq());
}

TEST_CASE("validate") {
    auto r = run("validate " + fixtures() + "/example2_2.json");
    CHECK(r.exit_code == 0);
    CHECK(io::json::parse(r.output).at("ok") == true);
}

TEST_CASE("check-mm") {
    auto r = run("check-mm " + fixtures() + "/check_minmax_imp.json");
    CHECK(r.exit_code == 0);
    CHECK(io::json::parse(r.output).at("verdict") == "holds");
}

TEST_CASE("classify-boolean exit codes") {
    CHECK(run("classify-boolean " + fixtures() + "/gamma_imp.json").exit_code == 0);
    CHECK(run("classify-boolean " + fixtures() + "/gamma_nae.json").exit_code == 4);
    CHECK(run("classify-boolean " + fixtures() + "/gamma_cut.json").exit_code == 4);
    auto is = run("classify-boolean " + fixtures() + "/gamma_is.json --max-set 3000 --max-steps 60000");
    CHECK(is.exit_code == 3);
    CHECK(io::json::parse(is.output).at("verdict") == "PlanarlyIntractable");
}

TEST_CASE("classify-conservative exit codes and pair-graph dot") {
    CHECK(run("classify-conservative " + fixtures() + "/gamma_cut.json --max-set 1500 --max-steps 40000").exit_code == 3);
    CHECK(run("classify-conservative " + fixtures() + "/gamma_imp.json --max-set 1500 --max-steps 40000").exit_code == 0);
    CHECK(run("classify-conservative " + fixtures() + "/neq.json --max-set 1500 --max-steps 40000").exit_code == 0);

    auto dot = run("pair-graph " + fixtures() + "/gamma_cut.json --format dot --max-set 800 --max-steps 20000");
    CHECK(dot.exit_code == 0);
    CHECK(dot.output.find("graph pair_graph {") != std::string::npos);
    CHECK(dot.output.find("style=dashed") != std::string::npos);   // soft edge
    CHECK(dot.output.find("fillcolor=lightgray") != std::string::npos);  // looped vertex
}

TEST_CASE("saturate emits a set whose derivations replay") {
    auto r = run("saturate " + fixtures() + "/gamma_cut.json --conservative --max-set 200 --max-steps 4000");
    CHECK(r.exit_code == 0);
    auto j = io::json::parse(r.output);
    auto base = io::language_from_json(io::load_file(fixtures() + "/gamma_cut.json"));
    CHECK(j.at("size").get<std::size_t>() == j.at("entries").size());
    for (const auto & e : j.at("entries")) {
        auto rel = io::relation_from_json(e.at("relation"));
        auto d = io::derivation_from_json(e.at("derivation"));
        CHECK(replay(d, base) == rel);
    }
}

TEST_CASE("artifact round trips") {
    auto lang_json = io::load_file(fixtures() + "/gamma_is.json");
    auto lang = io::language_from_json(lang_json);
    CHECK(io::language_to_json(lang) == lang_json);

    auto inst_json = io::load_file(fixtures() + "/example2_2.json");
    auto inst = io::instance_from_json(inst_json);
    CHECK(io::instance_to_json(inst) == inst_json);

    auto syn = run("synthesize " + fixtures() + "/gamma_is.json --max-set 3000 --max-steps 60000");
    CHECK(syn.exit_code == 3);
    auto j = io::json::parse(syn.output);
    auto one3 = io::derivation_from_json(j.at("rho_one_in_three"));
    CHECK(replay(one3, lang) == cat::rho_one_in_three());
    auto realized = io::instance_from_json(j.at("realization").at("instance"));
    CHECK(validate_instance(realized).ok());
}

TEST_CASE("byte-identical reruns") {
    std::vector<std::string> commands{
        "solve " + fixtures() + "/example2_2.json",
        "express " + fixtures() + "/star.json",
        "validate " + fixtures() + "/example2_2.json",
        "check-mm " + fixtures() + "/check_minmax_imp.json",
        "classify-boolean " + fixtures() + "/gamma_is.json --max-set 3000 --max-steps 60000",
        "classify-conservative " + fixtures() + "/neq.json --max-set 1500 --max-steps 40000",
        "pair-graph " + fixtures() + "/gamma_imp.json --format dot --max-set 800 --max-steps 20000",
        "saturate " + fixtures() + "/neq.json --max-set 300 --max-steps 6000",
    };
    for (const auto & cmd : commands) {
        auto a = run(cmd);
        auto b = run(cmd);
        auto c = run(cmd + " --workers 1");
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.output == b.output);
        CHECK(a.output == c.output);
    }
}
