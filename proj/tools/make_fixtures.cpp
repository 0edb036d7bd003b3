// Writes the example languages and instances used by the test suites and
// the command-line examples.
#include <pvcsp/catalog.hpp>
#include <pvcsp/io.hpp>

#include <fstream>
#include <iostream>

using namespace pvcsp;

namespace {

auto write(const std::string & path, const io::json & j) -> void {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
    std::cout << path << "\n";
}

// Figure 1(b): x1 carries a self-loop, x1-x2-x3 form a triangle, parallel
// x2-x3 and x3-x4 edges form two lenses.
auto figure_1b() -> PlaneInstance {
    PlaneGraph graph(4,
            {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}, {12, 13}},
            {{0, 4, 2, 1}, {3, 6, 8}, {10, 12, 9, 7, 5}, {13, 11}});
    Language rels(2, {
        {"g1", cat::gamma0()},
        {"g2", cat::rho_nae()},
        {"g3", cat::gamma_cut()},
        {"g4", cat::gamma_cut()},
    });
    return PlaneInstance{2, std::move(graph), 1,
            {
                PlaneConstraint{"g1", Rat(2), 0, std::vector<int>{0}},
                PlaneConstraint{"g2", Rat(0), 6, std::vector<int>{1, 2, 0}},
                PlaneConstraint{"g3", Rat(1), 7, std::vector<int>{2, 1}},
                PlaneConstraint{"g4", Rat(5, 3), 12, std::vector<int>{2, 3}},
            },
            std::move(rels)};
}

}

int main(int argc, char ** argv) {
    std::string dir = argc > 1 ? argv[1] : "fixtures";

    write(dir + "/gamma_imp.json", io::language_to_json(cat::lang_imp()));
    write(dir + "/gamma_nae.json", io::language_to_json(cat::lang_nae()));
    write(dir + "/gamma_cut.json", io::language_to_json(cat::lang_cut()));
    write(dir + "/gamma_is.json", io::language_to_json(cat::lang_is()));
    write(dir + "/cut_g0.json", io::language_to_json(cat::lang_cut_g0()));
    write(dir + "/neq.json", io::language_to_json(cat::lang_neq()));
    write(dir + "/eq3.json", io::language_to_json(Language(3, {{"eq", cat::rho_eq(3)}})));
    write(dir + "/col3.json", io::language_to_json(Language(3, {{"col", cat::gamma_col(3)}})));

    write(dir + "/example2_2.json", io::instance_to_json(figure_1b()));

    // Example 2.4: the three-spoke star expressing the all-equal-or-pay-one
    // relation; "pi" marks the outer variables for the express command
    Language cut_lang(2, {{"cut", cat::gamma_cut()}});
    auto star = realize(deriv::fan({deriv::base("cut"), deriv::base("cut"), deriv::base("cut")},
            {false, false, false}), cut_lang);
    auto star_json = io::instance_to_json(star.instance);
    star_json["pi"] = star.v;
    write(dir + "/star.json", star_json);

    // the two-self-loop instance expressing the equality relation
    auto eq = realize(deriv::equality(2), cut_lang);
    auto eq_json = io::instance_to_json(eq.instance);
    eq_json["pi"] = eq.v;
    write(dir + "/two_loops.json", eq_json);

    // a multimorphism check input: <min,max> against gamma_imp
    io::json mm{
        {"schema", "multimorphism_check"},
        {"language", io::language_to_json(cat::lang_imp())},
        {"multimorphism", io::candidate_to_json(
                MultimorphismCandidate("<min,max>", {cat::min2(), cat::max2()}))},
    };
    write(dir + "/check_minmax_imp.json", mm);

    return 0;
}
