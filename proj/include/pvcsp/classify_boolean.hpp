#pragma once

#include <pvcsp/closure.hpp>
#include <pvcsp/multimorphism.hpp>

#include <string>
#include <variant>
#include <vector>

namespace pvcsp {

// Verdicts for Boolean languages. Tractable carries a verified
// multimorphism; PlanarlyIntractable carries derivations of the four
// hardness targets, each replaying exactly to its catalog relation.
struct BoolTractable {
    std::vector<std::string> multimorphisms;  // every holding candidate
    MultimorphismCandidate candidate;         // the first of them, verified
};

struct BoolPlanarlyIntractable {
    DerivPtr rho0;
    DerivPtr rho1;
    DerivPtr rho_neq;
    DerivPtr rho_one_in_three;
};

struct BoolOpenSelfComplementary {};

struct BoolBudgetExhausted {
    std::string diagnostics;
};

using BooleanVerdict = std::variant<BoolTractable, BoolPlanarlyIntractable,
        BoolOpenSelfComplementary, BoolBudgetExhausted>;

// The eight tractability-frontier multimorphisms on {0,1}, in order:
// <c0>, <c1>, <min,min>, <max,max>, <min,max>, <mnrt,mnrt,mnrt>,
// <mjrt,mjrt,mjrt>, <mjrt,mjrt,mnrt>.
auto eight_candidates() -> std::vector<MultimorphismCandidate>;
auto check_eight(const Language & lang) -> std::vector<std::pair<std::string, MmVerdict>>;

auto classify_boolean(const Language & lang, const SaturationBudget & budget) -> BooleanVerdict;
auto classify_boolean(const Language & lang) -> BooleanVerdict;

// Synthesis pipeline pieces, exposed for testing and the synthesize command.
struct ConstantsResult {
    DerivPtr rho0;     // may be null
    DerivPtr rho1;     // may be null
    DerivPtr rho_neq;  // may be null; at least rho_neq or both constants set
};

// Lemma-style constructions over a saturated approximation of the closure.
auto derive_constants(const Language & lang, const SaturatedSet & s) -> ConstantsResult;
auto derive_neq(const Language & lang, const SaturatedSet & s,
        const DerivPtr & rho0, const DerivPtr & rho1) -> DerivPtr;
auto derive_consts_from_neq(const Language & lang, const SaturatedSet & s,
        const DerivPtr & rho_neq) -> std::pair<DerivPtr, DerivPtr>;
auto derive_one_in_three(const Language & lang, const SaturatedSet & s,
        const DerivPtr & rho0, const DerivPtr & rho1, const DerivPtr & rho_neq) -> DerivPtr;

}
