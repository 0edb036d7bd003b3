#pragma once

#include <pvcsp/classify_boolean.hpp>
#include <pvcsp/classify_conservative.hpp>
#include <pvcsp/plane.hpp>
#include <pvcsp/realize.hpp>

#include <json.hpp>

#include <string>

namespace pvcsp::io {

using json = nlohmann::json;

// values are strings "p", "p/q" or "inf"; labels are integers; tables are
// flat arrays in index order
auto relation_to_json(const WeightedRelation & rel) -> json;
auto relation_from_json(const json & j) -> WeightedRelation;

auto language_to_json(const Language & lang) -> json;
auto language_from_json(const json & j) -> Language;

auto optable_to_json(const OpTable & op) -> json;
auto optable_from_json(const json & j) -> OpTable;
auto candidate_to_json(const MultimorphismCandidate & c) -> json;
auto candidate_from_json(const json & j) -> MultimorphismCandidate;

auto instance_to_json(const PlaneInstance & inst) -> json;
auto instance_from_json(const json & j) -> PlaneInstance;

auto derivation_to_json(const DerivPtr & d) -> json;
auto derivation_from_json(const json & j) -> DerivPtr;

auto saturated_set_to_json(const SaturatedSet & s) -> json;

auto boolean_verdict_to_json(const BooleanVerdict & v) -> json;
auto conservative_verdict_to_json(const ConservativeVerdict & v, const SaturatedSet & s) -> json;

auto pair_graph_to_json(const PairGraph & g, const SaturatedSet & s) -> json;
auto pair_graph_to_dot(const PairGraph & g) -> std::string;

auto realization_to_json(const Realization & r) -> json;

// The express query tuple is carried in the instance file under "pi".
auto query_from_json(const json & j) -> ExpressibleQuery;

auto load_file(const std::string & path) -> json;

}
