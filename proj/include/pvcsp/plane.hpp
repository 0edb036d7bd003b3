#pragma once

#include <pvcsp/language.hpp>
#include <pvcsp/relation.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pvcsp {

// A connected plane multigraph given by a rotation system. Darts are
// 0..2E-1; twin() pairs the two darts of each edge; rotation(v) lists the
// darts leaving v in clockwise plane order. Loops and parallel edges are
// allowed.
class PlaneGraph {
public:
    PlaneGraph(int n, std::vector<std::pair<int, int>> edges, std::vector<std::vector<int>> rotations);

    auto vertex_count() const -> int { return _n; }
    auto dart_count() const -> int { return int(_dart_vertex.size()); }
    auto edge_count() const -> int { return dart_count() / 2; }
    auto edges() const -> const std::vector<std::pair<int, int>> & { return _edges; }
    auto rotations() const -> const std::vector<std::vector<int>> & { return _rotation; }

    auto twin(int d) const -> int { return _twin.at(std::size_t(d)); }
    auto dart_vertex(int d) const -> int { return _dart_vertex.at(std::size_t(d)); }
    // Head of a dart = tail of its twin.
    auto head(int d) const -> int { return dart_vertex(twin(d)); }
    // Clockwise successor of dart d in the rotation at its vertex.
    auto next_clockwise(int d) const -> int { return _sigma.at(std::size_t(d)); }
    // Successor of d along its face boundary walk.
    auto next_on_face(int d) const -> int { return next_clockwise(twin(d)); }

    auto is_connected() const -> bool;

private:
    int _n;
    std::vector<std::pair<int, int>> _edges;
    std::vector<std::vector<int>> _rotation;
    std::vector<int> _twin;
    std::vector<int> _dart_vertex;
    std::vector<int> _sigma;
};

struct Face {
    int id;
    std::vector<int> darts;        // closed boundary walk, clockwise
    std::vector<int> vertex_walk;  // tails of the boundary darts
};

// Faces as orbits of the boundary-successor rule, in deterministic order
// (sorted by smallest dart; each walk starts at its smallest dart).
// Throws on disconnected graphs.
auto trace_faces(const PlaneGraph & g) -> std::vector<Face>;

auto euler_characteristic(const PlaneGraph & g) -> int;

struct PlaneConstraint {
    std::string relation;
    Rat weight;
    int anchor_dart;
    // Declared scope; when present, validation checks it against the
    // boundary walk read from the anchor.
    std::optional<std::vector<int>> scope;
};

// A plane VCSP instance: variables are vertices, constraints live on faces.
struct PlaneInstance {
    int domain_size;
    PlaneGraph graph;
    int outer_face;  // face id in trace_faces order
    std::vector<PlaneConstraint> constraints;
    Language relations;

    auto relation_of(const PlaneConstraint & c) const -> const WeightedRelation & {
        return relations.find(c.relation);
    }
};

struct ValidationReport {
    std::vector<std::string> violations;
    auto ok() const -> bool { return violations.empty(); }
};

auto validate_instance(const PlaneInstance & inst) -> ValidationReport;

// Face id of the constraint's anchor dart, given traced faces.
auto face_of_dart(const std::vector<Face> & faces, int dart) -> int;
// Vertex walk of the face starting at the given anchor dart.
auto walk_from_anchor(const PlaneGraph & g, const Face & face, int anchor) -> std::vector<int>;

using Assignment = std::vector<Label>;

inline constexpr std::uint64_t default_solve_cap = 1u << 20;

auto objective_value(const PlaneInstance & inst, const Assignment & s) -> ExtValue;

struct SolveResult {
    ExtValue optimum;
    std::optional<Assignment> assignment;  // lexicographically smallest optimum
};

auto solve(const PlaneInstance & inst, std::uint64_t cap = default_solve_cap) -> SolveResult;

}
