#pragma once

#include <pvcsp/derivation.hpp>
#include <pvcsp/plane.hpp>

#include <cstdint>

namespace pvcsp {

// A plane instance together with the tuple of outer-face variables it
// expresses a relation over.
struct ExpressibleQuery {
    PlaneInstance instance;
    std::vector<int> v;
};

// The relation induced on v by minimizing over all assignments. Requires a
// valid instance, no constraint on the outer face, and an outer boundary
// walk reading v_r v_{r-1} ... v_1.
auto pi_v(const ExpressibleQuery & q, std::uint64_t cap = default_solve_cap) -> WeightedRelation;

// Result of realizing a derivation as a plane gadget. The derived table
// equals pi_v(instance) + shift on its finite range; when opt_pending is set
// the root operator was Opt and the table is opt(pi_v + shift). When
// inner_opt_scaling is set, interior Opt operators were compiled via the
// scaling reduction, so infinite entries of the derived table may appear as
// large finite values; optimal tuples are still exact.
struct Realization {
    PlaneInstance instance;
    std::vector<int> v;
    Rat shift;
    bool opt_pending = false;
    bool inner_opt_scaling = false;

    auto query() const -> ExpressibleQuery { return {instance, v}; }
    auto recover(std::uint64_t cap = default_solve_cap) const -> WeightedRelation;
};

auto realize(const DerivPtr & d, const Language & base) -> Realization;

// Theorem-2.2 style elimination of one Opt: replace the relation of the
// given constraint (interpreted as appearing under Opt) by a scaled copy
// whose optima coincide with the Opt-constrained instance.
auto opt_by_scaling(const PlaneInstance & inst, std::size_t constraint_index) -> PlaneInstance;

}
