#pragma once

#include <pvcsp/relation.hpp>

#include <vector>

namespace pvcsp {

// Table semantics of the gadget operations. Coordinates are 1-based; the
// wrap-around convention x_{r+1} = x_1 applies to the adjacent-coordinate
// operations.

auto apply_domain_restriction(const WeightedRelation & g, int i, const std::vector<Label> & subdomain)
    -> WeightedRelation;
auto apply_pin(const WeightedRelation & g, int i, Label a) -> WeightedRelation;
// gamma'(x) = gamma(x) if x_i = x_{i+1}, else inf; arity >= 2
auto apply_eq_restrict(const WeightedRelation & g, int i) -> WeightedRelation;
auto apply_neq_restrict(const WeightedRelation & g, int i) -> WeightedRelation;
auto apply_minimise(const WeightedRelation & g, int i) -> WeightedRelation;
// gamma'(x) = gamma(x) + mu(x_i)
auto apply_add_unary(const WeightedRelation & g, const WeightedRelation & mu, int i) -> WeightedRelation;
// gamma'(x) = gamma(x) + beta(x_i, x_{i+1})
auto apply_add_binary(const WeightedRelation & g, const WeightedRelation & beta, int i) -> WeightedRelation;

// join(x, y) = min_z g1(x,z) + g2(z,y); flip1 reads g1(z,x), flip2 reads
// g2(y,z).
auto apply_join(const WeightedRelation & g1, const WeightedRelation & g2, bool flip1, bool flip2)
    -> WeightedRelation;
// fan(y_1..y_k) = min_z sum_t g_t(y_t, z); flips[t] reads g_t(z, y_t)
auto apply_fan(const std::vector<WeightedRelation> & gs, const std::vector<bool> & flips)
    -> WeightedRelation;

// Boolean twist: gamma'(x) = gamma(x xor e_i)
auto apply_twist(const WeightedRelation & g, int i) -> WeightedRelation;

// Boolean tuple helpers
auto tuple_xor(const Tuple & a, const Tuple & b) -> Tuple;
auto tuple_negate(const Tuple & a) -> Tuple;
auto unit_tuple(int r, int i) -> Tuple;  // e_i^r, 1-based i
auto zeros(int r) -> Tuple;
auto ones(int r) -> Tuple;

}
