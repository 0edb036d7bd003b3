#pragma once

#include <pvcsp/language.hpp>
#include <pvcsp/relation.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pvcsp {

// A derivation is a verifiable witness that a weighted relation lies in the
// closure of a base language: a tree of closure operations that replays to
// the relation and realizes as a plane gadget.
//
// Kinds and their arguments:
//   Base            base_name
//   Unary           table (a free unary generator; conservative closures only)
//   Equality        domain_size (binary equality, from two self-loops)
//   Top             domain_size, arity (the all-zero relation, a bare cycle)
//   AddUnary        child, aux (unary), coord
//   AddBinary       child, aux (binary), coord -- added on (x_i, x_{i+1})
//   Minimise        child, coord
//   Join            children[2], flips[2]
//   Fan             children (binary), flips -- min_z sum_t g_t(y_t, z)
//   RestrictDomain  child, coord, subdomain, optional aux (the subdomain
//                   unary's own derivation, for realization outside the
//                   conservative setting)
//   Pin             child, coord, label, optional aux
//   EqRestrict      child, coord
//   NeqRestrict     child, coord, aux (a derivation of the disequality relation)
//   Twist           child, coord, aux (as NeqRestrict)
//   Opt / Feas      child
//   Scale           child, constant >= 0
//   AddConst        child, constant
enum class DKind {
    Base, Unary, Equality, Top, AddUnary, AddBinary, Minimise, Join, Fan,
    RestrictDomain, Pin, EqRestrict, NeqRestrict, Twist, Opt, Feas, Scale, AddConst
};

auto dkind_name(DKind k) -> const char *;
auto dkind_from_name(const std::string & s) -> DKind;

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

struct Derivation {
    DKind kind;
    std::string base_name;
    std::optional<WeightedRelation> table;
    int domain_size = 0;
    int arity = 0;
    DerivPtr child;
    DerivPtr aux;
    std::vector<DerivPtr> children;
    std::vector<bool> flips;
    int coord = 0;
    Label label = 0;
    std::vector<Label> subdomain;
    Rat constant;
};

namespace deriv {

auto base(const std::string & name) -> DerivPtr;
auto unary(WeightedRelation table) -> DerivPtr;
auto equality(int domain_size) -> DerivPtr;
auto top(int domain_size, int arity) -> DerivPtr;
auto add_unary(DerivPtr child, DerivPtr mu, int coord) -> DerivPtr;
auto add_binary(DerivPtr child, DerivPtr beta, int coord) -> DerivPtr;
auto minimise(DerivPtr child, int coord) -> DerivPtr;
auto join(DerivPtr a, DerivPtr b, bool flip1, bool flip2) -> DerivPtr;
auto fan(std::vector<DerivPtr> children, std::vector<bool> flips) -> DerivPtr;
auto restrict_domain(DerivPtr child, int coord, std::vector<Label> subdomain, DerivPtr aux = nullptr) -> DerivPtr;
auto pin(DerivPtr child, int coord, Label a, DerivPtr aux = nullptr) -> DerivPtr;
auto eq_restrict(DerivPtr child, int coord) -> DerivPtr;
auto neq_restrict(DerivPtr child, int coord, DerivPtr neq) -> DerivPtr;
auto twist(DerivPtr child, int coord, DerivPtr neq) -> DerivPtr;
auto opt_node(DerivPtr child) -> DerivPtr;
auto feas_node(DerivPtr child) -> DerivPtr;
auto scale_node(DerivPtr child, Rat c) -> DerivPtr;
auto add_const_node(DerivPtr child, Rat c) -> DerivPtr;

// Transpose of a binary relation via a join with equality.
auto transpose(DerivPtr child, int domain_size) -> DerivPtr;

}

//ter Replays the derivation over the base language, producing the exact table.
auto replay(const DerivPtr & d, const Language & base) -> WeightedRelation;

auto derivation_depth(const DerivPtr & d) -> int;
// Canonical one-line encoding, used for deterministic tie-breaks.
auto encode_derivation(const DerivPtr & d) -> std::string;
// True if the derivation uses a free Unary leaf anywhere (disallowed for
// non-conservative closures).
auto uses_free_unary(const DerivPtr & d) -> bool;

}
