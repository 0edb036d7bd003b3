#pragma once

#include <pvcsp/language.hpp>
#include <pvcsp/optable.hpp>

namespace pvcsp {

// The Boolean relations and operations used throughout: constants, equality,
// disequality, 1-in-3, not-all-equal, cut, independent-set, and the soft
// variants, plus the standard operations on {0,1}.
namespace cat {

auto rho0() -> WeightedRelation;          // {(0)}
auto rho1() -> WeightedRelation;          // {(1)}
auto rho_eq(int domain_size = 2) -> WeightedRelation;
auto rho_neq() -> WeightedRelation;       // {(0,1),(1,0)}
auto rho_one_in_three() -> WeightedRelation;
auto rho_nae() -> WeightedRelation;
auto rho_cross() -> WeightedRelation;
auto rho_nand() -> WeightedRelation;      // inf iff x=y=1

auto gamma0() -> WeightedRelation;        // x
auto gamma1() -> WeightedRelation;        // 1-x
auto gamma_neq() -> WeightedRelation;     // 1 iff x=y
auto gamma_cut() -> WeightedRelation;     // 1 iff x=y
auto gamma_imp() -> WeightedRelation;     // 1 iff (x,y)=(1,0)
auto gamma_col(int domain_size) -> WeightedRelation;  // inf iff x=y

auto c0() -> OpTable;
auto c1() -> OpTable;
auto neg() -> OpTable;
auto min2() -> OpTable;
auto max2() -> OpTable;
auto mnrt() -> OpTable;
auto mjrt() -> OpTable;

auto lang_cut() -> Language;
auto lang_nae() -> Language;
auto lang_is() -> Language;
auto lang_imp() -> Language;
auto lang_neq() -> Language;
auto lang_cut_g0() -> Language;

}

}
