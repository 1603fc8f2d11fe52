/**
 * @file term.hpp
 * @brief Unified AST for terms and types, plus binding machinery.
 *
 * One syntactic category covers terms and types: the dependent checker needs
 * types to be terms, and the simple checker just reads the type-only forms
 * (Arrow/Tensor/Sum/Box/Unit) structurally.  Trees are immutable and shared;
 * every operation returns fresh nodes structure-shared with its inputs.
 */
#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>

#include "grad/semiring.hpp"

namespace grad {

enum class Tag {
    TypeSort, // the universe of types
    Var,
    Unit,     // unit type
    UnitVal,  // the unit value
    UnitElim, // let unit = a in b
    Pi,       // Pi x :q A. B
    Lam,      // \x :q A. b
    App,
    Sigma, // Sigma x :q A. B
    Pair,
    SigmaElim, // let (x, y) = a in b
    Sum,       // A + B
    Inj1,
    Inj2,
    Case,   // case q s of b1 ; b2
    Box,    // box q a — intro form, and the simple system's box type
    LetBox, // let box x = a in b
    Arrow,  // A -q> B — simple-system function type
    Tensor, // A * B  — simple-system pair type
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    Tag tag;
    std::string name;  // binder or variable name
    std::string name2; // second binder (SigmaElim)
    Grade grade;       // annotation grade where the form carries one
    TermPtr a, b, c;   // children; meaning depends on tag

    Term(Tag t) : tag(t) {}
};

/// Node factories.  Children are positional: see the Tag comments.
namespace mk {
TermPtr type_sort();
TermPtr var(std::string name);
TermPtr unit_ty();
TermPtr unit_val();
TermPtr unit_elim(TermPtr scrutinee, TermPtr body);
TermPtr pi(std::string binder, Grade q, TermPtr domain, TermPtr codomain);
TermPtr lam(std::string binder, Grade q, TermPtr annotation, TermPtr body);
TermPtr app(TermPtr fun, TermPtr arg);
TermPtr sigma(std::string binder, Grade q, TermPtr first, TermPtr second);
TermPtr pair(TermPtr first, TermPtr second);
TermPtr sigma_elim(std::string b1, std::string b2, TermPtr scrutinee, TermPtr body);
TermPtr sum(TermPtr left, TermPtr right);
TermPtr inj1(TermPtr payload);
TermPtr inj2(TermPtr payload);
TermPtr case_of(Grade q, TermPtr scrutinee, TermPtr branch1, TermPtr branch2);
TermPtr box(Grade q, TermPtr payload);
TermPtr let_box(std::string binder, TermPtr scrutinee, TermPtr body);
TermPtr arrow(Grade q, TermPtr domain, TermPtr codomain);
TermPtr tensor(TermPtr left, TermPtr right);
/// Tensor carrying the ambient semiring's multiplicative unit in `grade`,
/// so untyped conversion can align A * B with the graded pair type without
/// being handed the semiring.  The parser always uses this form.
TermPtr tensor(Grade one, TermPtr left, TermPtr right);
} // namespace mk

/// Exact free-variable set.
std::set<std::string> free_vars(const TermPtr& t);

/// Every identifier occurring in the term, bound or free.  Run-time
/// freshness is judged against this set, not just the free variables.
std::set<std::string> all_names(const TermPtr& t);

/// b{a/x} — capture-avoiding substitution of `a` for variable `x` in `b`.
/// Bound names colliding with fv(a) are renamed deterministically.
TermPtr subst(const TermPtr& b, const TermPtr& a, const std::string& x);

/// Equality modulo renaming of bound names; grades must match exactly.
bool alpha_eq(const TermPtr& t1, const TermPtr& t2);

/// True when the tag never carries free occurrences to reduce further under
/// call-by-name: unit, lambdas, pairs, injections, boxes, and type forms.
bool is_value(const TermPtr& t);

/// Fresh-name source threaded through every renaming site.  A requested base
/// name is kept verbatim when the support set allows; otherwise suffixed
/// `base%k` with k drawn from the counter, so distinct seeds give
/// alpha-equivalent (never colliding) names.
struct FreshCtr {
    std::uint64_t next = 1;
    std::string fresh(std::string base, const std::set<std::string>& support);
};

} // namespace grad
