/**
 * @file dep_check.hpp
 * @brief Dependent usage checker: weak-head normalization, definitional
 *        equality modulo context definitions, and usage-synthesizing
 *        bidirectional inference where types may mention term variables.
 *
 * Types are checked recursively wherever they appear (annotations, motives,
 * formation premises) but the usage those checks synthesize is discarded:
 * only term-position occurrences count toward the reported usage vector.
 */
#pragma once

#include <string>

#include "grad/context.hpp"
#include "grad/semiring.hpp"
#include "grad/term.hpp"

namespace grad {

/// Shared step budget for every normalization a query performs.
inline constexpr long long kDefaultFuel = 10000;

/// Result of dependent inference: the synthesized type plus one usage grade
/// per context entry (telescope order).
struct DepResult {
    TermPtr type;
    GradeVec usage;
};

/// A dependent judgement Δ;Γ ⊢ a : A where Γ refines Δ with grades.
struct DepJudgement {
    PlainCtx plain;   ///< erasure with types and optional definitions
    UsageCtx usage;   ///< declared grades; must erase to `plain`
    TermPtr subject;
    TermPtr type;     ///< declared type, compared up to conversion
};

/// Reduce to weak-head normal form: iterate head steps until a value or a
/// neutral term remains.  Throws FuelExhausted after `fuel` steps.
TermPtr whnf(const TermPtr& a, long long fuel = kDefaultFuel);

/// Definitional equality: flatten `plain`'s definitions into both sides,
/// then compare weak-head normal forms structurally under binders.  Grade
/// annotations on type constructors are injective (compared exactly).
/// Throws FuelExhausted if normalization exceeds the shared budget.
bool defeq(const PlainCtx& plain, const TermPtr& a, const TermPtr& b,
           long long fuel = kDefaultFuel);

/// Synthesize the type and usage of `a` under `plain`.
/// Throws TypeError (ill-typed, conversion failure, non-constant motive,
/// usage violation) or FuelExhausted.
DepResult infer_dep(const Semiring& sr, const PlainCtx& plain, const TermPtr& a,
                    long long fuel = kDefaultFuel);

/// Check `a` against `type` (up to conversion), returning the usage vector.
/// Introduction forms are pushed into the expected type so payloads of
/// injections and graded pairs can be checked without annotations.
GradeVec check_dep_at(const Semiring& sr, const PlainCtx& plain, const TermPtr& a,
                      const TermPtr& type, long long fuel = kDefaultFuel);

/// Decide the full judgement: validates that every definition entry checks
/// in its prefix, checks the subject against the declared type (up to
/// conversion), and requires the synthesized usage to sit below Γ.
void check_dep(const Semiring& sr, const DepJudgement& j,
               long long fuel = kDefaultFuel);

/// Regularity: infer `a`'s type, then verify that type itself checks at Type.
void regularity_check(const Semiring& sr, const PlainCtx& plain, const TermPtr& a,
                      long long fuel = kDefaultFuel);

} // namespace grad
