/**
 * @file simple_check.hpp
 * @brief Usage-synthesizing checker for the simply-typed graded system.
 *
 * Grades are an output: infer_simple returns the principal type together
 * with the pointwise-least usage vector over the plain context.  Declared
 * grades (lambda annotations, box allowances, judgement contexts) are
 * obligations checked against the synthesized usage through the semiring
 * order.
 */
#pragma once

#include "grad/context.hpp"

namespace grad {

struct SimpleJudgement {
    PlainCtx plain;  // Δ
    UsageCtx usage;  // Γ with ⌊Γ⌋ = Δ
    TermPtr subject; // a
    TermPtr type;    // A
};

struct SimpleResult {
    TermPtr type;
    GradeVec usage; // aligned with the plain context
};

/// Synthesize type and least usage.  Throws TypeError on ill-typed input,
/// unbound variables, non-simple constructors, or unsatisfiable grade
/// obligations.
SimpleResult infer_simple(const Semiring& sr, const PlainCtx& plain, const TermPtr& a);

/// Checking mode: push an expected type into introduction forms (needed for
/// bare injections, whose sum type is not synthesizable) and fall back to
/// synthesis plus syntactic comparison elsewhere.  Returns the usage vector.
GradeVec check_simple_at(const Semiring& sr, const PlainCtx& plain, const TermPtr& a,
                         const TermPtr& type);

/// Accepts iff the subject checks at the declared type and the usage that
/// check synthesizes sits below the declared grades pointwise.
void check_simple(const Semiring& sr, const SimpleJudgement& j);

} // namespace grad
