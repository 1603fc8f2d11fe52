/**
 * @file context.hpp
 * @brief Graded contexts (with optional definitions), plain contexts, and
 *        the context algebra shared by the checkers and the heap machine.
 *
 * A usage context lists entries x :^q A or x = a :^q A in telescope order:
 * later types and definientia may mention only earlier variables.  The plain
 * context is its grade-erasure.  Pointwise scaling/addition treat contexts
 * as grade vectors over a fixed erasure.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grad/linalg.hpp"
#include "grad/term.hpp"

namespace grad {

struct CtxEntry {
    std::string name;
    Grade grade;
    TermPtr type;
    TermPtr def; // optional definiens; null for plain assumptions
};

struct PlainEntry {
    std::string name;
    TermPtr type;
    TermPtr def; // optional
};

struct UsageCtx {
    std::vector<CtxEntry> entries;
    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

struct PlainCtx {
    std::vector<PlainEntry> entries;
    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

/// Index of the entry binding `name`, if any.
std::optional<std::size_t> lookup(const PlainCtx& d, const std::string& name);
std::optional<std::size_t> lookup(const UsageCtx& g, const std::string& name);

/// Grade-erasure ⌊Γ⌋.
PlainCtx erase(const UsageCtx& g);

/// Reattach grades to an erasure (inverse of erase + grades_of).
UsageCtx with_grades(const PlainCtx& d, const GradeVec& grades);

/// Same names, alpha-equal types, and matching definitions.
bool same_erasure(const PlainCtx& a, const PlainCtx& b);

/// q · Γ — every grade multiplied on the left by q.
UsageCtx ctx_scale(const Semiring& sr, Grade q, const UsageCtx& g);

/// Γ1 + Γ2 — pointwise grade addition.  Throws TypeError unless the
/// erasures agree.
UsageCtx ctx_add(const Semiring& sr, const UsageCtx& g1, const UsageCtx& g2);

/// Γ1 ≤ Γ2 — same erasure and pointwise grade order.
bool subusage(const Semiring& sr, const UsageCtx& g1, const UsageCtx& g2);

/// The vector of grades in entry order.
GradeVec grades_of(const UsageCtx& g);

/// a{Δ} — substitute definitions into `a`, newest entry first.  Entries
/// without a definiens are skipped.
TermPtr flatten_defs(const TermPtr& a, const PlainCtx& d);

} // namespace grad
