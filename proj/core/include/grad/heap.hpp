/**
 * @file heap.hpp
 * @brief The usage-instrumented heap machine: graded heaps, single and
 *        multi-step reduction with consumption accounting, compatibility
 *        with a graded context, and the matrix/graph views of a heap.
 *
 * A heap is an ordered list of assignments x ↦^q (Γ ⊢ a : A): assignee,
 * allowed usage, embedded usage context for the stored term, the term, and
 * its type.  Entries may refer only to earlier assignees (acyclicity) and
 * assignee names never repeat (properness).
 */
#pragma once

#include <set>
#include <string>
#include <vector>

#include "grad/context.hpp"
#include "grad/linalg.hpp"
#include "grad/semiring.hpp"
#include "grad/term.hpp"

namespace grad {

/// Which checker instruments the machine: it synthesizes the embedded
/// contexts and types recorded at allocation time.
enum class SystemKind { Simple, Dep };

struct HeapEntry {
    std::string var;
    Grade allowed;
    UsageCtx embedded; ///< usage of earlier entries by `term`
    TermPtr term;
    TermPtr type;
};

struct Heap {
    std::vector<HeapEntry> entries;
    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

/// ⌊H⌋ — the typing view: entry names and types; the dependent system also
/// sees the stored terms as definitions.
PlainCtx heap_plain(const Heap& h, SystemKind system);

/// H̄ — the vector of allowed usages.
GradeVec heap_allowed(const Heap& h);

/// a{H} — substitute stored terms into `a`, newest entry first.
TermPtr flatten_heap(const TermPtr& a, const Heap& h);

/// Enforce properness (no duplicate assignees) and acyclicity (terms refer
/// only to earlier assignees).  Throws TypeError on violation.
void validate_heap(const Heap& h);

/// Why a configuration cannot step.
struct Stuck {
    std::string reason; ///< "resource-exhausted" or "ill-formed"
    std::string var;    ///< offending assignee for resource exhaustion
};

/// One machine step [H] a ⇒^r [H′; u′; Γ₄] a′.
struct StepRecord {
    Heap new_heap;
    GradeVec consumed; ///< u′, length = |new_heap|
    UsageCtx added;    ///< Γ₄: definitions for freshly allocated assignees
    TermPtr reduct;
    Grade copy; ///< r
};

struct StepOutcome {
    enum class Kind { Stepped, Value, Stuck } kind;
    StepRecord rec; ///< valid when kind == Stepped
    Stuck stuck;    ///< valid when kind == Stuck
};

/// Drive one step at copy quantity `copy`.  Lookups decrement the entry's
/// allowed usage via the semiring's decrement policy; β-style rules allocate
/// a fresh entry (allowed = copy · binder grade) whose embedded context and
/// type are synthesized by the `system` checker; congruence into a case
/// scrutinee multiplies the copy quantity by the case annotation.  `support`
/// is extended with every allocated name; `fresh` numbers forced renames.
StepOutcome heap_step(const Semiring& sr, SystemKind system, const Heap& h,
                      const TermPtr& a, Grade copy,
                      std::set<std::string>& support, FreshCtr& fresh);

/// Aggregate of a multi-step run.
struct RunTrace {
    enum class End { Value, Stuck, Fuel } end;
    Heap final_heap;
    TermPtr final_term;
    GradeVec consumed; ///< per-step vectors zero-extended and summed
    UsageCtx added;    ///< concatenated allocation records
    std::vector<StepRecord> steps;
    Stuck stuck; ///< valid when end == Stuck
};

/// Iterate heap_step until value, stuck, or fuel runs out.
RunTrace multi_step(const Semiring& sr, SystemKind system, Heap h, TermPtr a,
                    Grade copy, std::set<std::string> support, long long fuel,
                    FreshCtr fresh = {});

/// Compatibility verdict; `reason` explains the first failing peel.
struct CompatResult {
    bool ok = false;
    std::string reason;
    explicit operator bool() const { return ok; }
};

/// H is compatible with Δ;Γ: peel the newest heap entry x ↦^q (Γ₂ ⊢ a : A)
/// against the newest context entry, require q to equal the context grade,
/// the definiens to check under Γ₂, and recurse with Γ₁ + q·Γ₂.
CompatResult compat(const Semiring& sr, SystemKind system, const Heap& h,
                    const PlainCtx& plain, const UsageCtx& usage);

/// ⟨H⟩ — row i holds entry i's embedded grades padded with zeros; strictly
/// lower triangular by acyclicity.
GradeMat transformation_matrix(const Semiring& sr, const Heap& h);

/// The heap viewed as a weighted DAG: a source node "vg" weighted by the
/// usage context, one node per assignee, zero-weight edges omitted.  Nodes
/// are listed in topological order: source first, then newest to oldest.
struct MemoryGraph {
    struct Edge {
        std::string from, to;
        Grade weight;
    };
    std::vector<std::string> nodes;
    std::vector<Edge> edges;
};

MemoryGraph memory_graph(const Semiring& sr, const Heap& h, const UsageCtx& usage);

/// Deterministic DOT rendering of a memory graph.
std::string graph_dot(const MemoryGraph& g, const Semiring& sr);

/// Machine configurations compared up to consistent renaming of assignees:
/// same length, and entrywise equal allowed usage, alpha-equal stored terms
/// and types, and equal embedded grades after positional renaming.
bool config_alpha_eq(const Heap& h1, const TermPtr& a1, const Heap& h2,
                     const TermPtr& a2);

} // namespace grad
