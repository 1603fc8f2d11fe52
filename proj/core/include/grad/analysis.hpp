/**
 * @file analysis.hpp
 * @brief Executable forms of the resource lemmas over recorded runs.
 *
 * Every verdict here is recomputed from recorded configurations — initial
 * heap, per-step records, reducts — never read off a flag the machine set.
 * A verdict that fails on tampered data is the point of the exercise.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "grad/dep_check.hpp"
#include "grad/heap.hpp"

namespace grad {

struct ConservationResult {
    bool holds = false;    ///< H̄′ + u′ ≤ H̄ ⋄ Γ̄₄ pointwise
    bool equality = false; ///< the relation is an equality componentwise
    std::string detail;
};

struct SoundnessResult {
    bool holds = false;
    std::size_t steps_checked = 0;
    std::string detail;
};

/// A finished run, flattened into analyzable data plus verdict slots.
struct TraceReport {
    Heap initial_heap;
    GradeVec initial_allowed; ///< H̄ at the start
    GradeVec initial_usage;   ///< Γ̄ the run was judged at
    TermPtr initial_term;
    std::vector<StepRecord> steps;
    GradeVec consumed; ///< aggregate u′, zero-padded to the final heap
    UsageCtx added;    ///< aggregate Γ₄
    Heap final_heap;
    TermPtr final_term;
    RunTrace::End end = RunTrace::End::Value;
    Stuck stuck;

    std::optional<ConservationResult> conservation;
    std::optional<SoundnessResult> soundness;
};

/// Snapshot a run for analysis.  `usage` is the demand vector the subject
/// was judged at over the initial heap's typing view.
TraceReport make_report(const Semiring& sr, const Heap& initial, const TermPtr& subject,
                        const GradeVec& usage, const RunTrace& run);

/// Resource conservation: remaining-plus-consumed never exceeds
/// initial-concatenated-with-added, componentwise; over a discrete order
/// (and over the naturals with maximal decrements) it is an equality.
/// The verdict is stored back into the report and returned.
ConservationResult check_conservation(const Semiring& sr, TraceReport& report);

/// Re-establish the soundness clauses at every recorded step: the reduct
/// keeps its type, a usage context witnessing compatibility with the new
/// heap exists, and the resource-transaction balance
///   Γ̄′ + u′ + (𝟎⋄Γ̄₄)·⟨H′⟩  ≤  Γ̄⋄𝟎 + u′·⟨H′⟩ + 𝟎⋄Γ̄₄
/// holds.  Witnesses are threaded from step to step.
SoundnessResult check_soundness(const Semiring& sr, SystemKind system,
                                TraceReport& report, long long fuel = kDefaultFuel);

struct ZeroDeadResult {
    bool holds = false;
    std::string detail;
};

/// In a zero-unusable semiring no run ever consumes from a 0-allowed
/// entry, and its allowance stays 0 throughout.  ConfigError when the
/// semiring is not zero-unusable.
ZeroDeadResult check_zero_dead(const Semiring& sr, const TraceReport& report);

struct NonintResult {
    bool identical = false;
    std::string detail;
};

/// Core of the non-interference check, precondition-free: run `b` over the
/// heap as given and over the heap with entry `idx` swapped for the
/// alternative assignment, under one shared support, and compare the full
/// traces modulo that entry.  Exposed separately so negative controls can
/// drive it on usable entries.
NonintResult swap_traces(const Semiring& sr, SystemKind system, const Heap& h,
                         std::size_t idx, const TermPtr& alt_term,
                         const UsageCtx& alt_ctx, const TermPtr& alt_type,
                         const TermPtr& b, long long fuel);

/// The non-interference lemma: entry `idx` must be held at an unusable
/// grade (no q with q+1 ≤ g) in a zero-unusable semiring; then swapping
/// its assignment cannot change the run of `b`.  Throws TypeError when the
/// grade is usable and ConfigError when the semiring is not zero-unusable.
NonintResult noninterference(const Semiring& sr, SystemKind system, const Heap& h,
                             std::size_t idx, const TermPtr& alt_term,
                             const UsageCtx& alt_ctx, const TermPtr& alt_type,
                             const TermPtr& b, long long fuel);

struct GcResult {
    std::vector<std::string> names; ///< zero-allowed entries
    bool isolated = false;          ///< none is reachable from the source
    std::string detail;
};

/// Zero-allowed entries of a compatible configuration, verified to be
/// unreachable from the source node of the memory graph — safe to collect.
/// Needs a zerosumfree, entire semiring with 0 minimal (ConfigError
/// otherwise) and a compatible heap (TypeError otherwise).
GcResult gc_candidates(const Semiring& sr, SystemKind system, const Heap& h,
                       const UsageCtx& usage);

struct SinglePointerResult {
    bool holds = false;
    std::string detail;
};

/// Quantitative single-pointer property for `var`, held at exactly 1 in a
/// compatible configuration: a unique source path, all weights 1, and every
/// prefix of the path is itself the unique source path to its endpoint.
/// Needs an entire, zerosumfree, linear semiring with 0 and 1 minimal
/// (ConfigError otherwise).
SinglePointerResult single_pointer(const Semiring& sr, SystemKind system,
                                   const Heap& h, const UsageCtx& usage,
                                   const std::string& var);

struct BisimResult {
    bool holds = false;
    long long heap_steps = 0;
    long long subst_steps = 0;
    std::string detail;
};

/// Run the machine and the substitution evaluator side by side: after every
/// machine step the flattened configuration either did not change or is one
/// substitution step ahead, and the final values agree up to alpha.
/// Requires the initial flattening to be closed.
BisimResult bisim_check(const Semiring& sr, SystemKind system, const Heap& h,
                        const TermPtr& a, long long fuel);

} // namespace grad
