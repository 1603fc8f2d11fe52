/**
 * @file analysis.cpp
 * @brief Verdict computation for conservation, soundness, non-interference,
 *        garbage collection, single pointers, and cross-semantics agreement.
 */
#include "grad/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

#include "grad/error.hpp"
#include "grad/eval.hpp"
#include "grad/linalg.hpp"
#include "grad/simple_check.hpp"

namespace grad {

namespace {

/// Names relevant to freshness for a heap: assignees plus every identifier
/// in stored terms, types, and embedded contexts.
void heap_names(const Heap& h, std::set<std::string>& out) {
    for (const auto& e : h.entries) {
        out.insert(e.var);
        out.merge(all_names(e.term));
        out.merge(all_names(e.type));
        for (const auto& c : e.embedded.entries) out.insert(c.name);
    }
}

GradeVec zero_padded(const Semiring& sr, GradeVec v, std::size_t n) {
    while (v.size() < n) v.push_back(sr.zero());
    return v;
}

/// Usage of `a` at type `A` over the heap view, per system.
GradeVec demand_at(const Semiring& sr, SystemKind system, const PlainCtx& plain,
                   const TermPtr& a, const TermPtr& type, long long fuel) {
    if (system == SystemKind::Simple) return check_simple_at(sr, plain, a, type);
    return check_dep_at(sr, plain, a, type, fuel);
}

/// The grade q with q + contrib == allowed and at_least ≤ q, if any: the
/// usage-context component witnessing compatibility at one heap entry.
std::optional<Grade> balance_witness(const Semiring& sr, Grade allowed, Grade contrib,
                                     Grade at_least) {
    if (!sr.is_finite()) { // naturals: the solution is unique when it exists
        if (contrib.raw > allowed.raw) return std::nullopt;
        Grade q{allowed.raw - contrib.raw};
        if (!sr.leq(at_least, q)) return std::nullopt;
        return q;
    }
    for (Grade q : sr.carrier())
        if (sr.add(q, contrib) == allowed && sr.leq(at_least, q)) return q;
    return std::nullopt;
}

/// Adjacency view of a memory graph.
struct GraphView {
    std::map<std::string, std::vector<std::pair<std::string, Grade>>> out;

    explicit GraphView(const MemoryGraph& g) {
        for (const auto& n : g.nodes) out[n]; // ensure isolated nodes exist
        for (const auto& e : g.edges) out[e.from].emplace_back(e.to, e.weight);
    }

    std::set<std::string> reachable(const std::string& from) const {
        std::set<std::string> seen{from};
        std::vector<std::string> work{from};
        while (!work.empty()) {
            auto cur = work.back();
            work.pop_back();
            auto it = out.find(cur);
            if (it == out.end()) continue;
            for (const auto& [to, w] : it->second)
                if (seen.insert(to).second) work.push_back(to);
        }
        return seen;
    }

    /// All distinct source→target paths as node sequences; the graph is a
    /// DAG (heaps are acyclic), so enumeration terminates.
    void paths(const std::string& cur, const std::string& target,
               std::vector<std::string>& stack,
               std::vector<std::vector<std::string>>& found) const {
        stack.push_back(cur);
        if (cur == target) {
            found.push_back(stack);
        } else if (auto it = out.find(cur); it != out.end()) {
            for (const auto& [to, w] : it->second) paths(to, target, stack, found);
        }
        stack.pop_back();
    }

    Grade weight(const std::string& from, const std::string& to) const {
        for (const auto& [t, w] : out.at(from))
            if (t == to) return w;
        return Grade{0};
    }
};

} // namespace

TraceReport make_report(const Semiring& sr, const Heap& initial, const TermPtr& subject,
                        const GradeVec& usage, const RunTrace& run) {
    TraceReport rep;
    rep.initial_heap = initial;
    rep.initial_allowed = heap_allowed(initial);
    rep.initial_usage = usage;
    rep.initial_term = subject;
    rep.steps = run.steps;
    rep.final_heap = run.final_heap;
    rep.final_term = run.final_term;
    rep.consumed = zero_padded(sr, run.consumed, run.final_heap.size());
    rep.added = run.added;
    rep.end = run.end;
    rep.stuck = run.stuck;
    return rep;
}

ConservationResult check_conservation(const Semiring& sr, TraceReport& rep) {
    ConservationResult r;
    r.holds = true;
    r.equality = true;
    GradeVec lhs = vec_add(sr, heap_allowed(rep.final_heap), rep.consumed);
    GradeVec rhs = rep.initial_allowed;
    for (const auto& e : rep.added.entries) rhs.push_back(e.grade);
    if (lhs.size() != rhs.size()) {
        r.holds = r.equality = false;
        r.detail = fmt::format("index spaces disagree: {} final vs {} initial+added",
                               lhs.size(), rhs.size());
    } else {
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            if (!sr.leq(lhs[i], rhs[i])) {
                r.holds = r.equality = false;
                r.detail = fmt::format(
                    "entry '{}': remaining+consumed {} exceeds initial+added {}",
                    rep.final_heap.entries[i].var, sr.show(lhs[i]), sr.show(rhs[i]));
                break;
            }
            if (!(lhs[i] == rhs[i])) r.equality = false;
        }
    }
    rep.conservation = r;
    return r;
}

SoundnessResult check_soundness(const Semiring& sr, SystemKind system,
                                TraceReport& rep, long long fuel) {
    SoundnessResult res;
    auto fail = [&](std::string d) {
        res.holds = false;
        res.detail = std::move(d);
        rep.soundness = res;
        return res;
    };

    PlainCtx d0 = heap_plain(rep.initial_heap, system);
    TermPtr type = system == SystemKind::Simple
                       ? infer_simple(sr, d0, rep.initial_term).type
                       : infer_dep(sr, d0, rep.initial_term, fuel).type;
    GradeVec gamma = rep.initial_usage; // Γ̄ before the upcoming step

    for (std::size_t k = 0; k < rep.steps.size(); ++k) {
        const StepRecord& st = rep.steps[k];
        const Heap& cur = st.new_heap;
        std::size_t n = cur.size();
        PlainCtx dp = heap_plain(cur, system);

        // Clause 3: the reduct still inhabits the original type.
        GradeVec u;
        try {
            u = demand_at(sr, system, dp, st.reduct, type, fuel);
        } catch (const TypeError& e) {
            return fail(fmt::format("step {}: reduct no longer checks: {}", k, e.what()));
        }

        // Clause 2: construct the usage context that peels against the new
        // heap exactly, componentwise above the reduct's demand.
        GradeMat m = transformation_matrix(sr, cur);
        GradeVec allowed = heap_allowed(cur);
        GradeVec gprime(n, sr.zero());
        for (std::size_t i = 0; i < n; ++i) {
            Grade contrib = sr.zero();
            for (std::size_t j = i + 1; j < n; ++j)
                contrib = sr.add(contrib, sr.mul(allowed[j], m.at(j, i)));
            auto w = balance_witness(sr, allowed[i], contrib, u[i]);
            if (!w)
                return fail(fmt::format(
                    "step {}: no usage witness at '{}': allowance {} cannot cover "
                    "embedded contribution {} above demand {}",
                    k, cur.entries[i].var, sr.show(allowed[i]), sr.show(contrib),
                    sr.show(u[i])));
            gprime[i] = *w;
        }
        auto cv = compat(sr, system, cur, dp, with_grades(dp, gprime));
        if (!cv)
            return fail(fmt::format("step {}: compatibility not re-established: {}", k,
                                    cv.reason));

        // Clause 4: the transaction balance sheet.
        GradeVec zadd(n, sr.zero());
        std::size_t base = n - st.added.size();
        for (std::size_t j = 0; j < st.added.size(); ++j)
            zadd[base + j] = st.added.entries[j].grade;
        GradeVec lhs = vec_add(sr, vec_add(sr, gprime, st.consumed),
                               vec_mat_mul(sr, zadd, m));
        GradeVec rhs = vec_add(sr, vec_add(sr, zero_padded(sr, gamma, n),
                                           vec_mat_mul(sr, st.consumed, m)),
                               zadd);
        for (std::size_t i = 0; i < n; ++i)
            if (!sr.leq(lhs[i], rhs[i]))
                return fail(fmt::format(
                    "step {}: balance fails at '{}': {} is not below {}", k,
                    cur.entries[i].var, sr.show(lhs[i]), sr.show(rhs[i])));

        gamma = std::move(gprime);
        ++res.steps_checked;
    }
    res.holds = true;
    rep.soundness = res;
    return res;
}

ZeroDeadResult check_zero_dead(const Semiring& sr, const TraceReport& rep) {
    if (!sr.classify().zero_unusable)
        throw ConfigError(fmt::format(
            "zero-dead analysis needs a zero-unusable semiring; {} is not", sr.name()));
    ZeroDeadResult r;
    r.holds = true;
    for (std::size_t i = 0; i < rep.initial_heap.size(); ++i) {
        if (!(rep.initial_heap.entries[i].allowed == sr.zero())) continue;
        const std::string& who = rep.initial_heap.entries[i].var;
        for (std::size_t k = 0; k < rep.steps.size(); ++k) {
            const StepRecord& st = rep.steps[k];
            if (!(st.consumed[i] == sr.zero())) {
                r.holds = false;
                r.detail = fmt::format("step {} consumed {} from dead entry '{}'", k,
                                       sr.show(st.consumed[i]), who);
                return r;
            }
            if (!(st.new_heap.entries[i].allowed == sr.zero())) {
                r.holds = false;
                r.detail = fmt::format("step {} changed the allowance of '{}'", k, who);
                return r;
            }
        }
    }
    return r;
}

NonintResult swap_traces(const Semiring& sr, SystemKind system, const Heap& h,
                         std::size_t idx, const TermPtr& alt_term,
                         const UsageCtx& alt_ctx, const TermPtr& alt_type,
                         const TermPtr& b, long long fuel) {
    if (idx >= h.size()) throw TypeError(fmt::format("no heap entry at index {}", idx));
    Heap swapped = h;
    swapped.entries[idx].embedded = alt_ctx;
    swapped.entries[idx].term = alt_term;
    swapped.entries[idx].type = alt_type;
    validate_heap(swapped);

    // One shared support covering both assignments keeps every fresh-name
    // draw aligned between the two runs.
    std::set<std::string> support;
    heap_names(h, support);
    heap_names(swapped, support);
    support.merge(all_names(b));

    auto r1 = multi_step(sr, system, h, b, sr.one(), support, fuel);
    auto r2 = multi_step(sr, system, swapped, b, sr.one(), support, fuel);

    NonintResult out;
    auto differ = [&](std::string d) {
        out.identical = false;
        out.detail = std::move(d);
        return out;
    };
    if (r1.end != r2.end) return differ("the runs end differently");
    if (r1.steps.size() != r2.steps.size())
        return differ(fmt::format("step counts differ: {} vs {}", r1.steps.size(),
                                  r2.steps.size()));
    for (std::size_t k = 0; k < r1.steps.size(); ++k) {
        const StepRecord& s1 = r1.steps[k];
        const StepRecord& s2 = r2.steps[k];
        if (!(s1.consumed == s2.consumed))
            return differ(fmt::format("step {}: consumption differs", k));
        if (!alpha_eq(s1.reduct, s2.reduct))
            return differ(fmt::format("step {}: reducts differ", k));
        if (s1.new_heap.size() != s2.new_heap.size())
            return differ(fmt::format("step {}: heap sizes differ", k));
        if (idx < s1.consumed.size() && !(s1.consumed[idx] == sr.zero()))
            return differ(fmt::format("step {}: the swapped entry was consumed", k));
        for (std::size_t j = 0; j < s1.new_heap.size(); ++j) {
            const HeapEntry& e1 = s1.new_heap.entries[j];
            const HeapEntry& e2 = s2.new_heap.entries[j];
            if (e1.var != e2.var)
                return differ(fmt::format("step {}: assignee {} differs", k, j));
            if (!(e1.allowed == e2.allowed))
                return differ(
                    fmt::format("step {}: allowance of '{}' differs", k, e1.var));
            if (j == idx) continue; // the deliberate difference
            if (!alpha_eq(e1.term, e2.term) || !alpha_eq(e1.type, e2.type) ||
                !(grades_of(e1.embedded) == grades_of(e2.embedded)))
                return differ(
                    fmt::format("step {}: assignment '{}' evolved differently", k,
                                e1.var));
        }
    }
    if (!alpha_eq(r1.final_term, r2.final_term))
        return differ("final terms differ");
    if (r1.end == RunTrace::End::Stuck &&
        (r1.stuck.reason != r2.stuck.reason || r1.stuck.var != r2.stuck.var))
        return differ("stuck states differ");
    out.identical = true;
    return out;
}

NonintResult noninterference(const Semiring& sr, SystemKind system, const Heap& h,
                             std::size_t idx, const TermPtr& alt_term,
                             const UsageCtx& alt_ctx, const TermPtr& alt_type,
                             const TermPtr& b, long long fuel) {
    if (!sr.classify().zero_unusable)
        throw ConfigError(
            fmt::format("non-interference needs a zero-unusable semiring; {} is not",
                        sr.name()));
    if (idx >= h.size()) throw TypeError(fmt::format("no heap entry at index {}", idx));
    Grade g = h.entries[idx].allowed;
    if (sr.usable(g))
        throw TypeError(fmt::format(
            "non-interference precondition violated: grade {} of '{}' is usable",
            sr.show(g), h.entries[idx].var));
    return swap_traces(sr, system, h, idx, alt_term, alt_ctx, alt_type, b, fuel);
}

GcResult gc_candidates(const Semiring& sr, SystemKind system, const Heap& h,
                       const UsageCtx& usage) {
    const SemiringFlags& f = sr.classify();
    // Zero-unusability carries the argument: a dead allowance must mean no
    // lookup can ever be paid for.  Degenerate semirings where 0 = 1 satisfy
    // the algebraic flags vacuously yet make the verdict false.
    if (!f.zero_unusable || !f.zerosumfree || !f.entire || !sr.minimal(sr.zero()))
        throw ConfigError(fmt::format(
            "garbage-collection analysis needs a zero-unusable, zerosumfree, "
            "entire semiring with 0 minimal; {} is not",
            sr.name()));
    auto cv = compat(sr, system, h, heap_plain(h, system), usage);
    if (!cv)
        throw TypeError(fmt::format(
            "garbage-collection analysis requires a compatible configuration: {}",
            cv.reason));

    GraphView g(memory_graph(sr, h, usage));
    auto live = g.reachable("vg");
    GcResult out;
    out.isolated = true;
    for (const auto& e : h.entries) {
        if (!(e.allowed == sr.zero())) continue;
        out.names.push_back(e.var);
        if (live.count(e.var)) {
            out.isolated = false;
            out.detail = fmt::format("'{}' is reachable from the source", e.var);
        }
    }
    return out;
}

SinglePointerResult single_pointer(const Semiring& sr, SystemKind system,
                                   const Heap& h, const UsageCtx& usage,
                                   const std::string& var) {
    const SemiringFlags& f = sr.classify();
    // As with collection, the usability criteria are load-bearing: 1 must
    // mean exactly-once (one-linear) and 0 must mean never, or a "single"
    // pointer verdict says nothing about actual dereferences.
    if (!f.zero_unusable || !f.one_linear || !f.entire || !f.zerosumfree ||
        !f.linear || !sr.minimal(sr.zero()) || !sr.minimal(sr.one()))
        throw ConfigError(fmt::format(
            "single-pointer analysis needs a zero-unusable, one-linear, entire, "
            "zerosumfree, linear semiring with 0 and 1 minimal; {} is not",
            sr.name()));
    auto cv = compat(sr, system, h, heap_plain(h, system), usage);
    if (!cv)
        throw TypeError(fmt::format(
            "single-pointer analysis requires a compatible configuration: {}",
            cv.reason));
    const HeapEntry* entry = nullptr;
    for (const auto& e : h.entries)
        if (e.var == var) entry = &e;
    if (!entry) throw TypeError(fmt::format("no heap entry named '{}'", var));
    if (!(entry->allowed == sr.one()))
        throw TypeError(
            fmt::format("single-pointer precondition: '{}' is held at {}, not 1", var,
                        sr.show(entry->allowed)));

    GraphView g(memory_graph(sr, h, usage));
    std::vector<std::vector<std::string>> found;
    std::vector<std::string> stack;
    g.paths("vg", var, stack, found);

    SinglePointerResult out;
    if (found.size() != 1) {
        out.detail = fmt::format("{} source paths reach '{}'", found.size(), var);
        return out;
    }
    const auto& p = found[0];
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (!(g.weight(p[i], p[i + 1]) == sr.one())) {
            out.detail = fmt::format("edge {} -> {} has weight {}", p[i], p[i + 1],
                                     sr.show(g.weight(p[i], p[i + 1])));
            return out;
        }
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        std::vector<std::vector<std::string>> sub;
        g.paths("vg", p[i], stack, sub);
        if (sub.size() != 1) {
            out.detail =
                fmt::format("{} source paths reach intermediate '{}'", sub.size(), p[i]);
            return out;
        }
    }
    out.holds = true;
    return out;
}

BisimResult bisim_check(const Semiring& sr, SystemKind system, const Heap& h,
                        const TermPtr& a, long long fuel) {
    validate_heap(h);
    BisimResult out;
    TermPtr flat = flatten_heap(a, h);
    if (!free_vars(flat).empty()) {
        out.detail = "the flattened configuration is not closed";
        return out;
    }
    std::set<std::string> support;
    heap_names(h, support);
    support.merge(all_names(a));
    FreshCtr fresh;
    Heap cur = h;
    TermPtr t = a;
    bool value = false;
    for (long long i = 0; i < fuel && !value; ++i) {
        auto step_out = heap_step(sr, system, cur, t, sr.one(), support, fresh);
        switch (step_out.kind) {
        case StepOutcome::Kind::Value: value = true; break;
        case StepOutcome::Kind::Stuck:
            out.detail = fmt::format("machine stuck: {} '{}'", step_out.stuck.reason,
                                     step_out.stuck.var);
            return out;
        case StepOutcome::Kind::Stepped: {
            cur = step_out.rec.new_heap;
            t = step_out.rec.reduct;
            ++out.heap_steps;
            TermPtr now = flatten_heap(t, cur);
            if (alpha_eq(flat, now)) break; // lookup/administrative step
            auto nxt = step(flat);
            if (!nxt) {
                out.detail = fmt::format(
                    "flattening changed after machine step {} without a "
                    "substitution step available",
                    out.heap_steps);
                return out;
            }
            ++out.subst_steps;
            if (!alpha_eq(*nxt, now)) {
                out.detail = fmt::format(
                    "flattened configurations disagree after machine step {}",
                    out.heap_steps);
                return out;
            }
            flat = *nxt;
            break;
        }
        }
    }
    if (!value) {
        out.detail = "fuel ran out before the machine reached a value";
        return out;
    }
    if (!is_value(flat)) {
        out.detail = "machine finished but the flattened term is not a value";
        return out;
    }
    out.holds = true;
    return out;
}

} // namespace grad
