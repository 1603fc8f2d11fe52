/**
 * @file heap.cpp
 * @brief The usage-instrumented heap machine.
 */
#include "grad/heap.hpp"

#include <fmt/format.h>

#include "grad/dep_check.hpp"
#include "grad/error.hpp"
#include "grad/simple_check.hpp"

namespace grad {

PlainCtx heap_plain(const Heap& h, SystemKind system) {
    PlainCtx d;
    for (const auto& e : h.entries)
        d.entries.push_back(
            {e.var, e.type, system == SystemKind::Dep ? e.term : nullptr});
    return d;
}

GradeVec heap_allowed(const Heap& h) {
    GradeVec v;
    for (const auto& e : h.entries) v.push_back(e.allowed);
    return v;
}

TermPtr flatten_heap(const TermPtr& a, const Heap& h) {
    return flatten_defs(a, heap_plain(h, SystemKind::Dep));
}

void validate_heap(const Heap& h) {
    std::set<std::string> seen;
    for (const auto& e : h.entries)
        if (!seen.insert(e.var).second)
            throw TypeError(fmt::format("heap is not proper: '{}' assigned twice",
                                        e.var));
    // acyclicity: a stored term may refer only to assignees strictly earlier
    for (std::size_t i = 0; i < h.entries.size(); ++i) {
        auto fv = free_vars(h.entries[i].term);
        for (std::size_t j = i; j < h.entries.size(); ++j)
            if (fv.count(h.entries[j].var))
                throw TypeError(fmt::format(
                    "heap is cyclic: '{}' refers to '{}' which is not earlier",
                    h.entries[i].var, h.entries[j].var));
    }
}

namespace {

/// The machine is instrumented with the active system's checker so that
/// allocations can record the embedded context (and type) the compatibility
/// relation needs.
struct Stepper {
    const Semiring& sr;
    SystemKind system;
    std::set<std::string>& support;
    FreshCtr& fresh;

    UsageCtx to_usage(const Heap& h, const GradeVec& grades) const {
        UsageCtx g;
        for (std::size_t i = 0; i < h.entries.size(); ++i)
            g.entries.push_back({h.entries[i].var, grades[i], h.entries[i].type,
                                 system == SystemKind::Dep ? h.entries[i].term
                                                           : nullptr});
        return g;
    }

    /// Usage of `a` checked against `type`; a zero context when the checker
    /// cannot accept the term (analyses relying on compat then fail visibly).
    UsageCtx embedded_check(const Heap& h, const TermPtr& a,
                            const TermPtr& type) const {
        auto plain = heap_plain(h, system);
        try {
            auto grades = system == SystemKind::Dep
                              ? check_dep_at(sr, plain, a, type)
                              : check_simple_at(sr, plain, a, type);
            return to_usage(h, grades);
        } catch (const TypeError&) {
        } catch (const FuelExhausted&) {
        }
        return to_usage(h, zero_vec(sr, h.size()));
    }

    /// Synthesized type and usage of `a`; (Unit, zero context) when the term
    /// has no synthesizable type.
    std::pair<TermPtr, UsageCtx> embedded_infer(const Heap& h,
                                                const TermPtr& a) const {
        auto plain = heap_plain(h, system);
        try {
            if (system == SystemKind::Dep) {
                auto r = infer_dep(sr, plain, a);
                return {r.type, to_usage(h, r.usage)};
            }
            auto r = infer_simple(sr, plain, a);
            return {r.type, to_usage(h, r.usage)};
        } catch (const TypeError&) {
        } catch (const FuelExhausted&) {
        }
        return {mk::unit_ty(), to_usage(h, zero_vec(sr, h.size()))};
    }

    std::string alloc_name(const std::string& base) {
        auto nm = fresh.fresh(base, support);
        support.insert(nm);
        return nm;
    }

    static StepOutcome stuck(std::string reason, std::string var = {}) {
        StepOutcome o;
        o.kind = StepOutcome::Kind::Stuck;
        o.stuck = {std::move(reason), std::move(var)};
        return o;
    }

    StepOutcome stepped(Heap nh, GradeVec consumed, UsageCtx added, TermPtr reduct,
                        Grade copy) const {
        StepOutcome o;
        o.kind = StepOutcome::Kind::Stepped;
        o.rec = {std::move(nh), std::move(consumed), std::move(added),
                 std::move(reduct), copy};
        return o;
    }

    /// Allocate one entry; returns its chosen name via `out_name`.
    Heap alloc(Heap h, const std::string& base, Grade allowed, UsageCtx embedded,
               TermPtr term, TermPtr type, std::string& out_name) {
        out_name = alloc_name(base);
        h.entries.push_back(
            {out_name, allowed, std::move(embedded), std::move(term), std::move(type)});
        return h;
    }

    StepOutcome step(const Heap& h, const TermPtr& a, Grade copy) {
        switch (a->tag) {
        case Tag::Var: {
            std::size_t idx = h.size();
            for (std::size_t i = 0; i < h.size(); ++i)
                if (h.entries[i].var == a->name) idx = i;
            if (idx == h.size())
                return stuck("ill-formed", a->name);
            if (!sr.leq(sr.one(), copy))
                return stuck("ill-formed", a->name); // lookups need 1 ≤ copy
            auto dec = sr.decrement(h.entries[idx].allowed, copy);
            if (!dec) return stuck("resource-exhausted", a->name);
            Heap nh = h;
            nh.entries[idx].allowed = *dec;
            auto consumed = zero_vec(sr, h.size());
            consumed[idx] = copy;
            return stepped(std::move(nh), std::move(consumed), {},
                           h.entries[idx].term, copy);
        }
        case Tag::App: {
            const auto& f = a->a;
            if (f->tag == Tag::Lam) {
                Grade allowed = sr.mul(copy, f->grade);
                auto embedded = embedded_check(h, a->b, f->a);
                std::string nm;
                Heap nh = alloc(h, f->name, allowed, std::move(embedded), a->b,
                                f->a, nm);
                UsageCtx added;
                added.entries.push_back({nm, allowed, f->a, a->b});
                return stepped(std::move(nh), zero_vec(sr, h.size() + 1),
                               std::move(added), subst(f->b, mk::var(nm), f->name),
                               copy);
            }
            return congruence(h, f, copy, copy, "a non-function is applied",
                              [&](TermPtr r) { return mk::app(std::move(r), a->b); });
        }
        case Tag::UnitElim: {
            if (a->a->tag == Tag::UnitVal)
                return stepped(h, zero_vec(sr, h.size()), {}, a->b, copy);
            return congruence(
                h, a->a, copy, copy, "let unit eliminates a non-unit",
                [&](TermPtr r) { return mk::unit_elim(std::move(r), a->b); });
        }
        case Tag::SigmaElim: {
            const auto& p = a->a;
            if (p->tag == Tag::Pair) {
                auto [t1, e1] = embedded_infer(h, p->a);
                auto [t2, e2] = embedded_infer(h, p->b);
                std::string z1;
                Heap nh = alloc(h, a->name, copy, std::move(e1), p->a, t1, z1);
                // the second entry's context covers the first at grade zero
                e2.entries.push_back({z1, sr.zero(), t1,
                                      system == SystemKind::Dep ? p->a : nullptr});
                std::string z2;
                nh = alloc(std::move(nh), a->name2, copy, std::move(e2), p->b, t2,
                           z2);
                UsageCtx added;
                added.entries.push_back({z1, copy, t1, p->a});
                added.entries.push_back({z2, copy, t2, p->b});
                // inner binder first: it owns the occurrences on a name clash
                auto reduct =
                    subst(subst(a->b, mk::var(z2), a->name2), mk::var(z1), a->name);
                return stepped(std::move(nh), zero_vec(sr, h.size() + 2),
                               std::move(added), std::move(reduct), copy);
            }
            return congruence(h, p, copy, copy, "spread eliminates a non-pair",
                              [&](TermPtr r) {
                                  return mk::sigma_elim(a->name, a->name2,
                                                        std::move(r), a->b);
                              });
        }
        case Tag::LetBox: {
            const auto& s = a->a;
            if (s->tag == Tag::Box) {
                auto [tp, ep] = embedded_infer(h, s->a);
                Grade allowed = sr.mul(copy, s->grade);
                std::string nm;
                Heap nh = alloc(h, a->name, allowed, std::move(ep), s->a, tp, nm);
                UsageCtx added;
                added.entries.push_back({nm, allowed, tp, s->a});
                return stepped(std::move(nh), zero_vec(sr, h.size() + 1),
                               std::move(added), subst(a->b, mk::var(nm), a->name),
                               copy);
            }
            return congruence(h, s, copy, copy, "let box eliminates a non-box",
                              [&](TermPtr r) {
                                  return mk::let_box(a->name, std::move(r), a->b);
                              });
        }
        case Tag::Case: {
            const auto& s = a->a;
            if (s->tag == Tag::Inj1 || s->tag == Tag::Inj2) {
                // no allocation: the branch application is the next step
                auto reduct = mk::app(s->tag == Tag::Inj1 ? a->b : a->c, s->a);
                return stepped(h, zero_vec(sr, h.size()), {}, std::move(reduct),
                               copy);
            }
            // the scrutinee is demanded copy·q times
            return congruence(h, s, sr.mul(copy, a->grade), copy,
                              "case eliminates a non-injection", [&](TermPtr r) {
                                  return mk::case_of(a->grade, std::move(r), a->b,
                                                     a->c);
                              });
        }
        default:
            if (is_value(a)) {
                StepOutcome o;
                o.kind = StepOutcome::Kind::Value;
                return o;
            }
            return stuck("ill-formed");
        }
    }

    template <typename Rebuild>
    StepOutcome congruence(const Heap& h, const TermPtr& inner, Grade inner_copy,
                           Grade outer_copy, const char* value_msg,
                           Rebuild rebuild) {
        auto out = step(h, inner, inner_copy);
        switch (out.kind) {
        case StepOutcome::Kind::Stuck:
            return out;
        case StepOutcome::Kind::Value:
            return stuck(fmt::format("ill-formed: {}", value_msg));
        case StepOutcome::Kind::Stepped:
            out.rec.reduct = rebuild(std::move(out.rec.reduct));
            out.rec.copy = outer_copy;
            return out;
        }
        return stuck("ill-formed");
    }
};

} // namespace

StepOutcome heap_step(const Semiring& sr, SystemKind system, const Heap& h,
                      const TermPtr& a, Grade copy,
                      std::set<std::string>& support, FreshCtr& fresh) {
    Stepper s{sr, system, support, fresh};
    return s.step(h, a, copy);
}

RunTrace multi_step(const Semiring& sr, SystemKind system, Heap h, TermPtr a,
                    Grade copy, std::set<std::string> support, long long fuel,
                    FreshCtr fresh) {
    RunTrace tr;
    tr.consumed = zero_vec(sr, h.size());
    tr.end = RunTrace::End::Fuel;
    for (long long i = 0; i < fuel; ++i) {
        auto out = heap_step(sr, system, h, a, copy, support, fresh);
        if (out.kind == StepOutcome::Kind::Value) {
            tr.end = RunTrace::End::Value;
            break;
        }
        if (out.kind == StepOutcome::Kind::Stuck) {
            tr.end = RunTrace::End::Stuck;
            tr.stuck = out.stuck;
            break;
        }
        h = out.rec.new_heap;
        a = out.rec.reduct;
        while (tr.consumed.size() < out.rec.consumed.size())
            tr.consumed.push_back(sr.zero());
        tr.consumed = vec_add(sr, tr.consumed, out.rec.consumed);
        for (const auto& e : out.rec.added.entries) tr.added.entries.push_back(e);
        tr.steps.push_back(std::move(out.rec));
    }
    tr.final_heap = std::move(h);
    tr.final_term = std::move(a);
    return tr;
}

CompatResult compat(const Semiring& sr, SystemKind system, const Heap& h,
                    const PlainCtx& plain, const UsageCtx& usage) {
    if (h.size() != plain.size() || h.size() != usage.size())
        return {false, "heap and context lengths differ"};
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h.entries[i].var != plain.entries[i].name ||
            h.entries[i].var != usage.entries[i].name)
            return {false, fmt::format("entry {} names disagree", i)};
        if (!alpha_eq(h.entries[i].type, plain.entries[i].type))
            return {false,
                    fmt::format("types for '{}' disagree", h.entries[i].var)};
    }

    GradeVec g = grades_of(usage);
    for (std::size_t i = h.size(); i-- > 0;) {
        const auto& e = h.entries[i];
        if (e.allowed != g[i])
            return {false,
                    fmt::format("'{}' allows {} but the context requires {}",
                                e.var, sr.show(e.allowed), sr.show(g[i]))};
        if (e.embedded.size() != i)
            return {false, fmt::format("'{}' has an embedded context of length "
                                       "{} over a prefix of length {}",
                                       e.var, e.embedded.size(), i)};
        PlainCtx prefix;
        prefix.entries.assign(plain.entries.begin(),
                              plain.entries.begin() + static_cast<long>(i));
        try {
            if (system == SystemKind::Dep) {
                DepJudgement j{prefix, e.embedded, e.term, e.type};
                check_dep(sr, j);
            } else {
                SimpleJudgement j{prefix, e.embedded, e.term, e.type};
                check_simple(sr, j);
            }
        } catch (const TypeError& ex) {
            return {false, fmt::format("definiens of '{}' does not check: {}",
                                       e.var, ex.what())};
        } catch (const FuelExhausted&) {
            return {false,
                    fmt::format("definiens of '{}' exhausted its fuel", e.var)};
        }
        for (std::size_t j = 0; j < i; ++j)
            g[j] = sr.add(g[j], sr.mul(e.allowed, e.embedded.entries[j].grade));
    }
    return {true, ""};
}

GradeMat transformation_matrix(const Semiring& sr, const Heap& h) {
    std::size_t n = h.size();
    GradeMat m(n);
    std::fill(m.cells.begin(), m.cells.end(), sr.zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0;
             j < h.entries[i].embedded.size() && j < n; ++j)
            m.cells[i * n + j] = h.entries[i].embedded.entries[j].grade;
    return m;
}

MemoryGraph memory_graph(const Semiring& sr, const Heap& h, const UsageCtx& usage) {
    MemoryGraph g;
    g.nodes.push_back("vg");
    for (std::size_t i = h.size(); i-- > 0;) g.nodes.push_back(h.entries[i].var);
    for (std::size_t i = h.size(); i-- > 0;) {
        Grade w = usage.entries[i].grade;
        if (w != sr.zero()) g.edges.push_back({"vg", h.entries[i].var, w});
    }
    for (std::size_t i = h.size(); i-- > 0;) {
        const auto& emb = h.entries[i].embedded;
        for (std::size_t j = emb.size(); j-- > 0;) {
            Grade w = emb.entries[j].grade;
            if (w != sr.zero())
                g.edges.push_back({h.entries[i].var, emb.entries[j].name, w});
        }
    }
    return g;
}

std::string graph_dot(const MemoryGraph& g, const Semiring& sr) {
    std::string out = "digraph memory {\n  rankdir=LR;\n";
    for (const auto& n : g.nodes) {
        out += fmt::format("  \"{}\"{};\n", n,
                           n == "vg" ? " [shape=doublecircle]" : "");
    }
    for (const auto& e : g.edges)
        out += fmt::format("  \"{}\" -> \"{}\" [label=\"{}\"];\n", e.from, e.to,
                           sr.show(e.weight));
    out += "}\n";
    return out;
}

bool config_alpha_eq(const Heap& h1, const TermPtr& a1, const Heap& h2,
                     const TermPtr& a2) {
    if (h1.size() != h2.size()) return false;
    // positional canonical renaming: assignee i becomes "#i", a name no
    // identifier can collide with
    auto rename_in = [](const Heap& h, TermPtr t, std::size_t upto) {
        for (std::size_t j = 0; j < upto; ++j)
            t = subst(t, mk::var(fmt::format("#{}", j)), h.entries[j].var);
        return t;
    };
    for (std::size_t i = 0; i < h1.size(); ++i) {
        const auto& e1 = h1.entries[i];
        const auto& e2 = h2.entries[i];
        if (e1.allowed != e2.allowed) return false;
        if (e1.embedded.size() != e2.embedded.size()) return false;
        for (std::size_t j = 0; j < e1.embedded.size(); ++j)
            if (e1.embedded.entries[j].grade != e2.embedded.entries[j].grade)
                return false;
        if (!alpha_eq(rename_in(h1, e1.term, i), rename_in(h2, e2.term, i)))
            return false;
        if (!alpha_eq(rename_in(h1, e1.type, i), rename_in(h2, e2.type, i)))
            return false;
    }
    return alpha_eq(rename_in(h1, a1, h1.size()), rename_in(h2, a2, h2.size()));
}

} // namespace grad
