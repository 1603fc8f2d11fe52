/**
 * @file gen.cpp
 * @brief Grammar-driven program generator with checker-filtered output.
 *
 * Draws come from std::mt19937_64 through plain modulus so the stream is
 * identical across platforms; std::uniform_int_distribution is not, and
 * reproducibility of a sweep matters more than bias in the low bits.
 */
#include "grad/gen.hpp"

#include <fmt/format.h>

#include <random>
#include <utility>
#include <vector>

#include "grad/error.hpp"
#include "grad/simple_check.hpp"

namespace grad {

namespace {

constexpr int kAttemptsPerBody = 24;

struct Gen {
    const Semiring& sr;
    std::mt19937_64 rng;
    int depth_budget;

    PlainCtx scope;                                      // definitions so far
    std::vector<std::pair<std::string, TermPtr>> locals; // scope + binders in flight
    std::uint64_t binder_ctr = 0;

    Gen(const Semiring& s, const GenConfig& cfg)
        : sr(s), rng(cfg.seed), depth_budget(cfg.depth) {}

    std::uint64_t pick(std::uint64_t n) { return rng() % n; }

    /// A small sample of the carrier; naturals contribute 0..7.
    Grade grade() {
        std::vector<Grade> opts;
        for (std::uint64_t r = 0; r < 8; ++r)
            if (sr.valid(Grade{r})) opts.push_back(Grade{r});
        return opts[pick(opts.size())];
    }

    /// Like grade(), but only values that a scrutinee may be used at.
    std::optional<Grade> usable_grade() {
        std::vector<Grade> opts;
        for (std::uint64_t r = 0; r < 8; ++r)
            if (sr.valid(Grade{r}) && sr.leq(sr.one(), Grade{r}))
                opts.push_back(Grade{r});
        if (opts.empty()) return std::nullopt;
        return opts[pick(opts.size())];
    }

    TermPtr unit_t() { return mk::unit_ty(); }
    TermPtr pair_t() { return mk::tensor(sr.one(), mk::unit_ty(), mk::unit_ty()); }
    TermPtr sum_t() { return mk::sum(mk::unit_ty(), mk::unit_ty()); }

    TermPtr rand_type() {
        switch (pick(5)) {
        case 0:
        case 1: return unit_t();
        case 2: return pair_t();
        case 3: return sum_t();
        default: return mk::arrow(grade(), mk::unit_ty(), mk::unit_ty());
        }
    }

    std::string fresh_binder() { return fmt::format("v{}", ++binder_ctr); }

    std::vector<std::string> vars_of(const TermPtr& ty) {
        std::vector<std::string> out;
        for (const auto& [n, t] : locals)
            if (alpha_eq(t, ty)) out.push_back(n);
        return out;
    }

    /// An inhabitant that checks at any grade discipline: closed, each
    /// lambda body uses its binder once when the annotation permits.
    TermPtr canonical(const TermPtr& ty) {
        switch (ty->tag) {
        case Tag::Tensor: return mk::pair(canonical(ty->a), canonical(ty->b));
        case Tag::Sum: return mk::inj1(canonical(ty->a));
        case Tag::Arrow: {
            std::string v = fresh_binder();
            TermPtr body = sr.leq(sr.one(), ty->grade) ? mk::var(v) : canonical(ty->b);
            return mk::lam(v, ty->grade, ty->a, body);
        }
        default: return mk::unit_val();
        }
    }

    TermPtr with_binder(const std::string& name, const TermPtr& ty,
                        const TermPtr& body_ty, int depth) {
        locals.emplace_back(name, ty);
        auto body = gen(body_ty, depth);
        locals.pop_back();
        return body;
    }

    TermPtr gen(const TermPtr& ty, int depth) {
        auto vs = vars_of(ty);
        // Variables carry the usage pressure the sweeps are after, so they
        // win half the draws whenever one is in scope.
        if (!vs.empty() && pick(2) == 0) return mk::var(vs[pick(vs.size())]);
        if (depth <= 0) return canonical(ty);

        if (ty->tag == Tag::Tensor) return mk::pair(gen(ty->a, depth - 1), gen(ty->b, depth - 1));
        if (ty->tag == Tag::Sum)
            return pick(2) ? mk::inj2(gen(ty->b, depth - 1)) : mk::inj1(gen(ty->a, depth - 1));
        if (ty->tag == Tag::Arrow) {
            std::string v = fresh_binder();
            return mk::lam(v, ty->grade, ty->a, with_binder(v, ty->a, ty->b, depth - 1));
        }

        // Unit target: eliminators keep the machine honest.
        switch (pick(6)) {
        case 0: return mk::unit_val();
        case 1: return mk::unit_elim(gen(unit_t(), depth - 1), gen(unit_t(), depth - 1));
        case 2: { // redex
            std::string v = fresh_binder();
            Grade q = grade();
            auto body = with_binder(v, unit_t(), ty, depth - 1);
            return mk::app(mk::lam(v, q, unit_t(), body), gen(unit_t(), depth - 1));
        }
        case 3: { // spread a pair
            std::string v1 = fresh_binder(), v2 = fresh_binder();
            auto scrut = gen(pair_t(), depth - 1);
            locals.emplace_back(v1, unit_t());
            locals.emplace_back(v2, unit_t());
            auto body = gen(unit_t(), depth - 1);
            locals.pop_back();
            locals.pop_back();
            return mk::sigma_elim(v1, v2, scrut, body);
        }
        case 4: { // case on a sum-typed variable, when one exists
            auto sums = vars_of(sum_t());
            auto q = usable_grade();
            if (sums.empty() || !q) return mk::unit_val();
            std::string v1 = fresh_binder(), v2 = fresh_binder();
            auto b1 = mk::lam(v1, *q, unit_t(), with_binder(v1, unit_t(), ty, depth - 1));
            auto b2 = mk::lam(v2, *q, unit_t(), with_binder(v2, unit_t(), ty, depth - 1));
            return mk::case_of(*q, mk::var(sums[pick(sums.size())]), b1, b2);
        }
        default: { // apply an arrow-typed definition, when one exists
            std::vector<std::pair<std::string, Grade>> heads;
            for (const auto& [n, t] : locals)
                if (t->tag == Tag::Arrow) heads.emplace_back(n, t->grade);
            if (heads.empty()) return mk::unit_val();
            const std::string& head = heads[pick(heads.size())].first;
            return mk::app(mk::var(head), gen(unit_t(), depth - 1));
        }
        }
    }

    /// Draw candidates until one checks; failing that, retreat to a term
    /// the checker provably accepts.
    TermPtr accepted_body(TermPtr& ty) {
        for (int i = 0; i < kAttemptsPerBody; ++i) {
            auto cand = gen(ty, depth_budget);
            try {
                check_simple_at(sr, scope, cand, ty);
                return cand;
            } catch (const TypeError&) {
            }
        }
        ty = unit_t();
        return mk::unit_val();
    }

    Program run(const GenConfig& cfg) {
        Program p;
        std::size_t ndefs = 1 + pick(cfg.max_defs);
        for (std::size_t i = 0; i < ndefs; ++i) {
            std::string name = fmt::format("d{}", i + 1);
            TermPtr ty = rand_type();
            TermPtr body = accepted_body(ty);
            p.defs.push_back({name, std::nullopt, ty, body});
            scope.entries.push_back({name, ty, nullptr});
            locals.emplace_back(name, ty);
        }
        TermPtr main_ty = unit_t();
        for (int i = 0; i < kAttemptsPerBody; ++i) {
            auto cand = gen(main_ty, depth_budget + 1);
            try {
                infer_simple(sr, scope, cand); // main must synthesize
                p.main = cand;
                return p;
            } catch (const TypeError&) {
            }
        }
        p.main = mk::unit_val();
        return p;
    }
};

} // namespace

Program gen_program(const Semiring& sr, const GenConfig& cfg) {
    Gen g(sr, cfg);
    return g.run(cfg);
}

} // namespace grad
