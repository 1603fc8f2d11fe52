/**
 * @file simple_check.cpp
 * @brief The simply-typed graded checker.
 */
#include "grad/simple_check.hpp"

#include <fmt/format.h>

#include <optional>

#include "grad/error.hpp"
#include "grad/parse.hpp"

namespace grad {

namespace {

struct SimpleChecker {
    const Semiring& sr;
    PlainCtx delta; // extended in place while descending under binders

    std::string show(const TermPtr& t) const { return print_term(t, sr); }

    /// Innermost binding of `name` (binders may shadow).
    std::optional<std::size_t> rfind(const std::string& name) const {
        for (std::size_t i = delta.entries.size(); i-- > 0;)
            if (delta.entries[i].name == name) return i;
        return std::nullopt;
    }

    /// Reject anything that is not a type of the simple system.
    void validate_type(const TermPtr& t) const {
        switch (t->tag) {
        case Tag::Var:
        case Tag::Unit:
            return;
        case Tag::Arrow:
        case Tag::Box:
            if (!sr.valid(t->grade)) throw TypeError("grade outside the carrier");
            validate_type(t->a);
            if (t->tag == Tag::Arrow) validate_type(t->b);
            return;
        case Tag::Tensor:
        case Tag::Sum:
            validate_type(t->a);
            validate_type(t->b);
            return;
        default:
            throw TypeError(
                fmt::format("'{}' is not a type of the simple system", show(t)));
        }
    }

    GradeVec zeros() const { return zero_vec(sr, delta.entries.size()); }

    /// Pop one binder, enforcing its declared grade against the synthesized
    /// tail component, and return the vector without that component.
    GradeVec pop_binder(GradeVec u, Grade declared, const std::string& name,
                        const char* what) {
        Grade used = u.back();
        u.pop_back();
        delta.entries.pop_back();
        if (!sr.leq(used, declared))
            throw TypeError(fmt::format(
                "{} '{}' has annotation {} but the body uses it at {}", what, name,
                sr.show(declared), sr.show(used)));
        return u;
    }

    SimpleResult infer(const TermPtr& a) {
        switch (a->tag) {
        case Tag::Var: {
            auto i = rfind(a->name);
            if (!i) throw TypeError(fmt::format("unbound variable '{}'", a->name));
            auto u = zeros();
            u[*i] = sr.one();
            return {delta.entries[*i].type, u};
        }
        case Tag::UnitVal:
            return {mk::unit_ty(), zeros()};
        case Tag::UnitElim: {
            auto ra = infer(a->a);
            if (ra.type->tag != Tag::Unit)
                throw TypeError(fmt::format("let unit scrutinee has type {}, not Unit",
                                            show(ra.type)));
            auto rb = infer(a->b);
            return {rb.type, vec_add(sr, ra.usage, rb.usage)};
        }
        case Tag::Lam: {
            validate_type(a->a);
            delta.entries.push_back({a->name, a->a, nullptr});
            auto rb = infer(a->b);
            auto u = pop_binder(std::move(rb.usage), a->grade, a->name, "lambda binder");
            return {mk::arrow(a->grade, a->a, rb.type), std::move(u)};
        }
        case Tag::App: {
            auto rf = infer(a->a);
            if (rf.type->tag != Tag::Arrow)
                throw TypeError(fmt::format("'{}' of type {} is not a function",
                                            show(a->a), show(rf.type)));
            auto rx = infer(a->b);
            if (!alpha_eq(rx.type, rf.type->a))
                throw TypeError(fmt::format(
                    "argument type mismatch: expected {}, got {}", show(rf.type->a),
                    show(rx.type)));
            return {rf.type->b, vec_affine(sr, rf.usage, rf.type->grade, rx.usage)};
        }
        case Tag::Pair: {
            auto r1 = infer(a->a);
            auto r2 = infer(a->b);
            return {mk::tensor(r1.type, r2.type), vec_add(sr, r1.usage, r2.usage)};
        }
        case Tag::SigmaElim: {
            auto rp = infer(a->a);
            if (rp.type->tag != Tag::Tensor)
                throw TypeError(fmt::format("spread scrutinee has type {}, not a pair",
                                            show(rp.type)));
            delta.entries.push_back({a->name, rp.type->a, nullptr});
            delta.entries.push_back({a->name2, rp.type->b, nullptr});
            auto rb = infer(a->b);
            auto u = pop_binder(std::move(rb.usage), sr.one(), a->name2,
                                "spread component");
            u = pop_binder(std::move(u), sr.one(), a->name, "spread component");
            return {rb.type, vec_add(sr, rp.usage, u)};
        }
        case Tag::Inj1:
        case Tag::Inj2:
            throw TypeError("cannot synthesize the sum type of a bare injection; "
                            "a checking position is required");
        case Tag::Case: {
            if (!sr.leq(sr.one(), a->grade))
                throw TypeError(fmt::format(
                    "case must use its scrutinee at least once: 1 is not below {}",
                    sr.show(a->grade)));
            auto r1 = infer(a->b);
            auto r2 = infer(a->c);
            auto check_branch = [&](const SimpleResult& r) {
                if (r.type->tag != Tag::Arrow)
                    throw TypeError("case branches must be functions");
                if (r.type->grade != a->grade)
                    throw TypeError(fmt::format(
                        "branch arrow grade {} must equal the case annotation {}",
                        sr.show(r.type->grade), sr.show(a->grade)));
            };
            check_branch(r1);
            check_branch(r2);
            if (!alpha_eq(r1.type->b, r2.type->b))
                throw TypeError(
                    fmt::format("branches disagree on the result type: {} vs {}",
                                show(r1.type->b), show(r2.type->b)));
            // Synthesize the scrutinee when possible; a lookup step can
            // replace a variable with a check-only definiens (an injection),
            // so reducts must also be accepted by checking the scrutinee
            // against the sum the branch domains spell out.
            GradeVec us;
            std::optional<SimpleResult> rs;
            try {
                rs = infer(a->a);
            } catch (const TypeError&) {
                rs.reset();
            }
            if (rs) {
                if (rs->type->tag != Tag::Sum)
                    throw TypeError(fmt::format(
                        "case scrutinee has type {}, not a sum", show(rs->type)));
                if (!alpha_eq(r1.type->a, rs->type->a) ||
                    !alpha_eq(r2.type->a, rs->type->b))
                    throw TypeError(fmt::format(
                        "branch domains {} and {} do not match the scrutinee "
                        "sides of {}",
                        show(r1.type->a), show(r2.type->a), show(rs->type)));
                us = rs->usage;
            } else {
                us = check_at(a->a, mk::sum(r1.type->a, r2.type->a));
            }
            GradeVec joined;
            if (r1.usage == r2.usage) {
                joined = r1.usage;
            } else if (!sr.classify().has_lub) {
                throw TypeError("branch-usage join failure: the semiring lacks "
                                "least upper bounds");
            } else {
                for (std::size_t i = 0; i < r1.usage.size(); ++i)
                    joined.push_back(*sr.lub(r1.usage[i], r2.usage[i]));
            }
            return {r1.type->b, vec_affine(sr, joined, a->grade, us)};
        }
        case Tag::Box: {
            if (!sr.valid(a->grade)) throw TypeError("grade outside the carrier");
            auto ra = infer(a->a);
            return {mk::box(a->grade, ra.type), vec_scale(sr, a->grade, ra.usage)};
        }
        case Tag::LetBox: {
            auto ra = infer(a->a);
            if (ra.type->tag != Tag::Box)
                throw TypeError(fmt::format(
                    "let box scrutinee has type {}, not a box", show(ra.type)));
            delta.entries.push_back({a->name, ra.type->a, nullptr});
            auto rb = infer(a->b);
            auto u = pop_binder(std::move(rb.usage), ra.type->grade, a->name,
                                "boxed binder");
            return {rb.type, vec_add(sr, ra.usage, u)};
        }
        default:
            throw TypeError(fmt::format(
                "'{}' is not a term of the simple system", show(a)));
        }
    }

    GradeVec check_at(const TermPtr& a, const TermPtr& ty) {
        switch (a->tag) {
        case Tag::Inj1:
        case Tag::Inj2: {
            if (ty->tag != Tag::Sum)
                throw TypeError(fmt::format("injection checked against {}, not a sum",
                                            show(ty)));
            return check_at(a->a, a->tag == Tag::Inj1 ? ty->a : ty->b);
        }
        case Tag::Pair: {
            if (ty->tag != Tag::Tensor)
                throw TypeError(fmt::format("pair checked against {}, not a pair type",
                                            show(ty)));
            auto u1 = check_at(a->a, ty->a);
            auto u2 = check_at(a->b, ty->b);
            return vec_add(sr, u1, u2);
        }
        case Tag::Box: {
            if (ty->tag != Tag::Box || ty->grade != a->grade)
                throw TypeError(fmt::format("box {} checked against {}",
                                            sr.show(a->grade), show(ty)));
            return vec_scale(sr, a->grade, check_at(a->a, ty->a));
        }
        case Tag::Lam: {
            if (ty->tag != Tag::Arrow || ty->grade != a->grade ||
                !alpha_eq(ty->a, a->a))
                break; // fall back to synthesis for the error message
            validate_type(a->a);
            delta.entries.push_back({a->name, a->a, nullptr});
            auto u = check_at(a->b, ty->b);
            return pop_binder(std::move(u), a->grade, a->name, "lambda binder");
        }
        default:
            break;
        }
        auto r = infer(a);
        if (!alpha_eq(r.type, ty))
            throw TypeError(fmt::format("type mismatch: expected {}, synthesized {}",
                                        show(ty), show(r.type)));
        return r.usage;
    }
};

} // namespace

SimpleResult infer_simple(const Semiring& sr, const PlainCtx& plain, const TermPtr& a) {
    SimpleChecker c{sr, plain};
    return c.infer(a);
}

GradeVec check_simple_at(const Semiring& sr, const PlainCtx& plain, const TermPtr& a,
                         const TermPtr& type) {
    SimpleChecker c{sr, plain};
    c.validate_type(type);
    return c.check_at(a, type);
}

void check_simple(const Semiring& sr, const SimpleJudgement& j) {
    if (!same_erasure(j.plain, erase(j.usage)))
        throw TypeError("judgement violates the usage/plain correspondence");
    // Check against the declared type rather than synthesize-and-compare:
    // checking subsumes synthesis and also accepts forms (bare injections)
    // that have no principal type of their own.
    auto u = check_simple_at(sr, j.plain, j.subject, j.type);
    if (!vec_leq(sr, u, grades_of(j.usage)))
        throw TypeError("declared usage insufficient for the synthesized demand");
}

} // namespace grad
