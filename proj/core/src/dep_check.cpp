/**
 * @file dep_check.cpp
 * @brief Weak-head normalization, definitional equality, and the dependent
 *        usage checker.
 */
#include "grad/dep_check.hpp"

#include <fmt/format.h>

#include "grad/error.hpp"
#include "grad/eval.hpp"
#include "grad/parse.hpp"

namespace grad {

namespace {

/// Step budget shared by every normalization a single query performs.
struct Fuel {
    long long budget;
    long long remaining;
    explicit Fuel(long long b) : budget(b), remaining(b) {}
    void spend() {
        if (remaining <= 0) throw FuelExhausted(budget);
        --remaining;
    }
};

TermPtr whnf_fuel(TermPtr t, Fuel& f) {
    while (auto n = step(t)) {
        f.spend();
        t = *n;
    }
    return t;
}

/// A binder name guaranteed not to capture inside `scope`.
std::string unused_binder(const TermPtr& scope) {
    auto fv = free_vars(scope);
    if (!fv.count("_")) return "_";
    for (std::uint64_t k = 1;; ++k) {
        auto cand = fmt::format("_%{}", k);
        if (!fv.count(cand)) return cand;
    }
}

/// Rewrite the simple type formers into their graded normal forms: an arrow
/// is a Pi with an unused binder, a tensor is a grade-one Sigma (the grade
/// rides on the tensor node itself).  Box types are NOT rewritten here; a box
/// node is ambiguous between former and introduction until its payload or
/// comparison partner is known.
TermPtr canon_former(const TermPtr& t) {
    if (t->tag == Tag::Arrow)
        return mk::pi(unused_binder(t->b), t->grade, t->a, t->b);
    if (t->tag == Tag::Tensor)
        return mk::sigma(unused_binder(t->b), t->grade, t->a, t->b);
    return t;
}

/// Structural conversion on weak-head normal forms.  `ctr` mints names that
/// no user identifier can collide with (a leading '%' is unlexable).
struct Conv {
    Fuel& fuel;
    std::uint64_t ctr = 0;

    std::string fresh() { return fmt::format("%cv{}", ctr++); }

    bool binders(const std::string& n1, const TermPtr& b1, const std::string& n2,
                 const TermPtr& b2) {
        if (n1 == n2) return run(b1, b2);
        auto v = mk::var(fresh());
        return run(subst(b1, v, n1), subst(b2, v, n2));
    }

    bool run(const TermPtr& ta, const TermPtr& tb) {
        TermPtr a = canon_former(whnf_fuel(ta, fuel));
        TermPtr b = canon_former(whnf_fuel(tb, fuel));

        // Box bridges: as a former it is the unit-weighted pair type, as an
        // introduction it is the pair of payload and unit.
        if (a->tag == Tag::Box || b->tag == Tag::Box) {
            if (a->tag != Tag::Box) std::swap(a, b);
            switch (b->tag) {
            case Tag::Box:
                return a->grade == b->grade && run(a->a, b->a);
            case Tag::Sigma:
                return a->grade == b->grade && run(a->a, b->a) &&
                       run(b->b, mk::unit_ty());
            case Tag::Pair:
                return run(a->a, b->a) && run(b->b, mk::unit_val());
            default:
                return false;
            }
        }

        if (a->tag != b->tag) return false;
        switch (a->tag) {
        case Tag::TypeSort:
        case Tag::Unit:
        case Tag::UnitVal:
            return true;
        case Tag::Var:
            return a->name == b->name;
        case Tag::Pi:
        case Tag::Sigma:
            return a->grade == b->grade && run(a->a, b->a) &&
                   binders(a->name, a->b, b->name, b->b);
        case Tag::Lam:
            return a->grade == b->grade && run(a->a, b->a) &&
                   binders(a->name, a->b, b->name, b->b);
        case Tag::App:
        case Tag::Pair:
        case Tag::Sum:
        case Tag::UnitElim:
            return run(a->a, b->a) && run(a->b, b->b);
        case Tag::Inj1:
        case Tag::Inj2:
            return run(a->a, b->a);
        case Tag::SigmaElim: {
            if (!run(a->a, b->a)) return false;
            // rename both bound pairs to common fresh names; the second
            // binder is the inner one, so it is renamed away first
            auto v1 = mk::var(fresh());
            auto v2 = mk::var(fresh());
            auto body1 = subst(subst(a->b, v2, a->name2), v1, a->name);
            auto body2 = subst(subst(b->b, v2, b->name2), v1, b->name);
            return run(body1, body2);
        }
        case Tag::LetBox:
            return run(a->a, b->a) && binders(a->name, a->b, b->name, b->b);
        case Tag::Case:
            return a->grade == b->grade && run(a->a, b->a) && run(a->b, b->b) &&
                   run(a->c, b->c);
        default:
            return false;
        }
    }
};

bool defeq_fuel(const PlainCtx& plain, const TermPtr& a, const TermPtr& b,
                Fuel& fuel) {
    Conv c{fuel};
    return c.run(flatten_defs(a, plain), flatten_defs(b, plain));
}

struct DepChecker {
    const Semiring& sr;
    PlainCtx delta; // extended in place while descending under binders
    Fuel& fuel;
    FreshCtr names; // for capture-avoiding binder renames

    std::string show(const TermPtr& t) const {
        return print_term(flatten_defs(t, delta), sr);
    }

    std::optional<std::size_t> rfind(const std::string& name) const {
        for (std::size_t i = delta.entries.size(); i-- > 0;)
            if (delta.entries[i].name == name) return i;
        return std::nullopt;
    }

    GradeVec zeros() const { return zero_vec(sr, delta.entries.size()); }

    bool defeq_here(const TermPtr& a, const TermPtr& b) {
        return defeq_fuel(delta, a, b, fuel);
    }

    void require_defeq(const TermPtr& got, const TermPtr& want, const char* what) {
        if (!defeq_here(got, want))
            throw TypeError(fmt::format("{}: {} and {} are not convertible", what,
                                        show(got), show(want)));
    }

    /// Weak-head normal form with definitions unfolded and the simple
    /// formers rewritten to their graded shape — the view every eliminator
    /// inspects.
    TermPtr head_type(const TermPtr& t) {
        auto h = canon_former(whnf_fuel(flatten_defs(t, delta), fuel));
        if (h->tag == Tag::Box) // box type = unit-weighted pair type
            return mk::sigma(unused_binder(h->a), h->grade, h->a, mk::unit_ty());
        return h;
    }

    /// Check that `t` is a type; its usage is discarded (type positions are
    /// priced at zero).
    void require_type(const TermPtr& t) { (void)check_at(t, mk::type_sort()); }

    /// Binder names are renamed apart before being pushed whenever they
    /// would shadow an existing entry or collide with a free variable of the
    /// dependent type they scope over; this keeps name-based usage lookup
    /// and the constant-motive test honest.
    std::string push_binder(const std::string& name, const TermPtr& type,
                            TermPtr& body, const TermPtr& scope_type) {
        std::string use = name;
        if (rfind(name) || (scope_type && free_vars(scope_type).count(name))) {
            std::set<std::string> support;
            for (const auto& e : delta.entries) support.insert(e.name);
            auto fv = free_vars(body);
            support.insert(fv.begin(), fv.end());
            if (scope_type) {
                auto fvt = free_vars(scope_type);
                support.insert(fvt.begin(), fvt.end());
            }
            use = names.fresh(name, support);
            body = subst(body, mk::var(use), name);
        }
        delta.entries.push_back({use, type, nullptr});
        return use;
    }

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

    /// The motive of an eliminator must not mention the variables the
    /// eliminator binds (constant-motive algorithmization).
    void require_constant_motive(const TermPtr& motive,
                                 std::initializer_list<std::string> bound) {
        auto fv = free_vars(motive);
        for (const auto& n : bound)
            if (fv.count(n))
                throw TypeError(fmt::format(
                    "ill-formed motive: the result type {} mentions the bound "
                    "variable '{}'",
                    print_term(motive, sr), n));
    }

    DepResult infer(const TermPtr& a) {
        switch (a->tag) {
        case Tag::Var: {
            auto i = rfind(a->name);
            if (!i) throw TypeError(fmt::format("unbound variable '{}'", a->name));
            auto u = zeros();
            u[*i] = sr.one();
            return {delta.entries[*i].type, u};
        }
        case Tag::TypeSort:
            return {mk::type_sort(), zeros()};
        case Tag::Unit:
            return {mk::type_sort(), zeros()};
        case Tag::UnitVal:
            return {mk::unit_ty(), zeros()};
        case Tag::Pi:
        case Tag::Sigma: {
            if (!sr.valid(a->grade)) throw TypeError("grade outside the carrier");
            require_type(a->a);
            TermPtr body = a->b;
            auto bn = push_binder(a->name, a->a, body, nullptr);
            auto u = check_at(body, mk::type_sort());
            u.pop_back(); // formation places no constraint on the binder
            delta.entries.pop_back();
            (void)bn;
            return {mk::type_sort(), zeros()};
        }
        case Tag::Arrow:
        case Tag::Tensor:
        case Tag::Sum: {
            if (a->tag == Tag::Arrow && !sr.valid(a->grade))
                throw TypeError("grade outside the carrier");
            require_type(a->a);
            require_type(a->b);
            return {mk::type_sort(), zeros()};
        }
        case Tag::Lam: {
            if (!sr.valid(a->grade)) throw TypeError("grade outside the carrier");
            require_type(a->a);
            TermPtr body = a->b;
            auto bn = push_binder(a->name, a->a, body, nullptr);
            auto rb = infer(body);
            auto u = pop_binder(std::move(rb.usage), a->grade, bn, "lambda binder");
            return {mk::pi(bn, a->grade, a->a, rb.type), std::move(u)};
        }
        case Tag::App: {
            auto rf = infer(a->a);
            auto tf = head_type(rf.type);
            if (tf->tag != Tag::Pi)
                throw TypeError(fmt::format("'{}' of type {} is not a function",
                                            show(a->a), show(rf.type)));
            auto ua = check_at(a->b, tf->a);
            return {subst(tf->b, a->b, tf->name),
                    vec_affine(sr, rf.usage, tf->grade, ua)};
        }
        case Tag::Pair: {
            // without a target the pair is typed at the non-dependent,
            // grade-one Sigma
            auto r1 = infer(a->a);
            auto r2 = infer(a->b);
            return {mk::sigma(unused_binder(r2.type), sr.one(), r1.type, r2.type),
                    vec_affine(sr, r2.usage, sr.one(), r1.usage)};
        }
        case Tag::UnitElim: {
            auto ru = infer(a->a);
            auto tu = head_type(ru.type);
            if (tu->tag != Tag::Unit)
                throw TypeError(fmt::format("let unit scrutinee has type {}, not Unit",
                                            show(ru.type)));
            auto rb = infer(a->b);
            return {rb.type, vec_add(sr, ru.usage, rb.usage)};
        }
        case Tag::SigmaElim: {
            auto rp = infer(a->a);
            auto tp = head_type(rp.type);
            if (tp->tag != Tag::Sigma)
                throw TypeError(fmt::format(
                    "spread scrutinee has type {}, not a pair type", show(rp.type)));
            TermPtr body = a->b;
            auto x = push_binder(a->name, tp->a, body, tp->b);
            auto ty2 = subst(tp->b, mk::var(x), tp->name);
            auto y = push_binder(a->name2, ty2, body, ty2);
            auto rb = infer(body);
            auto motive = rb.type;
            auto u = pop_binder(std::move(rb.usage), sr.one(), y, "spread component");
            u = pop_binder(std::move(u), tp->grade, x, "spread component");
            require_constant_motive(motive, {x, y});
            return {motive, vec_add(sr, rp.usage, u)};
        }
        case Tag::Inj1:
        case Tag::Inj2:
            throw TypeError("cannot synthesize the sum type of a bare injection; "
                            "a checking position is required");
        case Tag::Case: {
            if (!sr.valid(a->grade)) throw TypeError("grade outside the carrier");
            if (!sr.leq(sr.one(), a->grade))
                throw TypeError(fmt::format(
                    "case must use its scrutinee at least once: 1 is not below {}",
                    sr.show(a->grade)));
            auto r1 = infer(a->b);
            auto r2 = infer(a->c);
            auto t1 = head_type(r1.type);
            auto t2 = head_type(r2.type);
            auto check_branch = [&](const TermPtr& t) {
                if (t->tag != Tag::Pi)
                    throw TypeError("case branches must be functions");
                if (t->grade != a->grade)
                    throw TypeError(fmt::format(
                        "branch grade {} must equal the case annotation {}",
                        sr.show(t->grade), sr.show(a->grade)));
                require_constant_motive(t->b, {t->name});
            };
            check_branch(t1);
            check_branch(t2);
            require_defeq(t1->b, t2->b, "branches disagree on the result type");
            // the expected scrutinee type is assembled from the branch
            // domains, so injection scrutinees check without annotations
            auto us = check_at(a->a, mk::sum(t1->a, t2->a));
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
            return {t1->b, vec_affine(sr, joined, a->grade, us)};
        }
        case Tag::Box: {
            if (!sr.valid(a->grade)) throw TypeError("grade outside the carrier");
            auto rp = infer(a->a);
            if (defeq_here(rp.type, mk::type_sort())) {
                // box over a type is the former itself: the unit-weighted
                // pair type, of sort Type, priced at zero like any formation
                return {mk::type_sort(), zeros()};
            }
            return {mk::sigma(unused_binder(rp.type), a->grade, rp.type,
                              mk::unit_ty()),
                    vec_scale(sr, a->grade, rp.usage)};
        }
        case Tag::LetBox: {
            auto ra = infer(a->a);
            auto ta = head_type(ra.type);
            if (ta->tag != Tag::Sigma || !defeq_here(ta->b, mk::unit_ty()))
                throw TypeError(fmt::format(
                    "let box eliminates a unit-weighted pair; scrutinee has type {}",
                    show(ra.type)));
            TermPtr body = a->b;
            auto x = push_binder(a->name, ta->a, body, nullptr);
            auto rb = infer(body);
            auto motive = rb.type;
            auto u = pop_binder(std::move(rb.usage), ta->grade, x, "boxed binder");
            require_constant_motive(motive, {x});
            return {motive, vec_add(sr, ra.usage, u)};
        }
        default:
            throw TypeError(fmt::format("'{}' has no dependent typing rule", show(a)));
        }
    }

    GradeVec check_at(const TermPtr& a, const TermPtr& ty) {
        switch (a->tag) {
        case Tag::Inj1:
        case Tag::Inj2: {
            auto t = head_type(ty);
            if (t->tag != Tag::Sum)
                throw TypeError(fmt::format("injection checked against {}, not a sum",
                                            show(ty)));
            return check_at(a->a, a->tag == Tag::Inj1 ? t->a : t->b);
        }
        case Tag::Pair: {
            auto t = head_type(ty);
            if (t->tag != Tag::Sigma) break; // fall back to synthesis
            auto u1 = check_at(a->a, t->a);
            auto u2 = check_at(a->b, subst(t->b, a->a, t->name));
            return vec_affine(sr, u2, t->grade, u1);
        }
        case Tag::Box: {
            auto t = head_type(ty);
            if (t->tag == Tag::TypeSort) {
                // formation reading: box q A : Type when A : Type
                (void)check_at(a->a, mk::type_sort());
                return zeros();
            }
            if (t->tag != Tag::Sigma) break;
            if (t->grade != a->grade)
                throw TypeError(fmt::format(
                    "box weight {} does not match the pair type weight {}",
                    sr.show(a->grade), sr.show(t->grade)));
            require_defeq(t->b, mk::unit_ty(), "box checked against a dependent pair");
            return vec_scale(sr, a->grade, check_at(a->a, t->a));
        }
        case Tag::Lam: {
            auto t = head_type(ty);
            if (t->tag != Tag::Pi) break;
            if (a->grade != t->grade)
                throw TypeError(fmt::format(
                    "lambda grade {} does not match the function type grade {}",
                    sr.show(a->grade), sr.show(t->grade)));
            require_type(a->a);
            require_defeq(a->a, t->a, "lambda annotation");
            TermPtr body = a->b;
            auto target = subst(t->b, mk::var(a->name), t->name);
            auto bn = push_binder(a->name, t->a, body, target);
            if (bn != a->name) target = subst(t->b, mk::var(bn), t->name);
            auto u = check_at(body, target);
            return pop_binder(std::move(u), a->grade, bn, "lambda binder");
        }
        default:
            break;
        }
        auto r = infer(a);
        require_defeq(r.type, ty, "type mismatch");
        return r.usage;
    }
};

} // namespace

TermPtr whnf(const TermPtr& a, long long fuel) {
    Fuel f(fuel);
    return whnf_fuel(a, f);
}

bool defeq(const PlainCtx& plain, const TermPtr& a, const TermPtr& b,
           long long fuel) {
    Fuel f(fuel);
    return defeq_fuel(plain, a, b, f);
}

DepResult infer_dep(const Semiring& sr, const PlainCtx& plain, const TermPtr& a,
                    long long fuel) {
    Fuel f(fuel);
    DepChecker c{sr, plain, f, {}};
    return c.infer(a);
}

GradeVec check_dep_at(const Semiring& sr, const PlainCtx& plain, const TermPtr& a,
                      const TermPtr& type, long long fuel) {
    Fuel f(fuel);
    DepChecker c{sr, plain, f, {}};
    c.require_type(type);
    return c.check_at(a, type);
}

void check_dep(const Semiring& sr, const DepJudgement& j, long long fuel) {
    if (!same_erasure(j.plain, erase(j.usage)))
        throw TypeError("judgement violates the usage/plain correspondence");
    Fuel f(fuel);
    // the context itself must be well-formed: every type is a type and every
    // definiens checks at its declared type, each in its own prefix
    for (std::size_t i = 0; i < j.plain.entries.size(); ++i) {
        PlainCtx prefix;
        prefix.entries.assign(j.plain.entries.begin(),
                              j.plain.entries.begin() + static_cast<long>(i));
        DepChecker c{sr, prefix, f, {}};
        c.require_type(j.plain.entries[i].type);
        if (j.plain.entries[i].def)
            (void)c.check_at(j.plain.entries[i].def, j.plain.entries[i].type);
    }
    DepChecker c{sr, j.plain, f, {}};
    c.require_type(j.type);
    // Check against the declared type rather than synthesize-and-compare:
    // checking subsumes synthesis and also accepts forms (bare injections)
    // that have no principal type of their own.
    auto u = c.check_at(j.subject, j.type);
    if (!vec_leq(sr, u, grades_of(j.usage)))
        throw TypeError("declared usage insufficient for the synthesized demand");
}

void regularity_check(const Semiring& sr, const PlainCtx& plain, const TermPtr& a,
                      long long fuel) {
    Fuel f(fuel);
    DepChecker c{sr, plain, f, {}};
    auto r = c.infer(a);
    (void)c.check_at(r.type, mk::type_sort());
}

} // namespace grad
