/**
 * @file eval.cpp
 * @brief Call-by-name small-step reduction.
 */
#include "grad/eval.hpp"

#include "grad/error.hpp"

namespace grad {

std::optional<TermPtr> step(const TermPtr& a) {
    switch (a->tag) {
    case Tag::App: {
        if (!is_value(a->a)) {
            if (auto f = step(a->a)) return mk::app(*f, a->b);
            return std::nullopt;
        }
        if (a->a->tag == Tag::Lam) return subst(a->a->b, a->b, a->a->name);
        return std::nullopt; // applying a non-function value: stuck
    }
    case Tag::UnitElim: {
        if (!is_value(a->a)) {
            if (auto s = step(a->a)) return mk::unit_elim(*s, a->b);
            return std::nullopt;
        }
        if (a->a->tag == Tag::UnitVal) return a->b;
        return std::nullopt;
    }
    case Tag::SigmaElim: {
        if (!is_value(a->a)) {
            if (auto s = step(a->a)) return mk::sigma_elim(a->name, a->name2, *s, a->b);
            return std::nullopt;
        }
        if (a->a->tag == Tag::Pair) {
            auto once = subst(a->b, a->a->a, a->name);
            return subst(once, a->a->b, a->name2);
        }
        return std::nullopt;
    }
    case Tag::LetBox: {
        if (!is_value(a->a)) {
            if (auto s = step(a->a)) return mk::let_box(a->name, *s, a->b);
            return std::nullopt;
        }
        if (a->a->tag == Tag::Box) return subst(a->b, a->a->a, a->name);
        return std::nullopt;
    }
    case Tag::Case: {
        if (!is_value(a->a)) {
            if (auto s = step(a->a)) return mk::case_of(a->grade, *s, a->b, a->c);
            return std::nullopt;
        }
        if (a->a->tag == Tag::Inj1) return mk::app(a->b, a->a->a);
        if (a->a->tag == Tag::Inj2) return mk::app(a->c, a->a->a);
        return std::nullopt;
    }
    default:
        return std::nullopt; // values, variables
    }
}

EvalResult eval(const TermPtr& a, long long fuel) {
    TermPtr cur = a;
    long long n = 0;
    while (true) {
        auto next = step(cur);
        if (!next) return {cur, n};
        cur = *next;
        if (++n >= fuel) {
            if (!step(cur)) return {cur, n}; // landed exactly on a fixpoint
            throw FuelExhausted(n);
        }
    }
}

} // namespace grad
