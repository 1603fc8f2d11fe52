/**
 * @file term.cpp
 * @brief AST construction, free variables, substitution, alpha-equivalence.
 */
#include "grad/term.hpp"

#include <map>
#include <utility>

namespace grad {

namespace mk {

namespace {
std::shared_ptr<Term> node(Tag t) { return std::make_shared<Term>(t); }
} // namespace

TermPtr type_sort() {
    static TermPtr t = node(Tag::TypeSort);
    return t;
}
TermPtr var(std::string name) {
    auto n = node(Tag::Var);
    n->name = std::move(name);
    return n;
}
TermPtr unit_ty() {
    static TermPtr t = node(Tag::Unit);
    return t;
}
TermPtr unit_val() {
    static TermPtr t = node(Tag::UnitVal);
    return t;
}
TermPtr unit_elim(TermPtr scrutinee, TermPtr body) {
    auto n = node(Tag::UnitElim);
    n->a = std::move(scrutinee);
    n->b = std::move(body);
    return n;
}
TermPtr pi(std::string binder, Grade q, TermPtr domain, TermPtr codomain) {
    auto n = node(Tag::Pi);
    n->name = std::move(binder);
    n->grade = q;
    n->a = std::move(domain);
    n->b = std::move(codomain);
    return n;
}
TermPtr lam(std::string binder, Grade q, TermPtr annotation, TermPtr body) {
    auto n = node(Tag::Lam);
    n->name = std::move(binder);
    n->grade = q;
    n->a = std::move(annotation);
    n->b = std::move(body);
    return n;
}
TermPtr app(TermPtr fun, TermPtr arg) {
    auto n = node(Tag::App);
    n->a = std::move(fun);
    n->b = std::move(arg);
    return n;
}
TermPtr sigma(std::string binder, Grade q, TermPtr first, TermPtr second) {
    auto n = node(Tag::Sigma);
    n->name = std::move(binder);
    n->grade = q;
    n->a = std::move(first);
    n->b = std::move(second);
    return n;
}
TermPtr pair(TermPtr first, TermPtr second) {
    auto n = node(Tag::Pair);
    n->a = std::move(first);
    n->b = std::move(second);
    return n;
}
TermPtr sigma_elim(std::string b1, std::string b2, TermPtr scrutinee, TermPtr body) {
    auto n = node(Tag::SigmaElim);
    n->name = std::move(b1);
    n->name2 = std::move(b2);
    n->a = std::move(scrutinee);
    n->b = std::move(body);
    return n;
}
TermPtr sum(TermPtr left, TermPtr right) {
    auto n = node(Tag::Sum);
    n->a = std::move(left);
    n->b = std::move(right);
    return n;
}
TermPtr inj1(TermPtr payload) {
    auto n = node(Tag::Inj1);
    n->a = std::move(payload);
    return n;
}
TermPtr inj2(TermPtr payload) {
    auto n = node(Tag::Inj2);
    n->a = std::move(payload);
    return n;
}
TermPtr case_of(Grade q, TermPtr scrutinee, TermPtr branch1, TermPtr branch2) {
    auto n = node(Tag::Case);
    n->grade = q;
    n->a = std::move(scrutinee);
    n->b = std::move(branch1);
    n->c = std::move(branch2);
    return n;
}
TermPtr box(Grade q, TermPtr payload) {
    auto n = node(Tag::Box);
    n->grade = q;
    n->a = std::move(payload);
    return n;
}
TermPtr let_box(std::string binder, TermPtr scrutinee, TermPtr body) {
    auto n = node(Tag::LetBox);
    n->name = std::move(binder);
    n->a = std::move(scrutinee);
    n->b = std::move(body);
    return n;
}
TermPtr arrow(Grade q, TermPtr domain, TermPtr codomain) {
    auto n = node(Tag::Arrow);
    n->grade = q;
    n->a = std::move(domain);
    n->b = std::move(codomain);
    return n;
}
TermPtr tensor(TermPtr left, TermPtr right) {
    auto n = node(Tag::Tensor);
    n->a = std::move(left);
    n->b = std::move(right);
    return n;
}
TermPtr tensor(Grade one, TermPtr left, TermPtr right) {
    auto n = node(Tag::Tensor);
    n->grade = one;
    n->a = std::move(left);
    n->b = std::move(right);
    return n;
}

} // namespace mk

namespace {

void collect_fv(const TermPtr& t, std::set<std::string>& acc,
                std::set<std::string>& bound) {
    if (!t) return;
    switch (t->tag) {
    case Tag::Var:
        if (!bound.count(t->name)) acc.insert(t->name);
        return;
    case Tag::Pi:
    case Tag::Lam:
    case Tag::Sigma: {
        collect_fv(t->a, acc, bound);
        bool fresh = bound.insert(t->name).second;
        collect_fv(t->b, acc, bound);
        if (fresh) bound.erase(t->name);
        return;
    }
    case Tag::SigmaElim: {
        collect_fv(t->a, acc, bound);
        bool f1 = bound.insert(t->name).second;
        bool f2 = bound.insert(t->name2).second;
        collect_fv(t->b, acc, bound);
        if (f1) bound.erase(t->name);
        if (f2) bound.erase(t->name2);
        return;
    }
    case Tag::LetBox: {
        collect_fv(t->a, acc, bound);
        bool fresh = bound.insert(t->name).second;
        collect_fv(t->b, acc, bound);
        if (fresh) bound.erase(t->name);
        return;
    }
    default:
        collect_fv(t->a, acc, bound);
        collect_fv(t->b, acc, bound);
        collect_fv(t->c, acc, bound);
        return;
    }
}

/// Smallest numbered variant of `base` avoiding `taken`.
std::string avoid(const std::string& base, const std::set<std::string>& taken) {
    if (!taken.count(base)) return base;
    for (std::uint64_t k = 1;; ++k) {
        std::string cand = base + "%" + std::to_string(k);
        if (!taken.count(cand)) return cand;
    }
}

/// Substitution worker.  `x` is the variable being replaced by `a` (whose
/// free variables are `fva`).
TermPtr sub(const TermPtr& t, const TermPtr& a, const std::string& x,
            const std::set<std::string>& fva) {
    if (!t) return t;
    switch (t->tag) {
    case Tag::Var:
        return t->name == x ? a : t;
    case Tag::TypeSort:
    case Tag::Unit:
    case Tag::UnitVal:
        return t;
    default:
        break;
    }

    // Binder-aware recursion.  For each binder scope we may need to rename
    // the binder so it cannot capture free variables of `a`.
    auto rename_if_needed = [&](const std::string& binder, TermPtr scope,
                                const std::string& other_binder)
        -> std::pair<std::string, TermPtr> {
        if (binder == x) return {binder, scope}; // shadowed: stop below
        if (!fva.count(binder)) return {binder, scope};
        if (!free_vars(scope).count(x)) return {binder, scope}; // nothing to do
        std::set<std::string> taken = free_vars(scope);
        for (const auto& v : fva) taken.insert(v);
        taken.insert(x);
        if (!other_binder.empty()) taken.insert(other_binder);
        std::string fresh = avoid(binder, taken);
        return {fresh, subst(scope, mk::var(fresh), binder)};
    };

    switch (t->tag) {
    case Tag::Pi:
    case Tag::Lam:
    case Tag::Sigma: {
        auto dom = sub(t->a, a, x, fva);
        auto [binder, body] = rename_if_needed(t->name, t->b, "");
        if (binder != x) body = sub(body, a, x, fva);
        auto n = std::make_shared<Term>(t->tag);
        n->name = binder;
        n->grade = t->grade;
        n->a = dom;
        n->b = body;
        return n;
    }
    case Tag::SigmaElim: {
        auto scrut = sub(t->a, a, x, fva);
        auto [b1, body1] = rename_if_needed(t->name, t->b, t->name2);
        auto [b2, body] = rename_if_needed(t->name2, body1, b1);
        if (b1 != x && b2 != x) body = sub(body, a, x, fva);
        auto n = std::make_shared<Term>(Tag::SigmaElim);
        n->name = b1;
        n->name2 = b2;
        n->a = scrut;
        n->b = body;
        return n;
    }
    case Tag::LetBox: {
        auto scrut = sub(t->a, a, x, fva);
        auto [binder, body] = rename_if_needed(t->name, t->b, "");
        if (binder != x) body = sub(body, a, x, fva);
        auto n = std::make_shared<Term>(Tag::LetBox);
        n->name = binder;
        n->a = scrut;
        n->b = body;
        return n;
    }
    default: {
        auto n = std::make_shared<Term>(t->tag);
        n->name = t->name;
        n->name2 = t->name2;
        n->grade = t->grade;
        n->a = sub(t->a, a, x, fva);
        n->b = sub(t->b, a, x, fva);
        n->c = sub(t->c, a, x, fva);
        return n;
    }
    }
}

/// Alpha-equivalence worker: binder maps carry a canonical index per side.
bool aeq(const TermPtr& t1, const TermPtr& t2, std::map<std::string, int>& m1,
         std::map<std::string, int>& m2, int& depth) {
    if (!t1 || !t2) return t1 == t2;
    if (t1->tag != t2->tag) return false;
    switch (t1->tag) {
    case Tag::TypeSort:
    case Tag::Unit:
    case Tag::UnitVal:
        return true;
    case Tag::Var: {
        auto i1 = m1.find(t1->name);
        auto i2 = m2.find(t2->name);
        if ((i1 == m1.end()) != (i2 == m2.end())) return false;
        if (i1 == m1.end()) return t1->name == t2->name; // both free
        return i1->second == i2->second;
    }
    default:
        break;
    }

    auto with_binder = [&](const std::string& n1, const std::string& n2, auto body) {
        auto o1 = m1.find(n1) == m1.end() ? std::optional<int>{}
                                          : std::optional<int>{m1[n1]};
        auto o2 = m2.find(n2) == m2.end() ? std::optional<int>{}
                                          : std::optional<int>{m2[n2]};
        int d = depth++;
        m1[n1] = d;
        m2[n2] = d;
        bool ok = body();
        if (o1)
            m1[n1] = *o1;
        else
            m1.erase(n1);
        if (o2)
            m2[n2] = *o2;
        else
            m2.erase(n2);
        return ok;
    };

    switch (t1->tag) {
    case Tag::Pi:
    case Tag::Lam:
    case Tag::Sigma:
        if (t1->grade != t2->grade) return false;
        if (!aeq(t1->a, t2->a, m1, m2, depth)) return false;
        return with_binder(t1->name, t2->name,
                           [&] { return aeq(t1->b, t2->b, m1, m2, depth); });
    case Tag::SigmaElim:
        if (!aeq(t1->a, t2->a, m1, m2, depth)) return false;
        return with_binder(t1->name, t2->name, [&] {
            return with_binder(t1->name2, t2->name2,
                               [&] { return aeq(t1->b, t2->b, m1, m2, depth); });
        });
    case Tag::LetBox:
        if (!aeq(t1->a, t2->a, m1, m2, depth)) return false;
        return with_binder(t1->name, t2->name,
                           [&] { return aeq(t1->b, t2->b, m1, m2, depth); });
    case Tag::Case:
    case Tag::Box:
    case Tag::Arrow:
        if (t1->grade != t2->grade) return false;
        [[fallthrough]];
    default:
        return aeq(t1->a, t2->a, m1, m2, depth) && aeq(t1->b, t2->b, m1, m2, depth) &&
               aeq(t1->c, t2->c, m1, m2, depth);
    }
}

} // namespace

std::set<std::string> free_vars(const TermPtr& t) {
    std::set<std::string> acc, bound;
    collect_fv(t, acc, bound);
    return acc;
}

namespace {
void collect_names(const TermPtr& t, std::set<std::string>& out) {
    if (!t) return;
    if (!t->name.empty()) out.insert(t->name);
    if (!t->name2.empty()) out.insert(t->name2);
    collect_names(t->a, out);
    collect_names(t->b, out);
    collect_names(t->c, out);
}
} // namespace

std::set<std::string> all_names(const TermPtr& t) {
    std::set<std::string> out;
    collect_names(t, out);
    return out;
}

TermPtr subst(const TermPtr& b, const TermPtr& a, const std::string& x) {
    return sub(b, a, x, free_vars(a));
}

bool alpha_eq(const TermPtr& t1, const TermPtr& t2) {
    std::map<std::string, int> m1, m2;
    int depth = 0;
    return aeq(t1, t2, m1, m2, depth);
}

bool is_value(const TermPtr& t) {
    switch (t->tag) {
    case Tag::TypeSort:
    case Tag::Unit:
    case Tag::UnitVal:
    case Tag::Pi:
    case Tag::Lam:
    case Tag::Sigma:
    case Tag::Pair:
    case Tag::Sum:
    case Tag::Inj1:
    case Tag::Inj2:
    case Tag::Box:
    case Tag::Arrow:
    case Tag::Tensor:
        return true;
    default:
        return false;
    }
}

std::string FreshCtr::fresh(std::string base, const std::set<std::string>& support) {
    if (auto cut = base.find('%'); cut != std::string::npos && cut > 0)
        base.erase(cut);
    if (!support.count(base)) return base;
    for (;; ++next) {
        std::string cand = base + "%" + std::to_string(next);
        if (!support.count(cand)) {
            ++next;
            return cand;
        }
    }
}

} // namespace grad
