/**
 * @file context.cpp
 * @brief Context algebra implementation.
 */
#include "grad/context.hpp"

#include <fmt/format.h>

#include "grad/error.hpp"

namespace grad {

std::optional<std::size_t> lookup(const PlainCtx& d, const std::string& name) {
    for (std::size_t i = 0; i < d.entries.size(); ++i)
        if (d.entries[i].name == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> lookup(const UsageCtx& g, const std::string& name) {
    for (std::size_t i = 0; i < g.entries.size(); ++i)
        if (g.entries[i].name == name) return i;
    return std::nullopt;
}

PlainCtx erase(const UsageCtx& g) {
    PlainCtx d;
    d.entries.reserve(g.entries.size());
    for (const auto& e : g.entries) d.entries.push_back({e.name, e.type, e.def});
    return d;
}

UsageCtx with_grades(const PlainCtx& d, const GradeVec& grades) {
    if (d.entries.size() != grades.size())
        throw std::invalid_argument("with_grades: length mismatch");
    UsageCtx g;
    g.entries.reserve(d.entries.size());
    for (std::size_t i = 0; i < d.entries.size(); ++i)
        g.entries.push_back(
            {d.entries[i].name, grades[i], d.entries[i].type, d.entries[i].def});
    return g;
}

bool same_erasure(const PlainCtx& a, const PlainCtx& b) {
    if (a.entries.size() != b.entries.size()) return false;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const auto& ea = a.entries[i];
        const auto& eb = b.entries[i];
        if (ea.name != eb.name) return false;
        if (!alpha_eq(ea.type, eb.type)) return false;
        if ((ea.def == nullptr) != (eb.def == nullptr)) return false;
        if (ea.def && !alpha_eq(ea.def, eb.def)) return false;
    }
    return true;
}

UsageCtx ctx_scale(const Semiring& sr, Grade q, const UsageCtx& g) {
    UsageCtx out = g;
    for (auto& e : out.entries) e.grade = sr.mul(q, e.grade);
    return out;
}

UsageCtx ctx_add(const Semiring& sr, const UsageCtx& g1, const UsageCtx& g2) {
    if (!same_erasure(erase(g1), erase(g2)))
        throw TypeError("context addition requires identical erasures");
    UsageCtx out = g1;
    for (std::size_t i = 0; i < out.entries.size(); ++i)
        out.entries[i].grade = sr.add(g1.entries[i].grade, g2.entries[i].grade);
    return out;
}

bool subusage(const Semiring& sr, const UsageCtx& g1, const UsageCtx& g2) {
    if (!same_erasure(erase(g1), erase(g2))) return false;
    for (std::size_t i = 0; i < g1.entries.size(); ++i)
        if (!sr.leq(g1.entries[i].grade, g2.entries[i].grade)) return false;
    return true;
}

GradeVec grades_of(const UsageCtx& g) {
    GradeVec v;
    v.reserve(g.entries.size());
    for (const auto& e : g.entries) v.push_back(e.grade);
    return v;
}

TermPtr flatten_defs(const TermPtr& a, const PlainCtx& d) {
    TermPtr out = a;
    for (auto it = d.entries.rbegin(); it != d.entries.rend(); ++it)
        if (it->def) out = subst(out, it->def, it->name);
    return out;
}

} // namespace grad
