/**
 * @file program.cpp
 * @brief Telescope checking and initial-heap construction for programs.
 */
#include "grad/program.hpp"

#include <fmt/format.h>

#include "grad/error.hpp"
#include "grad/simple_check.hpp"

namespace grad {

namespace {

/// Check `body : type` over the telescope built so far; the returned
/// usage is aligned with that prefix.
GradeVec check_item(const Semiring& sr, SystemKind system, const PlainCtx& plain,
                    const TermPtr& body, const TermPtr& type, long long fuel) {
    if (system == SystemKind::Simple) return check_simple_at(sr, plain, body, type);
    check_dep_at(sr, plain, type, mk::type_sort(), fuel); // formation, usage discarded
    return check_dep_at(sr, plain, body, type, fuel);
}

} // namespace

ProgramCheck check_program(const Semiring& sr, SystemKind system, const Program& p,
                           long long fuel) {
    ProgramCheck pc;
    for (const auto& d : p.defs) {
        for (const auto& e : pc.plain.entries)
            if (e.name == d.name)
                throw TypeError(fmt::format("duplicate definition '{}'", d.name));
        try {
            pc.def_usages.push_back(
                check_item(sr, system, pc.plain, d.body, d.type, fuel));
        } catch (const TypeError& e) {
            throw TypeError(fmt::format("definition '{}': {}", d.name, e.what()));
        }
        pc.plain.entries.push_back({d.name, d.type, d.body});
    }
    if (p.main) {
        try {
            if (system == SystemKind::Simple) {
                auto r = infer_simple(sr, pc.plain, p.main);
                pc.main_type = r.type;
                pc.main_usage = std::move(r.usage);
            } else {
                auto r = infer_dep(sr, pc.plain, p.main, fuel);
                pc.main_type = r.type;
                pc.main_usage = std::move(r.usage);
            }
        } catch (const TypeError& e) {
            throw TypeError(fmt::format("main: {}", e.what()));
        }
    } else {
        pc.main_usage.assign(p.defs.size(), sr.zero());
    }
    return pc;
}

Heap build_heap(const Semiring& sr, SystemKind system, const Program& p,
                const ProgramCheck& pc) {
    std::size_t n = p.defs.size();
    // Count balance, solved newest to oldest: each allowance covers main's
    // direct demand plus what every later (already-solved) entry embeds.
    GradeVec allowed(n, sr.zero());
    for (std::size_t i = n; i-- > 0;) {
        Grade acc = pc.main_usage[i];
        for (std::size_t k = i + 1; k < n; ++k)
            acc = sr.add(acc, sr.mul(allowed[k], pc.def_usages[k][i]));
        allowed[i] = p.defs[i].allowed.value_or(acc);
    }

    Heap h;
    PlainCtx prefix;
    for (std::size_t i = 0; i < n; ++i) {
        const Def& d = p.defs[i];
        h.entries.push_back(
            {d.name, allowed[i], with_grades(prefix, pc.def_usages[i]), d.body, d.type});
        prefix.entries.push_back(
            {d.name, d.type, system == SystemKind::Dep ? d.body : nullptr});
    }
    validate_heap(h);
    return h;
}

std::set<std::string> program_support(const Program& p) {
    std::set<std::string> out;
    for (const auto& d : p.defs) {
        out.insert(d.name);
        out.merge(all_names(d.type));
        out.merge(all_names(d.body));
    }
    out.merge(all_names(p.main));
    return out;
}

} // namespace grad
