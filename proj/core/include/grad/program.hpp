/**
 * @file program.hpp
 * @brief Program files: a telescope of named definitions plus a main term.
 *
 * A program is the textual face of an initial machine configuration.  Each
 * definition becomes one heap assignment; `main` becomes the driven term.
 * Allowed usages are normally *derived* from main's demand by count
 * balance (H̄ = H̄·⟨H⟩ + Γ̄, solved newest to oldest), which makes the
 * built heap compatible by construction.  An explicit `def x :q T = ...`
 * annotation overrides the derived allowance for that assignment — it
 * provisions the heap and takes no part in typing, so deliberately
 * under-provisioned programs still check and then exhaust at run time.
 */
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "grad/dep_check.hpp"
#include "grad/heap.hpp"

namespace grad {

struct Def {
    std::string name;
    std::optional<Grade> allowed; ///< explicit heap allowance, if annotated
    TermPtr type;
    TermPtr body;
};

struct Program {
    std::vector<Def> defs;
    TermPtr main; ///< null when the file declares no main term
};

/// Parse a program file: `--` line comments, `def name : TERM = TERM`
/// items (optionally `def name :q TERM = TERM`), and at most one
/// `main = TERM`.  Duplicate definition names are rejected here.
Program parse_program(const std::string& text, const Semiring& sr);

/// Everything checking a program yields, shaped for building heaps.
struct ProgramCheck {
    PlainCtx plain;                   ///< definitions as a telescope, bodies attached
    std::vector<GradeVec> def_usages; ///< body usage over its prefix, per definition
    TermPtr main_type;                ///< null when the program has no main
    GradeVec main_usage;              ///< main's demand on the telescope (zeros if absent)
};

/// Check every definition body against its declared type in telescope
/// order, then synthesize main.  Throws TypeError naming the offending
/// definition on failure.
ProgramCheck check_program(const Semiring& sr, SystemKind system, const Program& p,
                           long long fuel = kDefaultFuel);

/// Assemble the initial heap: stored terms are the definition bodies,
/// embedded usages come from the check, allowances from count balance
/// (annotations override).  The result is proper and acyclic.
Heap build_heap(const Semiring& sr, SystemKind system, const Program& p,
                const ProgramCheck& pc);

/// Every name occurring anywhere in the program — definition names, free
/// variables, and binders alike.  Freshness at run time is judged against
/// this set, so machine-allocated names can never collide with source ones.
std::set<std::string> program_support(const Program& p);

} // namespace grad
