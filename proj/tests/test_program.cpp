/**
 * @file test_program.cpp
 * @brief Program files: parsing, telescope checking, and initial heaps.
 *
 * The worked three-assignment example is the anchor: its demand (0,1,1)
 * must back-solve to the allowances (7,3,1) over the naturals, and the
 * resulting heap must be compatible by construction.
 */
#include <string>

#include "doctest.h"
#include "grad/context.hpp"
#include "grad/dep_check.hpp"
#include "grad/error.hpp"
#include "grad/eval.hpp"
#include "grad/heap.hpp"
#include "grad/linalg.hpp"
#include "grad/parse.hpp"
#include "grad/program.hpp"

using namespace grad;

namespace {

const Semiring& nat() {
    static Semiring sr = Semiring::naturals();
    return sr;
}

const Semiring& lin() {
    static Semiring sr = Semiring::linearity();
    return sr;
}

TermPtr T(const std::string& s) { return parse_term(s, nat()); }

const char* kThreeAssignments = R"(
-- three assignments feeding a pair of views
def x1 : Unit = unit
def x2 : Unit * Unit = (x1, x1)
def x3 : Unit * ((Unit * Unit) * (Unit * Unit)) = (x1, (x2, x2))
main = (x2, x3)
)";

const char* kTrace = R"(
def x : Unit = unit
def y : Unit * Unit = (x, x)
main = let (a, b) = y in let unit = a in let unit = b in x
)";

const char* kUnderProvisioned = R"(
def x :2 Unit = unit
main = let (a, b) = (x, x) in let unit = a in let unit = b in x
)";

/// Demand of `main` attached to the heap's own typing view.
UsageCtx demand_ctx(const Heap& h, SystemKind sys, const ProgramCheck& pc) {
    return with_grades(heap_plain(h, sys), pc.main_usage);
}

} // namespace

TEST_SUITE_BEGIN("programs");

TEST_CASE("programs parse into definitions and a main term") {
    auto p = parse_program(kThreeAssignments, nat());
    REQUIRE(p.defs.size() == 3);
    CHECK(p.defs[0].name == "x1");
    CHECK(p.defs[1].name == "x2");
    CHECK(p.defs[2].name == "x3");
    for (const auto& d : p.defs) CHECK_FALSE(d.allowed.has_value());
    CHECK(alpha_eq(p.defs[1].type, T("Unit * Unit")));
    CHECK(alpha_eq(p.defs[1].body, T("(x1, x1)")));
    CHECK(alpha_eq(p.defs[2].body, T("(x1, (x2, x2))")));
    REQUIRE(p.main != nullptr);
    CHECK(alpha_eq(p.main, T("(x2, x3)")));

    auto q = parse_program("def x : Unit = unit", nat());
    CHECK(q.defs.size() == 1);
    CHECK(q.main == nullptr);
}

TEST_CASE("an allowed-usage annotation is read only when a type follows") {
    auto p = parse_program("def x :2 Unit = unit", nat());
    REQUIRE(p.defs[0].allowed.has_value());
    CHECK(*p.defs[0].allowed == Grade{2});

    // No annotation: the token after ':' is already the type.
    auto q = parse_program("def x : Unit = unit", nat());
    CHECK_FALSE(q.defs[0].allowed.has_value());

    // A type that merely *starts* with something grade-shaped is not split:
    // 'Unit' is no grade literal, and after '-1>' cannot follow a type.
    auto r = parse_program("def f : Unit -1> Unit = \\z :1 Unit. z", nat());
    CHECK_FALSE(r.defs[0].allowed.has_value());
    CHECK(alpha_eq(r.defs[0].type, T("Unit -1> Unit")));

    auto s = parse_program("def x :w Unit = unit", lin());
    REQUIRE(s.defs[0].allowed.has_value());
    CHECK(*s.defs[0].allowed == *lin().parse_grade("w"));
}

TEST_CASE("program parse errors carry positions") {
    CHECK_THROWS_AS(parse_program("def x : Unit unit", nat()), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_program("def x : Unit = unit\ndef x : Unit = unit", nat()),
        doctest::Contains("duplicate definition 'x'"), ParseError);
    CHECK_THROWS_WITH_AS(parse_program("main = unit\nmain = unit", nat()),
                         doctest::Contains("duplicate 'main'"), ParseError);
    CHECK_THROWS_WITH_AS(parse_program("foo = unit", nat()),
                         doctest::Contains("expected 'def' or 'main'"), ParseError);
    try {
        parse_program("def x : Unit = unit\ndef y : = unit", nat());
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("definitions check in telescope order") {
    auto p = parse_program(kThreeAssignments, nat());
    auto pc = check_program(nat(), SystemKind::Simple, p);
    REQUIRE(pc.def_usages.size() == 3);
    CHECK(pc.def_usages[0] == GradeVec{});
    CHECK(pc.def_usages[1] == GradeVec{Grade{2}});
    CHECK(pc.def_usages[2] == GradeVec{Grade{1}, Grade{2}});
    CHECK(pc.main_usage == GradeVec{Grade{0}, Grade{1}, Grade{1}});
    REQUIRE(pc.main_type != nullptr);
    CHECK(alpha_eq(pc.main_type,
                   T("(Unit * Unit) * (Unit * ((Unit * Unit) * (Unit * Unit)))")));
    REQUIRE(pc.plain.size() == 3);
    CHECK(alpha_eq(pc.plain.entries[1].def, T("(x1, x1)")));

    // The same program is also fine in the dependent system.
    auto pd = check_program(nat(), SystemKind::Dep, p);
    CHECK(pd.main_usage == pc.main_usage);

    // Out-of-type body fails at the offending definition.
    auto bad = parse_program("def x : Unit = unit\ndef y : Unit = (x, x)", nat());
    CHECK_THROWS_WITH_AS(check_program(nat(), SystemKind::Simple, bad),
                         doctest::Contains("definition 'y'"), TypeError);
}

TEST_CASE("initial heap allowances come from demand by count balance") {
    auto p = parse_program(kThreeAssignments, nat());
    auto pc = check_program(nat(), SystemKind::Simple, p);
    auto h = build_heap(nat(), SystemKind::Simple, p, pc);
    REQUIRE(h.size() == 3);
    CHECK(heap_allowed(h) == GradeVec{Grade{7}, Grade{3}, Grade{1}});
    CHECK(grades_of(h.entries[2].embedded) == GradeVec{Grade{1}, Grade{2}});

    auto m = transformation_matrix(nat(), h);
    CHECK(m.cells == GradeVec{Grade{0}, Grade{0}, Grade{0}, Grade{2}, Grade{0},
                              Grade{0}, Grade{1}, Grade{2}, Grade{0}});

    // Compatible by construction: the demand context peels cleanly.
    auto verdict = compat(nat(), SystemKind::Simple, h,
                          heap_plain(h, SystemKind::Simple),
                          demand_ctx(h, SystemKind::Simple, pc));
    CHECK(verdict.ok);
    CHECK_NOTHROW(validate_heap(h));
}

TEST_CASE("explicit annotations override the computed allowance") {
    auto p = parse_program(kUnderProvisioned, nat());
    auto pc = check_program(nat(), SystemKind::Simple, p);
    // Demand alone would ask for 3; the annotation pins 2.
    CHECK(pc.main_usage == GradeVec{Grade{3}});
    auto h = build_heap(nat(), SystemKind::Simple, p, pc);
    CHECK(heap_allowed(h) == GradeVec{Grade{2}});
    CHECK_FALSE(compat(nat(), SystemKind::Simple, h,
                       heap_plain(h, SystemKind::Simple),
                       demand_ctx(h, SystemKind::Simple, pc))
                    .ok);

    auto run = multi_step(nat(), SystemKind::Simple, h, p.main, Grade{1},
                          program_support(p), 100);
    REQUIRE(run.end == RunTrace::End::Stuck);
    CHECK(run.stuck.reason == "resource-exhausted");
    CHECK(run.stuck.var == "x");
}

TEST_CASE("a well-provisioned trace runs to a value and balances") {
    auto p = parse_program(kTrace, nat());
    auto pc = check_program(nat(), SystemKind::Simple, p);
    CHECK(pc.main_usage == GradeVec{Grade{1}, Grade{1}});
    auto h = build_heap(nat(), SystemKind::Simple, p, pc);
    CHECK(heap_allowed(h) == GradeVec{Grade{3}, Grade{1}});

    auto run = multi_step(nat(), SystemKind::Simple, h, p.main, Grade{1},
                          program_support(p), 100);
    REQUIRE(run.end == RunTrace::End::Value);
    CHECK(alpha_eq(run.final_term, T("unit")));

    // Count conservation over the naturals is an equality:
    // final allowances + consumption == initial allowances ++ allocations.
    GradeVec lhs = vec_add(nat(), heap_allowed(run.final_heap), run.consumed);
    GradeVec rhs = heap_allowed(h);
    for (const auto& e : run.added.entries) rhs.push_back(e.grade);
    CHECK(lhs == rhs);
}

TEST_CASE("dependent programs check and run") {
    const char* text =
        "def id : Pi x :0 Type. Pi y :1 x. x = \\x :0 Type. \\y :1 x. y\n"
        "main = id Unit";
    auto p = parse_program(text, lin());
    auto pc = check_program(lin(), SystemKind::Dep, p);
    REQUIRE(pc.main_type != nullptr);
    CHECK(alpha_eq(pc.main_type, parse_term("Pi y :1 Unit. Unit", lin())));
    CHECK(pc.main_usage == GradeVec{lin().one()});

    const char* applied =
        "def id : Pi x :0 Type. Pi y :1 x. x = \\x :0 Type. \\y :1 x. y\n"
        "main = id Unit unit";
    auto p2 = parse_program(applied, lin());
    auto pc2 = check_program(lin(), SystemKind::Dep, p2);
    CHECK(alpha_eq(pc2.main_type, parse_term("Unit", lin())));
    auto h2 = build_heap(lin(), SystemKind::Dep, p2, pc2);
    auto run = multi_step(lin(), SystemKind::Dep, h2, p2.main, lin().one(),
                          program_support(p2), 100);
    REQUIRE(run.end == RunTrace::End::Value);
    CHECK(alpha_eq(flatten_heap(run.final_term, run.final_heap), T("unit")));

    // An ill-typed body reports which definition failed.
    const char* bad = "def id : Pi x :0 Type. Pi y :1 x. x = \\x :0 Type. \\y :0 x. y";
    CHECK_THROWS_WITH_AS(check_program(lin(), SystemKind::Dep, parse_program(bad, lin())),
                         doctest::Contains("definition 'id'"), TypeError);
}

TEST_CASE("heap evaluation agrees with substituting the definitions away") {
    auto p = parse_program(kTrace, nat());
    auto pc = check_program(nat(), SystemKind::Simple, p);
    auto flat = flatten_defs(p.main, pc.plain);
    auto direct = eval(flat, 1000);
    auto h = build_heap(nat(), SystemKind::Simple, p, pc);
    auto run = multi_step(nat(), SystemKind::Simple, h, p.main, Grade{1},
                          program_support(p), 1000);
    REQUIRE(run.end == RunTrace::End::Value);
    CHECK(alpha_eq(flatten_heap(run.final_term, run.final_heap), direct.term));
}

TEST_CASE("program support covers definitions and all free names") {
    auto p = parse_program(kTrace, nat());
    auto s = program_support(p);
    CHECK(s.count("x") == 1);
    CHECK(s.count("y") == 1);
    // A name only mentioned inside main still lands in the support:
    // nothing allocated later may shadow it.
    auto q = parse_program("main = \\z :1 Unit. z", nat());
    CHECK(program_support(q).count("z") == 1);
}

TEST_SUITE_END();
