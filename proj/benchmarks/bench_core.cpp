/**
 * @file bench_core.cpp
 * @brief Microbenchmarks for the checker and machine hot paths: grade
 *        arithmetic, parsing, both checkers, conversion, machine stepping,
 *        trace analysis, and program generation.
 *
 * Fixtures are built once outside the timed loops; iterations measure the
 * steady-state cost of each operation on representative inputs.
 */
#include <benchmark/benchmark.h>

#include "grad/analysis.hpp"
#include "grad/dep_check.hpp"
#include "grad/gen.hpp"
#include "grad/heap.hpp"
#include "grad/parse.hpp"
#include "grad/program.hpp"
#include "grad/semiring.hpp"
#include "grad/simple_check.hpp"

using namespace grad;

namespace {

const char* kDriver = R"(
def x : Unit = unit
def y : Unit * Unit = (x, x)
main = let (a, b) = y in let unit = a in let unit = b in x
)";

const char* kStore = R"(
def x1 : Unit = unit
def x2 : Unit * Unit = (x1, x1)
def x3 : Unit * ((Unit * Unit) * (Unit * Unit)) = (x1, (x2, x2))
main = (x2, x3)
)";

struct Fixture {
    Semiring sr = Semiring::naturals();
    Program program;
    ProgramCheck checked;
    Heap heap;

    explicit Fixture(const char* text) {
        program = parse_program(text, sr);
        checked = check_program(sr, SystemKind::Simple, program);
        heap = build_heap(sr, SystemKind::Simple, program, checked);
    }
};

const Fixture& driver() {
    static Fixture f(kDriver);
    return f;
}

const Fixture& store() {
    static Fixture f(kStore);
    return f;
}

} // namespace

static void BM_GradeArithmetic(benchmark::State& state) {
    auto lin = Semiring::linearity();
    Grade w = *lin.parse_grade("w");
    for (auto _ : state) {
        Grade acc = lin.zero();
        for (int i = 0; i < 64; ++i) {
            acc = lin.add(acc, lin.mul(lin.one(), w));
            benchmark::DoNotOptimize(lin.leq(acc, w));
        }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_GradeArithmetic);

static void BM_ClassifyFivePoint(benchmark::State& state) {
    for (auto _ : state) {
        auto sr = Semiring::five_point();
        benchmark::DoNotOptimize(sr.classify());
    }
}
BENCHMARK(BM_ClassifyFivePoint);

static void BM_ParseTerm(benchmark::State& state) {
    auto lin = Semiring::linearity();
    for (auto _ : state)
        benchmark::DoNotOptimize(parse_term(
            "\\f :1 (Pi x :0 Type. Pi y :1 x. x). \\a :0 Type. "
            "case 1 inj1 (f a) of \\g :1 (Pi y :1 a. a). g ; "
            "\\u :1 Unit. f a",
            lin));
}
BENCHMARK(BM_ParseTerm);

static void BM_CheckProgram(benchmark::State& state) {
    const auto& f = store();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            check_program(f.sr, SystemKind::Simple, f.program));
}
BENCHMARK(BM_CheckProgram);

static void BM_InferSimple(benchmark::State& state) {
    const auto& f = store();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            infer_simple(f.sr, f.checked.plain, f.program.main));
}
BENCHMARK(BM_InferSimple);

static void BM_InferDep(benchmark::State& state) {
    auto lin = Semiring::linearity();
    auto subject = parse_term("(\\x :0 Type. \\y :1 x. y) Unit", lin);
    for (auto _ : state)
        benchmark::DoNotOptimize(infer_dep(lin, PlainCtx{}, subject));
}
BENCHMARK(BM_InferDep);

static void BM_Conversion(benchmark::State& state) {
    auto lin = Semiring::linearity();
    PlainCtx plain;
    plain.entries.push_back(
        {"T", parse_term("Type", lin), parse_term("Unit * Unit", lin)});
    auto a = parse_term("Pi y :1 T. (\\x :0 Type. x) T", lin);
    auto b = parse_term("Pi z :1 (Unit * Unit). Unit * Unit", lin);
    for (auto _ : state) benchmark::DoNotOptimize(defeq(plain, a, b));
}
BENCHMARK(BM_Conversion);

static void BM_HeapStep(benchmark::State& state) {
    const auto& f = driver();
    auto support = program_support(f.program);
    for (auto _ : state) {
        auto s = support;
        FreshCtr fresh;
        benchmark::DoNotOptimize(heap_step(f.sr, SystemKind::Simple, f.heap,
                                           f.program.main, f.sr.one(), s, fresh));
    }
}
BENCHMARK(BM_HeapStep);

static void BM_MachineRun(benchmark::State& state) {
    const auto& f = driver();
    auto support = program_support(f.program);
    for (auto _ : state)
        benchmark::DoNotOptimize(multi_step(f.sr, SystemKind::Simple, f.heap,
                                            f.program.main, f.sr.one(), support,
                                            10000));
}
BENCHMARK(BM_MachineRun);

static void BM_ConservationCheck(benchmark::State& state) {
    const auto& f = driver();
    auto run = multi_step(f.sr, SystemKind::Simple, f.heap, f.program.main,
                          f.sr.one(), program_support(f.program), 10000);
    for (auto _ : state) {
        auto rep = make_report(f.sr, f.heap, f.program.main,
                               f.checked.main_usage, run);
        benchmark::DoNotOptimize(check_conservation(f.sr, rep));
    }
}
BENCHMARK(BM_ConservationCheck);

static void BM_GenerateProgram(benchmark::State& state) {
    auto lin = Semiring::linearity();
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(gen_program(lin, {seed++}));
}
BENCHMARK(BM_GenerateProgram);

BENCHMARK_MAIN();
