/**
 * @file gen.hpp
 * @brief Seeded generation of well-typed programs for property sweeps.
 */
#pragma once

#include <cstdint>

#include "grad/program.hpp"

namespace grad {

struct GenConfig {
    std::uint64_t seed = 0;
    std::size_t max_defs = 4; ///< a program gets 1..max_defs definitions
    int depth = 3;            ///< recursion budget for generated bodies
};

/// Produce a program that checks in the simple system over `sr`; the same
/// seed always yields the same program.  Candidate bodies are drawn from a
/// grammar biased toward variable reuse, filtered through the checker
/// (rejection sampling), and fall back to a canonical inhabitant, so the
/// result is well typed by construction rather than by luck.
Program gen_program(const Semiring& sr, const GenConfig& cfg);

} // namespace grad
