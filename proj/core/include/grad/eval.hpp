/**
 * @file eval.hpp
 * @brief Call-by-name small-step evaluator shared by both systems.
 */
#pragma once

#include <optional>

#include "grad/term.hpp"

namespace grad {

/// The unique call-by-name reduct, or nothing for values and stuck terms
/// (use is_value to tell the two apart).
std::optional<TermPtr> step(const TermPtr& a);

struct EvalResult {
    TermPtr term;     // value, or the stuck term reached
    long long steps;  // reductions performed
};

/// Iterate step to a fixpoint.  Throws FuelExhausted when the budget runs
/// out before one is reached.
EvalResult eval(const TermPtr& a, long long fuel);

} // namespace grad
