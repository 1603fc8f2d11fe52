/**
 * @file parse.hpp
 * @brief Concrete syntax: parser and printer for the term language.
 *
 * Grade literals are semiring-specific, so both directions take the active
 * semiring.  The printer emits canonical text (explicit arrow grades, minimal
 * parentheses) and round-trips through the parser up to alpha-equivalence.
 */
#pragma once

#include <string>

#include "grad/term.hpp"

namespace grad {

/// Parse a single term.  Throws ParseError with line/column on bad input.
TermPtr parse_term(const std::string& text, const Semiring& sr);

std::string print_term(const TermPtr& t, const Semiring& sr);

} // namespace grad
