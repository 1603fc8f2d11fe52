/**
 * @file semiring.hpp
 * @brief Partially-ordered semirings of usage grades and their classification.
 *
 * A grade algebra is a set Q with two monoid structures (Q,+,0) and (Q,·,1)
 * where · distributes over + on both sides, 0 annihilates, and a partial
 * order ≤ is compatible with + and with both-sided ·.  Grades annotate how
 * many times a variable may be used; the whole system is parametric in the
 * choice of algebra.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grad/error.hpp"

namespace grad {

/// Element of the active semiring's carrier.  For finite carriers `raw` is an
/// index into the element table; for the naturals it is the number itself.
/// Grades are meaningless without the semiring that minted them.
struct Grade {
    std::uint64_t raw = 0;
    friend bool operator==(Grade a, Grade b) { return a.raw == b.raw; }
    friend bool operator!=(Grade a, Grade b) { return a.raw != b.raw; }
};

/// Semiring classification answers; each corresponds to one defining
/// constraint, decided by exhaustive enumeration on finite carriers.
struct SemiringFlags {
    bool zero_unusable = false; ///< no q with q+1 ≤ 0 (erased entries can never be read)
    bool one_linear = false;    ///< no q≠0 with q+1 ≤ 1 (grade 1 admits no second use)
    bool zerosumfree = false;   ///< q1+q2 = 0 implies q1 = q2 = 0
    bool entire = false;        ///< q1·q2 = 0 implies q1 = 0 or q2 = 0
    bool linear = false;        ///< sums/products equal to 1 only from {1,0} splits / 1·1
    bool has_lub = false;       ///< every pair of grades has a least upper bound
};

/// A usage-grade algebra: carrier, operations, order, decrement policy.
/// Instances are immutable after construction and safe to share.
class Semiring {
  public:
    // Built-in instances.
    static Semiring naturals();
    static Semiring trivial();
    static Semiring boolean_exact();   ///< {0,1}, 1+1=1, discrete order
    static Semiring boolean_ordered(); ///< {0,1}, 1+1=1, 0 ≤ 1
    static Semiring linearity();       ///< {0,1,w}: exactly-once tracking with w unrestricted
    static Semiring five_point();      ///< {0,1,Aff,Rel,w}: affine/relevant refinement

    /// Bounded-lattice instance from a textual description (see corpus files):
    /// + is join, · is meet, 0 is the designated Private (bottom) element,
    /// 1 the designated Public (top) element.  Validates lattice laws,
    /// distributivity, and the bottom/top designations.
    static Semiring lattice_from_string(const std::string& text, const std::string& name);
    static Semiring lattice_from_file(const std::string& path);

    /// Resolve a built-in by name ("nat", "trivial", "boolean", "boolean-ordered",
    /// "linearity", "five-point"); a path containing '/' or ending in ".lat"
    /// loads a lattice file.
    static Semiring by_name(const std::string& name);

    const std::string& name() const { return name_; }
    bool is_finite() const { return finite_; }
    std::size_t carrier_size() const;

    Grade zero() const { return zero_; }
    Grade one() const { return one_; }
    Grade add(Grade a, Grade b) const;
    Grade mul(Grade a, Grade b) const;
    bool leq(Grade a, Grade b) const;

    /// Policy-chosen q′ with q′ + r ≤ q, or none when no such q′ exists
    /// (resource exhaustion).  Among satisfying grades a maximal one under ≤
    /// is picked; ties between incomparable maxima break by carrier order.
    std::optional<Grade> decrement(Grade q, Grade r) const;

    /// Least upper bound of two grades if one exists.
    std::optional<Grade> lub(Grade a, Grade b) const;

    /// Classification flags; computed once by enumeration (finite carriers)
    /// or analytically (naturals).
    const SemiringFlags& classify() const { return flags_; }

    /// True iff no p ≠ q has p ≤ q.
    bool minimal(Grade q) const;

    /// True iff some q satisfies q + 1 ≤ g: a grade that still admits a read.
    bool usable(Grade g) const;

    /// Printable literal for a grade (digits, w, Aff, Rel, lattice names).
    std::string show(Grade q) const;

    /// Inverse of show; none when the literal names no carrier element.
    std::optional<Grade> parse_grade(std::string_view text) const;

    /// Finite carrier in enumeration order; ConfigError on the naturals.
    std::vector<Grade> carrier() const;

    /// Validate a raw grade against this semiring (index in range).
    bool valid(Grade q) const;

  private:
    Semiring() = default;

    static Semiring finite(std::string name, std::vector<std::string> elems,
                           std::vector<std::uint8_t> add_table,
                           std::vector<std::uint8_t> mul_table,
                           std::vector<std::uint8_t> leq_table, std::size_t zero,
                           std::size_t one);
    void enumerate_flags();

    std::string name_;
    bool finite_ = true;
    std::vector<std::string> elems_;       // finite: element names
    std::vector<std::uint8_t> add_, mul_;  // finite: n×n tables
    std::vector<std::uint8_t> leq_;        // finite: n×n relation
    Grade zero_{0}, one_{0};
    SemiringFlags flags_;
};

} // namespace grad
