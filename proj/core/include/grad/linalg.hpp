/**
 * @file linalg.hpp
 * @brief Grade vectors and square grade matrices (the semimodule layer).
 *
 * Vectors record per-entry usage (consumption vectors, heap allowances,
 * context demands); square matrices record the embedded-context grades of a
 * heap.  All arithmetic is taken in the active semiring, so the usual
 * identities (identity matrix, zero vector, associativity) hold by the
 * semiring axioms rather than by numeric coincidence.
 */
#pragma once

#include <cstddef>
#include <vector>

#include "grad/semiring.hpp"

namespace grad {

using GradeVec = std::vector<Grade>;

/// Square matrix of grades in row-major order.
struct GradeMat {
    std::size_t n = 0;
    std::vector<Grade> cells; // n*n, row-major

    explicit GradeMat(std::size_t dim = 0) : n(dim), cells(dim * dim) {}

    Grade& at(std::size_t i, std::size_t j) { return cells[i * n + j]; }
    Grade at(std::size_t i, std::size_t j) const { return cells[i * n + j]; }
};

/// Vector of zeros of the given length.
GradeVec zero_vec(const Semiring& sr, std::size_t n);

/// Identity matrix (ones on the diagonal, zeros elsewhere).
GradeMat identity_mat(const Semiring& sr, std::size_t n);

/// v0 + q·v1, pointwise.  Lengths must agree.
GradeVec vec_affine(const Semiring& sr, const GradeVec& v0, Grade q, const GradeVec& v1);

/// Pointwise sum (vec_affine at q = 1).
GradeVec vec_add(const Semiring& sr, const GradeVec& a, const GradeVec& b);

/// Pointwise scaling (vec_affine with a zero base).
GradeVec vec_scale(const Semiring& sr, Grade q, const GradeVec& v);

/// Row-vector × matrix.  |v| must equal the matrix dimension.
GradeVec vec_mat_mul(const Semiring& sr, const GradeVec& v, const GradeMat& m);

/// Matrix product (for the associativity property and composed transforms).
GradeMat mat_mul(const Semiring& sr, const GradeMat& a, const GradeMat& b);

/// Pointwise order on equal-length vectors.
bool vec_leq(const Semiring& sr, const GradeVec& a, const GradeVec& b);

bool vec_eq(const GradeVec& a, const GradeVec& b);

/// True when every entry on or above the diagonal is zero.
bool strictly_lower_triangular(const Semiring& sr, const GradeMat& m);

} // namespace grad
