/**
 * @file linalg.cpp
 * @brief Grade vector/matrix arithmetic over an arbitrary semiring.
 */
#include "grad/linalg.hpp"

#include <stdexcept>

namespace grad {

GradeVec zero_vec(const Semiring& sr, std::size_t n) {
    return GradeVec(n, sr.zero());
}

GradeMat identity_mat(const Semiring& sr, std::size_t n) {
    GradeMat m(n);
    for (auto& c : m.cells) c = sr.zero();
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = sr.one();
    return m;
}

GradeVec vec_affine(const Semiring& sr, const GradeVec& v0, Grade q, const GradeVec& v1) {
    if (v0.size() != v1.size())
        throw std::invalid_argument("vec_affine: length mismatch");
    GradeVec out(v0.size());
    for (std::size_t i = 0; i < v0.size(); ++i) out[i] = sr.add(v0[i], sr.mul(q, v1[i]));
    return out;
}

GradeVec vec_add(const Semiring& sr, const GradeVec& a, const GradeVec& b) {
    return vec_affine(sr, a, sr.one(), b);
}

GradeVec vec_scale(const Semiring& sr, Grade q, const GradeVec& v) {
    return vec_affine(sr, zero_vec(sr, v.size()), q, v);
}

GradeVec vec_mat_mul(const Semiring& sr, const GradeVec& v, const GradeMat& m) {
    if (v.size() != m.n) throw std::invalid_argument("vec_mat_mul: dimension mismatch");
    GradeVec out(m.n, sr.zero());
    for (std::size_t j = 0; j < m.n; ++j)
        for (std::size_t i = 0; i < m.n; ++i)
            out[j] = sr.add(out[j], sr.mul(v[i], m.at(i, j)));
    return out;
}

GradeMat mat_mul(const Semiring& sr, const GradeMat& a, const GradeMat& b) {
    if (a.n != b.n) throw std::invalid_argument("mat_mul: dimension mismatch");
    GradeMat out(a.n);
    for (auto& c : out.cells) c = sr.zero();
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t k = 0; k < a.n; ++k)
            for (std::size_t j = 0; j < a.n; ++j)
                out.at(i, j) = sr.add(out.at(i, j), sr.mul(a.at(i, k), b.at(k, j)));
    return out;
}

bool vec_leq(const Semiring& sr, const GradeVec& a, const GradeVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_leq: length mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!sr.leq(a[i], b[i])) return false;
    return true;
}

bool vec_eq(const GradeVec& a, const GradeVec& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

bool strictly_lower_triangular(const Semiring& sr, const GradeMat& m) {
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = i; j < m.n; ++j)
            if (m.at(i, j) != sr.zero()) return false;
    return true;
}

} // namespace grad
