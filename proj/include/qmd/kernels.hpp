#pragma once

// Data-parallel building blocks for the d^2 x d^2 computations.
//
// Every kernel exists twice: `serial::` is the straightforward reference
// kept for tests and benchmarks, `omp::` is the OpenMP version used by the
// library. The unqualified entry points dispatch to `omp::` once the problem
// is large enough to amortize thread start-up.

#include <span>

#include "qmd/linalg.hpp"

namespace qmd::kernels {

/// a kron b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

namespace serial {
/// sum_j conj(a_j) kron a_j  (superoperator under column stacking).
CMatrix superop(std::span<const CMatrix> kraus);
/// sum_j vec(a_j) vec(a_j)^H.
CMatrix choi(std::span<const CMatrix> kraus);
/// Stacked blocks (g^T kron I - I kron g), one per generator: vec(xg - gx).
CMatrix commutator_system(std::span<const CMatrix> gens, Eigen::Index d);
/// sum_j a_j x a_j^*.
CMatrix apply(std::span<const CMatrix> kraus, const CMatrix& x);
/// All products a_i b_j, i-major.
std::vector<CMatrix> pairwise_products(std::span<const CMatrix> a, std::span<const CMatrix> b);
}  // namespace serial

namespace omp {
CMatrix superop(std::span<const CMatrix> kraus);
CMatrix choi(std::span<const CMatrix> kraus);
CMatrix commutator_system(std::span<const CMatrix> gens, Eigen::Index d);
CMatrix apply(std::span<const CMatrix> kraus, const CMatrix& x);
std::vector<CMatrix> pairwise_products(std::span<const CMatrix> a, std::span<const CMatrix> b);
}  // namespace omp

CMatrix superop(std::span<const CMatrix> kraus);
CMatrix choi(std::span<const CMatrix> kraus);
CMatrix commutator_system(std::span<const CMatrix> gens, Eigen::Index d);
CMatrix apply(std::span<const CMatrix> kraus, const CMatrix& x);
std::vector<CMatrix> pairwise_products(std::span<const CMatrix> a, std::span<const CMatrix> b);

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

}  // namespace qmd::kernels
