#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmd/channel.hpp"
#include "qmd/linalg.hpp"
#include "qmd/subspace.hpp"

namespace qmd {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed'c0de'2024ULL;

struct WedderburnBlock {
    Eigen::Index n = 0;  // factor size: the block is M_n kron I_m
    Eigen::Index m = 0;  // multiplicity
};

/// Wedderburn data of a finite-dimensional *-subalgebra A of M_d:
///     U^* A U = (+)_k M_{n_k} kron I_{m_k}  (+)  0
/// where U = basis_change and the trailing zero block is absent for unital A.
struct StarAlgebraStructure {
    std::vector<WedderburnBlock> blocks;
    std::vector<CMatrix> central_projections;              // one per block
    std::vector<std::vector<CMatrix>> minimal_projections;  // per block, n_k projections of rank m_k
    CMatrix basis_change;
    bool unital = false;
    double reconstruction_residual = 0.0;  // span(rebuilt block algebra) vs A
    int attempts = 0;                      // random draws used, incl. retries

    Eigen::Index algebra_dimension() const;  // sum n_k^2
    Eigen::Index unit_rank() const;          // sum n_k m_k
};

/// Tolerance used for product / adjoint closure checks on computed algebras,
/// and for every comparison between two computed subspaces.
double closure_tolerance(const Tolerance& tol);

/// `tol` with rank_eps raised to closure_tolerance (capped at 0.1): the cutoff for
/// null spaces of systems assembled from already computed subspaces, whose
/// bases carry errors of order eps / gap rather than eps.
Tolerance computed_subspace_tolerance(const Tolerance& tol);

/// {x : xg = gx for every g in gens and gens^*}. An empty list gives M_d.
OperatorSubspace commutant(std::span<const CMatrix> gens, Eigen::Index d, const Tolerance& tol = {});

/// Smallest *-closed, multiplicatively closed subspace containing gens
/// (and the identity when `unital`).
OperatorSubspace generated_algebra(std::span<const CMatrix> gens, Eigen::Index d, bool unital,
                                   const Tolerance& tol = {});

/// unvec of ker(S - I). Adds a warning when the result is not closed under
/// products and adjoints (expected only for non-unital or non-TP inputs).
OperatorSubspace fixed_point_algebra(const Superoperator& s, const Tolerance& tol = {});

/// Principal directions with sine below closure_tolerance count as shared.
OperatorSubspace intersect(const OperatorSubspace& a, const OperatorSubspace& b, const Tolerance& tol = {});

/// max over basis elements of a of |(1 - P_b) x|.
double containment_residual(const OperatorSubspace& inner, const OperatorSubspace& outer);
/// Max of both containment residuals.
double subspace_residual(const OperatorSubspace& a, const OperatorSubspace& b);
/// Equal dimension and subspace_residual <= closure_tolerance.
bool subspace_equal(const OperatorSubspace& a, const OperatorSubspace& b, const Tolerance& tol = {});
/// containment_residual <= closure_tolerance.
bool contains(const OperatorSubspace& outer, const OperatorSubspace& inner, const Tolerance& tol = {});

/// Largest residual of basis products and adjoints against the subspace.
double closure_residual(const OperatorSubspace& a);
bool is_star_algebra(const OperatorSubspace& a, const Tolerance& tol = {});

/// Wedderburn decomposition from random central / algebra elements.
/// Throws NotAnAlgebraError if `a` is not closed, NumericError after
/// `max_retries` degenerate random draws.
StarAlgebraStructure wedderburn(const OperatorSubspace& a, const Tolerance& tol = {},
                                std::uint64_t seed = kDefaultSeed, int max_retries = 8);

}  // namespace qmd
