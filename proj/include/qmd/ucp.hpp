#pragma once

#include "qmd/channel.hpp"
#include "qmd/subspace.hpp"

namespace qmd {

/// Phi(x) = V^* (I_n kron x) V with V stacked from the blocks a_i^*.
struct StinespringData {
    Eigen::Index dim = 0;
    Eigen::Index env = 0;         // number of Kraus operators n
    CMatrix v;                    // (n d) x d
    CMatrix min_basis;            // orthonormal basis of K_min inside C^n kron C^d
    CMatrix p_min;                // projection onto range(V) in K_min coordinates
    double reconstruction_residual = 0.0;
    double isometry_residual = 0.0;  // |V^*V - I| = |Phi(I) - I|

    /// I kron x compressed to K_min.
    CMatrix pi_min(const CMatrix& x) const;
};

/// Throws PreconditionError for non-unital maps and ResourceError when
/// (n d)^2 (d^2 + 1) exceeds 2^24 (n Kraus operators).
StinespringData stinespring(const KrausChannel& ch, const Tolerance& tol = {});

/// {a : [P_min, pi_min(a)] = 0}, checked against Phi(ab) = Phi(a)Phi(b),
/// Phi(ba) = Phi(b)Phi(a) on matrix units (ConsistencyError on failure).
OperatorSubspace mult_domain_ucp(const KrausChannel& ch, const Tolerance& tol = {});

/// (1 - 1/n) Phi + (1/n) tr(.) I / d; Kraus {sqrt(1-1/n) k_i} u {sqrt(1/(n d)) e_i e_j^*}.
KrausChannel density_perturbation(const KrausChannel& phi, unsigned n, const Tolerance& tol = {});

/// Analytic cb-norm bound |Phi - density_perturbation(Phi, n)|_cb <= 2/n.
double density_cb_bound(unsigned n);

struct AveragingReport {
    OperatorSubspace left;   // M_E for E = (Phi + Psi)/2
    OperatorSubspace right;  // M_Phi n M_Psi n {x : E(x) = Phi(x) = Psi(x)}
    double residual = 0.0;
    bool equal = false;
};

AveragingReport averaging_intersection_check(const KrausChannel& phi, const KrausChannel& psi,
                                             const Tolerance& tol = {});

/// Unital, not trace preserving map on M_3 with
/// Phi(x) = diag(x_11, x_22, (x_11 + x_22)/2).
KrausChannel counterexample_phi(const Tolerance& tol = {});

}  // namespace qmd
