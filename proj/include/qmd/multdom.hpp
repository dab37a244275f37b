#pragma once

#include <string>
#include <vector>

#include "qmd/channel.hpp"
#include "qmd/staralg.hpp"
#include "qmd/subspace.hpp"

namespace qmd {

/// Multiplicative domains of E^n for a unital TP channel E.
struct MultChainResult {
    std::vector<OperatorSubspace> chain;  // M_{E^1}, ..., M_{E^{kappa+1}}
    unsigned kappa = 0;                   // first n with M_{E^n} = M_{E^{n+1}}
    OperatorSubspace stabilized;          // M_{E^inf} = M_{E^kappa}
    std::vector<Eigen::Index> dims;       // dim M_{E^n}, n = 1..kappa
    double recursion_residual = 0.0;      // direct kernel vs {a in M_{n-1} : E(a) in M_{n-1}}
    std::vector<std::string> warnings;
};

/// ker(S^H S - I), cross-checked against commutant({a_i^* a_j}).
/// Throws PreconditionError for non-unital or non-TP input and
/// ConsistencyError when the two computations disagree.
OperatorSubspace mult_domain(const KrausChannel& ch, const Tolerance& tol = {});

/// max_n = 0 means d^2.
MultChainResult mult_chain(const KrausChannel& ch, unsigned max_n = 0, const Tolerance& tol = {});

/// M_{E^inf}, verified against the algebra generated by the peripheral eigenvectors.
OperatorSubspace stabilizing_algebra(const KrausChannel& ch, const Tolerance& tol = {});

struct AutomorphismCheck {
    std::string name;
    double residual = 0.0;
    bool passed = false;
};

struct AutomorphismReport {
    std::vector<AutomorphismCheck> checks;  // invariance, inverse, multiplicativity, unitarity
    bool passed() const;
    /// Name of the first failing check, empty when all pass.
    std::string failed() const;
};

AutomorphismReport verify_automorphism(const KrausChannel& ch, const OperatorSubspace& alg,
                                       const Tolerance& tol = {});

struct DecayResult {
    std::vector<double> norms;  // |E^n(x)|_HS for n = 0, 1, ...
    bool monotone = true;
    bool converged = false;
    double spectral_gap = 0.0;  // 1 - max non-peripheral |lambda|; filled when not converged
};

/// Projects x onto the complement of `stabilized`, then iterates E until the
/// HS norm drops below `threshold` or n_max steps have been taken.
DecayResult complement_decay(const KrausChannel& ch, const OperatorSubspace& stabilized, const CMatrix& x,
                             unsigned n_max, double threshold = 1e-6, const Tolerance& tol = {});
DecayResult complement_decay(const KrausChannel& ch, const CMatrix& x, unsigned n_max, double threshold = 1e-6,
                             const Tolerance& tol = {});

/// Spectral projection of superop(ch) onto its peripheral eigenspaces.
Superoperator peripheral_projection(const KrausChannel& ch, const Tolerance& tol = {});

/// P(ab). Throws PreconditionError if a or b is outside range(P).
CMatrix choi_effros_product(const Superoperator& p, const CMatrix& a, const CMatrix& b, const Tolerance& tol = {});

}  // namespace qmd
