#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmd/channel.hpp"
#include "qmd/subspace.hpp"

namespace qmd {

/// One peripheral eigenvalue of a superoperator together with bases of its
/// right and left eigenspaces (orthonormal columns in vec coordinates).
struct PeripheralCluster {
    Complex lambda;
    Eigen::Index multiplicity = 0;  // algebraic
    CMatrix right;
    CMatrix left;
};

/// Clusters of eigenvalues with |lambda| >= 1 - eig_eps. Eigenspaces come from
/// SVD null spaces of S - lambda I, not from the eigensolver's vectors.
/// Throws NumericError on a defective cluster (geometric < algebraic multiplicity).
std::vector<PeripheralCluster> peripheral_clusters(const Superoperator& s, const Tolerance& tol,
                                                   std::vector<std::string>* warnings = nullptr);

struct PeripheralData {
    std::vector<Complex> eigenvalues;   // one entry per eigenvector
    std::vector<CMatrix> eigenvectors;  // unit HS norm, orthonormal within a cluster
    std::optional<Eigen::Index> group_order;
    std::vector<std::string> warnings;

    /// Distinct eigenvalues with multiplicities.
    std::vector<std::pair<Complex, Eigen::Index>> distinct(const Tolerance& tol = {}) const;
    Eigen::Index fixed_multiplicity(const Tolerance& tol = {}) const;
};

/// Throws PreconditionError unless ch is unital and trace preserving.
void require_unital_tp(const KrausChannel& ch, const char* who);

PeripheralData peripheral_eigenpairs(const KrausChannel& ch, const Tolerance& tol = {});

struct IrreducibilityVerdict {
    bool irreducible = false;
    Eigen::Index fixed_dimension = 0;
    std::optional<CMatrix> witness;  // nontrivial fixed projection when reducible
};

/// For unital TP channels E(p) <= lambda p forces E(p) = p, so E is irreducible
/// exactly when its fixed-point algebra is C*I.
IrreducibilityVerdict is_irreducible(const KrausChannel& ch, const Tolerance& tol = {});

struct PrimitivityVerdict {
    bool primitive = false;
    bool irreducible = false;
    std::size_t peripheral_count = 0;
    Eigen::Index stabilized_dimension = 0;
};

/// Irreducible with peripheral spectrum {1}; cross-checked against
/// dim M_{E^inf} = 1. Throws ConsistencyError when the criteria disagree.
PrimitivityVerdict is_primitive(const KrausChannel& ch, const Tolerance& tol = {});

struct CyclicGroupReport {
    Eigen::Index order = 0;            // m with Gamma = exp(2 pi i Z_m)
    double max_angle_deviation = 0.0;  // radians
    double max_unitary_residual = 0.0; // |u^*u - tr(u^*u)/d I| over eigenvectors
    bool group_ok = false;
    bool unitary_ok = false;
    bool passed() const { return group_ok && unitary_ok; }
};

/// Requires a simple eigenvalue 1 (PreconditionError otherwise).
CyclicGroupReport cyclic_group_check(const PeripheralData& pd, Eigen::Index d, const Tolerance& tol = {});

struct CompositionVerdict {
    bool phi_primitive = false;
    bool psi_primitive = false;
    bool composition_primitive = false;
};

/// Requires commuting superoperators. Throws ConsistencyError if a primitive
/// factor does not make the composition primitive.
CompositionVerdict compose_primitivity(const KrausChannel& phi, const KrausChannel& psi, const Tolerance& tol = {});

struct OnePlusEVerdict {
    bool irreducible = false;
    bool mixture_primitive = false;
};

/// irreducible(E) versus primitive((E + E^2) / 2); ConsistencyError on disagreement.
OnePlusEVerdict one_plus_e_primitivity(const KrausChannel& ch, const Tolerance& tol = {});

struct ProjectionWitness {
    CMatrix p;
    CMatrix image;                    // E(p)
    double idempotence_residual = 0;  // |E(p)^2 - E(p)|
    double rank_defect = 0;           // |tr E(p) - tr p|
};

struct ObstructionVerdict {
    bool adjoint_composition_irreducible = false;  // E* o E
    std::vector<ProjectionWitness> witnesses;       // minimal projections of M_E, block order
};

ObstructionVerdict projection_unitary_obstruction(const KrausChannel& ch, const Tolerance& tol = {});

/// No nontrivial projection commutes with a: commutant({a, a^*}) = C*I.
bool is_irreducible_operator(const CMatrix& a, const Tolerance& tol = {});

struct BoundaryReport {
    bool fixed_hypothesis = false;       // some fixed point is an irreducible operator
    bool fixed_conclusion = false;       // superoperator is the identity
    double identity_residual = 0.0;
    bool peripheral_hypothesis = false;  // some peripheral eigenvector is irreducible
    bool peripheral_conclusion = false;  // peripheral eigenvectors span M_d
    Eigen::Index peripheral_span = 0;
    bool applicable() const { return fixed_hypothesis || peripheral_hypothesis; }
    bool verified() const {
        return (!fixed_hypothesis || fixed_conclusion) && (!peripheral_hypothesis || peripheral_conclusion);
    }
};

/// Hypotheses are tested on a generic element of each eigenspace: irreducible
/// operators form a Zariski-open set, so one exists iff a generic one is.
BoundaryReport boundary_checks(const KrausChannel& ch, const Tolerance& tol = {});

}  // namespace qmd
