#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qmd/channel.hpp"

namespace qmd {

// Pauli matrices.
CMatrix pauli_i();
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

/// x -> u x u^*. Throws PreconditionError if u is not unitary.
KrausChannel unitary_channel(const CMatrix& u, const Tolerance& tol = {});

/// Kraus {sqrt(p_I) I, sqrt(p_X) X, sqrt(p_Y) Y, sqrt(p_Z) Z}.
KrausChannel pauli_channel(const std::array<double, 4>& p, const Tolerance& tol = {});

/// Weyl operator shift^j clock^k with clock = diag(1, w, ..., w^{d-1}), w = exp(2 pi i / d).
CMatrix weyl_operator(Eigen::Index d, Eigen::Index j, Eigen::Index k);

/// Mixture of the d^2 Weyl conjugations; probs indexed j*d + k.
KrausChannel weyl_channel(Eigen::Index d, const std::vector<double>& probs, const Tolerance& tol = {});

/// Kraus s_k = f_k e_k^* with f_k the k-th Fourier basis vector.
/// Squares to the completely depolarizing channel.
KrausChannel fourier_example(Eigen::Index d, const Tolerance& tol = {});

/// The three-Kraus channel on M_3 whose multiplicative chain is 3 > 2 > 1.
KrausChannel kappa3_example(const Tolerance& tol = {});

/// x -> p x p + q x q on M_2 with p = diag(1,0), q = diag(0,1).
KrausChannel projective_channel(const Tolerance& tol = {});

/// The continuous deformation of projective_channel: Kraus p(t), q(t), t in [0, 1].
KrausChannel path_channel(double t, const Tolerance& tol = {});

/// Unitary from the QR factorization of a complex Gaussian matrix (phases fixed).
CMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng);

/// Normalized exponential draws (a flat Dirichlet sample).
std::vector<double> random_probabilities(std::size_t k, std::mt19937_64& rng);

/// sum_i p_i u_i x u_i^* with random unitaries and weights; deterministic in seed.
KrausChannel random_unitary_mixture(Eigen::Index d, std::size_t k, std::uint64_t seed, const Tolerance& tol = {});

/// Random unitary mixture whose unitaries are block diagonal for the given
/// block sizes, so the block projections are fixed points (reducible channel).
KrausChannel random_block_mixture(const std::vector<Eigen::Index>& sizes, std::size_t k, std::uint64_t seed,
                                  const Tolerance& tol = {});

/// sum_i p_i (v D_i) x (v D_i)^* with random diagonal unitaries D_i and one
/// random unitary v. Its multiplicative domain is the diagonal algebra.
KrausChannel rotated_dephasing(Eigen::Index d, std::size_t k, std::uint64_t seed, const Tolerance& tol = {});

/// Cyclic shift composed with a random diagonal dephasing mixture: an
/// irreducible channel whose peripheral spectrum is the d-th roots of unity.
KrausChannel cyclic_shift_mixture(Eigen::Index d, std::size_t k, std::uint64_t seed, const Tolerance& tol = {});

/// Random unital CP map (generally not trace preserving):
/// Kraus b_i = T^{-1/2} g_i with T = sum g_i g_i^* for Gaussian g_i.
KrausChannel random_ucp(Eigen::Index d, std::size_t k, std::uint64_t seed, const Tolerance& tol = {});

enum class Family {
    unitary,
    pauli,
    weyl,
    fourier,
    kappa3,
    projective,
    path_t,
    random_unitary_mixture,
    cyclic_shift,
    custom,
};

std::string to_string(Family f);
Family family_from_string(const std::string& s);

/// Parameters of a named channel family (the JSON-facing schema).
struct ChannelSpec {
    Family family = Family::custom;
    Eigen::Index dim = 0;
    std::vector<double> probs;
    std::uint64_t seed = 0;
    std::size_t k = 1;
    double t = 0.0;
    std::optional<CMatrix> u;                  // unitary family
    std::optional<std::vector<CMatrix>> kraus;  // custom family

    /// Throws PreconditionError on invalid parameters.
    void validate(const Tolerance& tol = {}) const;
};

KrausChannel build(const ChannelSpec& spec, const Tolerance& tol = {});

}  // namespace qmd
