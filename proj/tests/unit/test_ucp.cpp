#include <doctest.h>

#include <random>

#include "qmd/builders.hpp"
#include "qmd/errors.hpp"
#include "qmd/multdom.hpp"
#include "qmd/staralg.hpp"
#include "qmd/ucp.hpp"
#include "support/oracles.hpp"

using namespace qmd;

namespace {

/// Brute-force multiplicative domain of a unital CP map: a such that
/// Phi(a b) = Phi(a) Phi(b) and Phi(b a) = Phi(b) Phi(a) for all matrix units b,
/// solved as one linear system in vec(a) by LU.
Eigen::Index oracle_ucp_domain_dim(const KrausChannel& phi) {
    const Eigen::Index d = phi.dim();
    const auto& ks = phi.kraus();
    std::vector<CMatrix> img(static_cast<std::size_t>(d * d));  // Phi(e_pq), column p + d q
    for (Eigen::Index q = 0; q < d; ++q)
        for (Eigen::Index p = 0; p < d; ++p) img[static_cast<std::size_t>(p + d * q)] = oracle::apply(ks, matrix_unit(d, p, q));
    CMatrix sys = CMatrix::Zero(2 * d * d * d * d, d * d);
    Eigen::Index row = 0;
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index s = 0; s < d; ++s) {
            const CMatrix& pb = img[static_cast<std::size_t>(r + d * s)];
            for (Eigen::Index q = 0; q < d; ++q) {
                for (Eigen::Index p = 0; p < d; ++p) {
                    const Eigen::Index col = p + d * q;
                    const CMatrix e = matrix_unit(d, p, q), b = matrix_unit(d, r, s);
                    const CMatrix& pa = img[static_cast<std::size_t>(col)];
                    const CMatrix left = oracle::apply(ks, e * b) - pa * pb;
                    const CMatrix right = oracle::apply(ks, b * e) - pb * pa;
                    for (Eigen::Index k = 0; k < d * d; ++k) {
                        sys(row + k, col) = left(k % d, k / d);
                        sys(row + d * d + k, col) = right(k % d, k / d);
                    }
                }
            }
            row += 2 * d * d;
        }
    }
    return oracle::kernel_dim(sys, 1e-8);
}

}  // namespace

TEST_CASE("Stinespring dilation reconstructs the map") {
    const auto phi = random_ucp(3, 2, 6);
    const auto st = stinespring(phi);
    CHECK(st.dim == 3);
    CHECK(st.env == 2);
    CHECK(st.reconstruction_residual < 1e-10);
    CHECK(st.isometry_residual < 1e-10);
    CHECK((st.v.adjoint() * st.v - identity(3)).norm() < 1e-10);
    CHECK((st.p_min * st.p_min - st.p_min).norm() < 1e-9);
    CHECK(std::abs(st.p_min.trace().real() - 3.0) < 1e-9);
    std::mt19937_64 rng(1);
    const CMatrix x = random_unitary(3, rng);
    const CMatrix pix = st.pi_min(x);
    CHECK((st.pi_min(x * x.adjoint()) - pix * pix.adjoint()).norm() < 1e-9);
    CHECK_THROWS_AS(stinespring(KrausChannel({0.5 * identity(2)})), PreconditionError);
}

TEST_CASE("UCP multiplicative domain matches the brute-force system") {
    for (const auto& phi : {counterexample_phi(), random_ucp(2, 2, 3), random_ucp(3, 1, 4)}) {
        const auto dom = mult_domain_ucp(phi);
        CHECK(dom.dimension() == oracle_ucp_domain_dim(phi));
        CHECK(is_star_algebra(dom));
    }
    // On unital TP input both routes agree.
    const auto k3 = kappa3_example();
    CHECK(subspace_equal(mult_domain_ucp(k3), mult_domain(k3)));
}

TEST_CASE("counterexample map") {
    const auto phi = counterexample_phi();
    CHECK(phi.flags().unital);
    CHECK_FALSE(phi.flags().tp);
    CMatrix x(3, 3);
    x << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    CMatrix want = CMatrix::Zero(3, 3);
    want(0, 0) = 1;
    want(1, 1) = 5;
    want(2, 2) = 3;
    CHECK((qmd::apply(phi, x) - want).norm() < 1e-12);
    CMatrix a = CMatrix::Zero(3, 3);
    a(0, 0) = a(1, 1) = 1;
    const auto dom = mult_domain_ucp(phi);
    CHECK(dom.dimension() == 2);
    CHECK(dom.residual(a) < 1e-9);
    const CMatrix& k3 = phi.kraus()[2];
    CHECK((a * k3 - k3 * a).norm() >= 0.1);
}

TEST_CASE("density perturbations have trivial domain") {
    const auto phi = random_ucp(3, 2, 10);
    double prev = 1e9;
    for (unsigned n : {2u, 4u, 16u, 64u}) {
        const auto pert = density_perturbation(phi, n);
        CHECK(pert.flags().unital);
        CHECK(mult_domain_ucp(pert).dimension() == 1);
        const double dist = op_norm(superop(pert).matrix() - superop(phi).matrix());
        CHECK(dist < prev);
        prev = dist;
    }
    CHECK(density_cb_bound(8) == doctest::Approx(0.25));
    CHECK_THROWS_AS(density_perturbation(phi, 1), PreconditionError);
}

TEST_CASE("averaging: M_E = M_Phi n M_Psi n {E = Phi = Psi}") {
    const auto phi = projective_channel();
    const auto psi = path_channel(0.5);
    const auto rep = averaging_intersection_check(phi, psi);
    CHECK(rep.equal);
    CHECK(rep.left.dimension() == rep.right.dimension());
    const auto u = averaging_intersection_check(random_unitary_mixture(2, 1, 1), random_unitary_mixture(2, 1, 2));
    CHECK(u.equal);
}

TEST_CASE("resource cap for the dilation") {
    std::vector<CMatrix> ks;
    const Eigen::Index d = 32;
    for (int i = 0; i < 80; ++i) ks.push_back(identity(d) / std::sqrt(80.0));
    CHECK_THROWS_AS(mult_domain_ucp(KrausChannel(ks)), ResourceError);
}
