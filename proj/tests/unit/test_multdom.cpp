#include <doctest.h>

#include <random>

#include "qmd/builders.hpp"
#include "qmd/errors.hpp"
#include "qmd/multdom.hpp"
#include "qmd/spectral.hpp"
#include "support/oracles.hpp"

using namespace qmd;

namespace {

CMatrix diag(std::initializer_list<double> v) {
    const auto n = static_cast<Eigen::Index>(v.size());
    CMatrix m = CMatrix::Zero(n, n);
    Eigen::Index i = 0;
    for (double x : v) m(i, i) = x, ++i;
    return m;
}

CMatrix gaussian(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

/// dim ker((S^n)^H S^n - I) by LU on the oracle superoperator.
Eigen::Index oracle_domain_dim(const KrausChannel& ch, unsigned n) {
    const Eigen::Index d = ch.dim();
    CMatrix s = oracle::superop(ch.kraus(), d);
    CMatrix sn = CMatrix::Identity(d * d, d * d);
    for (unsigned i = 0; i < n; ++i) sn = s * sn;
    return oracle::kernel_dim(sn.adjoint() * sn - CMatrix::Identity(d * d, d * d), 1e-8);
}

}  // namespace

TEST_CASE("multiplicative domain: dimension and Schwarz membership") {
    const std::vector<KrausChannel> chans = {fourier_example(3), kappa3_example(), projective_channel(),
                                             path_channel(0.4), random_unitary_mixture(3, 2, 8),
                                             rotated_dephasing(4, 3, 2), cyclic_shift_mixture(3, 2, 5)};
    for (const auto& ch : chans) {
        const auto dom = mult_domain(ch);
        CHECK(dom.dimension() == oracle_domain_dim(ch, 1));
        for (const auto& a : dom.elements()) CHECK(oracle::schwarz_defect(ch.kraus(), a) < 1e-9);
        // A random element orthogonal to the domain violates the Schwarz equality.
        std::mt19937_64 rng(1);
        const CMatrix x = dom.project_complement(gaussian(ch.dim(), rng));
        if (x.norm() > 1e-6) CHECK(oracle::schwarz_defect(ch.kraus(), x / x.norm()) > 1e-6);
    }
}

TEST_CASE("mult_domain requires unital trace preserving input") {
    CHECK_THROWS_AS(mult_domain(random_ucp(2, 2, 1)), PreconditionError);
}

TEST_CASE("multiplicative chains of the examples") {
    const auto f3 = mult_chain(fourier_example(3));
    CHECK(f3.dims == std::vector<Eigen::Index>{3, 1});
    CHECK(f3.kappa == 2);
    CHECK(f3.chain.size() == 3);
    CHECK(f3.stabilized.dimension() == 1);

    const auto k3 = mult_chain(kappa3_example());
    CHECK(k3.dims == std::vector<Eigen::Index>{3, 2, 1});
    CHECK(k3.kappa == 3);
    CHECK(k3.chain[1].residual(diag({1, 0, 0})) < 1e-9);
    CHECK(k3.chain[1].residual(diag({0, 1, 1})) < 1e-9);
    CHECK(k3.recursion_residual < 1e-8);

    CHECK(mult_chain(projective_channel()).kappa == 1);
    CHECK(mult_chain(path_channel(0.5)).dims == std::vector<Eigen::Index>{2, 1});

    std::mt19937_64 rng(4);
    const auto u = mult_chain(unitary_channel(random_unitary(3, rng)));
    CHECK(u.kappa == 1);
    CHECK(u.stabilized.dimension() == 9);
}

TEST_CASE("chain dimensions agree with powers of the oracle superoperator") {
    for (const auto& ch : {kappa3_example(), rotated_dephasing(3, 2, 9), path_channel(0.2)}) {
        const auto mc = mult_chain(ch);
        for (std::size_t n = 0; n < mc.chain.size(); ++n) {
            CHECK(mc.chain[n].dimension() == oracle_domain_dim(ch, static_cast<unsigned>(n + 1)));
        }
    }
}

TEST_CASE("stabilizing algebra and the automorphism checks") {
    for (const auto& ch : {kappa3_example(), cyclic_shift_mixture(4, 2, 3), random_block_mixture({1, 2}, 2, 6)}) {
        const auto st = stabilizing_algebra(ch);
        CHECK(subspace_equal(st, mult_chain(ch).stabilized));
        const auto rep = verify_automorphism(ch, st);
        CHECK(rep.passed());
        CHECK(rep.failed().empty());
        CHECK(rep.checks.size() == 4);
    }
    // M_E is not invariant for kappa3, so the automorphism check must fail there.
    const auto ch = kappa3_example();
    const auto rep = verify_automorphism(ch, mult_domain(ch));
    CHECK_FALSE(rep.passed());
    CHECK_FALSE(rep.failed().empty());
}

TEST_CASE("complement decay") {
    const auto ch = random_unitary_mixture(3, 3, 12);
    std::mt19937_64 rng(5);
    const auto dr = complement_decay(ch, gaussian(3, rng), 2000);
    CHECK(dr.monotone);
    CHECK(dr.converged);
    CHECK(dr.norms.back() < 1e-6);
    // Oracle: the rate is bounded by the spectral radius of S on the complement of the scalars.
    const CMatrix s = oracle::superop(ch.kraus(), 3);
    const CVector vi = vec(identity(3)) / std::sqrt(3.0);
    const CMatrix q = CMatrix::Identity(9, 9) - vi * vi.adjoint();
    const double rho = oracle::spectral_radius(q * s * q);
    REQUIRE(rho < 1.0);
    const double n = static_cast<double>(dr.norms.size() - 1);
    CHECK(dr.norms.back() <= dr.norms.front() * std::pow(rho, n) * 1e3 + 1e-12);

    // Elements of M_{E^inf} are projected away first.
    const auto cyc = cyclic_shift_mixture(3, 2, 1);
    const auto st = stabilizing_algebra(cyc);
    const auto dc = complement_decay(cyc, st, st.element(0), 50);
    CHECK(dc.norms.front() < 1e-9);
}

TEST_CASE("slow decay reports a spectral gap") {
    const auto ch = mixture({{0.999, KrausChannel::identity(2)}, {0.001, unitary_channel(pauli_x())}});
    const auto dr = complement_decay(ch, CMatrix(pauli_z()), 10);
    CHECK_FALSE(dr.converged);
    CHECK(dr.spectral_gap > 0.0);
    CHECK(dr.spectral_gap < 0.01);
}

TEST_CASE("peripheral projection is idempotent and matches the Cesaro mean") {
    const auto ch = random_unitary_mixture(2, 2, 3);
    const auto p = peripheral_projection(ch);
    CHECK((p.matrix() * p.matrix() - p.matrix()).norm() < 1e-9);
    const CMatrix ces = oracle::cesaro(oracle::superop(ch.kraus(), 2), 20000);
    CHECK((p.matrix() - ces).norm() < 1e-2);

    const auto f = fourier_example(3);
    const auto pf = peripheral_projection(f);
    const CMatrix s = superop(f).matrix();
    CHECK((pf.matrix() - s * s).norm() < 1e-9);
}

TEST_CASE("Choi-Effros product") {
    const auto ch = projective_channel();
    const auto p = peripheral_projection(ch);
    const CMatrix a = diag({1, 2}), b = diag({3, -1});
    CHECK((choi_effros_product(p, a, b) - a * b).norm() < 1e-9);
    CHECK_THROWS_AS(choi_effros_product(p, CMatrix(pauli_x()), b), PreconditionError);
}
