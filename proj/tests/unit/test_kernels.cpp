#include <doctest.h>

#include <random>
#include <vector>

#include "qmd/kernels.hpp"
#include "support/oracles.hpp"

using namespace qmd;

namespace {

std::vector<CMatrix> random_list(std::size_t n, Eigen::Index d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<CMatrix> out;
    for (std::size_t k = 0; k < n; ++k) {
        CMatrix m(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
        out.push_back(m);
    }
    return out;
}

}  // namespace

TEST_CASE("kron against the index formula") {
    const auto m = random_list(2, 3, 1);
    const CMatrix k = kernels::kron(m[0], m[1]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q) CHECK(k(3 * i + p, 3 * j + q) == m[0](i, j) * m[1](p, q));
}

TEST_CASE("serial and omp kernels agree with each other and the oracles") {
    for (Eigen::Index d : {2, 3, 5, 9}) {
        CAPTURE(d);
        const auto ks = random_list(4, d, 10 + static_cast<std::uint64_t>(d));
        const CMatrix x = random_list(1, d, 99)[0];

        const CMatrix s_ser = kernels::serial::superop(ks), s_omp = kernels::omp::superop(ks);
        CHECK((s_ser - s_omp).norm() < 1e-12 * (1 + s_ser.norm()));
        CHECK((s_ser - oracle::superop(ks, d)).norm() < 1e-10 * (1 + s_ser.norm()));
        CHECK((kernels::superop(ks) - s_ser).norm() < 1e-12 * (1 + s_ser.norm()));

        const CMatrix c_ser = kernels::serial::choi(ks), c_omp = kernels::omp::choi(ks);
        CHECK((c_ser - c_omp).norm() < 1e-12 * (1 + c_ser.norm()));
        CHECK((c_ser - oracle::choi(ks, d)).norm() < 1e-10 * (1 + c_ser.norm()));

        const CMatrix a_ser = kernels::serial::apply(ks, x), a_omp = kernels::omp::apply(ks, x);
        CHECK((a_ser - a_omp).norm() < 1e-12 * (1 + a_ser.norm()));
        CHECK((a_ser - oracle::apply(ks, x)).norm() < 1e-10 * (1 + a_ser.norm()));

        const CMatrix m_ser = kernels::serial::commutator_system(ks, d);
        const CMatrix m_omp = kernels::omp::commutator_system(ks, d);
        CHECK((m_ser - m_omp).norm() < 1e-12 * (1 + m_ser.norm()));
        // Each block maps vec(x) to vec(xg - gx).
        const CVector vx = vec(x);
        const CMatrix blk = m_ser.topRows(d * d) * vx;
        CHECK((unvec(blk, d) - (x * ks[0] - ks[0] * x)).norm() < 1e-10 * (1 + x.norm() * ks[0].norm()));

        const auto p_ser = kernels::serial::pairwise_products(ks, ks);
        const auto p_omp = kernels::omp::pairwise_products(ks, ks);
        REQUIRE(p_ser.size() == 16);
        REQUIRE(p_omp.size() == 16);
        for (std::size_t i = 0; i < 16; ++i) CHECK((p_ser[i] - p_omp[i]).norm() < 1e-12 * (1 + p_ser[i].norm()));
        CHECK((p_ser[1] - ks[0] * ks[1]).norm() < 1e-12 * (1 + p_ser[1].norm()));
    }
}

TEST_CASE("max_threads is positive") { CHECK(kernels::max_threads() >= 1); }
