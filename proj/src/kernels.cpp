#include "qmd/kernels.hpp"

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qmd/errors.hpp"

namespace qmd::kernels {

namespace {

// Below this many complex multiply-adds the serial path wins.
constexpr double kParallelWork = 1 << 16;

Eigen::Index common_dim(std::span<const CMatrix> mats) {
    if (mats.empty()) throw ShapeError("kernel: empty operator list");
    const Eigen::Index d = mats[0].rows();
    for (const auto& m : mats) {
        if (m.rows() != d || m.cols() != d) throw ShapeError("kernel: operators must share one square dimension");
    }
    return d;
}

// Writes conj(a) kron a into the d^2 x d^2 block `out` (accumulating).
void accumulate_superop_term(const CMatrix& a, CMatrix& out) {
    const Eigen::Index d = a.rows();
    const CMatrix ac = a.conjugate();
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            out.block(i * d, j * d, d, d).noalias() += ac(i, j) * a;
        }
    }
}

}  // namespace

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// ---------------------------------------------------------------------------
namespace serial {

CMatrix superop(std::span<const CMatrix> kraus) {
    const Eigen::Index d = common_dim(kraus);
    CMatrix s = CMatrix::Zero(d * d, d * d);
    for (const auto& a : kraus) accumulate_superop_term(a, s);
    return s;
}

CMatrix choi(std::span<const CMatrix> kraus) {
    const Eigen::Index d = common_dim(kraus);
    CMatrix c = CMatrix::Zero(d * d, d * d);
    for (const auto& a : kraus) {
        const CVector v = vec(a);
        c.noalias() += v * v.adjoint();
    }
    return c;
}

CMatrix commutator_system(std::span<const CMatrix> gens, Eigen::Index d) {
    const Eigen::Index n = d * d;
    CMatrix sys = CMatrix::Zero(n * static_cast<Eigen::Index>(gens.size()), n);
    const CMatrix id = CMatrix::Identity(d, d);
    for (std::size_t k = 0; k < gens.size(); ++k) {
        const auto& g = gens[k];
        if (g.rows() != d || g.cols() != d) throw ShapeError("commutator_system: generator is not d x d");
        sys.block(static_cast<Eigen::Index>(k) * n, 0, n, n) = kron(g.transpose(), id) - kron(id, g);
    }
    return sys;
}

CMatrix apply(std::span<const CMatrix> kraus, const CMatrix& x) {
    const Eigen::Index d = common_dim(kraus);
    if (x.rows() != d || x.cols() != d) throw ShapeError("apply: input is not d x d");
    CMatrix out = CMatrix::Zero(d, d);
    for (const auto& a : kraus) out.noalias() += a * x * a.adjoint();
    return out;
}

std::vector<CMatrix> pairwise_products(std::span<const CMatrix> a, std::span<const CMatrix> b) {
    std::vector<CMatrix> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
        for (const auto& y : b) out.push_back(x * y);
    }
    return out;
}

}  // namespace serial

// ---------------------------------------------------------------------------
namespace omp {

CMatrix superop(std::span<const CMatrix> kraus) {
    const Eigen::Index d = common_dim(kraus);
    const Eigen::Index n = d * d;
    CMatrix s = CMatrix::Zero(n, n);
    std::vector<CMatrix> conj;
    conj.reserve(kraus.size());
    for (const auto& a : kraus) conj.push_back(a.conjugate());
    // Each (i, j) block of S is independent: sum_k conj(a_k)(i, j) a_k.
#pragma omp parallel for collapse(2) schedule(static)
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            auto blk = s.block(i * d, j * d, d, d);
            for (std::size_t k = 0; k < kraus.size(); ++k) blk.noalias() += conj[k](i, j) * kraus[k];
        }
    }
    return s;
}

CMatrix choi(std::span<const CMatrix> kraus) {
    const Eigen::Index d = common_dim(kraus);
    const Eigen::Index n = d * d;
    CMatrix vs(n, static_cast<Eigen::Index>(kraus.size()));
    for (std::size_t k = 0; k < kraus.size(); ++k) vs.col(static_cast<Eigen::Index>(k)) = vec(kraus[k]);
    CMatrix c(n, n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index col = 0; col < n; ++col) {
        c.col(col).noalias() = vs * vs.row(col).adjoint();
    }
    return c;
}

CMatrix commutator_system(std::span<const CMatrix> gens, Eigen::Index d) {
    const Eigen::Index n = d * d;
    const auto count = static_cast<Eigen::Index>(gens.size());
    for (const auto& g : gens) {
        if (g.rows() != d || g.cols() != d) throw ShapeError("commutator_system: generator is not d x d");
    }
    CMatrix sys = CMatrix::Zero(n * count, n);
    // Row (k, i*d + r) of block k: (g^T kron I - I kron g) has entries
    //   g(j, i) delta(r, s) at column j*d + s, minus delta(i, j) g(r, s).
#pragma omp parallel for schedule(static)
    for (Eigen::Index k = 0; k < count; ++k) {
        const CMatrix& g = gens[static_cast<std::size_t>(k)];
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index r = 0; r < d; ++r) {
                const Eigen::Index row = k * n + i * d + r;
                for (Eigen::Index j = 0; j < d; ++j) sys(row, j * d + r) += g(j, i);
                for (Eigen::Index s = 0; s < d; ++s) sys(row, i * d + s) -= g(r, s);
            }
        }
    }
    return sys;
}

CMatrix apply(std::span<const CMatrix> kraus, const CMatrix& x) {
    const Eigen::Index d = common_dim(kraus);
    if (x.rows() != d || x.cols() != d) throw ShapeError("apply: input is not d x d");
    CMatrix out = CMatrix::Zero(d, d);
#pragma omp parallel
    {
        CMatrix local = CMatrix::Zero(d, d);
#pragma omp for schedule(static) nowait
        for (std::size_t k = 0; k < kraus.size(); ++k) local.noalias() += kraus[k] * x * kraus[k].adjoint();
#pragma omp critical
        out += local;
    }
    return out;
}

std::vector<CMatrix> pairwise_products(std::span<const CMatrix> a, std::span<const CMatrix> b) {
    std::vector<CMatrix> out(a.size() * b.size());
    const auto total = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const auto i = static_cast<std::size_t>(idx) / b.size();
        const auto j = static_cast<std::size_t>(idx) % b.size();
        out[static_cast<std::size_t>(idx)] = a[i] * b[j];
    }
    return out;
}

}  // namespace omp

// ---------------------------------------------------------------------------

namespace {
bool big(double work) { return max_threads() > 1 && work >= kParallelWork; }
double d4(Eigen::Index d) { return static_cast<double>(d) * d * d * d; }
}  // namespace

CMatrix superop(std::span<const CMatrix> kraus) {
    const Eigen::Index d = common_dim(kraus);
    return big(d4(d) * static_cast<double>(kraus.size())) ? omp::superop(kraus) : serial::superop(kraus);
}

CMatrix choi(std::span<const CMatrix> kraus) {
    const Eigen::Index d = common_dim(kraus);
    return big(d4(d) * static_cast<double>(kraus.size())) ? omp::choi(kraus) : serial::choi(kraus);
}

CMatrix commutator_system(std::span<const CMatrix> gens, Eigen::Index d) {
    return big(d4(d) * static_cast<double>(gens.size())) ? omp::commutator_system(gens, d)
                                                          : serial::commutator_system(gens, d);
}

CMatrix apply(std::span<const CMatrix> kraus, const CMatrix& x) {
    const Eigen::Index d = common_dim(kraus);
    const double work = static_cast<double>(d) * d * d * static_cast<double>(kraus.size());
    return big(work) ? omp::apply(kraus, x) : serial::apply(kraus, x);
}

std::vector<CMatrix> pairwise_products(std::span<const CMatrix> a, std::span<const CMatrix> b) {
    if (a.empty() || b.empty()) return {};
    const double d = static_cast<double>(a[0].rows());
    const double work = d * d * d * static_cast<double>(a.size() * b.size());
    return big(work) ? omp::pairwise_products(a, b) : serial::pairwise_products(a, b);
}

}  // namespace qmd::kernels
