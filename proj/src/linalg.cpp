#include "qmd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qmd/errors.hpp"
#include "qmd/subspace.hpp"

namespace qmd {

void Tolerance::validate() const {
    if (!(rank_eps > 0.0 && rank_eps < 1.0)) throw PreconditionError("rank_eps must lie in (0, 1)");
    if (!(eig_eps > 0.0)) throw PreconditionError("eig_eps must be positive");
    if (!(residual_eps > 0.0)) throw PreconditionError("residual_eps must be positive");
}

void require_finite(const CMatrix& a, const char* what) {
    if (!a.allFinite()) throw ShapeError(std::string(what) + ": non-finite entry");
}

void require_square_finite(const CMatrix& a, const char* what) {
    if (a.rows() != a.cols()) {
        throw ShapeError(std::string(what) + ": expected a square matrix, got " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
    }
    require_finite(a, what);
}

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("hs_inner: dimension mismatch");
    // sum_ij a_ij conj(b_ij) == tr(a b^*)
    return (a.array() * b.array().conjugate()).sum();
}

double hs_norm(const CMatrix& a) { return a.norm(); }

CVector vec(const CMatrix& m) { return m.reshaped(); }

CMatrix unvec(const Eigen::Ref<const CVector>& v, Eigen::Index d) {
    if (v.size() != d * d) throw ShapeError("unvec: length is not d^2");
    return v.reshaped(d, d);
}

CMatrix identity(Eigen::Index d) { return CMatrix::Identity(d, d); }

CMatrix matrix_unit(Eigen::Index d, Eigen::Index r, Eigen::Index s) {
    CMatrix e = CMatrix::Zero(d, d);
    e(r, s) = 1.0;
    return e;
}

double op_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

namespace {

bool near_cutoff(const RVector& sv, double cutoff) {
    if (cutoff <= 0.0) return false;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff / 10.0 && sv(i) < cutoff * 10.0) return true;
    }
    return false;
}

// Eigen 3.4.0's BDCSVD can return wrong singular vectors when many singular
// values coincide. Its results are checked and recomputed with JacobiSVD on failure.
double svd_floor(double sigma_max, Eigen::Index n) {
    return 64.0 * std::numeric_limits<double>::epsilon() * std::max(sigma_max, 1.0) * std::sqrt(static_cast<double>(n));
}

bool orthonormal(const CMatrix& q) {
    return (q.adjoint() * q - CMatrix::Identity(q.cols(), q.cols())).norm() <= 1e-10;
}

}  // namespace

NullSpace null_space(const CMatrix& m, const Tolerance& tol, double reference_scale) {
    require_finite(m, "null_space");
    const Eigen::Index n = m.cols();
    NullSpace out;
    if (m.rows() == 0 || n == 0) {
        out.basis = CMatrix::Identity(n, n);
        return out;
    }
    auto solve = [&](const RVector& sv, const CMatrix& v) {
        out.sigma_max = sv.size() > 0 ? sv(0) : 0.0;
        const double cutoff = tol.rank_eps * std::max(out.sigma_max, reference_scale);
        Eigen::Index rank = 0;
        while (rank < sv.size() && sv(rank) > cutoff) ++rank;
        out.basis = v.rightCols(n - rank);
        out.borderline = near_cutoff(sv, cutoff);
        const double k = static_cast<double>(std::max<Eigen::Index>(1, n - rank));
        return (m * out.basis).norm() <= 10.0 * std::sqrt(k) * cutoff + svd_floor(out.sigma_max, n) &&
               orthonormal(out.basis);
    };
    const Eigen::BDCSVD<CMatrix> fast(m, Eigen::ComputeFullV);
    if (solve(fast.singularValues(), fast.matrixV())) return out;
    const Eigen::JacobiSVD<CMatrix> exact(m, Eigen::ComputeFullV);
    solve(exact.singularValues(), exact.matrixV());
    return out;
}

RangeBasis range_basis(const CMatrix& m, const Tolerance& tol) {
    require_finite(m, "range_basis");
    RangeBasis out;
    if (m.rows() == 0 || m.cols() == 0) {
        out.basis = CMatrix(m.rows(), 0);
        return out;
    }
    auto solve = [&](const RVector& sv, const CMatrix& u) {
        const double cutoff = tol.rank_eps * sv(0);
        Eigen::Index rank = 0;
        while (rank < sv.size() && sv(rank) > cutoff) ++rank;
        out.basis = u.leftCols(rank);
        out.borderline = near_cutoff(sv, cutoff);
        const double k = static_cast<double>(std::max<Eigen::Index>(1, m.cols() - rank));
        const CMatrix rest = m - out.basis * (out.basis.adjoint() * m);
        return rest.norm() <= 10.0 * std::sqrt(k) * cutoff + svd_floor(sv(0), m.rows()) && orthonormal(out.basis);
    };
    const Eigen::BDCSVD<CMatrix> fast(m, Eigen::ComputeThinU);
    if (solve(fast.singularValues(), fast.matrixU())) return out;
    const Eigen::JacobiSVD<CMatrix> exact(m, Eigen::ComputeThinU);
    solve(exact.singularValues(), exact.matrixU());
    return out;
}

EigenDecomposition eig(const CMatrix& m, const Tolerance& tol) {
    require_square_finite(m, "eig");
    Eigen::ComplexEigenSolver<CMatrix> solver(m, true);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eig: QR iteration did not converge (n=" + std::to_string(m.rows()) + ")");
    }
    EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
    const double scale = std::max(op_norm(m), 1.0);
    for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
        out.vectors.col(j).normalize();
        const double r = (m * out.vectors.col(j) - out.values(j) * out.vectors.col(j)).norm();
        if (r > tol.residual_eps * scale) {
            throw NumericError("eig: residual " + std::to_string(r) + " for eigenvalue index " + std::to_string(j) +
                               " exceeds tolerance");
        }
    }
    return out;
}

HermitianEigen eigh(const CMatrix& m) {
    require_square_finite(m, "eigh");
    const CMatrix h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw NumericError("eigh: did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> cluster_sorted(const RVector& sorted, double gap) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= sorted.size(); ++i) {
        if (i == sorted.size() || sorted(i) - sorted(i - 1) > gap) {
            if (i > start) out.emplace_back(start, i);
            start = i;
        }
    }
    return out;
}

OperatorSubspace orthonormalize(std::span<const CMatrix> mats, Eigen::Index d, const Tolerance& tol) {
    if (mats.empty()) return OperatorSubspace::zero(d);
    CMatrix stacked(d * d, static_cast<Eigen::Index>(mats.size()));
    for (std::size_t i = 0; i < mats.size(); ++i) {
        if (mats[i].rows() != d || mats[i].cols() != d) throw ShapeError("orthonormalize: matrix is not d x d");
        stacked.col(static_cast<Eigen::Index>(i)) = vec(mats[i]);
    }
    auto r = range_basis(stacked, tol);
    return OperatorSubspace(d, std::move(r.basis), r.borderline);
}

// ---------------------------------------------------------------------------

OperatorSubspace::OperatorSubspace(Eigen::Index dim_ambient, CMatrix columns, bool borderline)
    : d_(dim_ambient), columns_(std::move(columns)), borderline_(borderline) {
    if (columns_.rows() != d_ * d_) throw ShapeError("OperatorSubspace: column length is not d^2");
}

OperatorSubspace OperatorSubspace::zero(Eigen::Index d) { return OperatorSubspace(d, CMatrix(d * d, 0)); }

OperatorSubspace OperatorSubspace::full(Eigen::Index d) {
    return OperatorSubspace(d, CMatrix::Identity(d * d, d * d));
}

OperatorSubspace OperatorSubspace::scalars(Eigen::Index d) {
    CMatrix c = vec(identity(d)) / std::sqrt(static_cast<double>(d));
    return OperatorSubspace(d, std::move(c));
}

CMatrix OperatorSubspace::element(Eigen::Index i) const { return unvec(columns_.col(i), d_); }

std::vector<CMatrix> OperatorSubspace::elements() const {
    std::vector<CMatrix> out;
    out.reserve(static_cast<std::size_t>(dimension()));
    for (Eigen::Index i = 0; i < dimension(); ++i) out.push_back(element(i));
    return out;
}

CMatrix OperatorSubspace::project(const CMatrix& x) const {
    if (x.rows() != d_ || x.cols() != d_) throw ShapeError("OperatorSubspace::project: dimension mismatch");
    if (empty()) return CMatrix::Zero(d_, d_);
    const CVector v = vec(x);
    const CVector p = columns_ * (columns_.adjoint() * v);
    return unvec(p, d_);
}

double OperatorSubspace::residual(const CMatrix& x) const { return (x - project(x)).norm(); }

CMatrix OperatorSubspace::project_complement(const CMatrix& x) const { return x - project(x); }

}  // namespace qmd
