#pragma once

// Dense complex kernel shared by every other module.
//
// Vectorization is column stacking everywhere in this library:
//     vec(x y z) = (z^T kron x) vec(y)
// so the Hilbert-Schmidt inner product tr(a b*) equals vec(b)^H vec(a).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qmd {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Largest system dimension d accepted by the public entry points.
inline constexpr Eigen::Index kMaxDim = 32;

struct Tolerance {
    double rank_eps = 1e-10;      // relative singular-value cutoff
    double eig_eps = 1e-8;        // eigenvalue comparison
    double residual_eps = 1e-9;   // identity-check residuals

    /// Throws PreconditionError unless all values are positive and rank_eps < 1.
    void validate() const;
};

/// Throws ShapeError when a is not square, and when any entry is NaN/Inf.
void require_square_finite(const CMatrix& a, const char* what);
void require_finite(const CMatrix& a, const char* what);

/// tr(a b*).
Complex hs_inner(const CMatrix& a, const CMatrix& b);
double hs_norm(const CMatrix& a);

CVector vec(const CMatrix& m);
CMatrix unvec(const Eigen::Ref<const CVector>& v, Eigen::Index d);

CMatrix identity(Eigen::Index d);
/// Matrix unit e_r e_s^*.
CMatrix matrix_unit(Eigen::Index d, Eigen::Index r, Eigen::Index s);

double op_norm(const CMatrix& a);  // largest singular value

struct NullSpace {
    CMatrix basis;          // orthonormal columns
    double sigma_max = 0.0;
    bool borderline = false;  // some singular value sits within 10x of the cutoff
};

/// Orthonormal basis of {v : |m v| <= rank_eps * max(sigma_max, reference_scale) * |v|}, via SVD.
/// `reference_scale` is the natural size of the operator family `m` was built
/// from (e.g. |S| + 1 for S - I); with the default 0 the cutoff is purely
/// relative, which misreads an all-noise matrix as full rank.
NullSpace null_space(const CMatrix& m, const Tolerance& tol, double reference_scale = 0.0);

struct RangeBasis {
    CMatrix basis;
    bool borderline = false;
};

/// Orthonormal basis of the column span (numerical rank by relative cutoff).
RangeBasis range_basis(const CMatrix& m, const Tolerance& tol);

struct EigenDecomposition {
    CVector values;   // with algebraic multiplicity
    CMatrix vectors;  // unit-norm right eigenvectors, column j for values(j)
};

/// General complex eigendecomposition. Throws NumericError when the
/// iteration fails or an eigenpair residual exceeds residual_eps * |m|.
EigenDecomposition eig(const CMatrix& m, const Tolerance& tol);

struct HermitianEigen {
    RVector values;  // ascending
    CMatrix vectors;
};

/// Eigendecomposition of the Hermitian part (m + m^H) / 2.
HermitianEigen eigh(const CMatrix& m);

/// Groups sorted real values whose consecutive gaps are <= gap.
/// Returns [begin, end) index ranges into the sorted input.
std::vector<std::pair<Eigen::Index, Eigen::Index>> cluster_sorted(const RVector& sorted, double gap);

class OperatorSubspace;

/// Hilbert-Schmidt orthonormal basis of span(mats); every matrix must be d x d.
/// An empty list yields the zero subspace of M_d.
OperatorSubspace orthonormalize(std::span<const CMatrix> mats, Eigen::Index d, const Tolerance& tol);

}  // namespace qmd
