#include "qmd/ucp.hpp"

#include <algorithm>
#include <cmath>

#include "qmd/errors.hpp"
#include "qmd/staralg.hpp"

namespace qmd {

namespace {

// Keeps the dense commutation system below ~256 MiB.
constexpr Eigen::Index kMaxSystemEntries = Eigen::Index{1} << 24;

// (I_n kron x) m, one d-row block at a time.
CMatrix lift_apply(const CMatrix& x, const CMatrix& m) {
    const Eigen::Index d = x.rows();
    CMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows() / d; ++i) out.middleRows(i * d, d) = x * m.middleRows(i * d, d);
    return out;
}

}  // namespace

CMatrix StinespringData::pi_min(const CMatrix& x) const {
    return min_basis.adjoint() * lift_apply(x, min_basis);
}

StinespringData stinespring(const KrausChannel& ch, const Tolerance& tol) {
    if (!ch.flags().unital) {
        throw PreconditionError("stinespring: map is not unital (|Phi(I) - I| = " +
                                std::to_string(ch.flags().unital_residual) + ")");
    }
    const Eigen::Index d = ch.dim();
    const auto n = static_cast<Eigen::Index>(ch.size());
    // Worst case of the closure candidates below: (n d) rows, (n d)(d^2 + 1) columns.
    if ((n * d) * (n * d) * (d * d + 1) > kMaxSystemEntries) {
        throw ResourceError("stinespring: dilation of dimension " + std::to_string(n * d) + " is too large");
    }
    StinespringData out;
    out.dim = d;
    out.env = n;
    out.v = CMatrix(n * d, d);
    for (Eigen::Index i = 0; i < n; ++i) out.v.middleRows(i * d, d) = ch.kraus()[static_cast<std::size_t>(i)].adjoint();
    out.isometry_residual = (out.v.adjoint() * out.v - identity(d)).norm();

    // Smallest subspace containing range(V) and invariant under I kron E_rs.
    CMatrix basis = range_basis(out.v, tol).basis;
    for (Eigen::Index it = 0; it <= n * d; ++it) {
        CMatrix cand(n * d, basis.cols() * (d * d + 1));
        cand.leftCols(basis.cols()) = basis;
        Eigen::Index col = basis.cols();
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) {
                cand.middleCols(col, basis.cols()) = lift_apply(matrix_unit(d, r, c), basis);
                col += basis.cols();
            }
        }
        CMatrix next = range_basis(cand, tol).basis;
        const bool stable = next.cols() == basis.cols();
        basis = std::move(next);
        if (stable) break;
    }
    out.min_basis = basis;
    const CMatrix rv = range_basis(out.v, tol).basis;
    const CMatrix b = out.min_basis.adjoint() * rv;
    out.p_min = b * b.adjoint();

    double worst = 0.0;
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            const CMatrix e = matrix_unit(d, r, c);
            worst = std::max(worst, (out.v.adjoint() * lift_apply(e, out.v) - qmd::apply(ch, e)).norm());
        }
    }
    out.reconstruction_residual = worst;
    if (worst > tol.residual_eps) {
        throw ConsistencyError("stinespring: reconstruction residual " + std::to_string(worst));
    }
    return out;
}

OperatorSubspace mult_domain_ucp(const KrausChannel& ch, const Tolerance& tol) {
    const StinespringData st = stinespring(ch, tol);
    const Eigen::Index d = ch.dim();
    const Eigen::Index r = st.min_basis.cols();
    if (r * r * d * d > kMaxSystemEntries) {
        throw ResourceError("mult_domain_ucp: commutation system of size " + std::to_string(r * r) + " x " +
                            std::to_string(d * d) + " is too large");
    }
    // Column (r, c) holds vec([P, pi(E_rc)]); x -> [P, pi(x)] is linear in vec(x).
    CMatrix sys(r * r, d * d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index row = 0; row < d; ++row) {
            const CMatrix pe = st.pi_min(matrix_unit(d, row, c));
            sys.col(c * d + row) = vec(CMatrix(st.p_min * pe - pe * st.p_min));
        }
    }
    const auto ns = null_space(sys, tol, 1.0);
    OperatorSubspace out(d, ns.basis, ns.borderline);
    if (!is_star_algebra(out, tol)) {
        throw ConsistencyError("mult_domain_ucp: solution set is not a *-algebra (closure residual " +
                               std::to_string(closure_residual(out)) + ")");
    }

    double worst = 0.0;
    for (const auto& a : out.elements()) {
        const CMatrix fa = qmd::apply(ch, a);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                const CMatrix e = matrix_unit(d, i, j);
                const CMatrix fe = qmd::apply(ch, e);
                worst = std::max(worst, (qmd::apply(ch, a * e) - fa * fe).norm());
                worst = std::max(worst, (qmd::apply(ch, e * a) - fe * fa).norm());
            }
        }
    }
    if (worst > closure_tolerance(tol)) {
        throw ConsistencyError("mult_domain_ucp: multiplicativity residual " + std::to_string(worst) +
                               " on the computed domain");
    }
    return out;
}

KrausChannel density_perturbation(const KrausChannel& phi, unsigned n, const Tolerance& tol) {
    if (n < 2) throw PreconditionError("density_perturbation: n must be at least 2");
    const Eigen::Index d = phi.dim();
    const double w = 1.0 - 1.0 / static_cast<double>(n);
    const double c = std::sqrt(1.0 / (static_cast<double>(n) * static_cast<double>(d)));
    std::vector<CMatrix> k;
    for (const auto& a : phi.kraus()) k.push_back(std::sqrt(w) * a);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) k.push_back(c * matrix_unit(d, i, j));
    }
    return KrausChannel(std::move(k), tol);
}

double density_cb_bound(unsigned n) { return 2.0 / static_cast<double>(n); }

AveragingReport averaging_intersection_check(const KrausChannel& phi, const KrausChannel& psi, const Tolerance& tol) {
    if (phi.dim() != psi.dim()) throw ShapeError("averaging_intersection_check: dimension mismatch");
    const Eigen::Index d = phi.dim();
    const KrausChannel e = mixture({{0.5, phi}, {0.5, psi}}, tol);
    AveragingReport out;
    out.left = mult_domain_ucp(prune(e, tol), tol);

    const CMatrix se = superop(e).matrix();
    CMatrix diff(2 * d * d, d * d);
    diff.topRows(d * d) = se - superop(phi).matrix();
    diff.bottomRows(d * d) = se - superop(psi).matrix();
    const auto agree = null_space(diff, tol, 1.0);
    const OperatorSubspace agreement(d, agree.basis, agree.borderline);
    out.right = intersect(intersect(mult_domain_ucp(phi, tol), mult_domain_ucp(psi, tol), tol), agreement, tol);
    out.residual = out.left.dimension() == out.right.dimension() ? subspace_residual(out.left, out.right) : 1.0;
    out.equal = subspace_equal(out.left, out.right, tol);
    return out;
}

KrausChannel counterexample_phi(const Tolerance& tol) {
    const double h = 1.0 / std::sqrt(2.0);
    CMatrix k1 = matrix_unit(3, 0, 0);
    CMatrix k2 = matrix_unit(3, 1, 1);
    CMatrix k3 = h * matrix_unit(3, 2, 0);
    CMatrix k4 = h * matrix_unit(3, 2, 1);
    return KrausChannel({k1, k2, k3, k4}, tol);
}

}  // namespace qmd
