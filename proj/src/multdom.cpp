#include "qmd/multdom.hpp"

#include <algorithm>
#include <cmath>

#include "qmd/errors.hpp"
#include "qmd/kernels.hpp"
#include "qmd/spectral.hpp"

namespace qmd {

namespace {

// The commutant cross-check builds a d^6-entry system; skip it above this size.
constexpr Eigen::Index kCommutantCheckMaxDim = 12;

// {a in alg : E(a) in alg}, as the kernel of (I - P_alg) S restricted to alg.
OperatorSubspace preimage_within(const OperatorSubspace& alg, const CMatrix& s, const Tolerance& tol) {
    const Eigen::Index d = alg.dim_ambient();
    if (alg.empty()) return OperatorSubspace::zero(d);
    const CMatrix& q = alg.columns();
    const CMatrix sq = s * q;
    const auto ns = null_space(sq - q * (q.adjoint() * sq), computed_subspace_tolerance(tol), 1.0);
    return OperatorSubspace(d, q * ns.basis, ns.borderline);
}

}  // namespace

OperatorSubspace mult_domain(const KrausChannel& ch, const Tolerance& tol) {
    require_unital_tp(ch, "mult_domain");
    const Eigen::Index d = ch.dim();
    const CMatrix s = superop(ch).matrix();
    OperatorSubspace out = fixed_point_algebra(Superoperator(d, s.adjoint() * s), tol);

    if (d > kCommutantCheckMaxDim) {
        out.add_warning("mult_domain: commutant cross-check skipped above d = " + std::to_string(kCommutantCheckMaxDim));
        return out;
    }
    std::vector<CMatrix> adj;
    for (const auto& a : ch.kraus()) adj.push_back(a.adjoint());
    const auto products = kernels::pairwise_products(adj, ch.kraus());
    const OperatorSubspace gens = orthonormalize(products, d, tol);
    const auto ge = gens.elements();
    const OperatorSubspace comm = commutant(ge, d, tol);
    if (!subspace_equal(out, comm, tol)) {
        throw ConsistencyError("mult_domain: ker(S^H S - I) has dimension " + std::to_string(out.dimension()) +
                               " but the commutant of {a_i^* a_j} has dimension " + std::to_string(comm.dimension()) +
                               " (span residual " + std::to_string(subspace_residual(out, comm)) + ")");
    }
    return out;
}

MultChainResult mult_chain(const KrausChannel& ch, unsigned max_n, const Tolerance& tol) {
    require_unital_tp(ch, "mult_chain");
    const Eigen::Index d = ch.dim();
    if (max_n == 0) max_n = static_cast<unsigned>(d * d);
    const CMatrix s = superop(ch).matrix();

    MultChainResult out;
    CMatrix sn = s;
    for (unsigned n = 1; n <= max_n + 1; ++n) {
        if (n > 1) sn = s * sn;
        OperatorSubspace cur = fixed_point_algebra(Superoperator(d, sn.adjoint() * sn), tol);
        for (const auto& w : cur.warnings()) out.warnings.push_back(w);

        if (n > 1) {
            const OperatorSubspace& prev = out.chain.back();
            const OperatorSubspace rec = preimage_within(prev, s, tol);
            if (rec.dimension() != cur.dimension()) {
                throw ConsistencyError("mult_chain: step " + std::to_string(n) + " kernel has dimension " +
                                       std::to_string(cur.dimension()) + " but the recursive preimage has dimension " +
                                       std::to_string(rec.dimension()));
            }
            out.recursion_residual = std::max(out.recursion_residual, subspace_residual(rec, cur));
            if (cur.dimension() > prev.dimension()) {
                throw ConsistencyError("mult_chain: dimension increased at step " + std::to_string(n));
            }
            if (cur.dimension() == prev.dimension()) {
                if (!subspace_equal(cur, prev, tol)) {
                    throw ConsistencyError("mult_chain: steps " + std::to_string(n - 1) + " and " + std::to_string(n) +
                                           " have equal dimension but different spans (residual " +
                                           std::to_string(subspace_residual(cur, prev)) + ")");
                }
                out.kappa = n - 1;
                out.stabilized = prev;
                out.chain.push_back(std::move(cur));
                break;
            }
        }
        out.dims.push_back(cur.dimension());
        out.chain.push_back(std::move(cur));
    }
    if (out.kappa == 0) {
        throw NumericError("mult_chain: no stabilization within " + std::to_string(max_n) + " steps");
    }
    if (out.kappa >= static_cast<unsigned>(d * d)) {
        throw ConsistencyError("mult_chain: kappa = " + std::to_string(out.kappa) + " is not below d^2");
    }
    const Eigen::Index first = out.dims.front();
    if (first < d * d && first > d * d - d + 1) {
        out.warnings.push_back("mult_chain: dim M_E = " + std::to_string(first) +
                               " exceeds the largest proper unital subalgebra dimension d^2 - d + 1");
    }
    return out;
}

OperatorSubspace stabilizing_algebra(const KrausChannel& ch, const Tolerance& tol) {
    const auto chain = mult_chain(ch, 0, tol);
    const auto pd = peripheral_eigenpairs(ch, tol);
    const OperatorSubspace gen = generated_algebra(pd.eigenvectors, ch.dim(), true, tol);
    if (!subspace_equal(chain.stabilized, gen, tol)) {
        throw ConsistencyError("stabilizing_algebra: M_{E^inf} has dimension " +
                               std::to_string(chain.stabilized.dimension()) +
                               " but the peripheral eigenvectors generate dimension " +
                               std::to_string(gen.dimension()));
    }
    return chain.stabilized;
}

bool AutomorphismReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AutomorphismCheck& c) { return c.passed; });
}

std::string AutomorphismReport::failed() const {
    for (const auto& c : checks) {
        if (!c.passed) return c.name;
    }
    return {};
}

AutomorphismReport verify_automorphism(const KrausChannel& ch, const OperatorSubspace& alg, const Tolerance& tol) {
    if (alg.dim_ambient() != ch.dim()) throw ShapeError("verify_automorphism: dimension mismatch");
    const KrausChannel adj = adjoint(ch);
    const auto basis = alg.elements();
    std::vector<CMatrix> images;
    for (const auto& b : basis) images.push_back(qmd::apply(ch, b));

    double invariance = 0.0, inverse = 0.0, mult = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        invariance = std::max(invariance, alg.residual(images[i]));
        inverse = std::max(inverse, (qmd::apply(adj, images[i]) - basis[i]).norm());
        inverse = std::max(inverse, (qmd::apply(ch, qmd::apply(adj, basis[i])) - basis[i]).norm());
        for (std::size_t j = 0; j < basis.size(); ++j) {
            mult = std::max(mult, (qmd::apply(ch, basis[i] * basis[j]) - images[i] * images[j]).norm());
        }
    }
    double unitarity = 0.0;
    if (!alg.empty()) {
        const CMatrix& q = alg.columns();
        const CMatrix r = q.adjoint() * superop(ch).matrix() * q;
        unitarity = (r.adjoint() * r - CMatrix::Identity(r.cols(), r.cols())).norm();
    }
    AutomorphismReport out;
    for (auto [name, res] : {std::pair{"invariance", invariance}, std::pair{"inverse", inverse},
                             std::pair{"multiplicativity", mult}, std::pair{"unitarity", unitarity}}) {
        out.checks.push_back({name, res, res <= tol.residual_eps});
    }
    return out;
}

DecayResult complement_decay(const KrausChannel& ch, const OperatorSubspace& stabilized, const CMatrix& x,
                             unsigned n_max, double threshold, const Tolerance& tol) {
    require_unital_tp(ch, "complement_decay");
    if (x.rows() != ch.dim() || x.cols() != ch.dim()) throw ShapeError("complement_decay: dimension mismatch");
    DecayResult out;
    CMatrix y = stabilized.project_complement(x);
    out.norms.push_back(y.norm());
    out.converged = out.norms.back() < threshold;
    for (unsigned n = 1; n <= n_max && !out.converged; ++n) {
        y = qmd::apply(ch, y);
        const double r = y.norm();
        if (r > out.norms.back() + tol.residual_eps) out.monotone = false;
        out.norms.push_back(r);
        out.converged = r < threshold;
    }
    if (!out.converged) {
        const auto e = eig(superop(ch).matrix(), tol);
        double inner = 0.0;
        for (Eigen::Index i = 0; i < e.values.size(); ++i) {
            const double a = std::abs(e.values(i));
            if (a < 1.0 - tol.eig_eps) inner = std::max(inner, a);
        }
        out.spectral_gap = 1.0 - inner;
    }
    return out;
}

DecayResult complement_decay(const KrausChannel& ch, const CMatrix& x, unsigned n_max, double threshold,
                             const Tolerance& tol) {
    return complement_decay(ch, stabilizing_algebra(ch, tol), x, n_max, threshold, tol);
}

Superoperator peripheral_projection(const KrausChannel& ch, const Tolerance& tol) {
    require_unital_tp(ch, "peripheral_projection");
    const Eigen::Index d = ch.dim();
    const Superoperator s = superop(ch);
    CMatrix p = CMatrix::Zero(d * d, d * d);
    for (const auto& c : peripheral_clusters(s, tol)) {
        const CMatrix g = c.left.adjoint() * c.right;
        Eigen::FullPivLU<CMatrix> lu(g);
        if (!lu.isInvertible()) throw NumericError("peripheral_projection: singular left/right eigenspace pairing");
        p += c.right * lu.solve(c.left.adjoint());
    }
    const double idem = (p * p - p).norm();
    if (idem > tol.residual_eps * std::max(1.0, p.norm())) {
        throw NumericError("peripheral_projection: P^2 != P (residual " + std::to_string(idem) + ")");
    }
    return {d, std::move(p)};
}

CMatrix choi_effros_product(const Superoperator& p, const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
    for (const CMatrix* x : {&a, &b}) {
        if (x->rows() != p.dim() || x->cols() != p.dim()) throw ShapeError("choi_effros_product: dimension mismatch");
        const double r = (p.apply(*x) - *x).norm();
        if (r > tol.residual_eps * std::max(1.0, x->norm())) {
            throw PreconditionError("choi_effros_product: operand outside range(P) (residual " + std::to_string(r) +
                                    ")");
        }
    }
    return p.apply(a * b);
}

}  // namespace qmd
