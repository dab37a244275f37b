#include "qmd/staralg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "qmd/errors.hpp"
#include "qmd/kernels.hpp"

namespace qmd {

Eigen::Index StarAlgebraStructure::algebra_dimension() const {
    Eigen::Index s = 0;
    for (const auto& b : blocks) s += b.n * b.n;
    return s;
}

Eigen::Index StarAlgebraStructure::unit_rank() const {
    Eigen::Index s = 0;
    for (const auto& b : blocks) s += b.n * b.m;
    return s;
}

double closure_tolerance(const Tolerance& tol) { return 100.0 * tol.residual_eps; }

Tolerance computed_subspace_tolerance(const Tolerance& tol) {
    Tolerance t = tol;
    t.rank_eps = std::min(closure_tolerance(tol), 0.1);
    return t;
}

OperatorSubspace commutant(std::span<const CMatrix> gens, Eigen::Index d, const Tolerance& tol) {
    if (gens.empty()) return OperatorSubspace::full(d);
    std::vector<CMatrix> sym;
    sym.reserve(2 * gens.size());
    double scale = 0.0;
    for (const auto& g : gens) {
        require_square_finite(g, "commutant");
        if (g.rows() != d) throw ShapeError("commutant: generator dimension mismatch");
        sym.push_back(g);
        sym.push_back(g.adjoint());
        scale = std::max(scale, 2.0 * op_norm(g));
    }
    const auto ns = null_space(kernels::commutator_system(sym, d), tol, scale);
    OperatorSubspace out(d, ns.basis, ns.borderline);
    if (!is_star_algebra(out, tol)) out.add_warning("commutant: numerical closure check failed");
    return out;
}

OperatorSubspace generated_algebra(std::span<const CMatrix> gens, Eigen::Index d, bool unital, const Tolerance& tol) {
    std::vector<CMatrix> seed(gens.begin(), gens.end());
    if (unital) seed.push_back(identity(d));
    if (seed.empty()) return OperatorSubspace::zero(d);

    // Words in gens and gens^* are reached by right multiplication alone, and
    // their span is automatically *-closed.
    std::vector<CMatrix> letters;
    for (const auto& g : gens) {
        letters.push_back(g);
        letters.push_back(g.adjoint());
    }
    for (const auto& g : letters) seed.push_back(g);

    OperatorSubspace basis = orthonormalize(seed, d, tol);
    const Eigen::Index max_iter = d * d + 1;
    for (Eigen::Index it = 0; it < max_iter; ++it) {
        const auto elems = basis.elements();
        auto cand = kernels::pairwise_products(elems, letters);
        cand.insert(cand.end(), elems.begin(), elems.end());
        OperatorSubspace next = orthonormalize(cand, d, tol);
        const bool stable = next.dimension() == basis.dimension();
        next.mark_borderline(basis.borderline());
        basis = std::move(next);
        if (stable || basis.dimension() == d * d) return basis;
    }
    throw NumericError("generated_algebra: closure iteration did not stabilize");
}

OperatorSubspace fixed_point_algebra(const Superoperator& s, const Tolerance& tol) {
    const Eigen::Index n = s.matrix().rows();
    const CMatrix m = s.matrix() - CMatrix::Identity(n, n);
    const auto ns = null_space(m, tol, std::max(1.0, op_norm(s.matrix())));
    OperatorSubspace out(s.dim(), ns.basis, ns.borderline);
    if (out.borderline()) out.add_warning("fixed_point_algebra: borderline numerical rank of S - I");
    if (!out.empty() && !is_star_algebra(out, tol)) {
        out.add_warning("fixed_point_algebra: fixed-point set is not closed under products/adjoints (residual " +
                        std::to_string(closure_residual(out)) + ")");
    }
    return out;
}

OperatorSubspace intersect(const OperatorSubspace& a, const OperatorSubspace& b, const Tolerance& tol) {
    if (a.dim_ambient() != b.dim_ambient()) throw ShapeError("intersect: ambient dimension mismatch");
    const Eigen::Index d = a.dim_ambient();
    if (a.empty() || b.empty()) return OperatorSubspace::zero(d);
    const CMatrix& qa = a.columns();
    const CMatrix& qb = b.columns();
    // Directions of span(qa) with zero component orthogonal to span(qb).
    const CMatrix m = qa - qb * (qb.adjoint() * qa);
    const auto ns = null_space(m, computed_subspace_tolerance(tol), 1.0);
    OperatorSubspace out(d, qa * ns.basis, ns.borderline || a.borderline() || b.borderline());
    return out;
}

double containment_residual(const OperatorSubspace& inner, const OperatorSubspace& outer) {
    if (inner.dim_ambient() != outer.dim_ambient()) throw ShapeError("containment_residual: dimension mismatch");
    if (inner.empty()) return 0.0;
    const CMatrix& qi = inner.columns();
    CMatrix r = qi;
    if (!outer.empty()) r -= outer.columns() * (outer.columns().adjoint() * qi);
    return r.colwise().norm().maxCoeff();
}

double subspace_residual(const OperatorSubspace& a, const OperatorSubspace& b) {
    return std::max(containment_residual(a, b), containment_residual(b, a));
}

bool subspace_equal(const OperatorSubspace& a, const OperatorSubspace& b, const Tolerance& tol) {
    if (a.dim_ambient() != b.dim_ambient()) throw ShapeError("subspace_equal: ambient dimension mismatch");
    if (a.dimension() != b.dimension()) return false;
    return subspace_residual(a, b) <= closure_tolerance(tol);
}

bool contains(const OperatorSubspace& outer, const OperatorSubspace& inner, const Tolerance& tol) {
    return containment_residual(inner, outer) <= closure_tolerance(tol);
}

double closure_residual(const OperatorSubspace& a) {
    if (a.empty()) return 0.0;
    const auto elems = a.elements();
    const auto k = static_cast<std::size_t>(elems.size());
    double worst = 0.0;
    for (const auto& e : elems) worst = std::max(worst, a.residual(e.adjoint()));
    if (k * k <= 4096) {
        for (const auto& x : elems) {
            for (const auto& y : elems) worst = std::max(worst, a.residual(x * y));
        }
        return worst;
    }
    // Large algebras: products of random combinations certify closure generically.
    std::mt19937_64 rng(kDefaultSeed);
    std::normal_distribution<double> g;
    const Eigen::Index d = a.dim_ambient();
    for (int trial = 0; trial < 64; ++trial) {
        CVector cx(a.dimension()), cy(a.dimension());
        for (Eigen::Index i = 0; i < a.dimension(); ++i) {
            cx(i) = Complex(g(rng), g(rng));
            cy(i) = Complex(g(rng), g(rng));
        }
        const CMatrix x = unvec(a.columns() * cx.normalized(), d);
        const CMatrix y = unvec(a.columns() * cy.normalized(), d);
        worst = std::max(worst, a.residual(x * y));
    }
    return worst;
}

bool is_star_algebra(const OperatorSubspace& a, const Tolerance& tol) {
    return closure_residual(a) <= closure_tolerance(tol);
}

// ---------------------------------------------------------------------------
// Wedderburn decomposition

namespace {

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    /// Random self-adjoint element of span(basis), normalized to unit operator norm.
    CMatrix hermitian(const std::vector<CMatrix>& basis) {
        CMatrix c = CMatrix::Zero(basis.front().rows(), basis.front().cols());
        for (const auto& b : basis) c += Complex(g_(rng_), g_(rng_)) * b;
        CMatrix h = (c + c.adjoint()) / 2.0;
        const double n = op_norm(h);
        return n > 0.0 ? CMatrix(h / n) : h;
    }

    CMatrix combination(const std::vector<CMatrix>& basis) {
        CMatrix c = CMatrix::Zero(basis.front().rows(), basis.front().cols());
        for (const auto& b : basis) c += Complex(g_(rng_), g_(rng_)) * b;
        return c;
    }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> g_;
};

struct Spectral {
    std::vector<CMatrix> vectors;  // orthonormal columns per eigenvalue cluster
    double min_gap = 0.0;
};

Spectral clusters_of(const CMatrix& h, const Tolerance& tol) {
    const auto e = eigh(h);
    Spectral out;
    const auto groups = cluster_sorted(e.values, 10.0 * tol.eig_eps);
    out.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto [b, f] = groups[i];
        out.vectors.push_back(e.vectors.middleCols(b, f - b));
        if (i > 0) out.min_gap = std::min(out.min_gap, e.values(b) - e.values(groups[i - 1].second - 1));
    }
    return out;
}

struct BlockData {
    WedderburnBlock shape;
    CMatrix central;
    std::vector<CMatrix> minimal;
    CMatrix columns;  // d x (n m), ordered so that U^* a U = X kron I_m
};

// Returns false on a degenerate random draw (caller retries).
bool decompose_block(const OperatorSubspace& a, const CMatrix& p, Draw& draw, const Tolerance& tol, BlockData& out) {
    const Eigen::Index d = a.dim_ambient();
    std::vector<CMatrix> compressed;
    for (const auto& b : a.elements()) compressed.push_back(p * b * p);
    const OperatorSubspace ak = orthonormalize(compressed, d, tol);
    const auto dim_k = ak.dimension();
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(dim_k))));
    if (n * n != dim_k) throw NumericError("wedderburn: block dimension " + std::to_string(dim_k) + " is not a square");
    const auto range = eigh(p);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < range.values.size(); ++i) rank += range.values(i) > 0.5 ? 1 : 0;
    const CMatrix frame = range.vectors.rightCols(rank);
    if (rank % n != 0) throw NumericError("wedderburn: projection rank not divisible by factor size");
    const Eigen::Index m = rank / n;

    const auto ak_elems = ak.elements();
    const CMatrix h = draw.hermitian(ak_elems);
    const Spectral sp = clusters_of(frame.adjoint() * h * frame, tol);
    if (static_cast<Eigen::Index>(sp.vectors.size()) != n) return false;
    if (n > 1 && sp.min_gap < 100.0 * tol.eig_eps) return false;
    for (const auto& v : sp.vectors) {
        if (v.cols() != m) return false;
    }

    std::vector<CMatrix> spaces;  // d x m bases of the eigenspaces
    for (const auto& v : sp.vectors) spaces.push_back(frame * v);
    std::vector<CMatrix> proj;
    for (const auto& s : spaces) proj.push_back(s * s.adjoint());

    // Partial isometries w_j: range(P_0) -> range(P_j) from a generic element.
    const CMatrix g = draw.combination(ak_elems);
    out.columns = CMatrix(d, n * m);
    out.columns.leftCols(m) = spaces[0];
    for (Eigen::Index j = 1; j < n; ++j) {
        const CMatrix t = proj[static_cast<std::size_t>(j)] * g * proj[0];
        const double c2 = (t.adjoint() * t).trace().real() / static_cast<double>(m);
        if (c2 < 1e-6) return false;
        out.columns.middleCols(j * m, m) = (t / std::sqrt(c2)) * spaces[0];
    }
    out.shape = {n, m};
    out.central = p;
    out.minimal = std::move(proj);
    return true;
}

}  // namespace

StarAlgebraStructure wedderburn(const OperatorSubspace& a, const Tolerance& tol, std::uint64_t seed, int max_retries) {
    const Eigen::Index d = a.dim_ambient();
    StarAlgebraStructure out;
    if (a.empty()) {
        out.basis_change = identity(d);
        return out;
    }
    const double closure = closure_residual(a);
    if (closure > closure_tolerance(tol)) {
        throw NotAnAlgebraError("wedderburn: subspace is not a *-algebra (closure residual " +
                                std::to_string(closure) + ")");
    }
    const auto elems = a.elements();
    const OperatorSubspace center = intersect(a, commutant(elems, d, computed_subspace_tolerance(tol)), tol);
    const auto center_elems = center.elements();

    Draw draw(seed);
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        out = StarAlgebraStructure{};
        out.attempts = attempt;
        const CMatrix h = draw.hermitian(center_elems);
        const Spectral sp = clusters_of(h, tol);
        if (sp.vectors.size() > 1 && sp.min_gap < 100.0 * tol.eig_eps) continue;

        std::vector<CMatrix> central;
        for (const auto& v : sp.vectors) {
            CMatrix p = v * v.adjoint();
            if (a.residual(p) <= closure_tolerance(tol)) central.push_back(std::move(p));
        }
        if (static_cast<Eigen::Index>(central.size()) != center.dimension()) continue;

        std::vector<BlockData> blocks(central.size());
        bool ok = true;
        for (std::size_t k = 0; k < central.size() && ok; ++k) ok = decompose_block(a, central[k], draw, tol, blocks[k]);
        if (!ok) continue;

        // Deterministic block order: by the first basis index the block touches.
        auto lead = [](const CMatrix& p) {
            for (Eigen::Index i = 0; i < p.rows(); ++i) {
                if (std::abs(p(i, i)) > 1e-6) return i;
            }
            return p.rows();
        };
        std::stable_sort(blocks.begin(), blocks.end(),
                         [&](const BlockData& x, const BlockData& y) { return lead(x.central) < lead(y.central); });

        CMatrix unit = CMatrix::Zero(d, d);
        Eigen::Index used = 0;
        for (const auto& b : blocks) used += b.columns.cols();
        CMatrix u(d, d);
        Eigen::Index col = 0;
        for (auto& b : blocks) {
            unit += b.central;
            u.middleCols(col, b.columns.cols()) = b.columns;
            col += b.columns.cols();
            out.blocks.push_back(b.shape);
            out.central_projections.push_back(std::move(b.central));
            out.minimal_projections.push_back(std::move(b.minimal));
        }
        out.unital = (unit - identity(d)).norm() <= closure_tolerance(tol);
        if (used < d) {
            const auto rest = eigh(identity(d) - unit);
            u.rightCols(d - used) = rest.vectors.rightCols(d - used);
        }
        out.basis_change = std::move(u);

        // Rebuild the algebra from matrix units E_jj' kron I_m and compare spans.
        std::vector<CMatrix> rebuilt;
        col = 0;
        for (const auto& b : out.blocks) {
            for (Eigen::Index j = 0; j < b.n; ++j) {
                for (Eigen::Index jp = 0; jp < b.n; ++jp) {
                    CMatrix e = CMatrix::Zero(d, d);
                    for (Eigen::Index i = 0; i < b.m; ++i) {
                        e += out.basis_change.col(col + j * b.m + i) * out.basis_change.col(col + jp * b.m + i).adjoint();
                    }
                    rebuilt.push_back(std::move(e));
                }
            }
            col += b.n * b.m;
        }
        out.reconstruction_residual = subspace_residual(orthonormalize(rebuilt, d, tol), a);
        return out;
    }
    throw NumericError("wedderburn: degenerate random draws exceeded retry limit (" + std::to_string(max_retries) + ")");
}

}  // namespace qmd
