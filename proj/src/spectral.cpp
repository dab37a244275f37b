#include "qmd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qmd/errors.hpp"
#include "qmd/multdom.hpp"
#include "qmd/staralg.hpp"

namespace qmd {

void require_unital_tp(const KrausChannel& ch, const char* who) {
    const auto& f = ch.flags();
    if (!f.unital) {
        throw PreconditionError(std::string(who) + ": channel is not unital (|sum a a^* - I| = " +
                                std::to_string(f.unital_residual) + ")");
    }
    if (!f.tp) {
        throw PreconditionError(std::string(who) + ": channel is not trace preserving (|sum a^* a - I| = " +
                                std::to_string(f.tp_residual) + ")");
    }
}

std::vector<PeripheralCluster> peripheral_clusters(const Superoperator& s, const Tolerance& tol,
                                                   std::vector<std::string>* warnings) {
    const CMatrix& m = s.matrix();
    const Eigen::Index n = m.rows();
    const auto e = eig(m, tol);
    const double scale = std::max(1.0, op_norm(m));
    const double join = 10.0 * tol.eig_eps;

    std::vector<PeripheralCluster> out;
    std::vector<Complex> sums;
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
        const Complex l = e.values(i);
        const double r = std::abs(l);
        if (r < 1.0 - tol.eig_eps) {
            if (r > 1.0 - 100.0 * tol.eig_eps && warnings) {
                warnings->push_back("eigenvalue of modulus " + std::to_string(r) + " is close to the peripheral cutoff");
            }
            continue;
        }
        bool placed = false;
        for (std::size_t c = 0; c < out.size(); ++c) {
            if (std::abs(out[c].lambda - l) <= join) {
                sums[c] += l;
                out[c].multiplicity += 1;
                out[c].lambda = sums[c] / static_cast<double>(out[c].multiplicity);
                placed = true;
                break;
            }
        }
        if (!placed) {
            out.push_back({l, 1, {}, {}});
            sums.push_back(l);
        }
    }

    std::sort(out.begin(), out.end(), [](const PeripheralCluster& a, const PeripheralCluster& b) {
        auto key = [](Complex z) {
            double t = std::arg(z);
            if (t < -1e-12) t += 2.0 * std::numbers::pi;
            return t;
        };
        return key(a.lambda) < key(b.lambda);
    });

    const CMatrix id = CMatrix::Identity(n, n);
    for (auto& c : out) {
        const auto right = null_space(m - c.lambda * id, tol, scale);
        const auto left = null_space(m.adjoint() - std::conj(c.lambda) * id, tol, scale);
        if (right.basis.cols() != c.multiplicity || left.basis.cols() != c.multiplicity) {
            throw NumericError("peripheral eigenvalue (" + std::to_string(c.lambda.real()) + ", " +
                               std::to_string(c.lambda.imag()) + ") has algebraic multiplicity " +
                               std::to_string(c.multiplicity) + " but an eigenspace of dimension " +
                               std::to_string(right.basis.cols()) +
                               "; the map is not a unital channel within tolerance");
        }
        if ((right.borderline || left.borderline) && warnings) {
            warnings->push_back("borderline rank in a peripheral eigenspace");
        }
        c.right = right.basis;
        c.left = left.basis;
    }
    return out;
}

std::vector<std::pair<Complex, Eigen::Index>> PeripheralData::distinct(const Tolerance& tol) const {
    std::vector<std::pair<Complex, Eigen::Index>> out;
    for (const auto& l : eigenvalues) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const auto& p) { return std::abs(p.first - l) <= 10.0 * tol.eig_eps; });
        if (it == out.end()) {
            out.emplace_back(l, 1);
        } else {
            it->second += 1;
        }
    }
    return out;
}

Eigen::Index PeripheralData::fixed_multiplicity(const Tolerance& tol) const {
    Eigen::Index k = 0;
    for (const auto& l : eigenvalues) k += std::abs(l - 1.0) <= 10.0 * tol.eig_eps ? 1 : 0;
    return k;
}

PeripheralData peripheral_eigenpairs(const KrausChannel& ch, const Tolerance& tol) {
    require_unital_tp(ch, "peripheral_eigenpairs");
    const Eigen::Index d = ch.dim();
    const Superoperator s = superop(ch);
    PeripheralData out;
    for (const auto& c : peripheral_clusters(s, tol, &out.warnings)) {
        for (Eigen::Index j = 0; j < c.right.cols(); ++j) {
            const CVector v = c.right.col(j);
            const double r = (s.matrix() * v - c.lambda * v).norm();
            if (r > tol.residual_eps) {
                out.warnings.push_back("peripheral eigenvector residual " + std::to_string(r));
            }
            out.eigenvalues.push_back(c.lambda);
            out.eigenvectors.push_back(unvec(v, d));
        }
    }
    if (out.fixed_multiplicity(tol) == 1) {
        const auto rep = cyclic_group_check(out, d, tol);
        if (rep.passed()) out.group_order = rep.order;
    }
    return out;
}

IrreducibilityVerdict is_irreducible(const KrausChannel& ch, const Tolerance& tol) {
    require_unital_tp(ch, "is_irreducible");
    const OperatorSubspace f = fixed_point_algebra(superop(ch), tol);
    IrreducibilityVerdict out;
    out.fixed_dimension = f.dimension();
    out.irreducible = f.dimension() == 1;
    if (!out.irreducible) {
        const auto w = wedderburn(f, tol);
        out.witness = w.minimal_projections.front().front();
    }
    return out;
}

PrimitivityVerdict is_primitive(const KrausChannel& ch, const Tolerance& tol) {
    require_unital_tp(ch, "is_primitive");
    PrimitivityVerdict out;
    out.irreducible = is_irreducible(ch, tol).irreducible;
    const auto pd = peripheral_eigenpairs(ch, tol);
    out.peripheral_count = pd.eigenvalues.size();
    const bool trivial_peripheral = out.peripheral_count == 1 && std::abs(pd.eigenvalues[0] - 1.0) <= tol.eig_eps;
    out.primitive = out.irreducible && trivial_peripheral;
    out.stabilized_dimension = stabilizing_algebra(ch, tol).dimension();
    if (out.primitive != (out.stabilized_dimension == 1)) {
        throw ConsistencyError("is_primitive: spectral verdict " + std::string(out.primitive ? "true" : "false") +
                               " disagrees with dim M_{E^inf} = " + std::to_string(out.stabilized_dimension));
    }
    return out;
}

CyclicGroupReport cyclic_group_check(const PeripheralData& pd, Eigen::Index d, const Tolerance& tol) {
    if (pd.fixed_multiplicity(tol) != 1) {
        throw PreconditionError("cyclic_group_check: eigenvalue 1 is not simple (input is not irreducible)");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    const auto count = static_cast<Eigen::Index>(pd.eigenvalues.size());
    CyclicGroupReport out;
    out.max_angle_deviation = std::numeric_limits<double>::infinity();
    bool best_covers = false;
    for (Eigen::Index m = 1; m <= count; ++m) {
        std::vector<int> hits(static_cast<std::size_t>(m), 0);
        double dev = 0.0;
        for (const auto& l : pd.eigenvalues) {
            const double t = std::arg(l);
            const double step = two_pi / static_cast<double>(m);
            const auto k = static_cast<Eigen::Index>(std::llround(t / step));
            dev = std::max(dev, std::abs(t - static_cast<double>(k) * step));
            hits[static_cast<std::size_t>(((k % m) + m) % m)] += 1;
        }
        const bool covers = m == count && std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
        if ((covers && !best_covers) || (covers == best_covers && dev < out.max_angle_deviation)) {
            out.order = m;
            out.max_angle_deviation = dev;
            best_covers = covers;
        }
    }
    out.group_ok = best_covers && out.max_angle_deviation <= tol.eig_eps;

    for (const auto& u : pd.eigenvectors) {
        const CMatrix g = u.adjoint() * u;
        const Complex c = g.trace() / static_cast<double>(d);
        out.max_unitary_residual = std::max(out.max_unitary_residual, (g - c * identity(d)).norm());
    }
    out.unitary_ok = out.max_unitary_residual <= tol.residual_eps;
    return out;
}

CompositionVerdict compose_primitivity(const KrausChannel& phi, const KrausChannel& psi, const Tolerance& tol) {
    require_unital_tp(phi, "compose_primitivity");
    require_unital_tp(psi, "compose_primitivity");
    if (phi.dim() != psi.dim()) throw ShapeError("compose_primitivity: dimension mismatch");
    const CMatrix a = superop(phi).matrix();
    const CMatrix b = superop(psi).matrix();
    const double comm = (a * b - b * a).norm();
    if (comm > tol.residual_eps) {
        throw PreconditionError("compose_primitivity: channels do not commute (|[S_phi, S_psi]| = " +
                                std::to_string(comm) + ")");
    }
    CompositionVerdict out;
    out.phi_primitive = is_primitive(phi, tol).primitive;
    out.psi_primitive = is_primitive(psi, tol).primitive;
    out.composition_primitive = is_primitive(prune(compose(phi, psi, tol), tol), tol).primitive;
    if ((out.phi_primitive || out.psi_primitive) && !out.composition_primitive) {
        throw ConsistencyError("compose_primitivity: a primitive factor gave a non-primitive composition");
    }
    return out;
}

OnePlusEVerdict one_plus_e_primitivity(const KrausChannel& ch, const Tolerance& tol) {
    require_unital_tp(ch, "one_plus_e_primitivity");
    const KrausChannel half = prune(mixture({{0.5, ch}, {0.5, power(ch, 2, tol)}}, tol), tol);
    OnePlusEVerdict out;
    out.irreducible = is_irreducible(ch, tol).irreducible;
    out.mixture_primitive = is_primitive(half, tol).primitive;
    if (out.irreducible != out.mixture_primitive) {
        throw ConsistencyError("one_plus_e_primitivity: irreducibility of E and primitivity of (E + E^2)/2 disagree");
    }
    return out;
}

ObstructionVerdict projection_unitary_obstruction(const KrausChannel& ch, const Tolerance& tol) {
    const OperatorSubspace m = mult_domain(ch, tol);
    ObstructionVerdict out;
    out.adjoint_composition_irreducible = m.dimension() == 1;
    if (out.adjoint_composition_irreducible) return out;
    const auto w = wedderburn(m, tol);
    for (const auto& block : w.minimal_projections) {
        for (const auto& p : block) {
            ProjectionWitness wit;
            wit.p = p;
            wit.image = qmd::apply(ch, p);
            wit.idempotence_residual = (wit.image * wit.image - wit.image).norm();
            wit.rank_defect = std::abs(wit.image.trace() - p.trace());
            out.witnesses.push_back(std::move(wit));
        }
    }
    return out;
}

bool is_irreducible_operator(const CMatrix& a, const Tolerance& tol) {
    require_square_finite(a, "is_irreducible_operator");
    if (a.rows() <= 1) return true;
    const CMatrix gens[] = {a};
    return commutant(gens, a.rows(), tol).dimension() == 1;
}

namespace {

CMatrix generic_element(const CMatrix& basis, Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CVector c(basis.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = Complex(g(rng), g(rng));
    return unvec(basis * c.normalized(), d);
}

}  // namespace

BoundaryReport boundary_checks(const KrausChannel& ch, const Tolerance& tol) {
    if (!ch.flags().unital) throw PreconditionError("boundary_checks: map is not unital");
    const Eigen::Index d = ch.dim();
    const Superoperator s = superop(ch);
    const CMatrix& m = s.matrix();
    std::mt19937_64 rng(kDefaultSeed);
    BoundaryReport out;

    const auto fixed = null_space(m - CMatrix::Identity(d * d, d * d), tol, std::max(1.0, op_norm(m)));
    if (fixed.basis.cols() > 0) {
        out.fixed_hypothesis = is_irreducible_operator(generic_element(fixed.basis, d, rng), tol);
    }
    out.identity_residual = (m - CMatrix::Identity(d * d, d * d)).norm();
    out.fixed_conclusion = out.identity_residual <= tol.residual_eps;

    for (const auto& c : peripheral_clusters(s, tol)) {
        out.peripheral_span += c.right.cols();
        if (!out.peripheral_hypothesis) {
            out.peripheral_hypothesis = is_irreducible_operator(generic_element(c.right, d, rng), tol);
        }
    }
    out.peripheral_conclusion = out.peripheral_span == d * d;
    return out;
}

}  // namespace qmd
