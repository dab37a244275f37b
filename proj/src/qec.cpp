#include "qmd/qec.hpp"

#include <algorithm>

#include "qmd/errors.hpp"
#include "qmd/multdom.hpp"
#include "qmd/spectral.hpp"

namespace qmd {

std::string to_string(CodeKind k) {
    switch (k) {
        case CodeKind::UCC: return "UCC";
        case CodeKind::UNS: return "UNS";
        case CodeKind::NS: return "NS";
    }
    return "NS";
}

namespace {

CodeStructure extract(CodeKind kind, OperatorSubspace alg, const Tolerance& tol) {
    CodeStructure out;
    out.kind = kind;
    out.structure = wedderburn(alg, tol);
    out.algebra = std::move(alg);
    Eigen::Index col = 0;
    for (const auto& b : out.structure.blocks) {
        out.codes.push_back({b.n, b.m, out.structure.basis_change.middleCols(col, b.n * b.m)});
        col += b.n * b.m;
    }
    return out;
}

}  // namespace

CodeStructure ucc_codes(const KrausChannel& ch, const Tolerance& tol) {
    return extract(CodeKind::UCC, mult_domain(ch, tol), tol);
}

CodeStructure uns_codes(const KrausChannel& ch, const Tolerance& tol) {
    const auto chain = mult_chain(ch, 0, tol);
    const Eigen::Index d = ch.dim();
    const Superoperator s = superop(ch);
    OperatorSubspace inter = OperatorSubspace::full(d);
    for (unsigned n = 1; n <= chain.kappa; ++n) {
        const Superoperator sn = power(s, n);
        inter = intersect(inter, fixed_point_algebra(sn.adjoint() * sn, tol), tol);
    }
    if (!subspace_equal(inter, chain.stabilized, tol)) {
        throw ConsistencyError("uns_codes: intersection of F_{(E*)^n E^n} has dimension " +
                               std::to_string(inter.dimension()) + ", M_{E^inf} has dimension " +
                               std::to_string(chain.stabilized.dimension()));
    }
    return extract(CodeKind::UNS, stabilizing_algebra(ch, tol), tol);
}

CodeStructure ns_codes(const KrausChannel& ch, const Tolerance& tol) {
    require_unital_tp(ch, "ns_codes");
    return extract(CodeKind::NS, fixed_point_algebra(superop(ch), tol), tol);
}

RecoveryReport unital_recovery_check(const KrausChannel& ch, const KrausChannel& recovery, const Tolerance& tol) {
    require_unital_tp(ch, "unital_recovery_check");
    require_unital_tp(recovery, "unital_recovery_check");
    if (ch.dim() != recovery.dim()) throw ShapeError("unital_recovery_check: dimension mismatch");
    const OperatorSubspace m = mult_domain(ch, tol);
    const Superoperator s = superop(ch);
    const OperatorSubspace f = fixed_point_algebra(superop(recovery) * s, tol);
    const OperatorSubspace fa = fixed_point_algebra(s.adjoint() * s, tol);
    RecoveryReport out;
    out.fixed_dimension = f.dimension();
    out.domain_dimension = m.dimension();
    out.containment_residual = containment_residual(f, m);
    out.contained = out.containment_residual <= closure_tolerance(tol);
    out.adjoint_residual = fa.dimension() == m.dimension() ? subspace_residual(fa, m) : 1.0;
    out.adjoint_equal = subspace_equal(fa, m, tol);
    return out;
}

UcsUnsVerdict ucs_vs_uns(const KrausChannel& ch, const Tolerance& tol) {
    const auto chain = mult_chain(ch, 0, tol);
    UcsUnsVerdict out;
    out.kappa = chain.kappa;
    const OperatorSubspace& m1 = chain.chain.front();
    out.equal = subspace_equal(m1, chain.stabilized, tol);
    if (chain.kappa == 1) {
        if (!out.equal) throw ConsistencyError("ucs_vs_uns: kappa = 1 but M_E != M_{E^inf}");
        return out;
    }
    const OperatorSubspace& m2 = chain.chain[1];
    for (const auto& block : wedderburn(m1, tol).minimal_projections) {
        for (const auto& p : block) {
            if (m2.residual(p) > closure_tolerance(tol)) out.projection_witnesses.push_back(p);
        }
    }
    double best = 0.0;
    for (const auto& a : m1.elements()) {
        CMatrix r = m2.project_complement(a);
        const double n = r.norm();
        if (n > best) {
            best = n;
            out.element_witness = r / n;
        }
    }
    if (best <= closure_tolerance(tol)) {
        throw ConsistencyError("ucs_vs_uns: kappa > 1 but M_E is contained in M_{E^2}");
    }
    return out;
}

}  // namespace qmd
