#include "qmd/report.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "qmd/errors.hpp"
#include "qmd/multdom.hpp"
#include "qmd/qec.hpp"
#include "qmd/spectral.hpp"
#include "qmd/ucp.hpp"

namespace qmd::report {

json tolerance_json(const Tolerance& tol) {
    return {{"rank_eps", tol.rank_eps}, {"eig_eps", tol.eig_eps}, {"residual_eps", tol.residual_eps}};
}

namespace {

json blocks_json(const StarAlgebraStructure& s) {
    json b = json::array();
    for (const auto& blk : s.blocks) b.push_back({{"n", blk.n}, {"m", blk.m}});
    return b;
}

json algebra_json(const OperatorSubspace& a, const Tolerance& tol) {
    const auto w = wedderburn(a, tol);
    return {{"dimension", a.dimension()},
            {"blocks", blocks_json(w)},
            {"unital", w.unital},
            {"reconstruction_residual", w.reconstruction_residual},
            {"closure_residual", closure_residual(a)}};
}

void collect(json& warnings, const OperatorSubspace& s) {
    for (const auto& w : s.warnings()) warnings.push_back(w);
    if (s.borderline()) warnings.push_back("borderline numerical rank in a computed subspace");
}

json flags_json(const ChannelFlags& f) {
    return {{"cp", f.cp},
            {"tp", f.tp},
            {"unital", f.unital},
            {"tp_residual", f.tp_residual},
            {"unital_residual", f.unital_residual}};
}

json code_json(const CodeStructure& c) {
    json codes = json::array();
    for (const auto& s : c.codes) codes.push_back({{"n", s.n}, {"m", s.m}, {"nontrivial", s.nontrivial()}});
    return {{"kind", to_string(c.kind)}, {"dimension", c.algebra.dimension()}, {"subsystems", std::move(codes)}};
}

}  // namespace

json analyze(const KrausChannel& ch, const Tolerance& tol, const json& input_echo) {
    const Eigen::Index d = ch.dim();
    json out = {{"input", input_echo},
                {"dim", d},
                {"kraus_count", ch.size()},
                {"flags", flags_json(ch.flags())},
                {"tolerance", tolerance_json(tol)}};
    json warnings = json::array();

    if (!ch.flags().unital) {
        throw PreconditionError("analyze: map is not unital (|sum a a^* - I| = " +
                                std::to_string(ch.flags().unital_residual) + ")");
    }
    if (!ch.flags().tp) {
        out["analysis"] = "ucp";
        const auto st = stinespring(ch, tol);
        const OperatorSubspace m = mult_domain_ucp(ch, tol);
        collect(warnings, m);
        out["stinespring"] = {{"env", st.env},
                              {"min_dimension", st.min_basis.cols()},
                              {"reconstruction_residual", st.reconstruction_residual}};
        out["multiplicative_domain"] = algebra_json(m, tol);
        out["warnings"] = std::move(warnings);
        return out;
    }

    out["analysis"] = "channel";
    const auto chain = mult_chain(ch, 0, tol);
    for (const auto& w : chain.warnings) warnings.push_back(w);
    out["mult_chain"] = {{"dims", chain.dims},
                         {"kappa", chain.kappa},
                         {"kappa_bound", d * d},
                         {"recursion_residual", chain.recursion_residual}};
    const OperatorSubspace m = mult_domain(ch, tol);
    collect(warnings, m);
    out["multiplicative_domain"] = algebra_json(m, tol);
    const OperatorSubspace stab = stabilizing_algebra(ch, tol);
    out["stabilizing_algebra"] = algebra_json(stab, tol);
    const auto aut = verify_automorphism(ch, stab, tol);
    json checks = json::object();
    for (const auto& c : aut.checks) checks[c.name] = {{"residual", c.residual}, {"passed", c.passed}};
    out["automorphism"] = std::move(checks);

    out["peripheral"] = spectrum(ch, tol, false);
    for (const auto& w : out["peripheral"]["warnings"]) warnings.push_back(w);

    const auto prim = is_primitive(ch, tol);
    const double defect = normality_defect(superop(ch));
    out["verdicts"] = {{"irreducible", prim.irreducible},
                       {"primitive", prim.primitive},
                       {"normal", defect <= tol.residual_eps},
                       {"normality_defect", defect}};
    out["qec"] = codes(ch, tol);
    out["warnings"] = std::move(warnings);
    return out;
}

json spectrum(const KrausChannel& ch, const Tolerance& tol, bool with_vectors) {
    const auto pd = peripheral_eigenpairs(ch, tol);
    json values = json::array();
    for (const auto& [l, k] : pd.distinct(tol)) {
        values.push_back({{"value", io::complex_to_json(l)}, {"multiplicity", k}});
    }
    json out = {{"eigenvalues", std::move(values)},
                {"count", pd.eigenvalues.size()},
                {"warnings", pd.warnings}};
    out["group_order"] = pd.group_order ? json(*pd.group_order) : json(nullptr);
    if (with_vectors) {
        json vecs = json::array();
        for (std::size_t i = 0; i < pd.eigenvectors.size(); ++i) {
            vecs.push_back({{"value", io::complex_to_json(pd.eigenvalues[i])},
                            {"vector", io::matrix_to_json(pd.eigenvectors[i])}});
        }
        out["eigenvectors"] = std::move(vecs);
    }
    return out;
}

json codes(const KrausChannel& ch, const Tolerance& tol) {
    const auto ucc = ucc_codes(ch, tol);
    const auto uns = uns_codes(ch, tol);
    const auto v = ucs_vs_uns(ch, tol);
    json out = {{"ucc", code_json(ucc)},
                {"uns", code_json(uns)},
                {"kappa", v.kappa},
                {"ucc_equals_uns", v.equal},
                {"kappa_one_equivalence", v.equal == (v.kappa == 1)}};
    if (v.element_witness) out["witness"] = io::matrix_to_json(*v.element_witness);
    return out;
}

// ---------------------------------------------------------------------------
// Regression suite

namespace {

struct Outcome {
    std::string computed;
    bool pass = false;
};

struct Row {
    std::string id;
    std::string description;
    std::string expected;
    std::function<Outcome(const Tolerance&, std::size_t&)> run;
};

std::string list(const std::vector<Eigen::Index>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

std::string sci(double x) {
    std::ostringstream o;
    o.precision(2);
    o << std::scientific << x;
    return o.str();
}

CMatrix diag(std::initializer_list<double> v) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) m(i, i) = x, ++i;
    return m;
}

MultChainResult chain_of(const KrausChannel& ch, const Tolerance& tol, std::size_t& warn) {
    auto r = mult_chain(ch, 0, tol);
    warn += r.warnings.size();
    for (const auto& s : r.chain) warn += s.borderline() ? 1 : 0;
    return r;
}

std::vector<Row> rows() {
    std::vector<Row> r;

    r.push_back({"fourier3.domain", "fourier_example(3): M_E is the diagonal algebra", "dim 3, diagonal",
                 [](const Tolerance& tol, std::size_t& w) {
                     const auto m = mult_domain(fourier_example(3, tol), tol);
                     w += m.warnings().size();
                     double res = 0;
                     for (int i = 0; i < 3; ++i) res = std::max(res, m.residual(matrix_unit(3, i, i)));
                     return Outcome{"dim " + std::to_string(m.dimension()) + ", diag residual " + sci(res),
                                    m.dimension() == 3 && res <= 1e-8};
                 }});
    r.push_back({"fourier3.chain", "fourier_example(3): chain and index", "dims [3,1], kappa 2",
                 [](const Tolerance& tol, std::size_t& w) {
                     const auto c = chain_of(fourier_example(3, tol), tol, w);
                     return Outcome{"dims " + list(c.dims) + ", kappa " + std::to_string(c.kappa),
                                    c.dims == std::vector<Eigen::Index>{3, 1} && c.kappa == 2};
                 }});
    r.push_back({"fourier.kappa", "fourier_example(d), d = 2..6: kappa = 2 in every dimension", "kappa 2 for all d",
                 [](const Tolerance& tol, std::size_t& w) {
                     std::vector<Eigen::Index> ks;
                     bool ok = true;
                     for (Eigen::Index d = 2; d <= 6; ++d) {
                         const auto c = chain_of(fourier_example(d, tol), tol, w);
                         ks.push_back(c.kappa);
                         ok = ok && c.kappa == 2 && c.dims == std::vector<Eigen::Index>{d, 1};
                     }
                     return Outcome{"kappas " + list(ks), ok};
                 }});
    r.push_back({"fourier3.square", "fourier_example(3)^2 is completely depolarizing", "E^2(x) = tr(x) I/3",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto e2 = power(fourier_example(3, tol), 2, tol);
                     double res = 0;
                     for (int i = 0; i < 3; ++i) {
                         for (int j = 0; j < 3; ++j) {
                             const CMatrix e = matrix_unit(3, i, j);
                             res = std::max(res, (qmd::apply(e2, e) - e.trace() * identity(3) / 3.0).norm());
                         }
                     }
                     return Outcome{"residual " + sci(res), res <= 1e-9};
                 }});
    r.push_back({"fourier3.primitive", "fourier_example(3): M_{E^inf} = C1, primitive", "stabilized dim 1, primitive",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto p = is_primitive(fourier_example(3, tol), tol);
                     return Outcome{"stabilized dim " + std::to_string(p.stabilized_dimension) +
                                        (p.primitive ? ", primitive" : ", not primitive"),
                                    p.stabilized_dimension == 1 && p.primitive};
                 }});
    r.push_back({"kappa3.domain", "kappa3_example: M_E = {diag(a,b,c)}", "dim 3, diagonal",
                 [](const Tolerance& tol, std::size_t& w) {
                     const auto m = mult_domain(kappa3_example(tol), tol);
                     w += m.warnings().size();
                     double res = 0;
                     for (int i = 0; i < 3; ++i) res = std::max(res, m.residual(matrix_unit(3, i, i)));
                     return Outcome{"dim " + std::to_string(m.dimension()) + ", diag residual " + sci(res),
                                    m.dimension() == 3 && res <= 1e-8};
                 }});
    r.push_back({"kappa3.chain", "kappa3_example: chain and index", "dims [3,2,1], kappa 3",
                 [](const Tolerance& tol, std::size_t& w) {
                     const auto c = chain_of(kappa3_example(tol), tol, w);
                     return Outcome{"dims " + list(c.dims) + ", kappa " + std::to_string(c.kappa),
                                    c.dims == std::vector<Eigen::Index>{3, 2, 1} && c.kappa == 3};
                 }});
    r.push_back({"kappa3.second", "kappa3_example: M_{E^2} = span{diag(0,1,1), diag(1,0,0)}", "span residual <= 1e-8",
                 [](const Tolerance& tol, std::size_t& w) {
                     const auto c = chain_of(kappa3_example(tol), tol, w);
                     const CMatrix gens[] = {diag({0, 1, 1}), diag({1, 0, 0})};
                     const auto ref = orthonormalize(gens, 3, tol);
                     const double res = c.chain.size() > 1 && c.chain[1].dimension() == 2 ? subspace_residual(ref, c.chain[1]) : 1.0;
                     return Outcome{"residual " + sci(res), res <= 1e-8};
                 }});
    r.push_back({"kappa3.image", "kappa3_example: E(e3 e3^*) = (1/2)[[1,1,0],[1,1,0],[0,0,0]]", "entrywise within 1e-12",
                 [](const Tolerance& tol, std::size_t&) {
                     CMatrix want = CMatrix::Zero(3, 3);
                     want.topLeftCorner(2, 2).setConstant(0.5);
                     const double res = (qmd::apply(kappa3_example(tol), matrix_unit(3, 2, 2)) - want).cwiseAbs().maxCoeff();
                     return Outcome{"max entry error " + sci(res), res <= 1e-12};
                 }});
    r.push_back({"kappa3.automorphism", "kappa3_example: E fails to preserve M_E but is an automorphism of M_{E^3}",
                 "M_E: invariance fails; M_{E^3}: all pass",
                 [](const Tolerance& tol, std::size_t& w) {
                     const auto ch = kappa3_example(tol);
                     const auto c = chain_of(ch, tol, w);
                     const auto on_m1 = verify_automorphism(ch, c.chain[0], tol);
                     const auto on_inf = verify_automorphism(ch, c.stabilized, tol);
                     return Outcome{"M_E first failure '" + on_m1.failed() + "', M_{E^3} " +
                                        (on_inf.passed() ? "passes" : "fails"),
                                    on_m1.failed() == "invariance" && on_inf.passed()};
                 }});
    r.push_back({"unitary.kappa", "unitary channels (d = 2, 3, 4): whole algebra, kappa 1", "kappa 1, dim M_{E^inf} = d^2",
                 [](const Tolerance& tol, std::size_t& w) {
                     bool ok = true;
                     std::string s;
                     for (Eigen::Index d = 2; d <= 4; ++d) {
                         std::mt19937_64 rng(static_cast<std::uint64_t>(100 + d));
                         const auto c = chain_of(unitary_channel(random_unitary(d, rng), tol), tol, w);
                         ok = ok && c.kappa == 1 && c.stabilized.dimension() == d * d;
                         s += "d=" + std::to_string(d) + ":" + std::to_string(c.kappa) + "/" +
                              std::to_string(c.stabilized.dimension()) + " ";
                     }
                     return Outcome{s, ok};
                 }});
    r.push_back({"pauli.kappa", "pauli_channel(0.4,0.3,0.2,0.1): normal, kappa 1", "normal, kappa 1, M_{E^inf} = M_E",
                 [](const Tolerance& tol, std::size_t& w) {
                     const auto ch = pauli_channel({0.4, 0.3, 0.2, 0.1}, tol);
                     const auto c = chain_of(ch, tol, w);
                     const double nd = normality_defect(superop(ch));
                     return Outcome{"defect " + sci(nd) + ", kappa " + std::to_string(c.kappa),
                                    nd <= 1e-9 && c.kappa == 1 && subspace_equal(c.chain[0], c.stabilized, tol)};
                 }});
    r.push_back({"path.zero", "path_channel(0) = x -> pxp + qxq: kappa 1", "kappa 1",
                 [](const Tolerance& tol, std::size_t& w) {
                     const auto c = chain_of(path_channel(0.0, tol), tol, w);
                     return Outcome{"kappa " + std::to_string(c.kappa), c.kappa == 1};
                 }});
    r.push_back({"path.deformed", "path_channel(t), t in {0.1,0.5,1}: F_{E*E} = diagonals, kappa >= 2",
                 "dim 2 diagonal, kappa >= 2",
                 [](const Tolerance& tol, std::size_t& w) {
                     bool ok = true;
                     std::string s;
                     for (double t : {0.1, 0.5, 1.0}) {
                         const auto ch = path_channel(t, tol);
                         const Superoperator sp = superop(ch);
                         const auto f = fixed_point_algebra(sp.adjoint() * sp, tol);
                         const double res = std::max(f.residual(matrix_unit(2, 0, 0)), f.residual(matrix_unit(2, 1, 1)));
                         const auto c = chain_of(ch, tol, w);
                         ok = ok && f.dimension() == 2 && res <= 1e-8 && c.kappa >= 2;
                         std::ostringstream o;
                         o << "t=" << t << ":" << f.dimension() << "/" << c.kappa << " ";
                         s += o.str();
                     }
                     return Outcome{s, ok};
                 }});
    r.push_back({"path.stabilizing", "path_channel(0.3): M_{E^inf} strictly smaller than M_E", "dim M_{E^inf} < dim M_E",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto ch = path_channel(0.3, tol);
                     const auto a = stabilizing_algebra(ch, tol).dimension();
                     const auto b = mult_domain(ch, tol).dimension();
                     return Outcome{std::to_string(a) + " < " + std::to_string(b), a < b};
                 }});
    r.push_back({"path.image", "path_channel(0.5): E(p) = (1/c^2)[[(1+t)^2,(1+t)t],[(1+t)t,t^2]]", "residual <= 1e-12",
                 [](const Tolerance& tol, std::size_t&) {
                     const double t = 0.5, c2 = (1 + t) * (1 + t) + t * t;
                     CMatrix want(2, 2);
                     want << (1 + t) * (1 + t), (1 + t) * t, (1 + t) * t, t * t;
                     want /= c2;
                     const double res = (qmd::apply(path_channel(t, tol), matrix_unit(2, 0, 0)) - want).norm();
                     return Outcome{"residual " + sci(res), res <= 1e-12};
                 }});
    r.push_back({"projective.reducible", "x -> pxp + qxq: reducible with witness diag(1,0), not primitive",
                 "witness diag(1,0), not primitive",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto ch = projective_channel(tol);
                     const auto v = is_irreducible(ch, tol);
                     const auto p = is_primitive(ch, tol);
                     const double res = v.witness ? (*v.witness - diag({1, 0})).norm() : 1.0;
                     return Outcome{std::string(v.irreducible ? "irreducible" : "reducible") + ", witness error " +
                                        sci(res) + (p.primitive ? ", primitive" : ", not primitive"),
                                    !v.irreducible && res <= 1e-8 && !p.primitive};
                 }});
    r.push_back({"projective.codes", "x -> pxp + qxq: UCC blocks", "[(1,1),(1,1)]",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto c = ucc_codes(projective_channel(tol), tol);
                     std::string s = "[";
                     bool ok = c.codes.size() == 2;
                     for (const auto& b : c.codes) {
                         s += "(" + std::to_string(b.n) + "," + std::to_string(b.m) + ")";
                         ok = ok && b.n == 1 && b.m == 1;
                     }
                     return Outcome{s + "]", ok};
                 }});
    r.push_back({"projective.one_plus_e", "x -> pxp + qxq: (E+E^2)(p) = 2p and (E+E^2)/2 is not primitive",
                 "not primitive",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto ch = projective_channel(tol);
                     const CMatrix p = diag({1, 0});
                     const double res = (qmd::apply(ch, p) + qmd::apply(ch, qmd::apply(ch, p)) - 2.0 * p).norm();
                     const auto v = one_plus_e_primitivity(ch, tol);
                     return Outcome{std::string(v.mixture_primitive ? "primitive" : "not primitive") + ", residual " + sci(res),
                                    !v.mixture_primitive && res <= 1e-12};
                 }});
    r.push_back({"counterexample.flags", "counterexample_phi: unital and not trace preserving", "unital, not TP",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto f = counterexample_phi(tol).flags();
                     return Outcome{std::string(f.unital ? "unital" : "not unital") + ", " + (f.tp ? "TP" : "not TP"),
                                    f.unital && !f.tp};
                 }});
    r.push_back({"counterexample.apply", "counterexample_phi(x) = diag(x11, x22, (x11+x22)/2)", "residual <= 1e-12",
                 [](const Tolerance& tol, std::size_t&) {
                     std::mt19937_64 rng(5);
                     std::normal_distribution<double> g;
                     CMatrix x(3, 3);
                     for (int i = 0; i < 9; ++i) x(i / 3, i % 3) = Complex(g(rng), g(rng));
                     CMatrix want = CMatrix::Zero(3, 3);
                     want(0, 0) = x(0, 0);
                     want(1, 1) = x(1, 1);
                     want(2, 2) = (x(0, 0) + x(1, 1)) / 2.0;
                     const auto ch = counterexample_phi(tol);
                     const double res = std::max((qmd::apply(ch, x) - want).norm(),
                                                 (qmd::apply(ch, diag({1, 1, 0})) - identity(3)).norm());
                     return Outcome{"residual " + sci(res), res <= 1e-12};
                 }});
    r.push_back({"counterexample.domain", "counterexample_phi: diag(1,1,0) in M_Phi but does not commute with k3",
                 "member, |a k3 - k3 a| >= 0.1",
                 [](const Tolerance& tol, std::size_t& w) {
                     const auto ch = counterexample_phi(tol);
                     const auto m = mult_domain_ucp(ch, tol);
                     w += m.warnings().size();
                     const CMatrix a = diag({1, 1, 0});
                     const CMatrix& k3 = ch.kraus()[2];
                     const double comm = (a * k3 - k3 * a).norm();
                     const double res = m.residual(a);
                     return Outcome{"membership residual " + sci(res) + ", commutator " + sci(comm),
                                    res <= 1e-8 && comm >= 0.1};
                 }});
    r.push_back({"density.identity", "density_perturbation(identity_3, 2): trivial multiplicative domain", "C1",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto m = mult_domain_ucp(density_perturbation(KrausChannel::identity(3, tol), 2, tol), tol);
                     return Outcome{"dim " + std::to_string(m.dimension()),
                                    m.dimension() == 1 && m.residual(identity(3)) <= 1e-8};
                 }});
    r.push_back({"density.irreducible", "density_perturbation(x -> pxp + qxq, 2) is irreducible", "irreducible",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto v = is_irreducible(density_perturbation(projective_channel(tol), 2, tol), tol);
                     return Outcome{v.irreducible ? "irreducible" : "reducible", v.irreducible};
                 }});
    r.push_back({"obstruction.fourier3", "fourier_example(3): E*E reducible, witness e1 e1^* maps to a rank-1 projection",
                 "witness e11, rank-1 projection image",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto v = projection_unitary_obstruction(fourier_example(3, tol), tol);
                     if (v.witnesses.empty()) return Outcome{"no witness", false};
                     const auto& w0 = v.witnesses.front();
                     const double res = (w0.p - matrix_unit(3, 0, 0)).norm();
                     return Outcome{"witness error " + sci(res) + ", idempotence " + sci(w0.idempotence_residual),
                                    !v.adjoint_composition_irreducible && res <= 1e-8 && w0.idempotence_residual <= 1e-8 &&
                                        w0.rank_defect <= 1e-8};
                 }});
    r.push_back({"obstruction.kappa3", "kappa3_example: witness diag(0,0,1) with E(p) = (1/2)[[1,1,0],[1,1,0],[0,0,0]]",
                 "witness present, image matches",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto v = projection_unitary_obstruction(kappa3_example(tol), tol);
                     CMatrix want = CMatrix::Zero(3, 3);
                     want.topLeftCorner(2, 2).setConstant(0.5);
                     for (const auto& w : v.witnesses) {
                         if ((w.p - diag({0, 0, 1})).norm() <= 1e-8) {
                             const double res = (w.image - want).norm();
                             return Outcome{"image residual " + sci(res), res <= 1e-8 && w.idempotence_residual <= 1e-8};
                         }
                     }
                     return Outcome{"witness diag(0,0,1) missing", false};
                 }});
    r.push_back({"qec.pauli", "pauli_channel(0.4,0.3,0.2,0.1): every UCS code is UNS", "UCC algebra = UNS algebra",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto v = ucs_vs_uns(pauli_channel({0.4, 0.3, 0.2, 0.1}, tol), tol);
                     return Outcome{"kappa " + std::to_string(v.kappa) + (v.equal ? ", equal" : ", different"),
                                    v.kappa == 1 && v.equal};
                 }});
    r.push_back({"qec.kappa3", "kappa3_example: UNS algebra C1, UCC algebra dim 3, witness diag(0,0,1)",
                 "UNS 1, UCC 3, witness present",
                 [](const Tolerance& tol, std::size_t&) {
                     const auto ch = kappa3_example(tol);
                     const auto uns = uns_codes(ch, tol);
                     const auto ucc = ucc_codes(ch, tol);
                     const auto v = ucs_vs_uns(ch, tol);
                     bool found = false;
                     for (const auto& p : v.projection_witnesses) found = found || (p - diag({0, 0, 1})).norm() <= 1e-8;
                     return Outcome{"UNS " + std::to_string(uns.algebra.dimension()) + ", UCC " +
                                        std::to_string(ucc.algebra.dimension()) + (found ? ", witness found" : ", no witness"),
                                    uns.algebra.dimension() == 1 && ucc.algebra.dimension() == 3 && found};
                 }});
    r.push_back({"qec.recovery", "F_{E* o E} = M_E (fourier_example(3), kappa3_example)", "equal",
                 [](const Tolerance& tol, std::size_t&) {
                     bool ok = true;
                     double res = 0;
                     for (const auto& ch : {fourier_example(3, tol), kappa3_example(tol)}) {
                         const auto rep = unital_recovery_check(ch, adjoint(ch), tol);
                         ok = ok && rep.adjoint_equal && rep.contained;
                         res = std::max(res, rep.adjoint_residual);
                     }
                     return Outcome{"residual " + sci(res), ok};
                 }});
    return r;
}

}  // namespace

std::vector<std::string> reproduce_ids() {
    std::vector<std::string> out;
    for (const auto& r : rows()) out.push_back(r.id);
    return out;
}

std::vector<ReproRow> reproduce(const Tolerance& tol, const std::string& filter) {
    std::vector<ReproRow> out;
    for (const auto& r : rows()) {
        if (!filter.empty() && r.id.find(filter) == std::string::npos) continue;
        ReproRow row{r.id, r.description, r.expected, {}, false, 0};
        try {
            const Outcome o = r.run(tol, row.warnings);
            row.computed = o.computed;
            row.pass = o.pass;
        } catch (const std::exception& e) {
            row.computed = std::string("error: ") + e.what();
            row.pass = false;
        }
        out.push_back(std::move(row));
    }
    return out;
}

json rows_to_json(const std::vector<ReproRow>& rows) {
    json arr = json::array();
    std::size_t passed = 0;
    for (const auto& r : rows) {
        passed += r.pass ? 1 : 0;
        arr.push_back({{"id", r.id},
                       {"description", r.description},
                       {"expected", r.expected},
                       {"computed", r.computed},
                       {"pass", r.pass},
                       {"warnings", r.warnings}});
    }
    return {{"rows", std::move(arr)}, {"passed", passed}, {"total", rows.size()}};
}

std::string rows_to_table(const std::vector<ReproRow>& rows) {
    std::size_t w = 2;
    for (const auto& r : rows) w = std::max(w, r.id.size());
    std::ostringstream o;
    std::size_t passed = 0;
    for (const auto& r : rows) {
        passed += r.pass ? 1 : 0;
        o << (r.pass ? "PASS  " : "FAIL  ") << r.id << std::string(w - r.id.size() + 2, ' ') << "expected: " << r.expected
          << " | computed: " << r.computed;
        if (r.warnings) o << " | warnings: " << r.warnings;
        o << "\n";
    }
    o << passed << "/" << rows.size() << " rows passed\n";
    return o.str();
}

namespace {

void flatten(const json& j, const std::string& path, std::ostringstream& o) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), o);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array()) &&
               !(j.front().is_array() && j.front().size() == 2 && j.front().front().is_number())) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", o);
    } else {
        o << path << ": " << j.dump() << "\n";
    }
}

}  // namespace

std::string render_table(const json& j) {
    std::ostringstream o;
    flatten(j, "", o);
    return o.str();
}

}  // namespace qmd::report
