// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qmd/builders.hpp"
#include "qmd/channel.hpp"
#include "qmd/errors.hpp"
#include "qmd/multdom.hpp"
#include "qmd/qec.hpp"
#include "qmd/spectral.hpp"
#include "qmd/staralg.hpp"
#include "qmd/ucp.hpp"
#include "support/population.hpp"

using namespace qmd;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (failures.size() < 5) failures.push_back(what);
        }
    }
};

CMatrix diag(std::initializer_list<double> v) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) m(i, i) = x, ++i;
    return m;
}

OperatorSubspace span_of(const std::vector<CMatrix>& mats, Eigen::Index d) { return orthonormalize(mats, d, {}); }

CMatrix random_matrix(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
    }
    return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Example reproduction.
void criterion_examples(Verdict& v) {
    const Tolerance tol;
    const auto t0 = std::chrono::steady_clock::now();

    {
        const auto ch = fourier_example(3);
        const auto mc = mult_chain(ch);
        v.require(mc.dims == std::vector<Eigen::Index>{3, 1} && mc.kappa == 2, "fourier3 chain");
        const auto diagonals = span_of({diag({1, 0, 0}), diag({0, 1, 0}), diag({0, 0, 1})}, 3);
        v.require(subspace_equal(mc.chain[0], diagonals), "fourier3 M_E = diagonals");
        std::mt19937_64 rng(11);
        double res = 0;
        for (int i = 0; i < 5; ++i) {
            const CMatrix x = random_matrix(3, rng);
            res = std::max(res, (qmd::apply(ch, qmd::apply(ch, x)) - x.trace() / 3.0 * identity(3)).norm());
        }
        v.require(res <= 1e-9, "fourier3 E^2 = depolarizing");
    }
    {
        const auto ch = kappa3_example();
        const auto mc = mult_chain(ch);
        v.require(mc.dims == std::vector<Eigen::Index>{3, 2, 1} && mc.kappa == 3, "kappa3 chain");
        const auto want = span_of({diag({0, 1, 1}), diag({1, 0, 0})}, 3);
        v.require(mc.chain.size() > 1 && subspace_residual(mc.chain[1], want) <= 1e-8, "kappa3 M_{E^2}");
        CMatrix img = CMatrix::Zero(3, 3);
        img.topLeftCorner(2, 2).setConstant(0.5);
        v.require((qmd::apply(ch, diag({0, 0, 1})) - img).cwiseAbs().maxCoeff() <= 1e-12, "kappa3 E(e3e3*)");
    }
    for (int i = 0; i < 5; ++i) {
        const Eigen::Index d = 2 + i % 3;
        std::mt19937_64 rng(300 + static_cast<std::uint64_t>(i));
        const auto mc = mult_chain(unitary_channel(random_unitary(d, rng)));
        v.require(mc.kappa == 1 && mc.stabilized.dimension() == d * d, "unitary seed " + std::to_string(i));
    }
    for (int i = 0; i < 10; ++i) {
        std::mt19937_64 rng(400 + static_cast<std::uint64_t>(i));
        const auto p = random_probabilities(4, rng);
        const auto pc = pauli_channel({p[0], p[1], p[2], p[3]});
        v.require(normality_defect(superop(pc)) <= 1e-9 && mult_chain(pc).kappa == 1, "pauli seed " + std::to_string(i));
        const Eigen::Index d = 2 + i % 3;
        const auto wc = weyl_channel(d, random_probabilities(static_cast<std::size_t>(d * d), rng));
        v.require(normality_defect(superop(wc)) <= 1e-9 && mult_chain(wc).kappa == 1, "weyl seed " + std::to_string(i));
    }
    {
        v.require(mult_chain(path_channel(0.0)).kappa == 1, "path t=0 kappa");
        const auto diagonals = span_of({diag({1, 0}), diag({0, 1})}, 2);
        for (double t : {0.1, 0.5, 1.0}) {
            const auto ch = path_channel(t);
            const auto f = fixed_point_algebra(superop(compose(adjoint(ch), ch)));
            v.require(f.dimension() == 2 && subspace_equal(f, diagonals), "path F_{E*E} t=" + std::to_string(t));
            v.require(mult_chain(ch).kappa >= 2, "path kappa t=" + std::to_string(t));
        }
    }
    {
        const auto phi = counterexample_phi();
        const auto dom = mult_domain_ucp(phi);
        const CMatrix a = diag({1, 1, 0});
        const CMatrix& k3 = phi.kraus()[2];
        v.require(dom.residual(a) <= closure_tolerance(tol), "counterexample membership");
        v.require((a * k3 - k3 * a).norm() >= 0.1, "counterexample commutator");
    }

    const double secs = seconds_since(t0);
    v.require(secs < 5.0, "runtime");
    v.detail << "runtime " << secs << " s";
}

// 2. ker(S^H S - I) against the commutant of {a_i^* a_j}.
void criterion_dual(Verdict& v) {
    const Tolerance tol;
    int agree = 0;
    double worst = 0;
    const auto pop = population::unital_tp();
    for (const auto& m : pop) {
        const auto dom = mult_domain(m.channel, tol);
        std::vector<CMatrix> prods;
        for (const auto& a : m.channel.kraus()) {
            for (const auto& b : m.channel.kraus()) prods.push_back(a.adjoint() * b);
        }
        const auto com = commutant(orthonormalize(prods, m.channel.dim(), tol).elements(), m.channel.dim(), tol);
        const double r = subspace_residual(dom, com);
        worst = std::max(worst, r);
        const bool ok = dom.dimension() == com.dimension() && r <= 1e-8;
        agree += ok ? 1 : 0;
        v.require(ok, m.label);
    }
    v.detail << agree << "/" << pop.size() << " agree, worst residual " << worst;
}

// 3. Chain monotonicity, automorphism on M_{E^inf}, peripheral generation, complement decay.
void criterion_main_theorem(Verdict& v) {
    const Tolerance tol;
    std::size_t decays = 0, slow = 0;
    double min_gap = 1.0;
    for (const auto& m : population::unital_tp()) {
        const auto& ch = m.channel;
        const Eigen::Index d = ch.dim();
        const auto mc = mult_chain(ch, 0, tol);
        for (std::size_t i = 1; i < mc.dims.size(); ++i) v.require(mc.dims[i] <= mc.dims[i - 1], m.label + " dims");

        const auto basis = mc.stabilized.elements();
        const auto adj = adjoint(ch);
        for (const auto& x : basis) {
            v.require((qmd::apply(adj, qmd::apply(ch, x)) - x).norm() <= 1e-8, m.label + " E*E");
            v.require((qmd::apply(ch, qmd::apply(adj, x)) - x).norm() <= 1e-8, m.label + " EE*");
        }
        for (const auto& a : basis) {
            const CMatrix ea = qmd::apply(ch, a);
            for (const auto& b : basis) {
                v.require((qmd::apply(ch, a * b) - ea * qmd::apply(ch, b)).norm() <= 1e-8, m.label + " multiplicative");
            }
        }

        const auto pd = peripheral_eigenpairs(ch, tol);
        const auto gen = generated_algebra(pd.eigenvectors, d, true, tol);
        const auto stab = stabilizing_algebra(ch, tol);
        v.require(stab.dimension() == gen.dimension() && subspace_residual(stab, gen) <= 1e-8,
                  m.label + " peripheral generation");

        std::mt19937_64 rng(0xdecaULL + static_cast<std::uint64_t>(d));
        int stalled = 0;
        double last = 0.0, gap = 1.0;
        for (int i = 0; i < 10; ++i) {
            const CMatrix x = random_matrix(d, rng);
            const auto dr = complement_decay(ch, mc.stabilized, x, 2000, 1e-6, tol);
            ++decays;
            v.require(dr.monotone, m.label + " decay monotone");
            if (!(dr.converged && dr.norms.back() < 1e-6)) {
                ++slow;
                ++stalled;
                last = std::max(last, dr.norms.back());
                gap = dr.spectral_gap;
                min_gap = std::min(min_gap, gap);
            }
        }
        std::ostringstream msg;
        msg << m.label << " decay below 1e-6: " << stalled << "/10 runs reach n = 2000 with norm up to " << last
            << ", spectral gap " << gap;
        v.require(stalled == 0, msg.str());
    }
    v.detail << decays << " decay runs, " << slow << " slow";
    if (slow > 0) v.detail << " (smallest spectral gap " << min_gap << ")";
}

// 4. Irreducibility and primitivity relations.
void criterion_irreducibility(Verdict& v) {
    const Tolerance tol;
    std::size_t irreducible = 0, conditional = 0;
    for (const auto& m : population::unital_tp()) {
        const auto& ch = m.channel;
        const auto ee = prune(compose(adjoint(ch), ch, tol), tol);
        for (const auto& lam : peripheral_eigenpairs(ee, tol).eigenvalues) {
            v.require(std::abs(lam - Complex(1.0)) <= 1e-8, m.label + " E*E peripheral");
        }
        if (is_irreducible(ee, tol).irreducible) {
            ++conditional;
            v.require(is_primitive(ch, tol).primitive, m.label + " E*E irreducible => primitive");
        }
        if (is_irreducible(ch, tol).irreducible) {
            ++irreducible;
            const auto basis = stabilizing_algebra(ch, tol).elements();
            for (const auto& a : basis) {
                for (const auto& b : basis) v.require((a * b - b * a).norm() <= 1e-8, m.label + " commutative");
            }
            v.require(cyclic_group_check(peripheral_eigenpairs(ch, tol), ch.dim(), tol).passed(), m.label + " cyclic");
        }
    }
    std::size_t mixed_irr = 0, mixed_total = 0;
    for (const auto& m : population::mixed_reducibility()) {
        ++mixed_total;
        const auto r = one_plus_e_primitivity(m.channel, tol);
        mixed_irr += r.irreducible ? 1 : 0;
        v.require(r.irreducible == r.mixture_primitive, m.label + " (E+E^2)/2");
    }
    v.require(mixed_irr > 0 && mixed_irr < mixed_total, "mixed population covers both cases");
    v.detail << irreducible << " irreducible, " << conditional << " with irreducible E*E; mixed set " << mixed_irr
             << "/" << mixed_total << " irreducible";
}

// 5. Density perturbations of unital CP maps.
void criterion_density(Verdict& v) {
    const Tolerance tol;
    for (int i = 0; i < 10; ++i) {
        const Eigen::Index d = 2 + i % 2;
        const auto phi = random_ucp(d, 2 + static_cast<std::size_t>(i % 2), 500 + static_cast<std::uint64_t>(i));
        const CMatrix s_phi = superop(phi).matrix();
        double prev = INFINITY;
        for (unsigned n : {2u, 8u, 32u}) {
            const auto pert = density_perturbation(phi, n, tol);
            const auto dom = mult_domain_ucp(pert, tol);
            v.require(dom.dimension() == 1 && dom.residual(identity(d)) <= 1e-8,
                      "seed " + std::to_string(i) + " n=" + std::to_string(n) + " domain");
            const double dist = op_norm(superop(pert).matrix() - s_phi);
            v.require(dist < prev, "seed " + std::to_string(i) + " monotone distance");
            prev = dist;
        }
    }
    v.detail << "10 maps x n in {2, 8, 32}; cb bound at n=32 is " << density_cb_bound(32);
}

// 6. Correctable codes.
void criterion_qec(Verdict& v) {
    const Tolerance tol;
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index d = 2 + i % 3;
        const std::uint64_t seed = 600 + static_cast<std::uint64_t>(i);
        const auto e = i % 2 ? rotated_dephasing(d, 2, seed) : random_unitary_mixture(d, 2, seed);
        const auto r = random_unitary_mixture(d, 1 + static_cast<std::size_t>(i % 3), seed + 100);
        v.require(unital_recovery_check(e, r, tol).contained, "pair " + std::to_string(i) + " containment");
        const auto eq = unital_recovery_check(e, adjoint(e), tol);
        v.require(eq.contained && eq.fixed_dimension == eq.domain_dimension && eq.adjoint_equal,
                  "pair " + std::to_string(i) + " R = E*");
    }
    std::size_t kappa_one = 0, kappa_more = 0;
    auto branch = [&](const std::string& label, const KrausChannel& ch) {
        const auto u = ucs_vs_uns(ch, tol);
        if (u.kappa == 1) {
            ++kappa_one;
            v.require(u.equal && u.projection_witnesses.empty() && !u.element_witness, label + " kappa 1 branch");
        } else {
            ++kappa_more;
            v.require(!u.equal && u.element_witness.has_value(), label + " kappa > 1 branch");
            if (u.element_witness) {
                const auto m2 = mult_chain(ch, 0, tol).chain;
                v.require(mult_domain(ch, tol).residual(*u.element_witness) <= 1e-8 &&
                              m2.size() > 1 && m2[1].residual(*u.element_witness) >= 0.5,
                          label + " element witness");
            }
        }
    };
    for (const auto& m : population::unital_tp()) branch(m.label, m.channel);
    branch("fourier3", fourier_example(3));
    const auto k3 = kappa3_example();
    branch("kappa3", k3);
    bool found = false;
    for (const auto& p : ucs_vs_uns(k3, tol).projection_witnesses) found = found || (p - diag({0, 0, 1})).norm() <= 1e-8;
    v.require(found, "kappa3 projection witness diag(0,0,1)");
    v.detail << "20 recovery pairs; " << kappa_one << " channels with kappa 1, " << kappa_more << " with kappa > 1";
}

// 7. Wedderburn data of every extracted algebra.
void criterion_wedderburn(Verdict& v) {
    const Tolerance tol;
    std::size_t count = 0;
    auto check = [&](const std::string& label, const OperatorSubspace& a) {
        const auto w = wedderburn(a, tol);
        ++count;
        Eigen::Index sq = 0, rank = 0;
        for (const auto& b : w.blocks) sq += b.n * b.n, rank += b.n * b.m;
        v.require(sq == a.dimension(), label + " sum n^2");
        if (w.unital) v.require(rank == a.dim_ambient(), label + " sum n m");
        v.require(w.reconstruction_residual <= 1e-8, label + " reconstruction");
    };
    std::vector<population::Member> extra = {{"fourier3", fourier_example(3)}, {"kappa3", kappa3_example()},
                                             {"path0.5", path_channel(0.5)}, {"projective", projective_channel()}};
    auto all = population::unital_tp();
    all.insert(all.end(), extra.begin(), extra.end());
    for (const auto& m : all) {
        const auto mc = mult_chain(m.channel, 0, tol);
        for (std::size_t i = 0; i < mc.chain.size(); ++i) check(m.label + " M_E^" + std::to_string(i + 1), mc.chain[i]);
        check(m.label + " F_E", fixed_point_algebra(superop(m.channel), tol));
        check(m.label + " UCC", ucc_codes(m.channel, tol).algebra);
    }
    check("counterexample UCP domain", mult_domain_ucp(counterexample_phi(), tol));
    v.detail << count << " algebras";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
        {"1 example reproduction", criterion_examples},
        {"2 dual characterization of M_E", criterion_dual},
        {"3 chain and stabilizing algebra invariants", criterion_main_theorem},
        {"4 irreducibility and primitivity", criterion_irreducibility},
        {"5 density construction", criterion_density},
        {"6 correctable codes", criterion_qec},
        {"7 Wedderburn validity", criterion_wedderburn},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Verdict v;
        try {
            run(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.failures.push_back(std::string("exception: ") + e.what());
        }
        std::printf("%s  criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.str().c_str());
        for (const auto& f : v.failures) std::printf("      - %s\n", f.c_str());
        failed += v.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
