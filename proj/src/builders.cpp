#include "qmd/builders.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "qmd/errors.hpp"

namespace qmd {

using namespace std::complex_literals;

CMatrix pauli_i() { return CMatrix::Identity(2, 2); }

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << 0.0, -1.0i, 1.0i, 0.0;
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

namespace {

void check_probabilities(const std::vector<double>& p, std::size_t expected, const Tolerance& tol, const char* who) {
    if (p.size() != expected) {
        throw PreconditionError(std::string(who) + ": expected " + std::to_string(expected) + " probabilities, got " +
                                std::to_string(p.size()));
    }
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw PreconditionError(std::string(who) + ": negative probability");
        sum += x;
    }
    if (std::abs(sum - 1.0) > tol.residual_eps) {
        throw PreconditionError(std::string(who) + ": probabilities sum to " + std::to_string(sum));
    }
}

KrausChannel weighted(const std::vector<double>& p, const std::vector<CMatrix>& ops, const Tolerance& tol) {
    std::vector<CMatrix> k;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (p[i] > 0.0) k.push_back(std::sqrt(p[i]) * ops[i]);
    }
    return KrausChannel(std::move(k), tol);
}

Complex root_of_unity(Eigen::Index d, Eigen::Index power) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(power) / static_cast<double>(d);
    return {std::cos(angle), std::sin(angle)};
}

CMatrix random_diagonal_unitary(Eigen::Index d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = std::polar(1.0, phase(rng));
    return m;
}

CMatrix shift_operator(Eigen::Index d) {
    CMatrix s = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) s((i + 1) % d, i) = 1.0;
    return s;
}

}  // namespace

KrausChannel unitary_channel(const CMatrix& u, const Tolerance& tol) {
    require_square_finite(u, "unitary_channel");
    const double r = (u.adjoint() * u - identity(u.rows())).norm();
    if (r > tol.residual_eps) throw PreconditionError("unitary_channel: |u^*u - I| = " + std::to_string(r));
    return KrausChannel({u}, tol);
}

KrausChannel pauli_channel(const std::array<double, 4>& p, const Tolerance& tol) {
    const std::vector<double> pv(p.begin(), p.end());
    check_probabilities(pv, 4, tol, "pauli_channel");
    return weighted(pv, {pauli_i(), pauli_x(), pauli_y(), pauli_z()}, tol);
}

CMatrix weyl_operator(Eigen::Index d, Eigen::Index j, Eigen::Index k) {
    CMatrix clock = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) clock(i, i) = root_of_unity(d, i * k);
    CMatrix shift = CMatrix::Identity(d, d);
    const CMatrix s = shift_operator(d);
    for (Eigen::Index i = 0; i < j; ++i) shift = s * shift;
    return shift * clock;
}

KrausChannel weyl_channel(Eigen::Index d, const std::vector<double>& probs, const Tolerance& tol) {
    if (d < 1) throw PreconditionError("weyl_channel: d must be positive");
    check_probabilities(probs, static_cast<std::size_t>(d * d), tol, "weyl_channel");
    std::vector<CMatrix> ops;
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) ops.push_back(weyl_operator(d, j, k));
    }
    return weighted(probs, ops, tol);
}

KrausChannel fourier_example(Eigen::Index d, const Tolerance& tol) {
    if (d < 2) throw PreconditionError("fourier_example: d must be at least 2");
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<CMatrix> k;
    for (Eigen::Index col = 0; col < d; ++col) {
        CMatrix s = CMatrix::Zero(d, d);
        for (Eigen::Index row = 0; row < d; ++row) s(row, col) = norm * root_of_unity(d, row * col);
        k.push_back(std::move(s));
    }
    return KrausChannel(std::move(k), tol);
}

KrausChannel kappa3_example(const Tolerance& tol) {
    const double h = 1.0 / std::sqrt(2.0);
    CMatrix s1 = CMatrix::Zero(3, 3), s2 = CMatrix::Zero(3, 3), s3 = CMatrix::Zero(3, 3);
    s1(0, 2) = h;
    s1(1, 2) = h;
    s2(0, 1) = h;
    s2(1, 1) = -h;
    s3(2, 0) = 1.0;
    return KrausChannel({s1, s2, s3}, tol);
}

KrausChannel projective_channel(const Tolerance& tol) { return path_channel(0.0, tol); }

KrausChannel path_channel(double t, const Tolerance& tol) {
    if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("path_channel: t must lie in [0, 1]");
    const double c = std::sqrt((1.0 + t) * (1.0 + t) + t * t);
    CMatrix p(2, 2), q(2, 2);
    p << 1.0 + t, 0.0, t, 0.0;
    q << 0.0, -t, 0.0, 1.0 + t;
    return KrausChannel({p / c, q / c}, tol);
}

CMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix z(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) z(i, j) = Complex(g(rng), g(rng));
    }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
        const double a = std::abs(r(i, i));
        if (a > 0.0) q.col(i) *= r(i, i) / a;
    }
    return q;
}

std::vector<double> random_probabilities(std::size_t k, std::mt19937_64& rng) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(k);
    for (auto& x : p) x = e(rng);
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= s;
    return p;
}

KrausChannel random_unitary_mixture(Eigen::Index d, std::size_t k, std::uint64_t seed, const Tolerance& tol) {
    if (k < 1) throw PreconditionError("random_unitary_mixture: k must be at least 1");
    std::mt19937_64 rng(seed);
    std::vector<CMatrix> us;
    for (std::size_t i = 0; i < k; ++i) us.push_back(random_unitary(d, rng));
    if (k == 1) return KrausChannel(std::move(us), tol);
    return weighted(random_probabilities(k, rng), us, tol);
}

KrausChannel random_block_mixture(const std::vector<Eigen::Index>& sizes, std::size_t k, std::uint64_t seed,
                                  const Tolerance& tol) {
    if (k < 1 || sizes.empty()) throw PreconditionError("random_block_mixture: need k >= 1 and at least one block");
    const Eigen::Index d = std::accumulate(sizes.begin(), sizes.end(), Eigen::Index{0});
    std::mt19937_64 rng(seed);
    std::vector<CMatrix> us;
    for (std::size_t i = 0; i < k; ++i) {
        CMatrix u = CMatrix::Zero(d, d);
        Eigen::Index off = 0;
        for (auto s : sizes) {
            u.block(off, off, s, s) = random_unitary(s, rng);
            off += s;
        }
        us.push_back(std::move(u));
    }
    return weighted(random_probabilities(k, rng), us, tol);
}

KrausChannel rotated_dephasing(Eigen::Index d, std::size_t k, std::uint64_t seed, const Tolerance& tol) {
    if (k < 2) throw PreconditionError("rotated_dephasing: k must be at least 2");
    std::mt19937_64 rng(seed);
    const CMatrix v = random_unitary(d, rng);
    std::vector<CMatrix> us;
    for (std::size_t i = 0; i < k; ++i) us.push_back(v * random_diagonal_unitary(d, rng));
    return weighted(random_probabilities(k, rng), us, tol);
}

KrausChannel cyclic_shift_mixture(Eigen::Index d, std::size_t k, std::uint64_t seed, const Tolerance& tol) {
    if (k < 2 || d < 2) throw PreconditionError("cyclic_shift_mixture: need d >= 2 and k >= 2");
    std::mt19937_64 rng(seed);
    const CMatrix s = shift_operator(d);
    std::vector<CMatrix> us;
    for (std::size_t i = 0; i < k; ++i) us.push_back(s * random_diagonal_unitary(d, rng));
    return weighted(random_probabilities(k, rng), us, tol);
}

KrausChannel random_ucp(Eigen::Index d, std::size_t k, std::uint64_t seed, const Tolerance& tol) {
    if (k < 1) throw PreconditionError("random_ucp: k must be at least 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<CMatrix> gs;
    CMatrix t = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < k; ++i) {
        CMatrix z(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) z(r, c) = Complex(g(rng), g(rng));
        }
        t += z * z.adjoint();
        gs.push_back(std::move(z));
    }
    const auto e = eigh(t);
    if (e.values.minCoeff() <= 0.0) throw NumericError("random_ucp: singular normalization");
    const CMatrix inv_sqrt =
        e.vectors * e.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * e.vectors.adjoint();
    for (auto& z : gs) z = inv_sqrt * z;
    return KrausChannel(std::move(gs), tol);
}

// ---------------------------------------------------------------------------

std::string to_string(Family f) {
    switch (f) {
        case Family::unitary: return "unitary";
        case Family::pauli: return "pauli";
        case Family::weyl: return "weyl";
        case Family::fourier: return "fourier";
        case Family::kappa3: return "kappa3";
        case Family::projective: return "projective";
        case Family::path_t: return "path_t";
        case Family::random_unitary_mixture: return "random_unitary_mixture";
        case Family::cyclic_shift: return "cyclic_shift";
        case Family::custom: return "custom";
    }
    return "custom";
}

Family family_from_string(const std::string& s) {
    for (auto f : {Family::unitary, Family::pauli, Family::weyl, Family::fourier, Family::kappa3, Family::projective,
                   Family::path_t, Family::random_unitary_mixture, Family::cyclic_shift, Family::custom}) {
        if (to_string(f) == s) return f;
    }
    throw PreconditionError("unknown channel family '" + s + "'");
}

void ChannelSpec::validate(const Tolerance& tol) const {
    switch (family) {
        case Family::unitary:
            if (!u) throw PreconditionError("unitary family requires 'u'");
            break;
        case Family::pauli: check_probabilities(probs, 4, tol, "pauli"); break;
        case Family::weyl:
            if (dim < 1) throw PreconditionError("weyl family requires dim >= 1");
            check_probabilities(probs, static_cast<std::size_t>(dim * dim), tol, "weyl");
            break;
        case Family::fourier:
            if (dim < 2) throw PreconditionError("fourier family requires dim >= 2");
            break;
        case Family::path_t:
            if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("path_t family requires t in [0, 1]");
            break;
        case Family::random_unitary_mixture:
        case Family::cyclic_shift:
            if (dim < 1 || k < 1) throw PreconditionError("random families require dim >= 1 and k >= 1");
            break;
        case Family::custom:
            if (!kraus || kraus->empty()) throw PreconditionError("custom family requires a Kraus list");
            break;
        case Family::kappa3:
        case Family::projective: break;
    }
    if (dim > kMaxDim) throw ResourceError("dimension " + std::to_string(dim) + " exceeds cap");
}

KrausChannel build(const ChannelSpec& spec, const Tolerance& tol) {
    spec.validate(tol);
    switch (spec.family) {
        case Family::unitary: return unitary_channel(*spec.u, tol);
        case Family::pauli: return pauli_channel({spec.probs[0], spec.probs[1], spec.probs[2], spec.probs[3]}, tol);
        case Family::weyl: return weyl_channel(spec.dim, spec.probs, tol);
        case Family::fourier: return fourier_example(spec.dim, tol);
        case Family::kappa3: return kappa3_example(tol);
        case Family::projective: return projective_channel(tol);
        case Family::path_t: return path_channel(spec.t, tol);
        case Family::random_unitary_mixture: return random_unitary_mixture(spec.dim, spec.k, spec.seed, tol);
        case Family::cyclic_shift: return cyclic_shift_mixture(spec.dim, spec.k, spec.seed, tol);
        case Family::custom: return KrausChannel(*spec.kraus, tol);
    }
    throw PreconditionError("unhandled family");
}

}  // namespace qmd
