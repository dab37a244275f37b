#include "qmd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmd/errors.hpp"
#include "qmd/kernels.hpp"

namespace qmd {

ChannelFlags verify(const KrausChannel& ch, const Tolerance& tol) {
    const Eigen::Index d = ch.dim();
    CMatrix tp = CMatrix::Zero(d, d);
    CMatrix un = CMatrix::Zero(d, d);
    for (const auto& a : ch.kraus()) {
        tp.noalias() += a.adjoint() * a;
        un.noalias() += a * a.adjoint();
    }
    ChannelFlags f;
    f.tp_residual = (tp - identity(d)).norm();
    f.unital_residual = (un - identity(d)).norm();
    f.tp = f.tp_residual <= tol.residual_eps;
    f.unital = f.unital_residual <= tol.residual_eps;
    return f;
}

KrausChannel::KrausChannel(std::vector<CMatrix> kraus, const Tolerance& tol) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw ShapeError("KrausChannel: at least one Kraus operator required");
    d_ = kraus_.front().rows();
    if (d_ < 1) throw ShapeError("KrausChannel: dimension must be positive");
    if (d_ > kMaxDim) {
        throw ResourceError("KrausChannel: dimension " + std::to_string(d_) + " exceeds cap " +
                            std::to_string(kMaxDim));
    }
    for (const auto& a : kraus_) {
        require_square_finite(a, "KrausChannel");
        if (a.rows() != d_) throw ShapeError("KrausChannel: Kraus operators differ in dimension");
    }
    flags_ = verify(*this, tol);
}

KrausChannel KrausChannel::identity(Eigen::Index d, const Tolerance& tol) {
    return KrausChannel({qmd::identity(d)}, tol);
}

Superoperator::Superoperator(Eigen::Index d, CMatrix matrix) : d_(d), m_(std::move(matrix)) {
    if (m_.rows() != d * d || m_.cols() != d * d) throw ShapeError("Superoperator: matrix is not d^2 x d^2");
    require_finite(m_, "Superoperator");
}

CMatrix Superoperator::apply(const CMatrix& x) const {
    if (x.rows() != d_ || x.cols() != d_) throw ShapeError("Superoperator::apply: dimension mismatch");
    return unvec(m_ * vec(x), d_);
}

Superoperator Superoperator::operator*(const Superoperator& rhs) const {
    if (d_ != rhs.d_) throw ShapeError("Superoperator product: dimension mismatch");
    return {d_, m_ * rhs.m_};
}

ChoiMatrix::ChoiMatrix(Eigen::Index d, CMatrix matrix, const Tolerance& tol) : d_(d), m_(std::move(matrix)) {
    if (m_.rows() != d * d || m_.cols() != d * d) throw ShapeError("ChoiMatrix: matrix is not d^2 x d^2");
    require_finite(m_, "ChoiMatrix");
    const double scale = std::max(1.0, m_.norm());
    if ((m_ - m_.adjoint()).norm() > tol.residual_eps * scale) throw ShapeError("ChoiMatrix: not Hermitian");
}

CMatrix apply(const KrausChannel& ch, const CMatrix& x) {
    if (x.rows() != ch.dim() || x.cols() != ch.dim()) {
        throw ShapeError("apply: input is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                         ", channel acts on d=" + std::to_string(ch.dim()));
    }
    return kernels::apply(ch.kraus(), x);
}

KrausChannel adjoint(const KrausChannel& ch) {
    std::vector<CMatrix> k;
    k.reserve(ch.size());
    for (const auto& a : ch.kraus()) k.push_back(a.adjoint());
    return KrausChannel(std::move(k));
}

Superoperator superop(const KrausChannel& ch) { return {ch.dim(), kernels::superop(ch.kraus())}; }

ChoiMatrix choi(const KrausChannel& ch) { return {ch.dim(), kernels::choi(ch.kraus())}; }

KrausChannel kraus_from_choi(const ChoiMatrix& c, const Tolerance& tol) {
    const auto h = eigh(c.matrix());
    const double lmax = std::max(h.values.maxCoeff(), 0.0);
    if (lmax <= 0.0) throw NotCpError("kraus_from_choi: Choi matrix has no positive eigenvalue");
    if (h.values.minCoeff() < -tol.residual_eps * lmax) {
        throw NotCpError("kraus_from_choi: negative eigenvalue " + std::to_string(h.values.minCoeff()));
    }
    std::vector<CMatrix> k;
    for (Eigen::Index i = h.values.size() - 1; i >= 0; --i) {
        if (h.values(i) <= tol.rank_eps * lmax) break;
        k.push_back(unvec(std::sqrt(h.values(i)) * h.vectors.col(i), c.dim()));
    }
    return KrausChannel(std::move(k), tol);
}

KrausChannel prune(const KrausChannel& ch, const Tolerance& tol) {
    if (ch.size() == 1 && ch.kraus().front().norm() > tol.rank_eps) return ch;
    return kraus_from_choi(choi(ch), tol);
}

KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner, const Tolerance& tol) {
    if (outer.dim() != inner.dim()) throw ShapeError("compose: dimension mismatch");
    return KrausChannel(kernels::pairwise_products(outer.kraus(), inner.kraus()), tol);
}

KrausChannel power(const KrausChannel& ch, unsigned n, const Tolerance& tol) {
    if (n == 0) return KrausChannel::identity(ch.dim(), tol);
    KrausChannel acc = ch;
    for (unsigned i = 1; i < n; ++i) acc = prune(compose(ch, acc, tol), tol);
    return acc;
}

Superoperator power(const Superoperator& s, unsigned n) {
    const Eigen::Index n2 = s.matrix().rows();
    CMatrix result = CMatrix::Identity(n2, n2);
    CMatrix base = s.matrix();
    while (n > 0) {
        if (n & 1U) result = result * base;
        n >>= 1U;
        if (n > 0) base = base * base;
    }
    return {s.dim(), std::move(result)};
}

KrausChannel mixture(const std::vector<std::pair<double, KrausChannel>>& parts, const Tolerance& tol) {
    if (parts.empty()) throw ShapeError("mixture: no components");
    const Eigen::Index d = parts.front().second.dim();
    std::vector<CMatrix> k;
    for (const auto& [w, ch] : parts) {
        if (ch.dim() != d) throw ShapeError("mixture: dimension mismatch");
        if (w < 0.0) throw PreconditionError("mixture: negative weight");
        if (w == 0.0) continue;
        for (const auto& a : ch.kraus()) k.push_back(std::sqrt(w) * a);
    }
    if (k.empty()) throw PreconditionError("mixture: all weights are zero");
    return KrausChannel(std::move(k), tol);
}

double normality_defect(const Superoperator& s) {
    const CMatrix& m = s.matrix();
    return (m.adjoint() * m - m * m.adjoint()).norm();
}

}  // namespace qmd
