#pragma once

#include <vector>

#include "qmd/linalg.hpp"

namespace qmd {

struct ChannelFlags {
    bool cp = true;  // holds by construction for any Kraus list
    bool tp = false;
    bool unital = false;
    double tp_residual = 0.0;      // |sum a_j^* a_j - I|
    double unital_residual = 0.0;  // |sum a_j a_j^* - I|
};

/// A completely positive map x -> sum_j a_j x a_j^* on M_d.
/// Immutable; the structural flags are computed once on construction.
class KrausChannel {
public:
    /// Throws ShapeError for an empty list, non-square or mismatched operators
    /// and non-finite entries; ResourceError for d above kMaxDim.
    explicit KrausChannel(std::vector<CMatrix> kraus, const Tolerance& tol = {});

    static KrausChannel identity(Eigen::Index d, const Tolerance& tol = {});

    Eigen::Index dim() const { return d_; }
    std::size_t size() const { return kraus_.size(); }
    const std::vector<CMatrix>& kraus() const { return kraus_; }
    const ChannelFlags& flags() const { return flags_; }
    bool is_unital_tp() const { return flags_.tp && flags_.unital; }

private:
    Eigen::Index d_ = 0;
    std::vector<CMatrix> kraus_;
    ChannelFlags flags_;
};

/// The d^2 x d^2 matrix of a linear map on M_d under column stacking.
class Superoperator {
public:
    Superoperator(Eigen::Index d, CMatrix matrix);

    Eigen::Index dim() const { return d_; }
    const CMatrix& matrix() const { return m_; }

    CMatrix apply(const CMatrix& x) const;
    Superoperator adjoint() const { return {d_, m_.adjoint()}; }
    Superoperator operator*(const Superoperator& rhs) const;

private:
    Eigen::Index d_ = 0;
    CMatrix m_;
};

class ChoiMatrix {
public:
    ChoiMatrix(Eigen::Index d, CMatrix matrix, const Tolerance& tol = {});

    Eigen::Index dim() const { return d_; }
    const CMatrix& matrix() const { return m_; }

private:
    Eigen::Index d_ = 0;
    CMatrix m_;
};

CMatrix apply(const KrausChannel& ch, const CMatrix& x);

/// Kraus list {a_j^*}: the Hilbert-Schmidt adjoint.
KrausChannel adjoint(const KrausChannel& ch);

/// S = sum_j conj(a_j) kron a_j.
Superoperator superop(const KrausChannel& ch);

/// C = sum_j vec(a_j) vec(a_j)^H.
ChoiMatrix choi(const KrausChannel& ch);

/// Kraus operators unvec(sqrt(l_k) v_k) from the eigendecomposition of C,
/// keeping l_k > rank_eps * l_max. Throws NotCpError on a negative
/// eigenvalue below -residual_eps * l_max.
KrausChannel kraus_from_choi(const ChoiMatrix& c, const Tolerance& tol = {});

/// outer o inner, Kraus list {b_i a_j}.
KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner, const Tolerance& tol = {});

/// Re-extracts a minimal Kraus list through the Choi matrix (count <= d^2).
KrausChannel prune(const KrausChannel& ch, const Tolerance& tol = {});

/// ch^n by Kraus composition, pruned after every step. n = 0 gives the identity channel.
KrausChannel power(const KrausChannel& ch, unsigned n, const Tolerance& tol = {});

/// S^n by repeated squaring (spectral uses). n = 0 gives the identity.
Superoperator power(const Superoperator& s, unsigned n);

ChannelFlags verify(const KrausChannel& ch, const Tolerance& tol = {});

/// Convex combination sum_k w_k ch_k of channels of equal dimension.
KrausChannel mixture(const std::vector<std::pair<double, KrausChannel>>& parts, const Tolerance& tol = {});

/// |S^H S - S S^H| (Frobenius), the normality defect of a channel.
double normality_defect(const Superoperator& s);

}  // namespace qmd
