#pragma once

#include <string>
#include <vector>

#include "qmd/linalg.hpp"

namespace qmd {

/// A subspace of M_d stored as an orthonormal set of vectorized matrices
/// (the columns of a d^2 x k matrix). Fixed-point sets, multiplicative
/// domains and generated algebras are all carried by this type.
class OperatorSubspace {
public:
    OperatorSubspace() = default;

    /// `columns` must already be orthonormal; use orthonormalize() otherwise.
    OperatorSubspace(Eigen::Index dim_ambient, CMatrix columns, bool borderline = false);

    static OperatorSubspace zero(Eigen::Index d);
    static OperatorSubspace full(Eigen::Index d);
    static OperatorSubspace scalars(Eigen::Index d);

    Eigen::Index dim_ambient() const { return d_; }
    Eigen::Index dimension() const { return columns_.cols(); }
    bool empty() const { return columns_.cols() == 0; }

    /// Orthonormal columns, one vectorized basis matrix per column.
    const CMatrix& columns() const { return columns_; }
    CMatrix element(Eigen::Index i) const;
    std::vector<CMatrix> elements() const;

    /// Orthogonal projection of x onto the subspace.
    CMatrix project(const CMatrix& x) const;
    /// |x - project(x)|_HS.
    double residual(const CMatrix& x) const;
    /// Orthogonal projection of x onto the complement.
    CMatrix project_complement(const CMatrix& x) const;

    /// Numerical-rank decision was close to the cutoff somewhere upstream.
    bool borderline() const { return borderline_; }
    void mark_borderline(bool b = true) { borderline_ = borderline_ || b; }

    /// Numerical diagnostics attached by the routine that produced this value.
    const std::vector<std::string>& warnings() const { return warnings_; }
    void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

private:
    Eigen::Index d_ = 0;
    CMatrix columns_;
    bool borderline_ = false;
    std::vector<std::string> warnings_;
};

}  // namespace qmd
