#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmd/channel.hpp"
#include "qmd/staralg.hpp"

namespace qmd {

enum class CodeKind { UCC, UNS, NS };

std::string to_string(CodeKind k);

/// One block M_n kron I_m of the code algebra: an n-dimensional protected
/// subsystem B carried with an m-dimensional gauge factor A.
struct Subsystem {
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    CMatrix isometry;  // d x (n m) columns of the basis change, j-major
    bool nontrivial() const { return n > 1; }
};

struct CodeStructure {
    CodeKind kind = CodeKind::UCC;
    OperatorSubspace algebra;
    StarAlgebraStructure structure;
    std::vector<Subsystem> codes;
};

/// Unitarily correctable codes: the multiplicative domain M_E.
CodeStructure ucc_codes(const KrausChannel& ch, const Tolerance& tol = {});

/// Unitarily noiseless subsystems: M_{E^inf}, checked against the independent
/// intersection of F_{(E*)^n E^n} for n = 1..kappa.
CodeStructure uns_codes(const KrausChannel& ch, const Tolerance& tol = {});

/// Noiseless subsystems: the fixed-point algebra F_E.
CodeStructure ns_codes(const KrausChannel& ch, const Tolerance& tol = {});

struct RecoveryReport {
    Eigen::Index fixed_dimension = 0;   // dim F_{R o E}
    Eigen::Index domain_dimension = 0;  // dim M_E
    double containment_residual = 0.0;
    bool contained = false;
    double adjoint_residual = 0.0;  // F_{E* o E} versus M_E
    bool adjoint_equal = false;
};

RecoveryReport unital_recovery_check(const KrausChannel& ch, const KrausChannel& recovery, const Tolerance& tol = {});

struct UcsUnsVerdict {
    unsigned kappa = 0;
    bool equal = false;  // M_E = M_{E^inf}; expected exactly when kappa = 1
    std::vector<CMatrix> projection_witnesses;  // minimal projections of M_E outside M_{E^2}
    std::optional<CMatrix> element_witness;    // unit element of M_E orthogonal to M_{E^2}
};

UcsUnsVerdict ucs_vs_uns(const KrausChannel& ch, const Tolerance& tol = {});

}  // namespace qmd
