#pragma once

#include <string>
#include <vector>

#include "qmd/io.hpp"

namespace qmd::report {

using io::json;

/// Full analysis: flags, multiplicative chain, stabilizing algebra,
/// peripheral spectrum, verdicts, code structure and warnings. Unital maps
/// that are not trace preserving get the Stinespring-based domain only.
/// Throws PreconditionError for maps that are not unital.
json analyze(const KrausChannel& ch, const Tolerance& tol, const json& input_echo);

/// Peripheral eigenvalues (with multiplicities), cyclic order, optional eigenvectors.
json spectrum(const KrausChannel& ch, const Tolerance& tol, bool with_vectors);

/// UCC / UNS code structure and the kappa = 1 comparison.
json codes(const KrausChannel& ch, const Tolerance& tol);

json tolerance_json(const Tolerance& tol);

struct ReproRow {
    std::string id;
    std::string description;
    std::string expected;
    std::string computed;
    bool pass = false;
    std::size_t warnings = 0;  // numerical warnings raised while computing the row
};

/// Runs the built-in regression suite over the documented example channels.
/// `filter` selects rows whose id contains it (empty runs everything).
std::vector<ReproRow> reproduce(const Tolerance& tol, const std::string& filter = {});
std::vector<std::string> reproduce_ids();

json rows_to_json(const std::vector<ReproRow>& rows);
std::string rows_to_table(const std::vector<ReproRow>& rows);

/// Flattened "path: value" lines for the --format table mode.
std::string render_table(const json& j);

}  // namespace qmd::report
