#pragma once

// Wire format: {"dim": d, "kraus": [[[re, im], ...], ...]} with each matrix
// row-major and every double written with 17 significant digits.

#include <string>

#include <json.hpp>

#include "qmd/builders.hpp"
#include "qmd/channel.hpp"

namespace qmd::io {

using json = nlohmann::json;

json complex_to_json(Complex z);
json matrix_to_json(const CMatrix& m);
/// `where` names the field for ParseError messages.
CMatrix matrix_from_json(const json& j, const std::string& where);

json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const json& j, const Tolerance& tol = {});

ChannelSpec spec_from_json(const json& j);
json spec_to_json(const ChannelSpec& spec);

/// Lossless text form of a channel (17 significant digits per double).
std::string dump_channel(const KrausChannel& ch);

/// Parses JSON text; syntax errors become ParseError with line and column.
json parse_text(const std::string& text, const std::string& source);

/// "builtin:<name>/<params>" or a path to a channel or ChannelSpec JSON file.
KrausChannel resolve_input(const std::string& arg, const Tolerance& tol = {});

/// Channel for a builtin name such as "fourier/3", "kappa3", "path/0.5",
/// "pauli/0.4,0.3,0.2,0.1", "random/3/2/7" (d/k/seed).
KrausChannel builtin(const std::string& name, const Tolerance& tol = {});

/// Names accepted by builtin(), with parameter hints.
std::vector<std::string> builtin_names();

}  // namespace qmd::io
