#include "qmd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qmd/errors.hpp"
#include "qmd/ucp.hpp"

namespace qmd::io {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where + ": expected a number");
    return j.get<double>();
}

Complex complex_at(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [re, im]");
    return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw ParseError("");
        return v;
    } catch (const std::exception&) {
        throw ParseError(what + ": '" + s + "' is not a number");
    }
}

std::uint64_t to_count(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw ParseError("");
        return v;
    } catch (const std::exception&) {
        throw ParseError(what + ": '" + s + "' is not a non-negative integer");
    }
}

}  // namespace

CMatrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array()) throw ParseError(where + "[0]: expected an array");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        const std::string rw = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ParseError(rw + ": expected " + std::to_string(cols) + " entries");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = complex_at(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

json channel_to_json(const KrausChannel& ch) {
    json k = json::array();
    for (const auto& a : ch.kraus()) k.push_back(matrix_to_json(a));
    return {{"dim", ch.dim()}, {"kraus", std::move(k)}};
}

KrausChannel channel_from_json(const json& j, const Tolerance& tol) {
    if (!j.is_object()) throw ParseError("channel: expected a JSON object");
    if (!j.contains("kraus")) throw ParseError("channel: missing field 'kraus'");
    const json& k = j["kraus"];
    if (!k.is_array() || k.empty()) throw ParseError("kraus: expected a non-empty array of matrices");
    std::vector<CMatrix> ops;
    for (std::size_t i = 0; i < k.size(); ++i) {
        ops.push_back(matrix_from_json(k[i], "kraus[" + std::to_string(i) + "]"));
    }
    if (j.contains("dim")) {
        if (!j["dim"].is_number_integer()) throw ParseError("dim: expected an integer");
        const auto d = j["dim"].get<Eigen::Index>();
        if (d > kMaxDim) throw ResourceError("dim " + std::to_string(d) + " exceeds the cap of " + std::to_string(kMaxDim));
        for (std::size_t i = 0; i < ops.size(); ++i) {
            if (ops[i].rows() != d || ops[i].cols() != d) {
                throw ParseError("kraus[" + std::to_string(i) + "]: shape " + std::to_string(ops[i].rows()) + "x" +
                                 std::to_string(ops[i].cols()) + " does not match dim " + std::to_string(d));
            }
        }
    }
    if (ops.front().rows() > kMaxDim) throw ResourceError("dimension exceeds the cap of " + std::to_string(kMaxDim));
    return KrausChannel(std::move(ops), tol);
}

ChannelSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("spec: expected a JSON object");
    if (!j.contains("family") || !j["family"].is_string()) throw ParseError("family: expected a string");
    ChannelSpec s;
    try {
        s.family = family_from_string(j["family"].get<std::string>());
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("family: ") + e.what());
    }
    auto count = [&](const char* key) -> std::uint64_t {
        if (!j[key].is_number_integer() || j[key].get<long long>() < 0) {
            throw ParseError(std::string(key) + ": expected a non-negative integer");
        }
        return j[key].get<std::uint64_t>();
    };
    if (j.contains("dim")) s.dim = static_cast<Eigen::Index>(count("dim"));
    if (j.contains("seed")) s.seed = count("seed");
    if (j.contains("k")) s.k = static_cast<std::size_t>(count("k"));
    if (j.contains("t")) s.t = number_at(j["t"], "t");
    if (j.contains("probs")) {
        if (!j["probs"].is_array()) throw ParseError("probs: expected an array");
        for (std::size_t i = 0; i < j["probs"].size(); ++i) {
            s.probs.push_back(number_at(j["probs"][i], "probs[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("u")) s.u = matrix_from_json(j["u"], "u");
    if (j.contains("kraus")) {
        std::vector<CMatrix> ops;
        for (std::size_t i = 0; i < j["kraus"].size(); ++i) {
            ops.push_back(matrix_from_json(j["kraus"][i], "kraus[" + std::to_string(i) + "]"));
        }
        s.kraus = std::move(ops);
    }
    if (s.dim > kMaxDim) throw ResourceError("dim " + std::to_string(s.dim) + " exceeds the cap of " + std::to_string(kMaxDim));
    return s;
}

json spec_to_json(const ChannelSpec& s) {
    json j = {{"family", to_string(s.family)}};
    if (s.dim > 0) j["dim"] = s.dim;
    if (!s.probs.empty()) j["probs"] = s.probs;
    j["seed"] = s.seed;
    j["k"] = s.k;
    j["t"] = s.t;
    if (s.u) j["u"] = matrix_to_json(*s.u);
    if (s.kraus) {
        json k = json::array();
        for (const auto& a : *s.kraus) k.push_back(matrix_to_json(a));
        j["kraus"] = std::move(k);
    }
    return j;
}

std::string dump_channel(const KrausChannel& ch) {
    std::string out = "{\"dim\": " + std::to_string(ch.dim()) + ", \"kraus\": [";
    for (std::size_t i = 0; i < ch.size(); ++i) {
        const CMatrix& a = ch.kraus()[i];
        out += i ? ",\n  [" : "\n  [";
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            out += r ? ", [" : "[";
            for (Eigen::Index c = 0; c < a.cols(); ++c) {
                if (c) out += ", ";
                out += "[" + fmt17(a(r, c).real()) + ", " + fmt17(a(r, c).imag()) + "]";
            }
            out += "]";
        }
        out += "]";
    }
    out += "\n]}\n";
    return out;
}

json parse_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                         e.what() + ")");
    }
}

std::vector<std::string> builtin_names() {
    return {"identity/<d>",        "fourier/<d>",          "kappa3",
            "projective",          "path/<t>",             "pauli/<pI,pX,pY,pZ>",
            "weyl/<d>/<seed>",     "unitary/<d>/<seed>",   "random/<d>/<k>/<seed>",
            "cyclic/<d>/<k>/<seed>", "dephasing/<d>/<k>/<seed>", "ucp/<d>/<k>/<seed>",
            "counterexample"};
}

KrausChannel builtin(const std::string& name, const Tolerance& tol) {
    const auto parts = split(name, '/');
    if (parts.empty()) throw ParseError("builtin: empty name");
    const std::string& head = parts[0];
    auto need = [&](std::size_t n) {
        if (parts.size() != n + 1) {
            throw ParseError("builtin:" + head + ": expected " + std::to_string(n) + " parameter(s)");
        }
    };
    auto dim = [&](std::size_t i) {
        const auto d = static_cast<Eigen::Index>(to_count(parts[i], "builtin:" + head + " dimension"));
        if (d > kMaxDim) throw ResourceError("dimension " + std::to_string(d) + " exceeds the cap of " + std::to_string(kMaxDim));
        if (d < 1) throw PreconditionError("builtin:" + head + ": dimension must be positive");
        return d;
    };
    auto count = [&](std::size_t i, const char* what) { return to_count(parts[i], "builtin:" + head + " " + what); };

    if (head == "identity") {
        need(1);
        return KrausChannel::identity(dim(1), tol);
    }
    if (head == "fourier") {
        need(1);
        return fourier_example(dim(1), tol);
    }
    if (head == "kappa3") {
        need(0);
        return kappa3_example(tol);
    }
    if (head == "projective") {
        need(0);
        return projective_channel(tol);
    }
    if (head == "counterexample") {
        need(0);
        return counterexample_phi(tol);
    }
    if (head == "path") {
        need(1);
        return path_channel(to_double(parts[1], "builtin:path t"), tol);
    }
    if (head == "pauli") {
        need(1);
        const auto ps = split(parts[1], ',');
        if (ps.size() != 4) throw ParseError("builtin:pauli: expected four comma-separated probabilities");
        std::array<double, 4> p{};
        for (std::size_t i = 0; i < 4; ++i) p[i] = to_double(ps[i], "builtin:pauli probability");
        return pauli_channel(p, tol);
    }
    if (head == "weyl") {
        need(2);
        const auto d = dim(1);
        std::mt19937_64 rng(count(2, "seed"));
        return weyl_channel(d, random_probabilities(static_cast<std::size_t>(d * d), rng), tol);
    }
    if (head == "unitary") {
        need(2);
        const auto d = dim(1);
        std::mt19937_64 rng(count(2, "seed"));
        return unitary_channel(random_unitary(d, rng), tol);
    }
    if (head == "random" || head == "cyclic" || head == "dephasing" || head == "ucp") {
        need(3);
        const auto d = dim(1);
        const auto k = static_cast<std::size_t>(count(2, "k"));
        const auto seed = count(3, "seed");
        if (head == "random") return random_unitary_mixture(d, k, seed, tol);
        if (head == "cyclic") return cyclic_shift_mixture(d, k, seed, tol);
        if (head == "dephasing") return rotated_dephasing(d, k, seed, tol);
        return random_ucp(d, k, seed, tol);
    }
    throw ParseError("unknown builtin '" + head + "'");
}

KrausChannel resolve_input(const std::string& arg, const Tolerance& tol) {
    static const std::string prefix = "builtin:";
    if (arg.rfind(prefix, 0) == 0) return builtin(arg.substr(prefix.size()), tol);
    std::ifstream in(arg);
    if (!in) throw PreconditionError("cannot open input file '" + arg + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const json j = parse_text(buf.str(), arg);
    if (j.is_object() && j.contains("family")) return build(spec_from_json(j), tol);
    return channel_from_json(j, tol);
}

}  // namespace qmd::io
