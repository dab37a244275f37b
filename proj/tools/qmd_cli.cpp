// qmd: multiplicative domains, multiplicative index and peripheral spectra
// of quantum channels given by Kraus operators.
//
// Exit codes: 0 success, 2 invalid input or violated precondition,
// 3 internal consistency failure (two computations disagreed).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qmd/errors.hpp"
#include "qmd/io.hpp"
#include "qmd/report.hpp"

namespace {

using qmd::io::json;

constexpr int kOk = 0;
constexpr int kUserError = 2;
constexpr int kInternalError = 3;

struct Common {
    std::optional<double> rank_eps, eig_eps, residual_eps;
    std::string format = "json";

    qmd::Tolerance tolerance() const {
        qmd::Tolerance t;
        auto pick = [](std::optional<double> flag, const char* env, double& slot) {
            if (flag) {
                slot = *flag;
            } else if (const char* v = std::getenv(env)) {
                try {
                    slot = std::stod(v);
                } catch (const std::exception&) {
                    throw qmd::ParseError(std::string(env) + ": '" + v + "' is not a number");
                }
            }
        };
        pick(rank_eps, "RANK_EPS", t.rank_eps);
        pick(eig_eps, "EIG_EPS", t.eig_eps);
        pick(residual_eps, "RESIDUAL_EPS", t.residual_eps);
        t.validate();
        return t;
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--rank-eps", c.rank_eps, "Relative singular-value cutoff (env RANK_EPS)");
    cmd->add_option("--eig-eps", c.eig_eps, "Eigenvalue comparison tolerance (env EIG_EPS)");
    cmd->add_option("--residual-eps", c.residual_eps, "Identity-check residual tolerance (env RESIDUAL_EPS)");
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "table"}));
}

void emit(const json& j, const Common& c) {
    if (c.format == "table") {
        std::cout << qmd::report::render_table(j);
    } else {
        std::cout << j.dump(2) << "\n";
    }
}

json input_echo(const std::string& arg) { return {{"source", arg}}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiplicative domains and multiplicative index of quantum channels"};
    app.require_subcommand(1);
    Common common;
    std::string input;

    auto* analyze = app.add_subcommand("analyze", "Full report for one channel");
    analyze->add_option("input", input, "Channel file or builtin:<name>/<params>")->required();
    add_common(analyze, common);

    auto* spectrum = app.add_subcommand("spectrum", "Peripheral eigenvalues and eigenvectors");
    bool vectors = false;
    spectrum->add_option("input", input, "Channel file or builtin:<name>/<params>")->required();
    spectrum->add_flag("--vectors", vectors, "Include eigenvectors");
    add_common(spectrum, common);

    auto* qec = app.add_subcommand("qec", "Unitarily correctable and noiseless codes");
    qec->add_option("input", input, "Channel file or builtin:<name>/<params>")->required();
    add_common(qec, common);

    auto* gen = app.add_subcommand("gen", "Emit a channel in the wire format");
    std::string family, spec_file, u_text, out_file;
    qmd::ChannelSpec spec;
    gen->add_option("--family", family, "Channel family");
    gen->add_option("--spec", spec_file, "ChannelSpec JSON file (overrides --family)");
    gen->add_option("--dim", spec.dim, "Dimension");
    gen->add_option("--probs", spec.probs, "Probability vector")->delimiter(',');
    gen->add_option("--seed", spec.seed, "Random seed");
    gen->add_option("--k", spec.k, "Number of mixture components");
    gen->add_option("--t", spec.t, "Path parameter");
    gen->add_option("--u", u_text, "Unitary as a JSON matrix of [re, im] pairs");
    gen->add_option("-o,--output", out_file, "Write to file instead of stdout");
    add_common(gen, common);

    auto* repro = app.add_subcommand("reproduce", "Run the example regression suite");
    std::string row;
    bool list_rows = false;
    repro->add_option("--row", row, "Only rows whose id contains this string");
    repro->add_flag("--list", list_rows, "List row ids and exit");
    add_common(repro, common);

    auto* builtins = app.add_subcommand("builtins", "List builtin channel names");

    CLI11_PARSE(app, argc, argv);

    try {
        const qmd::Tolerance tol = common.tolerance();
        if (*builtins) {
            for (const auto& n : qmd::io::builtin_names()) std::cout << "builtin:" << n << "\n";
            return kOk;
        }
        if (*analyze) {
            emit(qmd::report::analyze(qmd::io::resolve_input(input, tol), tol, input_echo(input)), common);
            return kOk;
        }
        if (*spectrum) {
            emit(qmd::report::spectrum(qmd::io::resolve_input(input, tol), tol, vectors), common);
            return kOk;
        }
        if (*qec) {
            emit(qmd::report::codes(qmd::io::resolve_input(input, tol), tol), common);
            return kOk;
        }
        if (*gen) {
            if (!spec_file.empty()) {
                std::ifstream in(spec_file);
                if (!in) throw qmd::PreconditionError("cannot open spec file '" + spec_file + "'");
                const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
                spec = qmd::io::spec_from_json(qmd::io::parse_text(text, spec_file));
            } else {
                if (family.empty()) throw qmd::PreconditionError("gen: --family or --spec is required");
                spec.family = qmd::family_from_string(family);
                if (!u_text.empty()) spec.u = qmd::io::matrix_from_json(qmd::io::parse_text(u_text, "--u"), "u");
            }
            const std::string text = qmd::io::dump_channel(qmd::build(spec, tol));
            if (out_file.empty()) {
                std::cout << text;
            } else {
                std::ofstream(out_file) << text;
            }
            return kOk;
        }
        if (*repro) {
            if (list_rows) {
                for (const auto& id : qmd::report::reproduce_ids()) std::cout << id << "\n";
                return kOk;
            }
            const auto rows = qmd::report::reproduce(tol, row);
            if (rows.empty()) throw qmd::PreconditionError("reproduce: no row matches '" + row + "'");
            if (common.format == "table") {
                std::cout << qmd::report::rows_to_table(rows);
            } else {
                std::cout << qmd::report::rows_to_json(rows).dump(2) << "\n";
            }
            for (const auto& r : rows) {
                if (!r.pass) return kInternalError;
            }
            return kOk;
        }
    } catch (const qmd::ConsistencyError& e) {
        std::cerr << "consistency error: " << e.what() << "\n";
        return kInternalError;
    } catch (const qmd::NotAnAlgebraError& e) {
        std::cerr << "consistency error: " << e.what() << "\n";
        return kInternalError;
    } catch (const qmd::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kInternalError;
    } catch (const qmd::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUserError;
    } catch (const qmd::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kUserError;
    } catch (const qmd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUserError;
    }
    return kOk;
}
