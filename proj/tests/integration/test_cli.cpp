// End-to-end runs of the qmd executable: exit codes, round trips, determinism.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run qmd(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + QMD_CLI_PATH + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), static_cast<int>(buf.size()), p)) r.out += buf.data();
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json parse(const Run& r) {
    INFO(r.out);
    return nlohmann::json::parse(r.out);
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("gen then analyze round trip") {
    const auto g = qmd("gen --family random_unitary_mixture --dim 3 --k 2 --seed 5 -o cli_rt.json");
    REQUIRE(g.code == 0);
    const auto a = qmd("analyze cli_rt.json");
    REQUIRE(a.code == 0);
    const auto j = parse(a);
    CHECK(j["dim"] == 3);
    CHECK(j["flags"]["unital"] == true);
    CHECK(j["mult_chain"]["kappa"].get<int>() >= 1);
    CHECK(j["input"]["source"] == "cli_rt.json");
}

TEST_CASE("gen is byte-for-byte deterministic") {
    const auto a = qmd("gen --family cyclic_shift --dim 4 --k 2 --seed 9");
    const auto b = qmd("gen --family cyclic_shift --dim 4 --k 2 --seed 9");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto c = qmd("gen --family cyclic_shift --dim 4 --k 2 --seed 10");
    CHECK(a.out != c.out);
}

TEST_CASE("gen from a spec file and with an explicit unitary") {
    write("cli_spec.json", R"({"family": "pauli", "dim": 2, "probs": [0.4, 0.3, 0.2, 0.1]})");
    const auto g = qmd("gen --spec cli_spec.json -o cli_pauli.json");
    REQUIRE(g.code == 0);
    const auto q = parse(qmd("qec cli_pauli.json"));
    CHECK(q["kappa"] == 1);
    CHECK(q["ucc_equals_uns"] == true);
    // A spec file is also accepted directly as analysis input.
    CHECK(parse(qmd("analyze cli_spec.json"))["verdicts"]["normal"] == true);

    const auto u = qmd(R"(gen --family unitary --dim 2 --u "[[[0,0],[1,0]],[[1,0],[0,0]]]")");
    REQUIRE(u.code == 0);
    CHECK(nlohmann::json::parse(u.out)["kraus"].size() == 1);
}

TEST_CASE("builtin inputs and output formats") {
    const auto j = parse(qmd("analyze builtin:fourier/3"));
    CHECK(j["mult_chain"]["dims"] == nlohmann::json::array({3, 1}));
    const auto t = qmd("analyze builtin:kappa3 --format table");
    REQUIRE(t.code == 0);
    CHECK(t.out.find("mult_chain.kappa: 3") != std::string::npos);
    const auto s = parse(qmd("spectrum builtin:cyclic/3/2/7 --vectors"));
    CHECK(s["group_order"] == 3);
    CHECK(s["eigenvectors"].size() == 3);
    const auto b = qmd("builtins");
    CHECK(b.code == 0);
    CHECK(b.out.find("builtin:kappa3") != std::string::npos);
}

TEST_CASE("unital but not trace preserving input takes the dilation path") {
    const auto j = parse(qmd("analyze builtin:counterexample"));
    CHECK(j["analysis"] == "ucp");
    CHECK(j["multiplicative_domain"]["dimension"] == 2);
}

TEST_CASE("exit code 2 for invalid input") {
    write("cli_bad.json", "{\n  \"dim\": 2,\n  \"kraus\": [,]\n}\n");
    const auto bad = qmd("analyze cli_bad.json");
    CHECK(bad.code == 2);
    CHECK(bad.out.find("cli_bad.json:3:") != std::string::npos);

    write("cli_amp.json", R"({"dim": 2, "kraus": [[[[1,0],[0,0]],[[0,0],[0.6,0]]], [[[0,0],[0.8,0]],[[0,0],[0,0]]]]})");
    CHECK(qmd("analyze cli_amp.json").code == 2);
    CHECK(qmd("analyze builtin:fourier/40").code == 2);
    CHECK(qmd("analyze builtin:nope").code == 2);
    CHECK(qmd("analyze missing_file.json").code == 2);
    CHECK(qmd("gen --family pauli --dim 2 --probs 0.5,0.5,0.5,0").code == 2);
    CHECK(qmd("analyze builtin:kappa3", "RANK_EPS=abc").code == 2);
    CHECK(qmd("analyze builtin:kappa3 --rank-eps -1").code == 2);
    CHECK(qmd("reproduce --row no-such-row").code == 2);
}

TEST_CASE("tolerance flags override the environment") {
    const auto env = parse(qmd("analyze builtin:kappa3", "RANK_EPS=1e-7"));
    CHECK(env["tolerance"]["rank_eps"].get<double>() == doctest::Approx(1e-7));
    const auto flag = parse(qmd("analyze builtin:kappa3 --rank-eps 1e-6", "RANK_EPS=1e-7"));
    CHECK(flag["tolerance"]["rank_eps"].get<double>() == doctest::Approx(1e-6));
}

TEST_CASE("reproduce") {
    const auto r = qmd("reproduce --format table");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    const auto j = parse(qmd("reproduce --row kappa3"));
    CHECK(j["total"].get<int>() >= 5);
    CHECK(j["passed"] == j["total"]);
    for (const auto& row : j["rows"]) CHECK(row["pass"] == true);
    const auto stressed = qmd("reproduce --format table --rank-eps 1e-2");
    CHECK(stressed.out.find("warnings:") != std::string::npos);
    const auto list = qmd("reproduce --list");
    CHECK(list.out.find("fourier3.chain") != std::string::npos);
}
