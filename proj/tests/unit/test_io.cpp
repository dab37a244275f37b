#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "qmd/builders.hpp"
#include "qmd/errors.hpp"
#include "qmd/io.hpp"

using namespace qmd;
using io::json;

TEST_CASE("matrix round trip") {
    CMatrix m(2, 3);
    m << Complex(1, 2), Complex(0, -1), Complex(0.1, 0), Complex(-3, 0.5), Complex(0, 0), Complex(1e-300, 7);
    const json j = io::matrix_to_json(m);
    CHECK(j.size() == 2);
    CHECK(j[0].size() == 3);
    CHECK(j[0][1][1].get<double>() == -1.0);
    CHECK((io::matrix_from_json(j, "m") - m).norm() == 0.0);
}

TEST_CASE("channel text is lossless and stable") {
    const auto ch = random_unitary_mixture(3, 2, 77);
    const std::string text = io::dump_channel(ch);
    const auto back = io::channel_from_json(io::parse_text(text, "mem"));
    REQUIRE(back.size() == ch.size());
    for (std::size_t i = 0; i < ch.size(); ++i) CHECK((back.kraus()[i] - ch.kraus()[i]).norm() == 0.0);
    CHECK(io::dump_channel(back) == text);
}

TEST_CASE("parse errors carry a location") {
    try {
        io::parse_text("{\n  \"dim\": 2,\n  \"kraus\": [1,,]\n}", "in.json");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.rfind("in.json:3:", 0) == 0);
    }
}

TEST_CASE("schema violations") {
    CHECK_THROWS_AS(io::channel_from_json(json::array()), ParseError);
    CHECK_THROWS_AS(io::channel_from_json(json{{"dim", 2}}), ParseError);
    CHECK_THROWS_AS(io::channel_from_json(json{{"kraus", json::array()}}), ParseError);
    const json bad_entry = {{"kraus", {{{{1.0, 0.0}, {0.0}}, {{0.0, 0.0}, {1.0, 0.0}}}}}};
    CHECK_THROWS_AS(io::channel_from_json(bad_entry), ParseError);
    json shape = io::channel_to_json(KrausChannel::identity(2));
    shape["dim"] = 3;
    CHECK_THROWS_AS(io::channel_from_json(shape), ParseError);
    json big = io::channel_to_json(KrausChannel::identity(2));
    big["dim"] = 64;
    CHECK_THROWS_AS(io::channel_from_json(big), ResourceError);
    const json ragged = {{"kraus", {{{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}}}}}};
    CHECK_THROWS_AS(io::channel_from_json(ragged), ParseError);
}

TEST_CASE("spec round trip") {
    ChannelSpec s;
    s.family = Family::pauli;
    s.dim = 2;
    s.probs = {0.25, 0.25, 0.25, 0.25};
    s.seed = 9;
    const auto back = io::spec_from_json(io::spec_to_json(s));
    CHECK(back.family == Family::pauli);
    CHECK(back.probs == s.probs);
    CHECK(back.seed == 9);
    CHECK_THROWS_AS(io::spec_from_json(json{{"family", "bogus"}}), ParseError);
    CHECK_THROWS_AS(io::spec_from_json(json{{"dim", 2}}), ParseError);
    CHECK_THROWS_AS(io::spec_from_json(json{{"family", "fourier"}, {"dim", 100}}), ResourceError);
}

TEST_CASE("builtins") {
    CHECK(io::builtin("identity/3").dim() == 3);
    CHECK(io::builtin("fourier/4").dim() == 4);
    CHECK(io::builtin("kappa3").dim() == 3);
    CHECK(io::builtin("path/0.5").is_unital_tp());
    CHECK(io::builtin("pauli/0.4,0.3,0.2,0.1").size() == 4);
    CHECK(io::builtin("random/3/2/7").dim() == 3);
    CHECK(io::builtin("cyclic/3/2/7").dim() == 3);
    CHECK_FALSE(io::builtin("counterexample").flags().tp);
    CHECK_THROWS_AS(io::builtin("nope"), ParseError);
    CHECK_THROWS_AS(io::builtin("fourier"), ParseError);
    CHECK_THROWS_AS(io::builtin("fourier/x"), ParseError);
    CHECK_THROWS_AS(io::builtin("fourier/40"), ResourceError);
    CHECK(io::builtin_names().size() >= 10);
}

TEST_CASE("resolve_input reads channel and spec files") {
    const std::string chan_path = "test_io_channel.json", spec_path = "test_io_spec.json";
    std::ofstream(chan_path) << io::dump_channel(kappa3_example());
    std::ofstream(spec_path) << R"({"family": "fourier", "dim": 3})";
    CHECK(io::resolve_input(chan_path).size() == 3);
    CHECK(io::resolve_input(spec_path).dim() == 3);
    CHECK(io::resolve_input("builtin:kappa3").dim() == 3);
    CHECK_THROWS_AS(io::resolve_input("does_not_exist.json"), PreconditionError);
    std::remove(chan_path.c_str());
    std::remove(spec_path.c_str());
}
