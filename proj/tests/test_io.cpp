#include "helpers.hpp"

#include <hk/io.hpp>
#include <hk/lefschetz.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

using testing::e;

namespace {

bool mentions(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

std::string parse_message(const std::string& text) {
    try {
        (void)hk::parse_json_text(text, "fixture");
    } catch (const hk::ParseError& err) {
        return err.what();
    }
    return {};
}

template <class F>
std::string error_of(F&& f) {
    try {
        f();
    } catch (const hk::ParseError& err) {
        return err.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("syntax errors report line and column") {
    const std::string msg = parse_message("{\n  \"dim\": 4,\n  \"W_I\": ]\n}");
    CHECK(mentions(msg, "fixture"));
    CHECK(mentions(msg, "line 3"));
    CHECK(mentions(msg, "column"));
    CHECK(mentions(error_of([] { (void)hk::read_json_file("/nonexistent/triple.json"); }),
                   "cannot open"));
}

TEST_CASE("canonical float rendering") {
    hk::Json doc = hk::Json::object();
    doc["a"] = 0.1;
    doc["b"] = std::numeric_limits<double>::quiet_NaN();
    doc["c"] = hk::Json::array({1, 2.5});
    doc["d"] = 3;
    const std::string out = hk::canonical_dump(doc);
    CHECK(mentions(out, "\"a\": 0.10000000000000001"));
    CHECK(mentions(out, "\"b\": null"));
    CHECK(mentions(out, "\"c\": [1, 2.5]"));
    CHECK(mentions(out, "\"d\": 3"));
    CHECK(out.back() == '\n');
    CHECK(out.substr(0, 4) == "{\n  ");
}

TEST_CASE("kform loading normalizes index order") {
    const hk::Json doc = hk::parse_json_text(R"({"dim": 4, "degree": 2, "terms": [
        {"indices": [1, 0], "coeff": 2.0},
        {"indices": [2, 3], "coeff": 1.5},
        {"indices": [3, 2], "coeff": 0.5},
        {"indices": [1, 1], "coeff": 9.0}]})");
    const hk::KForm f = hk::kform_from_json(doc);
    CHECK(testing::identical(f, e(4, {0, 1}, -2.0) + e(4, {2, 3}, 1.0)));
    const hk::KForm back = hk::kform_from_json(hk::kform_to_json(f));
    CHECK(testing::identical(back, f));
}

TEST_CASE("kform diagnostics name the field") {
    const auto load = [](const char* text) {
        return error_of([&] { (void)hk::kform_from_json(hk::parse_json_text(text)); });
    };
    CHECK(mentions(load(R"({"dim": 4, "terms": []})"), "degree"));
    CHECK(mentions(load(R"({"dim": 4, "degree": 1, "terms": [{"indices": [4], "coeff": 1}]})"),
                   "indices"));
    CHECK(mentions(load(R"({"dim": 4, "degree": 2, "terms": [{"indices": [0], "coeff": 1}]})"),
                   "expected 2 indices"));
    CHECK(mentions(load(R"({"dim": 4, "degree": 1, "terms": [{"indices": [0], "coeff": "x"}]})"),
                   "coeff"));
}

TEST_CASE("space round trip and revalidation") {
    const hk::HyperKahlerSpace s = hk::random_space(2, 9);
    const hk::HyperKahlerSpace t = hk::space_from_json(hk::space_to_json(s));
    CHECK(t.gram() == s.gram());
    CHECK(t.structure(hk::Axis::K) == s.structure(hk::Axis::K));

    hk::Json bad = hk::space_to_json(hk::standard_space(1));
    bad["I"][0][1] = -0.9;
    CHECK(mentions(error_of([&] { (void)hk::space_from_json(bad); }), "quaternionic"));
    hk::Json short_gram = hk::space_to_json(hk::standard_space(1));
    short_gram["gram"].erase(0);
    CHECK_THROWS_AS((void)hk::space_from_json(short_gram), hk::ParseError);
}

TEST_CASE("triple loading") {
    const hk::SymplecticTriple t =
        hk::triple_from_json(hk::read_json_file(HK_FIXTURE_DIR "/standard_triple.json"));
    const hk::KahlerForms f = hk::kahler_forms(hk::standard_space(1));
    for (hk::Axis a : hk::kAxes) CHECK(t.form(a) == f.matrix(a));
    const hk::SymplecticTriple back = hk::triple_from_json(hk::triple_to_json(t));
    CHECK(back.forms == t.forms);

    const std::string ragged = error_of(
        [] { (void)hk::triple_from_json(hk::read_json_file(HK_FIXTURE_DIR "/ragged_triple.json")); });
    CHECK(mentions(ragged, "triple.W_J[2]"));
    CHECK(mentions(ragged, "ragged"));
    CHECK(mentions(error_of([] { (void)hk::triple_from_json(hk::parse_json_text(R"({"dim": 4})")); }),
                   "W_I"));
}

TEST_CASE("tuple loading") {
    const hk::HolonomyTuple a =
        hk::tuple_from_json(hk::parse_json_text(R"({"group": "su2", "angles": [0.7, 1.3, 2.1, 0.4]})"));
    CHECK(a.size() == 4);
    CHECK(std::abs(a.generators[0](0, 0) - std::polar(1.0, 0.7)) < 1e-15);

    hk::Json explicit_doc = hk::parse_json_text(R"({
      "group_data": {"name": "u1", "matrix_dim": 1, "rank": 1,
                     "basis": [[[[0, 1]]]], "inner_product": [[1]]},
      "generators": [[[[0, 1]]], [[1]], [[[0, -1]]], [[-1]]]})");
    const hk::HolonomyTuple b = hk::tuple_from_json(explicit_doc);
    CHECK(b.group.name == "u1");
    CHECK(b.generators[0](0, 0) == std::complex<double>(0, 1));
    CHECK(b.generators[1](0, 0) == std::complex<double>(1, 0));
    // U(1) is abelian, so the whole algebra is invariant.
    CHECK(hk::invariant_subalgebra(b).dim() == 1);

    CHECK_THROWS_AS((void)hk::tuple_from_json(hk::parse_json_text(R"({"group": "so3", "angles": [0, 0, 0, 0]})")),
                    hk::ParseError);
}

TEST_CASE("report writers") {
    const hk::Json oracle = hk::oracle_to_json(hk::OracleResult{6, 4, 0.37, 1e9, {0, 0, 0, 0, 0.37}, 3, true});
    for (const char* key : {"N", "kernel_dim", "spectral_gap", "eigenvalues_head"}) CHECK(oracle.contains(key));

    const hk::Json lef = hk::lefschetz_report_json(hk::standard_space(1), "standard-1", hk::Axis::J);
    CHECK(lef["space_id"] == "standard-1");
    CHECK(lef["axis"] == "J");
    CHECK(lef["pass"] == true);
    CHECK(lef["residuals"]["key_identity"] == 0.0);
    CHECK(lef["residuals"]["key_identity_n_factorial"] == 0.5);
    CHECK(lef.contains("tolerances"));
}

}
