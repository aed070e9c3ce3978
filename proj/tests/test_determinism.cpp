#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "synlab/experiments.hpp"
#include "synlab/json_io.hpp"
#include "synlab/precision.hpp"
#include "synlab/reduction.hpp"
#include "synlab/rng.hpp"

using namespace synlab;

TEST_CASE("pairwise sums are order-deterministic and accurate") {
    Rng rng(8);
    std::vector<double> values;
    for (int i = 0; i < 10001; ++i) values.push_back(rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-8, 8)));
    const double first = pairwise_sum(values);
    const double second = pairwise_sum(values);
    CHECK(first == second);

    // High-precision reference.
    HighFloat exact(0);
    for (double v : values) exact += HighFloat(v);
    CHECK(std::abs(first - exact.convert_to<double>()) <=
          1e-12 * std::abs(exact.convert_to<double>()) + 1e-12);
}

TEST_CASE("canonical JSON is alphabetical with round-trip floats") {
    io::json doc;
    doc["zeta"] = 0.1;
    doc["alpha"] = 1.0 / 3.0;
    doc["mid"] = {{"b", 2}, {"a", 1}};
    const std::string dumped = io::canonical_dump(doc);
    CHECK(dumped == "{\"alpha\":0.3333333333333333,\"mid\":{\"a\":1,\"b\":2},\"zeta\":0.1}\n");

    // Shortest round-trip decimals parse back to the same bits.
    for (double v : {0.1, 1.0 / 3.0, 6.02e23, -7.25e-12}) {
        const std::string s = io::format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("experiment digests are stable across runs") {
    const io::json inputs = {{"a", 1}, {"b", "two"}};
    CHECK(experiments::digest_inputs(inputs) == experiments::digest_inputs(inputs));
    const io::json other = {{"a", 2}, {"b", "two"}};
    CHECK(experiments::digest_inputs(inputs) != experiments::digest_inputs(other));
}

TEST_CASE("the one-experiment bundle is byte-identical across worker counts") {
    // The cheap gauge experiment exercises the whole report pipeline.
    experiments::RunOptions one;
    one.filter = "gauge";
    one.workers = 1;
    experiments::RunOptions eight = one;
    eight.workers = 8;

    const auto first = experiments::run_all(one);
    const auto second = experiments::run_all(eight);
    REQUIRE(first.size() == 1);
    REQUIRE(second.size() == 1);
    CHECK(io::canonical_dump(experiments::bundle_to_json(first)) ==
          io::canonical_dump(experiments::bundle_to_json(second)));
}

TEST_CASE("precision control") {
    init_precision_from_env();
    CHECK(precision_bits() >= 64);
    set_precision_bits(320);
    CHECK(precision_bits() == 320);
    // 320 bits resolve ~96 decimal digits.
    const HighFloat tiny = HighFloat(1) / boost::multiprecision::pow(HighFloat(10), 90);
    CHECK(HighFloat(1) + tiny != HighFloat(1));
    set_precision_bits(256);
}
