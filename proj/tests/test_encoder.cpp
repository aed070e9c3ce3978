#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "synlab/encoder.hpp"
#include "synlab/errors.hpp"
#include "synlab/rng.hpp"

using namespace synlab;
using encoder::DiscreteHistory;
using encoder::Quantizer;
using encoder::SegmentAlternative;
using grammar::Grammar;
using grammar::JunkRule;

namespace {

Grammar history_grammar(int digits_per_coordinate) {
    // Payload carries both quantized endpoints: 2 * d * n digits, d = 1.
    Grammar g;
    g.alphabet_size = 4;
    g.headers.push_back({{0}, "t0", 2 * digits_per_coordinate, {2, 3}});
    g.headers.push_back({{1, 0}, "t10", 2 * digits_per_coordinate, {2, 3}});
    g.junk_rule = JunkRule::unconstrained(4);
    return g;
}

DiscreteHistory history_from_nodes(std::vector<Vec> nodes) {
    DiscreteHistory h;
    h.nodes = std::move(nodes);
    h.dimension = static_cast<int>(h.nodes.front().size());
    h.step = 1.0;
    return h;
}

} // namespace

TEST_CASE("discretize samples dyadically") {
    const auto linear = encoder::discretize([](double t) { return Vec{t}; }, 0.0, 1.0, 2);
    REQUIRE(linear.nodes.size() == 5);
    const double expected[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int k = 0; k < 5; ++k) CHECK(linear.nodes[k][0] == doctest::Approx(expected[k]));
    CHECK(linear.step == doctest::Approx(0.25));

    const auto constant = encoder::discretize([](double) { return Vec{0.7}; }, 0.0, 1.0, 3);
    for (const auto& node : constant.nodes) CHECK(node[0] == 0.7);

    const auto square = encoder::discretize([](double t) { return Vec{t * t}; }, 0.0, 1.0, 3);
    REQUIRE(square.nodes.size() == 9);
    for (int k = 0; k <= 8; ++k)
        CHECK(square.nodes[k][0] == doctest::Approx((k / 8.0) * (k / 8.0)));

    CHECK_THROWS_AS(
        encoder::discretize([](double t) { return Vec{1.0 / t}; }, 0.0, 1.0, 1), Error);
    CHECK_THROWS_AS(encoder::discretize([](double t) { return Vec{t}; }, 1.0, 0.0, 2), Error);
}

TEST_CASE("quantizer: fixed point with saturating top edge") {
    const Quantizer q({-1.0}, {1.0}, 3, 2);
    CHECK(q.quantize({-1.0}) == std::vector<int>{0, 0, 0});
    CHECK(q.quantize({1.0}) == std::vector<int>{1, 1, 1}); // edge into the top bin
    CHECK_THROWS_AS(q.quantize({1.5}), Error);
    CHECK_THROWS_AS(q.quantize({-1.0001}), Error);

    // Round trip stays within half a bin.
    Rng rng(42);
    const double bin = 2.0 / 8.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double x = rng.uniform(-1.0, 1.0);
        const Vec back = q.dequantize(q.quantize({x}));
        CHECK(std::abs(back[0] - x) <= bin / 2 + 1e-12);
    }
}

TEST_CASE("encode/decode the quantized history") {
    const int digits = 3;
    const Grammar g = history_grammar(digits);
    const Quantizer q({-1.0}, {1.0}, digits, 2);

    const auto history =
        history_from_nodes({{-0.5}, {-0.1}, {0.2}, {0.8}});
    const auto program = encoder::encode(history, g, q);

    // Single pass decode, then rebuild nodes from the payload digit pairs.
    const auto nodes = encoder::decode_history(g, program, q);
    REQUIRE(nodes.size() == history.nodes.size());
    const double bin = 2.0 / 8.0;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        CHECK(std::abs(nodes[k][0] - history.nodes[k][0]) <= bin / 2 + 1e-12);

    // Re-encoding the quantized nodes is the identity at the program level.
    const auto again = encoder::encode(history_from_nodes(nodes), g, q);
    CHECK(again.symbols == program.symbols);

    // One-segment history: exactly one (header, payload) pair.
    const auto single = encoder::encode(history_from_nodes({{0.0}, {0.5}}), g, q);
    CHECK(single.symbols.size() == 1 + 2 * digits);
}

TEST_CASE("segment classifier picks types by step size") {
    const int digits = 2;
    const Grammar g = history_grammar(digits);
    const Quantizer q({-1.0}, {1.0}, digits, 2);
    const auto classifier = encoder::TypeClassifier::step_thresholds(
        {{"t0", 0.3}, {"t10", 10.0}});

    const auto history = history_from_nodes({{0.0}, {0.1}, {0.9}, {1.0}});
    const auto program = encoder::encode(history, g, q, classifier);
    const auto segments = grammar::decode_stream(g, program.symbols);
    REQUIRE(segments.segments.size() == 3);
    CHECK(segments.segments[0].segment_type == "t0");  // small step
    CHECK(segments.segments[1].segment_type == "t10"); // large step
    CHECK(segments.segments[2].segment_type == "t0");
}

TEST_CASE("raw length is the plain symbol count") {
    const Grammar g = history_grammar(1); // payload length 2

    grammar::SegmentList segments;
    segments.segments = {{"t0", {2, 3}}, {"t0", {2, 2}}, {"t0", {3, 3}}};
    CHECK(encoder::raw_length(g, segments) == 3 * (1 + 2));

    CHECK(encoder::raw_length(encoder::Program{}) == 0);

    // Mixed headers: (1+2) + (2+2) + (2+2).
    grammar::SegmentList mixed;
    mixed.segments = {{"t0", {2, 3}}, {"t10", {2, 2}}, {"t10", {3, 3}}};
    CHECK(encoder::raw_length(g, mixed) == 3 + 4 + 4);
}

TEST_CASE("minimal cost minimizes per segment") {
    // Alternatives priced through per-type offsets on a zero base cost.
    CostSpec spec;
    spec.local_cost = costs::quadratic_kinetic(0.0);
    spec.per_type_offsets = {{"a", 3.0}, {"b", 5.0}, {"c", 2.0}, {"d", 2.0}, {"e", 4.0}};

    const auto history = history_from_nodes({{0.0}, {0.0}, {0.0}, {0.0}});
    const std::vector<std::vector<SegmentAlternative>> alternatives = {
        {{"a", 1}, {"b", 1}}, {{"c", 1}, {"d", 1}}, {{"e", 1}}};

    const auto result = encoder::minimal_cost(history, spec, alternatives);
    CHECK(result.cost == doctest::Approx(3.0 + 2.0 + 4.0));
    CHECK(result.chosen_types == std::vector<std::string>{"a", "c", "e"});

    // Exhaustive oracle over all alternative combinations.
    double oracle = std::numeric_limits<double>::infinity();
    for (const auto& first : alternatives[0])
        for (const auto& second : alternatives[1])
            for (const auto& third : alternatives[2])
                oracle = std::min(oracle, spec.per_type_offsets[first.segment_type] +
                                              spec.per_type_offsets[second.segment_type] +
                                              spec.per_type_offsets[third.segment_type]);
    CHECK(result.cost == doctest::Approx(oracle));

    // Order of alternatives never changes the value.
    auto shuffled = alternatives;
    std::reverse(shuffled[0].begin(), shuffled[0].end());
    std::reverse(shuffled[1].begin(), shuffled[1].end());
    CHECK(encoder::minimal_cost(history, spec, shuffled).cost == doctest::Approx(result.cost));

    // Ties break toward the lexicographically smallest type ("c" before "d").
    CHECK(result.chosen_types[1] == "c");

    CHECK_THROWS_AS(encoder::minimal_cost(history, spec, {{}, {}, {}}), Error);

    // A history without segments has no cost.
    const auto empty = history_from_nodes({{0.0}});
    CHECK_THROWS_AS(encoder::minimal_cost(empty, spec, {}), Error);
}

TEST_CASE("single alternative per segment reduces to a plain sum") {
    CostSpec spec;
    spec.local_cost = costs::quadratic_kinetic(1.0);
    const auto history = history_from_nodes({{0.0}, {1.0}, {3.0}});
    const std::vector<std::vector<SegmentAlternative>> alternatives = {{{"t", 3}}, {{"t", 3}}};
    const auto result = encoder::minimal_cost(history, spec, alternatives);
    CHECK(result.cost == doctest::Approx(1.0 + 4.0));
}

TEST_CASE("cost additivity over concatenation at a shared endpoint") {
    CostSpec spec;
    spec.local_cost = costs::quadratic_kinetic(1.0);
    spec.per_type_offsets = {{"t", 0.25}};
    const std::vector<SegmentAlternative> alt = {{"t", 3}};

    const auto left = history_from_nodes({{0.0}, {0.5}, {1.0}});
    const auto right = history_from_nodes({{1.0}, {1.25}, {0.75}});
    const auto joined = history_from_nodes({{0.0}, {0.5}, {1.0}, {1.25}, {0.75}});

    const double ell_left = encoder::minimal_cost(left, spec, {alt, alt}).cost;
    const double ell_right = encoder::minimal_cost(right, spec, {alt, alt}).cost;
    const double ell_joined = encoder::minimal_cost(joined, spec, {alt, alt, alt, alt}).cost;
    CHECK(ell_joined == doctest::Approx(ell_left + ell_right).epsilon(1e-14));
}

TEST_CASE("linear equivalence between cost and raw length on a corpus") {
    const int digits = 3;
    const Grammar g = history_grammar(digits);
    const Quantizer q({-1.0}, {1.0}, digits, 2);

    CostSpec spec;
    spec.local_cost = costs::quadratic_kinetic(1.0);
    spec.per_type_offsets = {{"t0", 0.5}, {"t10", 0.75}};
    spec.linear_equivalence_constant = 32.0;

    Rng rng(99);
    const std::vector<SegmentAlternative> alt = {{"t0", 1 + 2 * digits},
                                                 {"t10", 2 + 2 * digits}};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec> nodes;
        const int segments = 2 + static_cast<int>(rng.uniform_int(0, 5));
        for (int k = 0; k <= segments; ++k) nodes.push_back({rng.uniform(-1.0, 1.0)});
        const auto history = history_from_nodes(nodes);

        const auto program = encoder::encode(history, g, q);
        const double raw = static_cast<double>(encoder::raw_length(program));
        const double ell =
            encoder::minimal_cost(history, spec,
                                  std::vector<std::vector<SegmentAlternative>>(segments, alt))
                .cost;
        const double constant = spec.linear_equivalence_constant;
        CHECK(ell <= constant * raw);
        CHECK(ell >= raw / constant);
    }
}
