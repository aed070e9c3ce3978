#include "synlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "synlab/cosmo.hpp"
#include "synlab/encoder.hpp"
#include "synlab/errors.hpp"
#include "synlab/gauge.hpp"
#include "synlab/grammar.hpp"
#include "synlab/json_io.hpp"
#include "synlab/pathint.hpp"
#include "synlab/redundancy.hpp"
#include "synlab/rng.hpp"
#include "synlab/variational.hpp"

namespace synlab::experiments {

namespace {

using grammar::Grammar;
using grammar::HeaderDef;
using grammar::JunkRule;
using grammar::SymbolString;

void check(ExperimentReport& report, const std::string& name, bool pass,
           const std::string& detail) {
    report.assertions.push_back({name, pass, detail});
}

std::string fmt(double v) { return io::format_double(v); }

// ---------------------------------------------------------------------------
// prefix-free-necessity: random header sets decode uniquely exactly when they
// are prefix-free and boundary-delimited; injected violations must be caught.

struct GeneratedGrammar {
    Grammar g;
    enum class Kind { Clean, PrefixViolation, EmbeddingViolation } kind;
};

GeneratedGrammar generate_header_set(Rng& rng, int which) {
    const auto kind = static_cast<GeneratedGrammar::Kind>(which % 3 == 2 ? 2 : which % 2);
    Grammar g;
    g.alphabet_size = 3 + static_cast<int>(rng.uniform_int(0, 2)); // 3..5

    // Prefix-free set over {0,1} grown as binary-tree leaves.
    std::vector<SymbolString> leaves = {{0}, {1}};
    const int splits = static_cast<int>(rng.uniform_int(0, 2));
    for (int s = 0; s < splits; ++s) {
        const std::size_t pick = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(leaves.size()) - 1));
        SymbolString w = leaves[pick];
        leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(pick));
        SymbolString w0 = w, w1 = w;
        w0.push_back(0);
        w1.push_back(1);
        leaves.push_back(w0);
        leaves.push_back(w1);
    }
    // Payload symbols live above the header sub-alphabet, so headers can
    // never occur inside payloads.
    std::vector<int> payload_alphabet;
    for (int s = 2; s < g.alphabet_size; ++s) payload_alphabet.push_back(s);

    for (std::size_t i = 0; i < leaves.size(); ++i) {
        HeaderDef h;
        h.codeword = leaves[i];
        h.segment_type = "t" + std::to_string(i);
        h.payload_length = 1 + static_cast<int>(rng.uniform_int(0, 3));
        h.payload_alphabet = payload_alphabet;
        g.headers.push_back(std::move(h));
    }
    g.junk_rule = JunkRule::unconstrained(g.alphabet_size);

    if (kind == GeneratedGrammar::Kind::PrefixViolation) {
        // Extend one header by a payload symbol; lengths are arranged so the
        // two parses of the witness string consume the same symbols.
        const auto& base = g.headers[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(g.headers.size()) - 1))];
        HeaderDef longer;
        longer.codeword = base.codeword;
        longer.codeword.push_back(payload_alphabet.front());
        longer.segment_type = "tviolation";
        longer.payload_length = base.payload_length - 1;
        longer.payload_alphabet = payload_alphabet;
        g.headers.push_back(std::move(longer));
    } else if (kind == GeneratedGrammar::Kind::EmbeddingViolation) {
        // Let one payload alphabet swallow the symbols of another header.
        auto& victim = g.headers[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(g.headers.size()) - 1))];
        victim.payload_alphabet.push_back(0);
        victim.payload_alphabet.push_back(1);
        std::size_t shortest = 0;
        for (std::size_t i = 0; i < g.headers.size(); ++i)
            if (g.headers[i].codeword.size() < g.headers[shortest].codeword.size()) shortest = i;
        victim.payload_length =
            std::max(victim.payload_length, static_cast<int>(g.headers[shortest].codeword.size()));
    }
    return {std::move(g), kind};
}

SymbolString random_program(Rng& rng, const Grammar& g, int segments) {
    SymbolString program;
    for (int s = 0; s < segments; ++s) {
        const auto& h = g.headers[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(g.headers.size()) - 1))];
        program.insert(program.end(), h.codeword.begin(), h.codeword.end());
        for (int i = 0; i < h.payload_length; ++i)
            program.push_back(h.payload_alphabet[static_cast<std::size_t>(rng.uniform_int(
                0, static_cast<std::int64_t>(h.payload_alphabet.size()) - 1))]);
    }
    return program;
}

ExperimentReport run_prefix_free_necessity(const RunOptions&) {
    ExperimentReport report;
    report.name = "prefix-free-necessity";
    const json inputs = {{"header_sets", 200}, {"programs_per_set", 5}, {"seed", 61001}};
    report.inputs_digest = digest_inputs(inputs);

    Rng rng(61001);
    int clean = 0, prefix_violations = 0, embeddings = 0;
    bool unique_ok = true, roundtrip_ok = true, lookahead_ok = true;
    bool ambiguity_ok = true, embedding_ok = true, kraft_ok = true;

    for (int i = 0; i < 200; ++i) {
        const GeneratedGrammar made = generate_header_set(rng, i);
        const auto validation = grammar::validate(made.g);
        switch (made.kind) {
            case GeneratedGrammar::Kind::Clean: {
                ++clean;
                if (!validation.ok) unique_ok = false;
                if (validation.kraft.sum > 1) kraft_ok = false;
                for (int p = 0; p < 5; ++p) {
                    const SymbolString program = random_program(rng, made.g, 3 + (p % 4));
                    grammar::SymbolSource source(program);
                    const auto segments = grammar::decode_stream(made.g, source);
                    if (grammar::serialize(made.g, segments) != program) roundtrip_ok = false;
                    if (source.max_index_read() + 1 >
                        static_cast<std::ptrdiff_t>(source.consumed()))
                        lookahead_ok = false;
                    if (grammar::parse_count(made.g, program) != 1) unique_ok = false;
                }
                break;
            }
            case GeneratedGrammar::Kind::PrefixViolation: {
                ++prefix_violations;
                if (validation.prefix.ok) ambiguity_ok = false;
                const auto witness = grammar::find_ambiguous_witness(made.g);
                if (!witness || grammar::parse_count(made.g, *witness) < 2) ambiguity_ok = false;
                break;
            }
            case GeneratedGrammar::Kind::EmbeddingViolation: {
                ++embeddings;
                if (validation.embeddings.empty()) embedding_ok = false;
                if (!validation.prefix.ok) embedding_ok = false;
                break;
            }
        }
    }

    report.outputs = {{"clean", clean},
                      {"prefix_violations", prefix_violations},
                      {"embedding_violations", embeddings}};
    check(report, "grammar.unique-parse", unique_ok,
          "well-formed sets decode with exactly one parse");
    check(report, "grammar.roundtrip", roundtrip_ok,
          "serialize(decode(p)) == p on every generated program");
    check(report, "grammar.no-lookahead", lookahead_ok,
          "decoder never inspected beyond the read head");
    check(report, "grammar.ambiguity-detected", ambiguity_ok,
          "every injected prefix violation yields a >= 2-parse witness");
    check(report, "grammar.boundary-delimitation", embedding_ok,
          "every injected payload embedding is reported");
    check(report, "grammar.kraft-inequality", kraft_ok, "Kraft sum <= 1 on clean sets");
    return report;
}

// ---------------------------------------------------------------------------
// exponential-redundancy: Fibonacci junk rule counts and growth rate.

ExperimentReport run_exponential_redundancy(const RunOptions&) {
    ExperimentReport report;
    report.name = "exponential-redundancy";
    const json inputs = {{"rule", "binary, no adjacent 1s"}, {"bruteforce_max", 12}};
    report.inputs_digest = digest_inputs(inputs);

    const JunkRule rule = JunkRule::forbid_substring(2, {1, 1});
    const auto counts = grammar::count_strings_upto(rule, 12);

    bool brute_ok = true;
    for (int length = 0; length <= 12; ++length) {
        long long brute = 0;
        for (long long bits = 0; bits < (1LL << length); ++bits) {
            bool admissible = true;
            for (int k = 0; k + 1 < length; ++k)
                if (((bits >> k) & 1) && ((bits >> (k + 1)) & 1)) admissible = false;
            brute += admissible;
        }
        if (counts[static_cast<std::size_t>(length)] != brute) brute_ok = false;
    }

    const auto growth = grammar::growth_rate(rule);
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    const double fitted = std::exp(growth.finite_length_ratio);
    const double spectral_err = std::abs(growth.gamma - golden);
    const double fitted_err = std::abs(fitted - golden);

    report.outputs = {{"gamma", growth.gamma},
                      {"fitted_gamma_at_L200", fitted},
                      {"count_L5", counts[5].convert_to<long long>()}};
    check(report, "grammar.count-matches-bruteforce", brute_ok,
          "exact counts equal enumeration for L <= 12");
    check(report, "grammar.growth-rate", spectral_err <= 1e-12,
          "spectral radius vs golden ratio: err = " + fmt(spectral_err));
    check(report, "grammar.finite-length-estimate", fitted_err <= 1e-6,
          "L = 200 ratio estimate vs golden ratio: err = " + fmt(fitted_err));
    return report;
}

// ---------------------------------------------------------------------------
// k-independence: the ceiling cancels in relative weights.

ExperimentReport run_k_independence(const RunOptions&) {
    ExperimentReport report;
    report.name = "k-independence";
    const json inputs = {{"gamma", 2}, {"ells", {4, 6}}, {"ceilings", "10..200"}};
    report.inputs_digest = digest_inputs(inputs);

    const auto profile = redundancy::RedundancyProfile::from_gamma(2.0);
    const auto w4 = redundancy::junk_weight(profile, 4.0, 10.0);
    const auto w6 = redundancy::junk_weight(profile, 6.0, 10.0);
    const bool exact_ok = w4.exact && *w4.exact == 127 && w6.exact && *w6.exact == 31;

    const auto at_k10 = redundancy::relative_weight(profile, 4.0, 6.0, 10.0);
    const double k10_value = at_k10.ratio.convert_to<double>();
    const bool k10_ok = std::abs(k10_value - 127.0 / 31.0) < 1e-15 && at_k10.exact;

    bool monotone = true;
    double previous = std::numeric_limits<double>::infinity();
    double deviation_at_40 = 0.0;
    for (int ceiling = 10; ceiling <= 60; ++ceiling) {
        const auto rw = redundancy::relative_weight(profile, 4.0, 6.0, ceiling);
        const double dev = rw.deviation.convert_to<double>();
        if (dev > previous + 1e-18) monotone = false;
        previous = dev;
        if (ceiling == 40) deviation_at_40 = dev;
    }
    const auto far = redundancy::relative_weight(profile, 4.0, 6.0, 200.0);
    const bool tiny = far.deviation < HighFloat("1e-40");

    report.outputs = {{"ratio_at_K10", k10_value},
                      {"deviation_at_K40", deviation_at_40},
                      {"deviation_at_K200", far.deviation.convert_to<double>()}};
    check(report, "redundancy.exact-weights", exact_ok, "W(K=10) = {127, 31}");
    check(report, "redundancy.relative-weight", k10_ok, "ratio at K = 10 is 127/31");
    check(report, "redundancy.k-monotone", monotone, "deviation from the limit shrinks with K");
    check(report, "redundancy.k-independence", deviation_at_40 < 1e-9,
          "|ratio - 4| at K = 40 is " + fmt(deviation_at_40));
    check(report, "redundancy.deep-ceiling", tiny, "|ratio - 4| < 1e-40 at K = 200");
    return report;
}

// ---------------------------------------------------------------------------
// el-locality: construct-and-recover plus the degenerate counterexample.

ExperimentReport run_el_locality(const RunOptions&) {
    ExperimentReport report;
    report.name = "el-locality";
    const json inputs = {{"trials", 50}, {"grid_points", 9}, {"seed", 73003}};
    report.inputs_digest = digest_inputs(inputs);

    Rng rng(73003);
    const costs::CostPtr lagrangian = costs::quadratic_kinetic(0.5);
    std::vector<Vec> node_values;
    for (int i = 0; i < 9; ++i) node_values.push_back({-1.0 + 0.25 * i});

    double worst_c = 0.0, worst_g = 0.0, worst_residual = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double magnitude = 0.1 + 4.9 * rng.uniform();
        const double c_true = rng.coin() ? magnitude : -magnitude;
        const std::vector<double> poly = {0.0, rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                                          rng.uniform(-2.0, 2.0)};
        const costs::CostPtr ell = costs::composite(c_true, lagrangian, poly);

        const auto fit = variational::el_locality_fit(ell, lagrangian, node_values);
        worst_c = std::max(worst_c, std::abs(fit.c_hat - c_true));
        worst_residual = std::max(worst_residual, fit.residual_max);
        const double g_ref = costs::poly_eval(poly, node_values[fit.gauge_ref]);
        for (std::size_t v = 0; v < node_values.size(); ++v) {
            const double truth = costs::poly_eval(poly, node_values[v]) - g_ref;
            worst_g = std::max(worst_g, std::abs(fit.g_values[v] - truth));
        }
    }

    // Negative control: ell = L^2 + 1 shares the naive zero locus but
    // degenerates near constant configurations, where its operator vanishes
    // to higher order.  The scan must notice.
    const costs::CostPtr counterexample = costs::power(lagrangian, 2.0, 1.0);
    const auto disagreement =
        variational::shared_stationarity(counterexample, lagrangian);
    const auto clean = variational::shared_stationarity(
        costs::composite(3.0, lagrangian, {0.0, 0.0, 0.0, 1.0}), lagrangian);

    report.outputs = {{"worst_c_error", worst_c},
                      {"worst_g_error", worst_g},
                      {"worst_fit_residual", worst_residual},
                      {"counterexample_disagreements", disagreement.disagreements.size()},
                      {"clean_pair_disagreements", clean.disagreements.size()}};
    check(report, "variational.recover-scale", worst_c <= 1e-8,
          "max |c_hat - c| over 50 trials = " + fmt(worst_c));
    check(report, "variational.recover-boundary", worst_g <= 1e-7,
          "max sup-norm G error = " + fmt(worst_g));
    check(report, "variational.fit-residual", worst_residual <= 1e-8,
          "max fit residual = " + fmt(worst_residual));
    check(report, "variational.counterexample-detected", !disagreement.disagreements.empty(),
          std::to_string(disagreement.disagreements.size()) + " stationarity disagreements");
    check(report, "variational.el-class-clean", clean.disagreements.empty(),
          "telescoping pair produces no disagreement");
    return report;
}

// ---------------------------------------------------------------------------
// euclidean-closure: redundancy weights vs exp(-S_E / hbar_eff).

ExperimentReport run_euclidean_closure(const RunOptions& options) {
    ExperimentReport report;
    report.name = "euclidean-closure";
    const json inputs = {{"grid_points", 7}, {"num_steps", 4}, {"alpha", 2.0},
                         {"gamma", 3.0},    {"ceiling_slack", 60.0}};
    report.inputs_digest = digest_inputs(inputs);

    pathint::LatticeSpec lattice;
    lattice.num_steps = 4;
    lattice.step = 1.0;
    for (int i = 0; i < 7; ++i) lattice.grid.push_back(-1.5 + 0.5 * i);
    lattice.endpoint_start = 0.0;
    lattice.endpoint_end = 0.0;

    const auto profile = redundancy::RedundancyProfile::from_gamma(3.0);
    const double alpha = 2.0;
    const double hbar_expected = 1.0 / (alpha * std::log(3.0));

    json output_actions = json::object();
    bool tv_ok = true, bound_ok = true, fit_ok = true;
    for (const auto& [label, action] :
         {std::pair<std::string, pathint::ActionSpec>{
              "free", {1.0, pathint::Potential::free_particle(), pathint::Discretization::Midpoint}},
          {"harmonic",
           {1.0, pathint::Potential::harmonic(1.0), pathint::Discretization::Midpoint}}}) {
        // First pass just to size the ceiling from the largest cost.
        double max_action = 0.0;
        {
            const auto probe = pathint::exhaustive_measure(lattice, action, 1.0, options.workers);
            for (double s : probe.actions) max_action = std::max(max_action, s);
        }
        const double ceiling = alpha * max_action + 60.0;
        const auto closure = pathint::closure_check(lattice, action, alpha, profile, ceiling);
        if (!(closure.tv_distance < 1e-12)) tv_ok = false;
        if (!(closure.tv_distance <= closure.tail_bound)) bound_ok = false;
        if (!(std::abs(closure.fit.hbar_eff - hbar_expected) < 1e-9)) fit_ok = false;
        output_actions[label] = {{"tv_distance", closure.tv_distance},
                                 {"tail_bound", closure.tail_bound},
                                 {"hbar_eff_fit", closure.fit.hbar_eff},
                                 {"histories", closure.actions.size()}};
    }

    report.outputs = {{"hbar_eff_expected", hbar_expected}, {"actions", output_actions}};
    check(report, "pathint.closure-tv", tv_ok, "TV(redundancy, Euclidean) < 1e-12");
    check(report, "pathint.closure-tail-bound", bound_ok, "TV below the geometric tail bound");
    check(report, "pathint.hbar-recovered", fit_ok,
          "fit recovers 1/(2 ln 3) = " + fmt(hbar_expected) + " within 1e-9");
    return report;
}

// ---------------------------------------------------------------------------
// scale-redundancy: (ell, Lambda, alpha) -> (c ell, Lambda/c, c alpha).

ExperimentReport run_scale_redundancy(const RunOptions&) {
    ExperimentReport report;
    report.name = "scale-redundancy";
    const json inputs = {{"gamma", 2.0}, {"alpha", 2.0}, {"factors", {0.1, 3.7, 42.0}}};
    report.inputs_digest = digest_inputs(inputs);

    const auto profile = redundancy::RedundancyProfile::from_gamma(2.0);
    const std::vector<redundancy::CostEntry> entries = {
        {"h0", 0.0}, {"h1", 0.37}, {"h2", 1.1}, {"h3", 2.5}, {"h4", 3.14159}, {"h5", 7.25}};

    json per_factor = json::object();
    bool all_pass = true;
    for (double factor : {1.0, 0.1, 3.7, 42.0}) {
        const auto result = redundancy::scale_redundancy_check(profile, entries, 2.0, factor);
        per_factor[fmt(factor)] = {{"max_probability_deviation", result.max_probability_deviation},
                                   {"hbar_relative_deviation", result.hbar_eff_relative_deviation}};
        if (!result.pass) all_pass = false;
    }

    report.outputs = {{"per_factor", per_factor}};
    check(report, "redundancy.scale-invariance", all_pass,
          "normalized weights and hbar_eff unchanged within 1e-12");
    return report;
}

// ---------------------------------------------------------------------------
// gauge-toy: Z2 orbits, selection rules, multiplicity prefactor.

ExperimentReport run_gauge_toy(const RunOptions&) {
    ExperimentReport report;
    report.name = "gauge-toy";
    const json inputs = {{"rules", {"A", "B"}}};
    report.inputs_digest = digest_inputs(inputs);

    const auto rule_a = gauge::SelectionRule::rule_a();
    const auto rule_b = gauge::SelectionRule::rule_b();

    const bool g_ok = gauge::representatives(rule_a, +1).multiplicity == 1 &&
                      gauge::representatives(rule_a, -1).multiplicity == 1 &&
                      gauge::representatives(rule_b, +1).multiplicity == 1 &&
                      gauge::representatives(rule_b, -1).multiplicity == 2;

    const auto equal_cost = gauge::induced_weight(rule_b, 1.0, 1.0, 1.0);
    const bool ratio_ok = equal_cost.p_minus / equal_cost.p_plus == 2.0;

    // The exponential part must not depend on the rule for any cost table.
    Rng rng(90011);
    bool exponential_ok = true;
    for (int trial = 0; trial < 25; ++trial) {
        const double ell_plus = rng.uniform(0.0, 5.0);
        const double ell_minus = rng.uniform(0.0, 5.0);
        const double lambda = rng.uniform(0.1, 4.0);
        const auto wa = gauge::induced_weight(rule_a, ell_plus, ell_minus, lambda);
        const auto wb = gauge::induced_weight(rule_b, ell_plus, ell_minus, lambda);
        if (wa.unnormalized_plus / wa.g_plus != wb.unnormalized_plus / wb.g_plus)
            exponential_ok = false;
        if (wa.unnormalized_minus / wa.g_minus != wb.unnormalized_minus / wb.g_minus)
            exponential_ok = false;
    }

    report.outputs = {{"g_B_minus", gauge::representatives(rule_b, -1).multiplicity},
                      {"equal_cost_ratio", equal_cost.p_minus / equal_cost.p_plus}};
    check(report, "gauge.multiplicities", g_ok, "g_A = 1; g_B(+1) = 1, g_B(-1) = 2");
    check(report, "gauge.fp-prefactor", ratio_ok, "equal costs give P(-1)/P(+1) = 2 exactly");
    check(report, "gauge.exponential-rule-independent", exponential_ok,
          "P/g identical across rules for random costs");
    return report;
}

// ---------------------------------------------------------------------------
// cosmological-calibration: capacity, de Sitter action, emergent scale.

ExperimentReport run_cosmological_calibration(const RunOptions&) {
    ExperimentReport report;
    report.name = "cosmological-calibration";
    const json inputs = {{"draws", 1000}, {"seed", 41007}};
    report.inputs_digest = digest_inputs(inputs);

    Rng rng(41007);
    double worst_action_identity = 0.0;
    double worst_scale_identity = 0.0;
    double worst_unit_invariance = 0.0;
    bool lambda_independent = true;

    for (int draw = 0; draw < 1000; ++draw) {
        cosmo::CosmoParams params;
        params.hubble = std::exp(rng.uniform(-7.0, 7.0));
        params.newton_g = std::exp(rng.uniform(-7.0, 7.0));
        params.hbar = std::exp(rng.uniform(-7.0, 7.0));
        params.usage_eta = 0.05 + 0.95 * rng.uniform();
        params.redundancy_exponent = std::exp(rng.uniform(-3.0, 3.0));

        const auto result = cosmo::calibrate(params);
        worst_action_identity = std::max(
            worst_action_identity,
            std::abs(result.S_E_univ / (params.hbar * result.I_holo) - 1.0));
        worst_scale_identity = std::max(
            worst_scale_identity, std::abs(result.hbar_eff * params.usage_eta / params.hbar - 1.0));

        cosmo::CosmoParams swept = params;
        swept.redundancy_exponent *= 1e3;
        if (cosmo::calibrate(swept).hbar_eff != result.hbar_eff) lambda_independent = false;

        // Time-unit rescaling: H0 -> H0/s, G -> s G, hbar -> s hbar.
        const double s = std::exp(rng.uniform(-2.0, 2.0));
        cosmo::CosmoParams rescaled = params;
        rescaled.hubble /= s;
        rescaled.newton_g *= s;
        rescaled.hbar *= s;
        const auto rescaled_result = cosmo::calibrate(rescaled);
        worst_unit_invariance = std::max(
            worst_unit_invariance,
            std::abs(rescaled_result.hbar_eff / rescaled.hbar - result.hbar_eff / params.hbar));
        worst_unit_invariance =
            std::max(worst_unit_invariance,
                     std::abs(rescaled_result.I_holo / result.I_holo - 1.0));
    }

    report.outputs = {{"worst_action_identity", worst_action_identity},
                      {"worst_scale_identity", worst_scale_identity},
                      {"worst_unit_invariance", worst_unit_invariance}};
    check(report, "cosmo.action-capacity-identity", worst_action_identity <= 1e-14,
          "S_E_univ = hbar * I_holo to " + fmt(worst_action_identity));
    check(report, "cosmo.emergent-scale", worst_scale_identity <= 1e-14,
          "hbar_eff * eta = hbar to " + fmt(worst_scale_identity));
    check(report, "cosmo.lambda-cancels", lambda_independent,
          "hbar_eff independent of the redundancy exponent");
    check(report, "cosmo.unit-invariance", worst_unit_invariance <= 1e-12,
          "hbar_eff / hbar invariant under time-unit rescaling");
    return report;
}

// ---------------------------------------------------------------------------
// concentration: mass accumulates on the stationary configuration.

ExperimentReport run_concentration(const RunOptions& options) {
    ExperimentReport report;
    report.name = "concentration";
    const json inputs = {{"grid_points", 11}, {"interior_nodes", 3},
                         {"lambdas", {0, 1, 2, 5, 10, 50}}};
    report.inputs_digest = digest_inputs(inputs);

    redundancy::ConcentrationSpec spec;
    for (int i = 0; i < 11; ++i) spec.grid.push_back(-1.0 + 0.2 * i);
    spec.endpoint_start = -0.4;
    spec.endpoint_end = 0.4;
    spec.num_segments = 4;
    spec.cost = costs::quadratic_kinetic(1.0);
    spec.lambdas = {0.0, 1.0, 2.0, 5.0, 10.0, 50.0};
    spec.neighborhood_radius = 0.2 + 1e-9;
    spec.workers = options.workers;

    const auto result = redundancy::concentration_experiment(spec);

    const std::vector<double> expected_stationary = {-0.2, 0.0, 0.2};
    double stationary_err = 0.0;
    for (std::size_t j = 0; j < expected_stationary.size(); ++j)
        stationary_err =
            std::max(stationary_err, std::abs(result.stationary[j] - expected_stationary[j]));

    bool monotone = true;
    for (std::size_t i = 1; i < result.curve.size(); ++i)
        if (result.curve[i].mass_near_stationary <
            result.curve[i - 1].mass_near_stationary - 1e-15)
            monotone = false;
    const double final_mass = result.curve.back().mass_near_stationary;
    const double uniform_mass = result.curve.front().mass_near_stationary;
    const double uniform_expected = 27.0 / 1331.0;

    json curve = json::array();
    for (const auto& point : result.curve)
        curve.push_back({{"lambda", point.lambda}, {"mass", point.mass_near_stationary}});
    report.outputs = {{"curve", curve}, {"stationary", result.stationary}};
    check(report, "variational.stationary-on-grid", stationary_err <= 1e-9,
          "solver found the straight-line configuration");
    check(report, "redundancy.uniform-at-zero", std::abs(uniform_mass - uniform_expected) <= 1e-12,
          "lambda = 0 mass equals the counting fraction 27/1331");
    check(report, "redundancy.concentration-monotone", monotone,
          "neighborhood mass nondecreasing in lambda");
    check(report, "redundancy.concentration-limit", final_mass > 0.99,
          "mass at lambda = 50 is " + fmt(final_mass));
    return report;
}

} // namespace

bool ExperimentReport::passed() const {
    return std::all_of(assertions.begin(), assertions.end(),
                       [](const Assertion& a) { return a.pass; });
}

json ExperimentReport::to_json() const {
    json doc;
    doc["name"] = name;
    doc["inputs_digest"] = inputs_digest;
    doc["outputs"] = outputs;
    json checks = json::array();
    for (const auto& a : assertions)
        checks.push_back({{"detail", a.detail}, {"name", a.name}, {"pass", a.pass}});
    doc["assertions"] = checks;
    doc["pass"] = passed();
    return doc;
}

const std::vector<Experiment>& registry() {
    static const std::vector<Experiment> experiments = {
        {"prefix-free-necessity", run_prefix_free_necessity},
        {"exponential-redundancy", run_exponential_redundancy},
        {"k-independence", run_k_independence},
        {"el-locality", run_el_locality},
        {"euclidean-closure", run_euclidean_closure},
        {"scale-redundancy", run_scale_redundancy},
        {"gauge-toy", run_gauge_toy},
        {"cosmological-calibration", run_cosmological_calibration},
        {"concentration", run_concentration},
    };
    return experiments;
}

std::vector<ExperimentReport> run_all(const RunOptions& options) {
    std::vector<ExperimentReport> reports;
    for (const auto& experiment : registry()) {
        if (!options.filter.empty() &&
            experiment.name.find(options.filter) == std::string::npos)
            continue;
        const auto start = std::chrono::steady_clock::now();
        ExperimentReport report = experiment.run(options);
        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        reports.push_back(std::move(report));
    }
    return reports;
}

json bundle_to_json(const std::vector<ExperimentReport>& reports) {
    json doc;
    json list = json::array();
    bool all = true;
    for (const auto& report : reports) {
        list.push_back(report.to_json());
        all = all && report.passed();
    }
    doc["experiments"] = list;
    doc["pass"] = all;
    return doc;
}

std::string digest_inputs(const json& inputs) {
    const std::string bytes = inputs.dump();
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "fnv1a:%016llx",
                  static_cast<unsigned long long>(hash));
    return buffer;
}

} // namespace synlab::experiments
