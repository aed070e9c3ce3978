// synlab: prefix-free grammars, descriptive costs, junk-sector redundancy
// weights, discrete variational checks, and the desk-scale verification
// suite, behind one CLI.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "synlab/cosmo.hpp"
#include "synlab/encoder.hpp"
#include "synlab/errors.hpp"
#include "synlab/experiments.hpp"
#include "synlab/gauge.hpp"
#include "synlab/grammar.hpp"
#include "synlab/json_io.hpp"
#include "synlab/pathint.hpp"
#include "synlab/precision.hpp"
#include "synlab/redundancy.hpp"
#include "synlab/rng.hpp"
#include "synlab/variational.hpp"

namespace {

using synlab::io::json;

struct GlobalOptions {
    bool pretty = false;
    std::string output_path;
    int workers = 0;
    unsigned precision = 0;
};

void emit(const GlobalOptions& opts, const json& doc) {
    const std::string text =
        opts.pretty ? synlab::io::human_table(doc) : synlab::io::canonical_dump(doc);
    if (opts.output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opts.output_path);
        if (!out) throw synlab::Error(synlab::ErrorCode::IoError,
                                      "cannot write '" + opts.output_path + "'");
        out << text;
    }
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!path.empty() && path != "-") {
        file.open(path);
        if (!file) throw synlab::Error(synlab::ErrorCode::IoError, "cannot write '" + path + "'");
        out = &file;
    }
    *out << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            *out << row[i] << (i + 1 < row.size() ? "," : "");
        *out << "\n";
    }
}

std::string fmt(double v) { return synlab::io::format_double(v); }

// Parses "a:b:step" sweeps.
std::vector<double> parse_sweep(const std::string& text) {
    std::vector<double> values;
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw synlab::Error(synlab::ErrorCode::InvalidArgument,
                            "sweep must be start:stop:step");
    const double start = std::stod(text.substr(0, first));
    const double stop = std::stod(text.substr(first + 1, second - first - 1));
    const double step = std::stod(text.substr(second + 1));
    if (!(step > 0.0))
        throw synlab::Error(synlab::ErrorCode::InvalidArgument, "sweep step must be positive");
    for (double v = start; v <= stop + 1e-12; v += step) values.push_back(v);
    return values;
}

int run(int argc, char** argv) {
    CLI::App app{"syntactic-cost laboratory"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand
    GlobalOptions opts;
    app.add_flag("--pretty", opts.pretty, "indent JSON output for humans");
    app.add_option("--output", opts.output_path, "write machine output to a file");
    app.add_option("--workers", opts.workers, "worker threads (0 = hardware default)");
    app.add_option("--precision", opts.precision, "high-precision float bits (default 256)");

    // grammar ---------------------------------------------------------------
    auto* grammar_cmd = app.add_subcommand("grammar", "prefix-free grammar tools");
    grammar_cmd->require_subcommand(1);
    std::string grammar_path;
    int count_length = 0;

    auto* check_cmd = grammar_cmd->add_subcommand("check", "well-formedness report");
    check_cmd->add_option("file", grammar_path)->required();
    auto* count_cmd = grammar_cmd->add_subcommand("count", "exact string count N(L)");
    count_cmd->add_option("file", grammar_path)->required();
    count_cmd->add_option("--L", count_length, "string length")->required();
    auto* gamma_cmd = grammar_cmd->add_subcommand("gamma", "junk growth rate");
    gamma_cmd->add_option("file", grammar_path)->required();

    // encode / cost ----------------------------------------------------------
    auto* encode_cmd = app.add_subcommand("encode", "encode a history CSV as a program");
    std::string encode_grammar, encode_history;
    int encode_resolution = 3;
    double box_lo = -1.0, box_hi = 1.0;
    encode_cmd->add_option("grammar", encode_grammar)->required();
    encode_cmd->add_option("history", encode_history)->required();
    encode_cmd->add_option("--n", encode_resolution, "digits per coordinate")->required();
    encode_cmd->add_option("--box-lo", box_lo, "quantizer box lower edge");
    encode_cmd->add_option("--box-hi", box_hi, "quantizer box upper edge");

    auto* cost_cmd = app.add_subcommand("cost", "minimal descriptive cost of a history");
    std::string cost_grammar, cost_history, cost_spec_path;
    cost_cmd->add_option("grammar", cost_grammar)->required();
    cost_cmd->add_option("history", cost_history)->required();
    cost_cmd->add_option("--cost", cost_spec_path, "cost spec JSON")->required();

    // weight -----------------------------------------------------------------
    auto* weight_cmd = app.add_subcommand("weight", "junk-sector weights for a cost table");
    std::string weight_grammar, weight_costs, k_sweep;
    double weight_ceiling = 0.0;
    weight_cmd->add_option("grammar", weight_grammar)->required();
    weight_cmd->add_option("--costs", weight_costs, "CSV history_id,ell")->required();
    auto* ceiling_option = weight_cmd->add_option("--K", weight_ceiling, "length ceiling");
    weight_cmd->add_option("--k-sweep", k_sweep, "ceiling sweep K1:K2:step (CSV output)");

    // concentrate ------------------------------------------------------------
    auto* conc_cmd = app.add_subcommand("concentrate", "stationary-mass curve over lambda");
    std::string lambda_sweep = "0:50:5";
    double conc_grid_min = -1.0, conc_grid_max = 1.0, conc_a = -0.4, conc_b = 0.4,
           conc_radius = 0.2;
    int conc_grid_points = 11, conc_segments = 4;
    conc_cmd->add_option("--lambda-sweep", lambda_sweep, "lambda sweep start:stop:step");
    conc_cmd->add_option("--grid-min", conc_grid_min);
    conc_cmd->add_option("--grid-max", conc_grid_max);
    conc_cmd->add_option("--grid-points", conc_grid_points);
    conc_cmd->add_option("--endpoint-start", conc_a);
    conc_cmd->add_option("--endpoint-end", conc_b);
    conc_cmd->add_option("--segments", conc_segments);
    conc_cmd->add_option("--radius", conc_radius, "neighborhood radius");

    // el ----------------------------------------------------------------------
    auto* el_cmd = app.add_subcommand("el", "discrete variational checks");
    el_cmd->require_subcommand(1);
    auto* fit_cmd = el_cmd->add_subcommand("fit", "recover scale and boundary function");
    std::string ell_spec, lagrangian_spec;
    int fit_samples = 0;
    std::uint64_t fit_seed = 1;
    double fit_grid_min = -1.0, fit_grid_max = 1.0;
    int fit_grid_points = 9;
    fit_cmd->add_option("--ell", ell_spec, "cost spec JSON")->required();
    fit_cmd->add_option("--lagrangian", lagrangian_spec, "reference cost spec JSON")->required();
    fit_cmd->add_option("--samples", fit_samples, "sampled segments (0 = all pairs)");
    fit_cmd->add_option("--seed", fit_seed);
    fit_cmd->add_option("--grid-min", fit_grid_min);
    fit_cmd->add_option("--grid-max", fit_grid_max);
    fit_cmd->add_option("--grid-points", fit_grid_points);

    auto* stationary_cmd = el_cmd->add_subcommand("stationary", "stationary interior nodes");
    std::string stationary_cost, endpoints_text = "0,1", solver_name = "newton";
    int stationary_segments = 4;
    double stationary_box_lo = -2.0, stationary_box_hi = 2.0;
    stationary_cmd->add_option("--cost", stationary_cost, "cost spec JSON")->required();
    stationary_cmd->add_option("--endpoints", endpoints_text, "a,b");
    stationary_cmd->add_option("--N", stationary_segments, "segments");
    stationary_cmd->add_option("--solver", solver_name, "newton | grid");
    stationary_cmd->add_option("--box-lo", stationary_box_lo);
    stationary_cmd->add_option("--box-hi", stationary_box_hi);

    // pathint ------------------------------------------------------------------
    auto* pathint_cmd = app.add_subcommand("pathint", "Euclidean lattice measures");
    pathint_cmd->require_subcommand(1);
    auto* closure_cmd = pathint_cmd->add_subcommand("closure", "redundancy vs Euclidean measure");
    std::string closure_grammar, closure_lattice, closure_csv;
    double closure_alpha = 1.0, closure_ceiling = 0.0;
    closure_cmd->add_option("--alpha", closure_alpha, "cost = alpha * S_E")->required();
    closure_cmd->add_option("--grammar", closure_grammar, "grammar JSON (junk rule)")->required();
    closure_cmd->add_option("--lattice", closure_lattice, "lattice spec JSON")->required();
    closure_cmd->add_option("--K", closure_ceiling, "length ceiling")->required();
    closure_cmd->add_option("--csv", closure_csv, "also write S_E,P_redundancy,P_euclidean CSV");

    // gauge ---------------------------------------------------------------------
    auto* gauge_cmd = app.add_subcommand("gauge", "Z2 orbit toy");
    gauge_cmd->require_subcommand(1);
    auto* toy_cmd = gauge_cmd->add_subcommand("toy", "induced orbit weights");
    std::string rule_name = "A";
    double ell_plus = 0.0, ell_minus = 0.0, toy_lambda = 1.0;
    toy_cmd->add_option("--rule", rule_name, "A | B")->required();
    toy_cmd->add_option("--ell-plus", ell_plus)->required();
    toy_cmd->add_option("--ell-minus", ell_minus)->required();
    toy_cmd->add_option("--lambda", toy_lambda)->required();

    // cosmo ----------------------------------------------------------------------
    auto* cosmo_cmd = app.add_subcommand("cosmo", "calibration chain");
    synlab::cosmo::CosmoParams cosmo_params;
    cosmo_cmd->add_option("--H0", cosmo_params.hubble)->required();
    cosmo_cmd->add_option("--G", cosmo_params.newton_g)->required();
    cosmo_cmd->add_option("--hbar", cosmo_params.hbar)->required();
    cosmo_cmd->add_option("--eta", cosmo_params.usage_eta);
    cosmo_cmd->add_option("--lambda", cosmo_params.redundancy_exponent)->required();

    // reproduce ------------------------------------------------------------------
    auto* reproduce_cmd = app.add_subcommand("reproduce", "run the verification suite");
    std::string filter;
    reproduce_cmd->add_option("--filter", filter, "substring filter on experiment names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    if (opts.precision != 0)
        synlab::set_precision_bits(opts.precision);
    else
        synlab::init_precision_from_env();
#ifdef _OPENMP
    if (opts.workers > 0) omp_set_num_threads(opts.workers);
#endif

    if (check_cmd->parsed()) {
        const auto g = synlab::io::load_grammar(grammar_path);
        const auto v = synlab::grammar::validate(g);
        json doc;
        doc["valid"] = v.ok;
        doc["prefix_free"] = v.prefix.ok;
        if (v.prefix.violation)
            doc["prefix_violation"] = {
                synlab::grammar::symbols_to_string(v.prefix.violation->first),
                synlab::grammar::symbols_to_string(v.prefix.violation->second)};
        doc["kraft_sum"] = v.kraft.sum.str();
        doc["kraft_complete"] = v.kraft.complete;
        json embeds = json::array();
        for (const auto& e : v.embeddings)
            embeds.push_back({{"header_index", e.header_index}, {"payload_type", e.payload_type}});
        doc["embeddings"] = embeds;
        doc["structural_errors"] = v.structural_errors;
        emit(opts, doc);
        return v.ok ? 0 : 1;
    }
    if (count_cmd->parsed()) {
        const auto g = synlab::io::load_grammar(grammar_path);
        const auto count = synlab::grammar::count_strings(g.junk_rule, count_length);
        emit(opts, json{{"L", count_length}, {"count", count.str()}});
        return 0;
    }
    if (gamma_cmd->parsed()) {
        const auto g = synlab::io::load_grammar(grammar_path);
        const auto growth = synlab::grammar::growth_rate(g.junk_rule);
        emit(opts, json{{"gamma", growth.gamma},
                        {"lambda", growth.redundancy_exponent},
                        {"finite_length_ratio", growth.finite_length_ratio},
                        {"finite_length_deviation", growth.finite_length_deviation}});
        return 0;
    }
    if (encode_cmd->parsed()) {
        const auto g = synlab::io::load_grammar(encode_grammar);
        auto history = synlab::io::history_from_csv(encode_history);
        history.resolution_n = encode_resolution;
        const synlab::encoder::Quantizer quantizer(
            synlab::Vec(history.dimension, box_lo), synlab::Vec(history.dimension, box_hi),
            encode_resolution, g.headers.front().payload_alphabet.empty()
                                   ? 2
                                   : static_cast<int>(g.headers.front().payload_alphabet.size()));
        const auto program = synlab::encoder::encode(history, g, quantizer);
        emit(opts, json{{"symbols", synlab::grammar::symbols_to_string(program.symbols)},
                        {"raw_length", synlab::encoder::raw_length(program)},
                        {"segments", history.num_segments()}});
        return 0;
    }
    if (cost_cmd->parsed()) {
        const auto g = synlab::io::load_grammar(cost_grammar);
        const auto history = synlab::io::history_from_csv(cost_history);
        const auto spec = synlab::io::load_cost_spec(cost_spec_path);
        std::vector<std::vector<synlab::encoder::SegmentAlternative>> alternatives(
            history.num_segments());
        for (auto& per_segment : alternatives)
            for (const auto& h : g.headers)
                per_segment.push_back(
                    {h.segment_type,
                     static_cast<int>(h.codeword.size()) + h.payload_length});
        const auto result = synlab::encoder::minimal_cost(history, spec, alternatives);
        emit(opts, json{{"ell", result.cost},
                        {"chosen_types", result.chosen_types},
                        {"per_segment_cost", result.per_segment_cost}});
        return 0;
    }
    if (weight_cmd->parsed()) {
        const auto g = synlab::io::load_grammar(weight_grammar);
        const auto profile = synlab::redundancy::RedundancyProfile::from_rule(g.junk_rule);
        const auto entries = synlab::io::cost_entries_from_csv(weight_costs);
        if (!k_sweep.empty()) {
            std::vector<std::vector<std::string>> rows;
            for (double ceiling : parse_sweep(k_sweep)) {
                const auto table =
                    synlab::redundancy::weight_table(profile, entries, true, ceiling);
                for (const auto& row : table.rows)
                    rows.push_back({row.id, fmt(ceiling), row.weight_repr, fmt(row.probability)});
            }
            write_csv(opts.output_path, "history_id,K,W_exact,P", rows);
            return 0;
        }
        const bool have_ceiling = ceiling_option->count() > 0;
        const std::optional<double> ceiling =
            have_ceiling ? std::optional<double>(weight_ceiling) : std::nullopt;
        const auto table = synlab::redundancy::weight_table(profile, entries, true, ceiling);
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : table.rows)
            rows.push_back({row.id, have_ceiling ? fmt(weight_ceiling) : "inf", row.weight_repr,
                            fmt(row.probability)});
        write_csv(opts.output_path, "history_id,K,W_exact,P", rows);
        return 0;
    }
    if (conc_cmd->parsed()) {
        synlab::redundancy::ConcentrationSpec spec;
        for (int i = 0; i < conc_grid_points; ++i)
            spec.grid.push_back(conc_grid_min + (conc_grid_max - conc_grid_min) * i /
                                                    (conc_grid_points - 1));
        spec.endpoint_start = conc_a;
        spec.endpoint_end = conc_b;
        spec.num_segments = conc_segments;
        spec.cost = synlab::costs::quadratic_kinetic(1.0);
        spec.lambdas = parse_sweep(lambda_sweep);
        spec.neighborhood_radius = conc_radius + 1e-9;
        spec.workers = opts.workers;
        const auto result = synlab::redundancy::concentration_experiment(spec);
        std::vector<std::vector<std::string>> rows;
        for (const auto& point : result.curve)
            rows.push_back({fmt(point.lambda), fmt(point.mass_near_stationary)});
        write_csv(opts.output_path, "lambda,mass", rows);
        return 0;
    }
    if (fit_cmd->parsed()) {
        const auto ell = synlab::io::cost_from_json(synlab::io::read_json_file(ell_spec));
        const auto lagrangian =
            synlab::io::cost_from_json(synlab::io::read_json_file(lagrangian_spec));
        std::vector<synlab::Vec> node_values;
        for (int i = 0; i < fit_grid_points; ++i)
            node_values.push_back({fit_grid_min + (fit_grid_max - fit_grid_min) * i /
                                                      (fit_grid_points - 1)});
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        if (fit_samples > 0) {
            synlab::Rng rng(fit_seed);
            for (int s = 0; s < fit_samples; ++s) {
                const auto i = static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(node_values.size()) - 1));
                auto j = static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(node_values.size()) - 2));
                if (j >= i) ++j;
                pairs.emplace_back(i, j);
            }
        }
        const auto fit = synlab::variational::el_locality_fit(ell, lagrangian, node_values, pairs);
        json g_table = json::array();
        for (std::size_t v = 0; v < fit.node_values.size(); ++v)
            g_table.push_back({{"x", fit.node_values[v][0]}, {"G", fit.g_values[v]}});
        emit(opts, json{{"c_hat", fit.c_hat},
                        {"residual_max", fit.residual_max},
                        {"design_rank", fit.design_rank},
                        {"g_table", g_table}});
        return 0;
    }
    if (stationary_cmd->parsed()) {
        const auto cost = synlab::io::cost_from_json(synlab::io::read_json_file(stationary_cost));
        const auto comma = endpoints_text.find(',');
        if (comma == std::string::npos)
            throw synlab::Error(synlab::ErrorCode::InvalidArgument, "--endpoints wants a,b");
        const double a = std::stod(endpoints_text.substr(0, comma));
        const double b = std::stod(endpoints_text.substr(comma + 1));
        synlab::variational::StationaryOptions options;
        options.box_lo = stationary_box_lo;
        options.box_hi = stationary_box_hi;
        const auto solver = solver_name == "grid"
                                ? synlab::variational::StationarySolver::ExhaustiveGrid
                                : synlab::variational::StationarySolver::NewtonMultistart;
        const auto result = synlab::variational::stationary_set(cost, {a}, {b},
                                                                stationary_segments, solver,
                                                                options);
        json configs = json::array();
        for (const auto& config : result.configurations) {
            json nodes = json::array();
            for (const auto& node : config) nodes.push_back(node[0]);
            configs.push_back(nodes);
        }
        emit(opts, json{{"configurations", configs},
                        {"best_residual", result.best_residual},
                        {"empty", result.empty()}});
        return result.empty() ? 1 : 0;
    }
    if (closure_cmd->parsed()) {
        const auto g = synlab::io::load_grammar(closure_grammar);
        const auto profile = synlab::redundancy::RedundancyProfile::from_rule(g.junk_rule);
        const auto [lattice, action] = synlab::io::load_lattice(closure_lattice);
        const auto report = synlab::pathint::closure_check(lattice, action, closure_alpha,
                                                           profile, closure_ceiling);
        if (!closure_csv.empty()) {
            std::vector<std::vector<std::string>> rows;
            for (std::size_t i = 0; i < report.actions.size(); ++i)
                rows.push_back({fmt(report.actions[i]), fmt(report.redundancy_probability[i]),
                                fmt(report.euclidean_probability[i])});
            write_csv(closure_csv, "S_E,P_redundancy,P_euclidean", rows);
        }
        emit(opts, json{{"tv_distance", report.tv_distance},
                        {"tail_bound", report.tail_bound},
                        {"hbar_eff_expected", report.hbar_eff_expected},
                        {"hbar_eff_fit", report.fit.hbar_eff},
                        {"r_squared", report.fit.r_squared},
                        {"max_ell", report.max_ell},
                        {"histories", report.actions.size()}});
        return report.tv_distance <= report.tail_bound ? 0 : 1;
    }
    if (toy_cmd->parsed()) {
        synlab::gauge::SelectionRule rule;
        if (rule_name == "A")
            rule = synlab::gauge::SelectionRule::rule_a();
        else if (rule_name == "B")
            rule = synlab::gauge::SelectionRule::rule_b();
        else
            throw synlab::Error(synlab::ErrorCode::InvalidArgument, "--rule must be A or B");
        const auto weight = synlab::gauge::induced_weight(rule, ell_plus, ell_minus, toy_lambda);
        emit(opts, json{{"P_plus", weight.p_plus},
                        {"P_minus", weight.p_minus},
                        {"g_plus", weight.g_plus},
                        {"g_minus", weight.g_minus}});
        return 0;
    }
    if (cosmo_cmd->parsed()) {
        const auto result = synlab::cosmo::calibrate(cosmo_params);
        emit(opts, json{{"R_H", result.R_H},
                        {"A_H", result.A_H},
                        {"I_holo", result.I_holo},
                        {"beta_dS", result.beta_dS},
                        {"E_U", result.E_U},
                        {"S_E_univ", result.S_E_univ},
                        {"ell_univ", result.ell_univ},
                        {"alpha", result.alpha},
                        {"hbar_eff", result.hbar_eff}});
        return 0;
    }
    if (reproduce_cmd->parsed()) {
        synlab::experiments::RunOptions run_options;
        run_options.workers = opts.workers;
        run_options.filter = filter;
        const auto reports = synlab::experiments::run_all(run_options);
        bool all_pass = true;
        for (const auto& report : reports) {
            std::cerr << (report.passed() ? "[pass] " : "[FAIL] ") << report.name << " ("
                      << fmt(report.wall_seconds) << " s)\n";
            all_pass = all_pass && report.passed();
        }
        emit(opts, synlab::experiments::bundle_to_json(reports));
        return all_pass ? 0 : 1;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const synlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case synlab::ErrorCode::InvalidArgument:
            case synlab::ErrorCode::IoError:
                return 2;
            default:
                return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
