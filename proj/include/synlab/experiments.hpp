#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace synlab::experiments {

using json = nlohmann::json;

struct Assertion {
    std::string name; // module.invariant it checks
    bool pass = false;
    std::string detail;
};

struct ExperimentReport {
    std::string name;
    std::string inputs_digest;
    json outputs;
    std::vector<Assertion> assertions;
    double wall_seconds = 0.0; // diagnostics only; kept out of machine output

    bool passed() const;
    /// Deterministic machine form: alphabetical keys, no timing data.
    json to_json() const;
};

struct RunOptions {
    int workers = 0;       // 0 = library default
    std::string filter;    // substring match on experiment names
};

struct Experiment {
    std::string name;
    std::function<ExperimentReport(const RunOptions&)> run;
};

/// The verification suite, in fixed order:
///   prefix-free-necessity, exponential-redundancy, k-independence,
///   el-locality, euclidean-closure, scale-redundancy, gauge-toy,
///   cosmological-calibration, concentration.
const std::vector<Experiment>& registry();

std::vector<ExperimentReport> run_all(const RunOptions& options = {});

/// Machine bundle for `synlab reproduce`: byte-identical across runs and
/// worker counts.
json bundle_to_json(const std::vector<ExperimentReport>& reports);

/// FNV-1a over the canonical input serialization.
std::string digest_inputs(const json& inputs);

} // namespace synlab::experiments
