#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "synlab/costs.hpp"
#include "synlab/encoder.hpp"
#include "synlab/grammar.hpp"
#include "synlab/pathint.hpp"
#include "synlab/redundancy.hpp"

namespace synlab::io {

using json = nlohmann::json;

// Grammar documents:
//   {"alphabet_size": 4,
//    "headers": [{"codeword": "0", "type": "t0", "payload_length": 2,
//                 "payload_alphabet": [2, 3]}],
//    "junk_rule": {"states": ["s0"], "start": "s0",
//                  "transitions": [["s0", 0, "s0"], ["s0", 1, "s0"]]}}
// payload_alphabet defaults to the symbols that appear in no header codeword.
grammar::Grammar grammar_from_json(const json& doc);
json grammar_to_json(const grammar::Grammar& g);
grammar::Grammar load_grammar(const std::string& path);

// Cost documents: {"kind": "quadratic-kinetic", "weight": 1.0}, plus
// "kinetic-plus-potential", "table-interpolated", "composite", "power";
// optional "per_type_offsets" and "linear_equivalence_constant".
costs::CostPtr cost_from_json(const json& doc);
CostSpec cost_spec_from_json(const json& doc);
CostSpec load_cost_spec(const std::string& path);

// Lattice documents:
//   {"num_steps": 4, "step": 1.0,
//    "grid": {"min": -1.5, "max": 1.5, "points": 7},   (or explicit [..])
//    "endpoints": [0.0, 0.0],
//    "action": {"mass": 1.0, "discretization": "midpoint",
//               "potential": {"kind": "harmonic", "omega": 1.0}}}
std::pair<pathint::LatticeSpec, pathint::ActionSpec> lattice_from_json(const json& doc);
std::pair<pathint::LatticeSpec, pathint::ActionSpec> load_lattice(const std::string& path);

/// History CSV: header "t,x1,..,xd", one node per row, uniform t spacing.
encoder::DiscreteHistory history_from_csv(const std::string& path);

/// Cost-table CSV: header "history_id,ell".
std::vector<redundancy::CostEntry> cost_entries_from_csv(const std::string& path);

/// Shortest round-trip decimal; the one float formatter used in all output.
std::string format_double(double value);

/// Machine output: compact alphabetical-key JSON plus trailing newline; the
/// pretty flag switches to indented output for humans.
std::string canonical_dump(const json& doc, bool pretty = false);

/// Aligned key/value rendering for humans; arrays of uniform objects become
/// column tables.
std::string human_table(const json& doc);

json read_json_file(const std::string& path);

} // namespace synlab::io
