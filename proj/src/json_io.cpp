#include "synlab/json_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "synlab/errors.hpp"

namespace synlab::io {

namespace {

json require(const json& doc, const char* key) {
    if (!doc.contains(key))
        throw Error(ErrorCode::IoError, std::string("missing field '") + key + "'");
    return doc.at(key);
}

} // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::IoError, "bad JSON in '" + path + "': " + e.what());
    }
    return doc;
}

grammar::Grammar grammar_from_json(const json& doc) {
    grammar::Grammar g;
    g.alphabet_size = require(doc, "alphabet_size").get<int>();

    std::set<int> header_symbols;
    for (const auto& h : require(doc, "headers")) {
        grammar::HeaderDef def;
        def.codeword = grammar::symbols_from_string(require(h, "codeword").get<std::string>());
        def.segment_type = require(h, "type").get<std::string>();
        def.payload_length = h.value("payload_length", 0);
        if (h.contains("payload_alphabet"))
            def.payload_alphabet = h.at("payload_alphabet").get<std::vector<int>>();
        for (int s : def.codeword) header_symbols.insert(s);
        g.headers.push_back(std::move(def));
    }
    // Default payload alphabet: symbols free of header use, which keeps
    // boundary delimitation automatic.
    std::vector<int> free_symbols;
    for (int s = 0; s < g.alphabet_size; ++s)
        if (!header_symbols.count(s)) free_symbols.push_back(s);
    for (auto& h : g.headers)
        if (h.payload_alphabet.empty() && h.payload_length > 0)
            h.payload_alphabet = free_symbols;

    if (doc.contains("junk_rule")) {
        const json& jr = doc.at("junk_rule");
        const auto names = require(jr, "states").get<std::vector<std::string>>();
        std::map<std::string, int> index;
        for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
        grammar::JunkRule rule;
        rule.num_states = static_cast<int>(names.size());
        rule.state_names = names;
        const std::string start = require(jr, "start").get<std::string>();
        if (!index.count(start)) throw Error(ErrorCode::IoError, "unknown start state");
        rule.start = index[start];
        rule.next.assign(rule.num_states, std::vector<int>(g.alphabet_size, -1));
        for (const auto& t : require(jr, "transitions")) {
            if (!t.is_array() || t.size() != 3)
                throw Error(ErrorCode::IoError, "transitions must be [from, symbol, to]");
            const std::string from = t.at(0).get<std::string>();
            const int symbol = t.at(1).get<int>();
            const std::string to = t.at(2).get<std::string>();
            if (!index.count(from) || !index.count(to))
                throw Error(ErrorCode::IoError, "unknown state in transition");
            if (symbol < 0 || symbol >= g.alphabet_size)
                throw Error(ErrorCode::IoError, "transition symbol out of alphabet");
            rule.next[index[from]][symbol] = index[to];
        }
        g.junk_rule = std::move(rule);
    } else {
        g.junk_rule = grammar::JunkRule::unconstrained(g.alphabet_size);
    }
    return g;
}

json grammar_to_json(const grammar::Grammar& g) {
    json doc;
    doc["alphabet_size"] = g.alphabet_size;
    json headers = json::array();
    for (const auto& h : g.headers) {
        json entry;
        entry["codeword"] = grammar::symbols_to_string(h.codeword);
        entry["type"] = h.segment_type;
        entry["payload_length"] = h.payload_length;
        entry["payload_alphabet"] = h.payload_alphabet;
        headers.push_back(entry);
    }
    doc["headers"] = headers;
    json jr;
    std::vector<std::string> names = g.junk_rule.state_names;
    if (names.empty())
        for (int i = 0; i < g.junk_rule.num_states; ++i) names.push_back("s" + std::to_string(i));
    jr["states"] = names;
    jr["start"] = names[g.junk_rule.start];
    json transitions = json::array();
    for (int s = 0; s < g.junk_rule.num_states; ++s)
        for (int a = 0; a < static_cast<int>(g.junk_rule.next[s].size()); ++a)
            if (g.junk_rule.next[s][a] >= 0)
                transitions.push_back(json::array({names[s], a, names[g.junk_rule.next[s][a]]}));
    jr["transitions"] = transitions;
    doc["junk_rule"] = jr;
    return doc;
}

grammar::Grammar load_grammar(const std::string& path) {
    return grammar_from_json(read_json_file(path));
}

costs::CostPtr cost_from_json(const json& doc) {
    const std::string kind = require(doc, "kind").get<std::string>();
    if (kind == "quadratic-kinetic")
        return costs::quadratic_kinetic(doc.value("weight", 1.0));
    if (kind == "kinetic-plus-potential")
        return costs::kinetic_plus_potential(doc.value("kinetic_weight", 1.0),
                                             doc.value("potential_weight", 1.0),
                                             doc.value("omega", 1.0));
    if (kind == "table-interpolated")
        return costs::table_interpolated(
            require(doc, "x_min").get<double>(), require(doc, "x_max").get<double>(),
            require(doc, "values").get<std::vector<std::vector<double>>>());
    if (kind == "composite")
        return costs::composite(require(doc, "factor").get<double>(),
                                cost_from_json(require(doc, "base")),
                                require(doc, "boundary_poly").get<std::vector<double>>());
    if (kind == "power")
        return costs::power(cost_from_json(require(doc, "base")),
                            require(doc, "exponent").get<double>(), doc.value("offset", 0.0));
    throw Error(ErrorCode::IoError, "unknown cost kind '" + kind + "'");
}

CostSpec cost_spec_from_json(const json& doc) {
    CostSpec spec;
    spec.local_cost = cost_from_json(doc);
    if (doc.contains("per_type_offsets"))
        for (const auto& [type, offset] : doc.at("per_type_offsets").items())
            spec.per_type_offsets[type] = offset.get<double>();
    spec.linear_equivalence_constant = doc.value("linear_equivalence_constant", 32.0);
    return spec;
}

CostSpec load_cost_spec(const std::string& path) {
    return cost_spec_from_json(read_json_file(path));
}

std::pair<pathint::LatticeSpec, pathint::ActionSpec> lattice_from_json(const json& doc) {
    pathint::LatticeSpec lattice;
    lattice.num_steps = require(doc, "num_steps").get<int>();
    lattice.step = doc.value("step", 1.0);
    const json grid = require(doc, "grid");
    if (grid.is_array()) {
        lattice.grid = grid.get<std::vector<double>>();
    } else {
        const double lo = require(grid, "min").get<double>();
        const double hi = require(grid, "max").get<double>();
        const int points = require(grid, "points").get<int>();
        if (points < 1) throw Error(ErrorCode::IoError, "grid needs at least one point");
        for (int i = 0; i < points; ++i)
            lattice.grid.push_back(points == 1 ? lo : lo + (hi - lo) * i / (points - 1));
    }
    const auto endpoints = require(doc, "endpoints").get<std::vector<double>>();
    if (endpoints.size() != 2) throw Error(ErrorCode::IoError, "endpoints must be [x_i, x_f]");
    lattice.endpoint_start = endpoints[0];
    lattice.endpoint_end = endpoints[1];

    pathint::ActionSpec action;
    if (doc.contains("action")) {
        const json& a = doc.at("action");
        action.mass = a.value("mass", 1.0);
        const std::string disc = a.value("discretization", std::string("midpoint"));
        if (disc == "midpoint")
            action.discretization = pathint::Discretization::Midpoint;
        else if (disc == "endpoint")
            action.discretization = pathint::Discretization::Endpoint;
        else
            throw Error(ErrorCode::IoError, "unknown discretization '" + disc + "'");
        if (a.contains("potential")) {
            const json& v = a.at("potential");
            const std::string kind = require(v, "kind").get<std::string>();
            if (kind == "free")
                action.potential = pathint::Potential::free_particle();
            else if (kind == "harmonic")
                action.potential = pathint::Potential::harmonic(v.value("omega", 1.0));
            else if (kind == "quartic")
                action.potential =
                    pathint::Potential::quartic_well(v.value("omega", 1.0), v.value("quartic", 0.0));
            else
                throw Error(ErrorCode::IoError, "unknown potential '" + kind + "'");
        }
    }
    return {lattice, action};
}

std::pair<pathint::LatticeSpec, pathint::ActionSpec> load_lattice(const std::string& path) {
    return lattice_from_json(read_json_file(path));
}

namespace {

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double parse_double(const std::string& s, const std::string& path) {
    try {
        return std::stod(s);
    } catch (...) {
        throw Error(ErrorCode::IoError, "bad number '" + s + "' in " + path);
    }
}

} // namespace

encoder::DiscreteHistory history_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::IoError, "empty history file");
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "t")
        throw Error(ErrorCode::IoError, "history CSV must start with a 't' column");
    const int dim = static_cast<int>(header.size()) - 1;
    if (dim < 1) throw Error(ErrorCode::IoError, "history CSV needs coordinate columns");

    encoder::DiscreteHistory h;
    h.dimension = dim;
    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != dim + 1)
            throw Error(ErrorCode::IoError, "ragged row in '" + path + "'");
        times.push_back(parse_double(fields[0], path));
        Vec x(dim);
        for (int i = 0; i < dim; ++i) x[i] = parse_double(fields[i + 1], path);
        h.nodes.push_back(std::move(x));
    }
    if (h.nodes.size() < 2) throw Error(ErrorCode::IoError, "history needs at least 2 nodes");
    h.step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(h.step > 0.0)) throw Error(ErrorCode::IoError, "history times must increase");
    return h;
}

std::vector<redundancy::CostEntry> cost_entries_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::IoError, "empty cost file");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "history_id" || header[1] != "ell")
        throw Error(ErrorCode::IoError, "cost CSV must start with 'history_id,ell'");
    std::vector<redundancy::CostEntry> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 2) throw Error(ErrorCode::IoError, "ragged row in '" + path + "'");
        entries.push_back({fields[0], parse_double(fields[1], path)});
    }
    return entries;
}

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string canonical_dump(const json& doc, bool pretty) {
    return (pretty ? doc.dump(2) : doc.dump()) + "\n";
}

namespace {

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
}

void render_rows(const json& rows, std::ostringstream& out) {
    // Uniform objects: header + aligned columns.
    std::vector<std::string> columns;
    for (const auto& [key, value] : rows.front().items()) {
        (void)value;
        columns.push_back(key);
    }
    std::vector<std::vector<std::string>> cells;
    cells.push_back(columns);
    for (const auto& row : rows) {
        std::vector<std::string> line;
        for (const auto& column : columns)
            line.push_back(row.contains(column) ? scalar_text(row.at(column)) : "");
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> widths(columns.size(), 0);
    for (const auto& line : cells)
        for (std::size_t c = 0; c < line.size(); ++c)
            widths[c] = std::max(widths[c], line[c].size());
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c)
            out << std::left << std::setw(static_cast<int>(widths[c]) + 2) << line[c];
        out << "\n";
    }
}

void render_table(const json& doc, const std::string& prefix, std::ostringstream& out) {
    for (const auto& [key, value] : doc.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            render_table(value, name, out);
        } else if (value.is_array() && !value.empty() && value.front().is_object()) {
            out << name << ":\n";
            render_rows(value, out);
        } else {
            out << std::left << std::setw(28) << name << scalar_text(value) << "\n";
        }
    }
}

} // namespace

std::string human_table(const json& doc) {
    std::ostringstream out;
    render_table(doc, "", out);
    return out.str();
}

} // namespace synlab::io
