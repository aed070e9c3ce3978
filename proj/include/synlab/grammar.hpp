#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "synlab/precision.hpp"

namespace synlab::grammar {

// Symbols are small integers 0..alphabet_size-1.
using Symbol = int;
using SymbolString = std::vector<Symbol>;

std::string symbols_to_string(const SymbolString& s);
SymbolString symbols_from_string(const std::string& s);

/// One segment type: a header codeword announcing the type, followed by a
/// fixed-length payload over a restricted sub-alphabet.  Fixed payload length
/// per type is what makes decoding one-pass with zero lookahead.
struct HeaderDef {
    SymbolString codeword;
    std::string segment_type;
    int payload_length = 0;
    std::vector<Symbol> payload_alphabet;
};

/// Deterministic constraint automaton defining the admissible junk strings.
/// All states accept; N(L) counts paths of length L from the start state.
struct JunkRule {
    int num_states = 0;
    int start = 0;
    // next[state][symbol] = successor state, or -1 if the symbol is forbidden.
    std::vector<std::vector<int>> next;
    std::vector<std::string> state_names; // optional, for file round-trips

    int alphabet_size() const { return num_states == 0 ? 0 : static_cast<int>(next[0].size()); }

    static JunkRule unconstrained(int alphabet_size);
    /// Strings over the full alphabet that avoid `word` as a factor
    /// (KMP failure automaton with the accepting-word state removed).
    static JunkRule forbid_substring(int alphabet_size, const SymbolString& word);
};

struct Grammar {
    int alphabet_size = 2;
    std::vector<HeaderDef> headers;
    JunkRule junk_rule;

    const HeaderDef* find_type(const std::string& segment_type) const;
};

// ---------------------------------------------------------------------------
// Well-formedness

struct PrefixReport {
    bool ok = true;
    // Lexicographically first ordered pair (p, w) with p a strict prefix of w.
    std::optional<std::pair<SymbolString, SymbolString>> violation;
};

PrefixReport check_prefix_free(const std::vector<SymbolString>& codewords);

struct KraftResult {
    BigRational sum;
    bool complete = false; // sum == 1
};

KraftResult kraft_sum(const std::vector<SymbolString>& codewords, int alphabet_size);

struct EmbeddingViolation {
    std::size_t header_index;     // the embedded header
    std::string payload_type;     // the type whose payloads can contain it
};

/// Headers must not be expressible inside any admissible payload, otherwise
/// segment boundaries stop being recognizable for stream resynchronization.
std::vector<EmbeddingViolation> check_boundary_delimitation(const Grammar& g);

struct ValidationReport {
    PrefixReport prefix;
    KraftResult kraft;
    std::vector<EmbeddingViolation> embeddings;
    std::vector<std::string> structural_errors;
    bool ok = false;
};

ValidationReport validate(const Grammar& g);

// ---------------------------------------------------------------------------
// Exact counting and growth rate of the junk sector

/// Exact number of admissible strings of length exactly L.
BigInt count_strings(const JunkRule& rule, int length);

/// N(0), N(1), ..., N(L_max) in one dynamic-programming sweep.
std::vector<BigInt> count_strings_upto(const JunkRule& rule, int length_max);

struct GrowthResult {
    double gamma = 0.0;            // spectral radius of the transfer matrix
    double redundancy_exponent = 0.0; // ln(gamma)
    double finite_length_ratio = 0.0; // log N(L+1) - log N(L) at L = 200
    double finite_length_deviation = 0.0;
};

/// Power iteration on the transfer matrix (shifted to kill periodicity),
/// relative tolerance 1e-12, cross-checked against exact counts at L = 200.
/// Throws DegenerateGrammar when the growth rate is <= 1.
GrowthResult growth_rate(const JunkRule& rule);

struct CumulativeResult {
    BigInt exact;                           // sum of N(L) for L <= L_max
    std::optional<double> gamma;            // absent for degenerate rules
    std::optional<HighFloat> closed_form;   // gamma^(L_max+1) / (gamma-1)
    std::optional<double> relative_deviation;
};

CumulativeResult junk_cumulative(const JunkRule& rule, int length_max);

// ---------------------------------------------------------------------------
// Decoding

struct Segment {
    std::string segment_type;
    SymbolString payload;
};

struct SegmentList {
    std::vector<Segment> segments;
    std::size_t consumed_length = 0;
};

/// Instrumented forward-only symbol reader.  Decoders pull one symbol at a
/// time; the recorded high-water mark proves the no-lookahead property.
class SymbolSource {
public:
    explicit SymbolSource(std::span<const Symbol> data) : data_(data) {}

    bool exhausted() const { return pos_ >= data_.size(); }
    std::size_t consumed() const { return pos_; }

    Symbol read() {
        max_index_read_ = static_cast<std::ptrdiff_t>(pos_);
        return data_[pos_++];
    }

    /// Largest index handed out so far, -1 if nothing was read.
    std::ptrdiff_t max_index_read() const { return max_index_read_; }

private:
    std::span<const Symbol> data_;
    std::size_t pos_ = 0;
    std::ptrdiff_t max_index_read_ = -1;
};

/// Single forward pass; every symbol is read exactly once.  Throws
/// IncompleteProgram (with position) on truncation, ParseError when no header
/// or payload continuation is admissible.
SegmentList decode_stream(const Grammar& g, SymbolSource& source);
SegmentList decode_stream(const Grammar& g, const SymbolString& symbols);

/// Inverse of decode_stream: re-emits headers and payloads verbatim.
SymbolString serialize(const Grammar& g, const SegmentList& segments);

// ---------------------------------------------------------------------------
// Ambiguity instrumentation

/// Number of distinct complete parses of `symbols`, ignoring the prefix-free
/// precondition (dynamic program over positions; saturates at 2^62).  A
/// well-formed grammar admits at most one parse of any string.
std::uint64_t parse_count(const Grammar& g, const SymbolString& symbols);

/// For a grammar whose headers violate prefix-freeness, attempts to construct
/// a string with two distinct complete parses from a violating pair.
std::optional<SymbolString> find_ambiguous_witness(const Grammar& g);

} // namespace synlab::grammar
