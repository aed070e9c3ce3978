#include "synlab/grammar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "synlab/errors.hpp"
#include "synlab/precision.hpp"

namespace synlab::grammar {

namespace {

char symbol_to_char(Symbol s) {
    if (s < 10) return static_cast<char>('0' + s);
    return static_cast<char>('a' + (s - 10));
}

int char_to_symbol(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return 10 + (c - 'a');
    throw Error(ErrorCode::InvalidArgument, std::string("bad symbol character '") + c + "'");
}

bool is_prefix(const SymbolString& p, const SymbolString& w) {
    if (p.size() > w.size()) return false;
    return std::equal(p.begin(), p.end(), w.begin());
}

} // namespace

std::string symbols_to_string(const SymbolString& s) {
    std::string out;
    out.reserve(s.size());
    for (Symbol x : s) out.push_back(symbol_to_char(x));
    return out;
}

SymbolString symbols_from_string(const std::string& s) {
    SymbolString out;
    out.reserve(s.size());
    for (char c : s) out.push_back(char_to_symbol(c));
    return out;
}

JunkRule JunkRule::unconstrained(int alphabet_size) {
    JunkRule r;
    r.num_states = 1;
    r.start = 0;
    r.next.assign(1, std::vector<int>(alphabet_size, 0));
    r.state_names = {"s0"};
    return r;
}

JunkRule JunkRule::forbid_substring(int alphabet_size, const SymbolString& word) {
    if (word.empty())
        throw Error(ErrorCode::InvalidArgument, "forbidden word must be nonempty");
    const int m = static_cast<int>(word.size());
    // KMP failure function.
    std::vector<int> fail(m, 0);
    for (int i = 1; i < m; ++i) {
        int k = fail[i - 1];
        while (k > 0 && word[i] != word[k]) k = fail[k - 1];
        if (word[i] == word[k]) ++k;
        fail[i] = k;
    }
    // States 0..m-1 = length of the current match; reaching m is forbidden.
    JunkRule r;
    r.num_states = m;
    r.start = 0;
    r.next.assign(m, std::vector<int>(alphabet_size, -1));
    for (int state = 0; state < m; ++state) {
        for (Symbol a = 0; a < alphabet_size; ++a) {
            int k = state;
            while (k > 0 && word[k] != a) k = fail[k - 1];
            if (word[k] == a) ++k;
            if (k < m) r.next[state][a] = k;
        }
    }
    for (int i = 0; i < m; ++i) r.state_names.push_back("m" + std::to_string(i));
    return r;
}

const HeaderDef* Grammar::find_type(const std::string& segment_type) const {
    for (const auto& h : headers)
        if (h.segment_type == segment_type) return &h;
    return nullptr;
}

PrefixReport check_prefix_free(const std::vector<SymbolString>& codewords) {
    if (codewords.empty())
        throw Error(ErrorCode::InvalidGrammar, "empty header set");
    std::vector<std::pair<SymbolString, SymbolString>> violations;
    for (std::size_t i = 0; i < codewords.size(); ++i) {
        for (std::size_t j = 0; j < codewords.size(); ++j) {
            if (i == j) continue;
            if (codewords[i].size() < codewords[j].size() &&
                is_prefix(codewords[i], codewords[j])) {
                violations.emplace_back(codewords[i], codewords[j]);
            }
            if (i != j && codewords[i] == codewords[j] && i < j) {
                violations.emplace_back(codewords[i], codewords[j]);
            }
        }
    }
    PrefixReport report;
    if (!violations.empty()) {
        std::sort(violations.begin(), violations.end());
        report.ok = false;
        report.violation = violations.front();
    }
    return report;
}

KraftResult kraft_sum(const std::vector<SymbolString>& codewords, int alphabet_size) {
    if (alphabet_size < 2)
        throw Error(ErrorCode::InvalidArgument, "alphabet size must be >= 2");
    KraftResult result;
    result.sum = 0;
    for (const auto& w : codewords) {
        BigInt denom = 1;
        for (std::size_t i = 0; i < w.size(); ++i) denom *= alphabet_size;
        result.sum += BigRational(1, denom);
    }
    result.complete = (result.sum == 1);
    return result;
}

std::vector<EmbeddingViolation> check_boundary_delimitation(const Grammar& g) {
    std::vector<EmbeddingViolation> out;
    for (std::size_t hi = 0; hi < g.headers.size(); ++hi) {
        const auto& h = g.headers[hi];
        for (const auto& t : g.headers) {
            if (static_cast<int>(h.codeword.size()) > t.payload_length) continue;
            const std::set<Symbol> payload(t.payload_alphabet.begin(), t.payload_alphabet.end());
            bool all_in = !h.codeword.empty();
            for (Symbol s : h.codeword)
                if (!payload.count(s)) { all_in = false; break; }
            if (all_in) out.push_back({hi, t.segment_type});
        }
    }
    return out;
}

ValidationReport validate(const Grammar& g) {
    ValidationReport report;
    if (g.alphabet_size < 2)
        report.structural_errors.push_back("alphabet_size must be >= 2");
    if (g.headers.empty())
        report.structural_errors.push_back("no headers defined");

    std::set<std::string> seen_types;
    std::vector<SymbolString> codewords;
    for (const auto& h : g.headers) {
        codewords.push_back(h.codeword);
        if (h.codeword.empty())
            report.structural_errors.push_back("empty header codeword");
        for (Symbol s : h.codeword)
            if (s < 0 || s >= g.alphabet_size)
                report.structural_errors.push_back("header symbol out of alphabet");
        if (h.payload_length < 0)
            report.structural_errors.push_back("negative payload length");
        if (h.payload_length > 0 && h.payload_alphabet.empty())
            report.structural_errors.push_back(
                "type '" + h.segment_type + "' has payload but empty payload alphabet");
        for (Symbol s : h.payload_alphabet)
            if (s < 0 || s >= g.alphabet_size)
                report.structural_errors.push_back("payload symbol out of alphabet");
        if (std::set<Symbol>(h.payload_alphabet.begin(), h.payload_alphabet.end()).size() !=
            h.payload_alphabet.size())
            report.structural_errors.push_back(
                "duplicate payload symbol in type '" + h.segment_type + "'");
        if (!seen_types.insert(h.segment_type).second)
            report.structural_errors.push_back("duplicate segment type '" + h.segment_type + "'");
    }
    if (!g.headers.empty()) {
        report.prefix = check_prefix_free(codewords);
        report.kraft = kraft_sum(codewords, g.alphabet_size);
    }
    const auto& jr = g.junk_rule;
    if (jr.num_states > 0) {
        if (jr.start < 0 || jr.start >= jr.num_states)
            report.structural_errors.push_back("junk rule start state out of range");
        for (const auto& row : jr.next)
            for (int to : row)
                if (to < -1 || to >= jr.num_states)
                    report.structural_errors.push_back("junk rule transition out of range");
    }
    report.embeddings = check_boundary_delimitation(g);
    report.ok = report.prefix.ok && report.embeddings.empty() &&
                report.structural_errors.empty() && report.kraft.sum <= 1;
    return report;
}

// ---------------------------------------------------------------------------
// Counting

std::vector<BigInt> count_strings_upto(const JunkRule& rule, int length_max) {
    if (length_max < 0)
        throw Error(ErrorCode::InvalidArgument, "negative length");
    if (rule.num_states == 0)
        throw Error(ErrorCode::InvalidGrammar, "junk rule has no states");
    std::vector<BigInt> counts;
    counts.reserve(length_max + 1);
    std::vector<BigInt> state_count(rule.num_states, 0);
    state_count[rule.start] = 1;
    counts.push_back(1); // the empty string
    std::vector<BigInt> next_count(rule.num_states);
    for (int len = 1; len <= length_max; ++len) {
        std::fill(next_count.begin(), next_count.end(), BigInt(0));
        for (int s = 0; s < rule.num_states; ++s) {
            if (state_count[s] == 0) continue;
            for (int to : rule.next[s])
                if (to >= 0) next_count[to] += state_count[s];
        }
        state_count.swap(next_count);
        BigInt total = 0;
        for (const auto& c : state_count) total += c;
        counts.push_back(total);
    }
    return counts;
}

BigInt count_strings(const JunkRule& rule, int length) {
    return count_strings_upto(rule, length).back();
}

GrowthResult growth_rate(const JunkRule& rule) {
    init_precision_from_env();
    if (rule.num_states == 0)
        throw Error(ErrorCode::InvalidGrammar, "junk rule has no states");
    const int n = rule.num_states;
    // Transfer matrix: T[s][t] = number of symbols moving s -> t.
    std::vector<std::vector<double>> transfer(n, std::vector<double>(n, 0.0));
    for (int s = 0; s < n; ++s)
        for (int to : rule.next[s])
            if (to >= 0) transfer[s][to] += 1.0;

    // Power iteration on T + I; the shift makes periodic automata converge.
    std::vector<double> v(n, 1.0), w(n, 0.0);
    double lambda = 0.0;
    int stable = 0;
    for (int iter = 0; iter < 1000000 && stable < 16; ++iter) {
        for (int t = 0; t < n; ++t) {
            double acc = v[t]; // identity shift
            for (int s = 0; s < n; ++s) acc += v[s] * transfer[s][t];
            w[t] = acc;
        }
        double norm_w = 0.0, norm_v = 0.0;
        for (int t = 0; t < n; ++t) { norm_w += w[t]; norm_v += v[t]; }
        const double lambda_new = norm_w / norm_v;
        if (std::abs(lambda_new - lambda) <= 1e-15 * std::max(1.0, lambda_new))
            ++stable;
        else
            stable = 0;
        lambda = lambda_new;
        for (int t = 0; t < n; ++t) v[t] = w[t] / norm_w;
    }
    GrowthResult result;
    result.gamma = lambda - 1.0;
    if (!(result.gamma > 1.0 + 1e-9))
        throw Error(ErrorCode::DegenerateGrammar,
                    "junk growth rate " + std::to_string(result.gamma) + " <= 1");
    result.redundancy_exponent = std::log(result.gamma);

    // Cross-check against exact counts: log N(201) - log N(200).
    const auto counts = count_strings_upto(rule, 201);
    if (counts[200] == 0 || counts[201] == 0)
        throw Error(ErrorCode::DegenerateGrammar, "junk language dies out");
    const HighFloat ratio = boost::multiprecision::log(HighFloat(counts[201])) -
                            boost::multiprecision::log(HighFloat(counts[200]));
    result.finite_length_ratio = ratio.convert_to<double>();
    result.finite_length_deviation =
        std::abs(result.finite_length_ratio - result.redundancy_exponent);
    return result;
}

CumulativeResult junk_cumulative(const JunkRule& rule, int length_max) {
    CumulativeResult result;
    const auto counts = count_strings_upto(rule, length_max);
    result.exact = 0;
    for (const auto& c : counts) result.exact += c;
    try {
        const GrowthResult growth = growth_rate(rule);
        result.gamma = growth.gamma;
        const HighFloat g(growth.gamma);
        const HighFloat closed = boost::multiprecision::pow(g, length_max + 1) / (g - 1);
        result.closed_form = closed;
        const HighFloat rel = boost::multiprecision::abs(closed - HighFloat(result.exact)) /
                              HighFloat(result.exact);
        result.relative_deviation = rel.convert_to<double>();
    } catch (const Error&) {
        // Degenerate rule: exact count stands on its own.
    }
    return result;
}

// ---------------------------------------------------------------------------
// Decoding

namespace {

const HeaderDef* match_header(const Grammar& g, SymbolSource& source) {
    std::vector<const HeaderDef*> alive;
    alive.reserve(g.headers.size());
    for (const auto& h : g.headers) alive.push_back(&h);
    std::size_t k = 0;
    while (true) {
        if (source.exhausted())
            throw Error(ErrorCode::IncompleteProgram, "stream ended inside a header",
                        source.consumed());
        const Symbol s = source.read();
        std::vector<const HeaderDef*> still;
        for (const HeaderDef* h : alive)
            if (k < h->codeword.size() && h->codeword[k] == s) still.push_back(h);
        if (still.empty())
            throw Error(ErrorCode::ParseError, "no header matches the input",
                        source.consumed() - 1);
        ++k;
        for (const HeaderDef* h : still)
            if (h->codeword.size() == k) return h; // prefix-free: unique
        alive.swap(still);
    }
}

} // namespace

SegmentList decode_stream(const Grammar& g, SymbolSource& source) {
    SegmentList out;
    while (!source.exhausted()) {
        const HeaderDef* header = match_header(g, source);
        Segment segment;
        segment.segment_type = header->segment_type;
        segment.payload.reserve(header->payload_length);
        for (int i = 0; i < header->payload_length; ++i) {
            if (source.exhausted())
                throw Error(ErrorCode::IncompleteProgram, "stream ended inside a payload",
                            source.consumed());
            const Symbol s = source.read();
            if (std::find(header->payload_alphabet.begin(), header->payload_alphabet.end(), s) ==
                header->payload_alphabet.end())
                throw Error(ErrorCode::ParseError,
                            "symbol not admissible in payload of type '" +
                                header->segment_type + "'",
                            source.consumed() - 1);
            segment.payload.push_back(s);
        }
        out.segments.push_back(std::move(segment));
    }
    out.consumed_length = source.consumed();
    return out;
}

SegmentList decode_stream(const Grammar& g, const SymbolString& symbols) {
    SymbolSource source(symbols);
    return decode_stream(g, source);
}

SymbolString serialize(const Grammar& g, const SegmentList& segments) {
    SymbolString out;
    for (const auto& seg : segments.segments) {
        const HeaderDef* h = g.find_type(seg.segment_type);
        if (h == nullptr)
            throw Error(ErrorCode::InvalidArgument, "unknown segment type '" + seg.segment_type + "'");
        out.insert(out.end(), h->codeword.begin(), h->codeword.end());
        out.insert(out.end(), seg.payload.begin(), seg.payload.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ambiguity instrumentation

std::uint64_t parse_count(const Grammar& g, const SymbolString& symbols) {
    const std::size_t n = symbols.size();
    constexpr std::uint64_t kCap = std::uint64_t(1) << 62;
    std::vector<std::uint64_t> ways(n + 1, 0);
    ways[n] = 1;
    for (std::size_t pos = n; pos-- > 0;) {
        std::uint64_t acc = 0;
        for (const auto& h : g.headers) {
            const std::size_t end = pos + h.codeword.size() + h.payload_length;
            if (end > n) continue;
            if (!std::equal(h.codeword.begin(), h.codeword.end(), symbols.begin() + pos)) continue;
            bool payload_ok = true;
            for (std::size_t i = pos + h.codeword.size(); i < end; ++i) {
                if (std::find(h.payload_alphabet.begin(), h.payload_alphabet.end(), symbols[i]) ==
                    h.payload_alphabet.end()) {
                    payload_ok = false;
                    break;
                }
            }
            if (!payload_ok) continue;
            acc += ways[end];
            if (acc > kCap) acc = kCap;
        }
        ways[pos] = acc;
    }
    return ways[0];
}

std::optional<SymbolString> find_ambiguous_witness(const Grammar& g) {
    auto common_symbol = [](const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
        std::optional<Symbol> best;
        for (Symbol s : a)
            if (std::find(b.begin(), b.end(), s) != b.end())
                if (!best || s < *best) best = s;
        return best;
    };
    for (const auto& shorter : g.headers) {
        for (const auto& longer : g.headers) {
            if (&shorter == &longer) continue;
            if (shorter.codeword.size() >= longer.codeword.size()) continue;
            if (!std::equal(shorter.codeword.begin(), shorter.codeword.end(),
                            longer.codeword.begin()))
                continue;
            // longer = shorter + tail.  Try: parse as [longer, q] vs
            // [shorter, tail + q], which needs len(shorter) = |tail| + len(longer)
            // and tail/q admissible in shorter's payload alphabet.
            const SymbolString tail(longer.codeword.begin() + shorter.codeword.size(),
                                    longer.codeword.end());
            if (shorter.payload_length !=
                static_cast<int>(tail.size()) + longer.payload_length)
                continue;
            bool tail_ok = true;
            for (Symbol s : tail)
                if (std::find(shorter.payload_alphabet.begin(), shorter.payload_alphabet.end(),
                              s) == shorter.payload_alphabet.end())
                    tail_ok = false;
            if (!tail_ok) continue;
            SymbolString filler;
            if (longer.payload_length > 0) {
                const auto fill = common_symbol(shorter.payload_alphabet, longer.payload_alphabet);
                if (!fill) continue;
                filler.assign(longer.payload_length, *fill);
            }
            SymbolString witness = longer.codeword;
            witness.insert(witness.end(), filler.begin(), filler.end());
            if (parse_count(g, witness) >= 2) return witness;
        }
    }
    return std::nullopt;
}

} // namespace synlab::grammar
