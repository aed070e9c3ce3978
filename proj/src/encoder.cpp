#include "synlab/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "synlab/errors.hpp"

namespace synlab::encoder {

DiscreteHistory discretize(const Trajectory& trajectory, double t_initial, double t_final,
                           int resolution_n) {
    if (!(t_final > t_initial))
        throw Error(ErrorCode::InvalidArgument, "t_final must exceed t_initial");
    if (resolution_n < 1)
        throw Error(ErrorCode::InvalidArgument, "resolution must be >= 1");
    const double span = t_final - t_initial;
    const long long per_unit = 1LL << resolution_n;
    long long segments = std::llround(per_unit * span);
    if (segments < 1) segments = 1;

    DiscreteHistory h;
    h.resolution_n = resolution_n;
    h.step = span / static_cast<double>(segments);
    h.nodes.reserve(segments + 1);
    for (long long k = 0; k <= segments; ++k) {
        const double t = t_initial + span * (static_cast<double>(k) / segments);
        Vec x = trajectory(t);
        for (double v : x)
            if (!std::isfinite(v))
                throw Error(ErrorCode::InvalidTrajectory,
                            "non-finite sample at t = " + std::to_string(t));
        h.nodes.push_back(std::move(x));
    }
    h.dimension = static_cast<int>(h.nodes.front().size());
    for (const auto& x : h.nodes)
        if (static_cast<int>(x.size()) != h.dimension)
            throw Error(ErrorCode::InvalidTrajectory, "inconsistent sample dimension");
    return h;
}

Quantizer::Quantizer(Vec box_lo, Vec box_hi, int digits_n, int base)
    : box_lo_(std::move(box_lo)), box_hi_(std::move(box_hi)), digits_n_(digits_n), base_(base) {
    if (box_lo_.size() != box_hi_.size() || box_lo_.empty())
        throw Error(ErrorCode::InvalidArgument, "quantizer box dimensions disagree");
    for (std::size_t i = 0; i < box_lo_.size(); ++i)
        if (!(box_hi_[i] > box_lo_[i]))
            throw Error(ErrorCode::InvalidArgument, "quantizer box must have positive extent");
    if (digits_n_ < 1 || base_ < 2)
        throw Error(ErrorCode::InvalidArgument, "quantizer needs digits >= 1 and base >= 2");
    levels_ = 1;
    for (int i = 0; i < digits_n_; ++i) {
        levels_ *= base_;
        if (levels_ > (1LL << 50))
            throw Error(ErrorCode::InvalidArgument, "quantizer resolution too fine");
    }
}

std::vector<int> Quantizer::quantize(const Vec& x) const {
    if (static_cast<int>(x.size()) != dimension())
        throw Error(ErrorCode::InvalidArgument, "point dimension does not match quantizer");
    std::vector<int> digits;
    digits.reserve(x.size() * digits_n_);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < box_lo_[i] || x[i] > box_hi_[i])
            throw Error(ErrorCode::RangeError,
                        "coordinate " + std::to_string(x[i]) + " outside quantizer box");
        const double unit = (x[i] - box_lo_[i]) / (box_hi_[i] - box_lo_[i]);
        long long level = static_cast<long long>(unit * static_cast<double>(levels_));
        if (level >= levels_) level = levels_ - 1; // upper edge lands in top bin
        for (int d = digits_n_ - 1; d >= 0; --d) {
            long long place = 1;
            for (int k = 0; k < d; ++k) place *= base_;
            digits.push_back(static_cast<int>(level / place));
            level %= place;
        }
    }
    return digits;
}

Vec Quantizer::dequantize(const std::vector<int>& digits) const {
    if (digits.size() != static_cast<std::size_t>(dimension()) * digits_n_)
        throw Error(ErrorCode::InvalidArgument, "digit count does not match quantizer");
    Vec x(dimension());
    std::size_t pos = 0;
    for (int i = 0; i < dimension(); ++i) {
        long long level = 0;
        for (int d = 0; d < digits_n_; ++d) level = level * base_ + digits[pos++];
        const double unit = (static_cast<double>(level) + 0.5) / static_cast<double>(levels_);
        x[i] = box_lo_[i] + unit * (box_hi_[i] - box_lo_[i]);
    }
    return x;
}

std::string TypeClassifier::classify(const grammar::Grammar& g, const Vec& a,
                                     const Vec& b) const {
    for (const auto& rule : rules)
        if (rule.predicate(a, b)) return rule.segment_type;
    if (!rules.empty())
        throw Error(ErrorCode::A4Violation, "no classifier rule matches the segment");
    if (g.headers.empty())
        throw Error(ErrorCode::InvalidGrammar, "grammar has no segment types");
    return g.headers.front().segment_type;
}

TypeClassifier TypeClassifier::step_thresholds(
    std::vector<std::pair<std::string, double>> thresholds) {
    TypeClassifier c;
    for (auto& [type, max_step] : thresholds) {
        const double bound = max_step;
        c.rules.push_back({type, [bound](const Vec& a, const Vec& b) {
                               double step = 0.0;
                               for (std::size_t i = 0; i < a.size(); ++i)
                                   step = std::max(step, std::abs(b[i] - a[i]));
                               return step <= bound;
                           }});
    }
    return c;
}

Program encode(const DiscreteHistory& history, const grammar::Grammar& g,
               const Quantizer& quantizer, const TypeClassifier& classifier) {
    if (history.num_segments() == 0)
        throw Error(ErrorCode::InvalidArgument, "history has no segments");
    Program p;
    for (std::size_t k = 0; k < history.num_segments(); ++k) {
        const auto [a, b] = history.segment(k);
        const std::string type = classifier.classify(g, a, b);
        const grammar::HeaderDef* header = g.find_type(type);
        if (header == nullptr)
            throw Error(ErrorCode::InvalidGrammar, "segment type '" + type + "' not in grammar");
        const auto digits_a = quantizer.quantize(a);
        const auto digits_b = quantizer.quantize(b);
        const int want = static_cast<int>(digits_a.size() + digits_b.size());
        if (header->payload_length != want)
            throw Error(ErrorCode::InvalidGrammar,
                        "type '" + type + "' payload length " +
                            std::to_string(header->payload_length) + " != required " +
                            std::to_string(want));
        p.symbols.insert(p.symbols.end(), header->codeword.begin(), header->codeword.end());
        auto append_digits = [&](const std::vector<int>& digits) {
            for (int d : digits) {
                if (d >= static_cast<int>(header->payload_alphabet.size()))
                    throw Error(ErrorCode::RangeError,
                                "digit exceeds payload alphabet of type '" + type + "'");
                p.symbols.push_back(header->payload_alphabet[d]);
            }
        };
        append_digits(digits_a);
        append_digits(digits_b);
    }
    return p;
}

std::vector<Vec> decode_history(const grammar::Grammar& g, const Program& program,
                                const Quantizer& quantizer) {
    const grammar::SegmentList segments = grammar::decode_stream(g, program.symbols);
    std::vector<Vec> nodes;
    const int per_point = quantizer.dimension() * quantizer.digits_per_coordinate();
    for (std::size_t k = 0; k < segments.segments.size(); ++k) {
        const auto& seg = segments.segments[k];
        const grammar::HeaderDef* header = g.find_type(seg.segment_type);
        // Payload symbols back to digit indices.
        std::vector<int> digits;
        digits.reserve(seg.payload.size());
        for (grammar::Symbol s : seg.payload) {
            const auto it = std::find(header->payload_alphabet.begin(),
                                      header->payload_alphabet.end(), s);
            digits.push_back(static_cast<int>(it - header->payload_alphabet.begin()));
        }
        if (static_cast<int>(digits.size()) != 2 * per_point)
            throw Error(ErrorCode::ParseError, "payload does not hold an endpoint pair", k);
        const Vec a = quantizer.dequantize({digits.begin(), digits.begin() + per_point});
        const Vec b = quantizer.dequantize({digits.begin() + per_point, digits.end()});
        if (k == 0) nodes.push_back(a);
        nodes.push_back(b);
    }
    return nodes;
}

std::size_t raw_length(const Program& program) { return program.symbols.size(); }

std::size_t raw_length(const grammar::Grammar& g, const grammar::SegmentList& segments) {
    std::size_t total = 0;
    for (const auto& seg : segments.segments) {
        const grammar::HeaderDef* h = g.find_type(seg.segment_type);
        if (h == nullptr)
            throw Error(ErrorCode::InvalidArgument,
                        "unknown segment type '" + seg.segment_type + "'");
        total += h->codeword.size() + seg.payload.size();
    }
    return total;
}

MinimalCostResult minimal_cost(const DiscreteHistory& history, const CostSpec& spec,
                               const std::vector<std::vector<SegmentAlternative>>& alternatives) {
    if (history.num_segments() == 0)
        throw Error(ErrorCode::InvalidArgument, "history has no segments");
    if (alternatives.size() != history.num_segments())
        throw Error(ErrorCode::InvalidArgument, "one alternative list per segment required");

    MinimalCostResult result;
    result.per_segment_cost.reserve(history.num_segments());
    for (std::size_t k = 0; k < history.num_segments(); ++k) {
        if (alternatives[k].empty())
            throw Error(ErrorCode::A4Violation,
                        "segment " + std::to_string(k) + " has no admissible encoding");
        const auto [a, b] = history.segment(k);
        double best = 0.0;
        std::string best_type;
        bool first = true;
        for (const auto& alt : alternatives[k]) {
            const double cost = spec.segment_cost(a, b, alt.segment_type);
            if (first || cost < best || (cost == best && alt.segment_type < best_type)) {
                best = cost;
                best_type = alt.segment_type;
                first = false;
            }
        }
        result.per_segment_cost.push_back(best);
        result.chosen_types.push_back(best_type);
        result.cost += best;
    }
    return result;
}

} // namespace synlab::encoder
