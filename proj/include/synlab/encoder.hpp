#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "synlab/costs.hpp"
#include "synlab/grammar.hpp"

namespace synlab::encoder {

/// A finite-resolution history: nodes x_0..x_N at uniform temporal spacing.
/// Coordinates are stored as full reals; the n-digit rounding happens in the
/// program layer (Quantizer), keeping the analytic layer smooth.
struct DiscreteHistory {
    int resolution_n = 1;
    double step = 1.0;
    int dimension = 1;
    std::vector<Vec> nodes;

    std::size_t num_segments() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    std::pair<const Vec&, const Vec&> segment(std::size_t k) const {
        return {nodes[k], nodes[k + 1]};
    }
};

using Trajectory = std::function<Vec(double)>;

/// Samples the trajectory at 2^n segments per unit time (dyadic refinement,
/// so histories at successive resolutions are nested).
DiscreteHistory discretize(const Trajectory& trajectory, double t_initial, double t_final,
                           int resolution_n);

/// Fixed-point coordinate codec: digits_n base-b digits per coordinate over a
/// box.  Values exactly on the upper edge land in the top bin; values outside
/// the box are rejected.
class Quantizer {
public:
    Quantizer(Vec box_lo, Vec box_hi, int digits_n, int base);

    int digits_per_coordinate() const { return digits_n_; }
    int base() const { return base_; }
    int dimension() const { return static_cast<int>(box_lo_.size()); }

    /// Digit indices (most significant first), dimension * digits_n of them.
    std::vector<int> quantize(const Vec& x) const;
    /// Bin-center reconstruction.
    Vec dequantize(const std::vector<int>& digits) const;

private:
    Vec box_lo_, box_hi_;
    int digits_n_;
    int base_;
    long long levels_;
};

/// Maps a segment to a segment type; rules are tried in order, first match
/// wins.  An empty table sends everything to the grammar's first type.
struct TypeClassifier {
    struct Rule {
        std::string segment_type;
        std::function<bool(const Vec&, const Vec&)> predicate;
    };
    std::vector<Rule> rules;

    std::string classify(const grammar::Grammar& g, const Vec& a, const Vec& b) const;

    /// Step-size thresholds: the first entry whose max_step bounds |b - a|
    /// (infinity norm) wins; the last entry should be a catch-all.
    static TypeClassifier step_thresholds(std::vector<std::pair<std::string, double>> thresholds);
};

struct Program {
    grammar::SymbolString symbols;
};

/// Encodes each segment as header + quantized endpoint pair.  The grammar's
/// payload lengths must equal 2 * dimension * digits_n for each type used.
Program encode(const DiscreteHistory& history, const grammar::Grammar& g,
               const Quantizer& quantizer, const TypeClassifier& classifier = {});

/// Reconstructs the quantized node sequence from a decoded program.
std::vector<Vec> decode_history(const grammar::Grammar& g, const Program& program,
                                const Quantizer& quantizer);

std::size_t raw_length(const Program& program);
std::size_t raw_length(const grammar::Grammar& g, const grammar::SegmentList& segments);

/// One admissible encoding of a segment: its type and the raw symbol count it
/// would occupy.
struct SegmentAlternative {
    std::string segment_type;
    int raw_length = 0;
};

struct MinimalCostResult {
    double cost = 0.0;
    std::vector<std::string> chosen_types;
    std::vector<double> per_segment_cost;
};

/// Minimal descriptive cost: the additive structure makes the minimization
/// segment-local.  Ties break toward the lexicographically smallest type.
MinimalCostResult minimal_cost(const DiscreteHistory& history, const CostSpec& spec,
                               const std::vector<std::vector<SegmentAlternative>>& alternatives);

} // namespace synlab::encoder
