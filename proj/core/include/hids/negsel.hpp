#ifndef HIDS_NEGSEL_HPP
#define HIDS_NEGSEL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hids/detector.hpp"
#include "hids/rng.hpp"
#include "hids/schema.hpp"

namespace hids {

struct GaConfig {
    int population_size = 1600;
    std::uint64_t iterations = 50000;
    double crossover_rate = 1.0;
    // Negative -> 1/L with L the gene count of the schema.
    double mutation_rate = -1.0;
    double w1 = 0.6;
    double w2 = 0.4;
    std::uint64_t seed = 1;
    std::uint64_t log_every = 100;
    // Classic deterministic crowding produces two complementary children per
    // step; the default follows the single-child presentation.
    bool two_children = false;

    double effective_mutation_rate(const FeatureSchema& schema) const;
    // Throws UsageError on weight or rate violations.
    void validate() const;
};

// Population min/max of both raw objectives; the normalization window for
// the Sum of Weighted Ratios.
struct ObjectiveStats {
    double min1 = 0.0, max1 = 0.0;
    double min2 = 0.0, max2 = 0.0;
};

// fr = (obj - min) / (max - min); 0 when the window is degenerate.
double fitness_ratio(double obj, double min_v, double max_v);

// fitness = w1 * fr1 - w2 * fr2 (obj2 is a penalty for covering self space).
double fitness_from_ratios(double fr1, double fr2, double w1, double w2);
double fitness_of(double obj1, double obj2, const ObjectiveStats& stats, double w1, double w2);

// Uniform crossover: each gene copied from either parent with probability
// 1/2, result repaired. Stream consumption: one below(2) per gene
// (0 -> first parent's gene).
Detector uniform_crossover(const FeatureSchema& schema, const Detector& p1, const Detector& p2,
                           RandomStream& rng);

// Per-gene mutation: with probability `rate`, the gene becomes -1 or a
// uniform legal value (an even split); result repaired. Stream consumption
// per gene: one real01() gate, then on mutation one below(2) choice and,
// for the value branch, one below(domain).
Detector mutate(const FeatureSchema& schema, const Detector& d, double rate, RandomStream& rng);

// Exact bitset index over the self set: per-feature prefix bitsets let a
// detector's self-match count be evaluated with one word-wise pass per
// specified field. Counts are identical to the brute-force loop.
class SelfIndex {
public:
    SelfIndex(const FeatureSchema& schema, std::span<const ConnectionVector> self_set);

    int count_matches(const Detector& d) const;
    std::size_t size() const { return n_records_; }

private:
    std::size_t n_records_ = 0;
    std::size_t words_ = 0;
    int feature_count_ = 0;
    // prefix_[f][t] = bitset of records whose feature f value is <= vmin+t.
    std::vector<std::vector<std::vector<std::uint64_t>>> prefix_;
    std::vector<FieldLayout> layout_;
};

struct StepOutcome {
    bool replaced = false;
    int parent_a = 0, parent_b = 0;
    int replaced_slot = -1;
    double child_fitness = 0.0;
    double loser_fitness = 0.0;
};

struct RunLogRow {
    std::uint64_t iteration = 0;
    double best_fitness = 0.0;
    double mean_generality = 0.0;
    double mean_self_matches = 0.0;
};

// Steady-state GA with deterministic crowding over the detector population.
// Exposed as a class so tests can drive single steps with a scripted stream.
//
// Stream consumption per step: below(pop) and below(pop-1) for the two
// distinct parents (second index shifted past the first), one real01()
// crossover gate, then the uniform_crossover and mutate draws as documented
// on those functions.
class NegselGa {
public:
    NegselGa(const FeatureSchema& schema, std::span<const ConnectionVector> self_set,
             const GaConfig& config);

    void init_random(RandomStream& rng);
    void init_with(std::vector<Detector> population);

    // One crowding step: two distinct parents, one child (crossover then
    // mutation), objective stats over population plus child, child replaces
    // the phenotypically closer parent iff strictly fitter (similarity ties
    // go to the first-drawn parent).
    StepOutcome step(RandomStream& rng);

    const std::vector<Detector>& population() const { return population_; }
    ObjectiveStats stats_over_population() const;
    RunLogRow log_row(std::uint64_t iteration) const;

    double obj1_of(int slot) const { return obj1_[slot]; }
    int obj2_of(int slot) const { return obj2_[slot]; }

private:
    int evaluate_obj2(const Detector& d) const;
    StepOutcome contest(const Detector& child, int a, int b);

    const FeatureSchema& schema_;
    GaConfig config_;
    double mutation_rate_;
    SelfIndex index_;
    std::vector<Detector> population_;
    std::vector<double> obj1_;
    std::vector<int> obj2_;
};

// Detectors that match zero self records survive.
std::vector<Detector> purge(const FeatureSchema& schema, std::span<const Detector> detectors,
                            std::span<const ConnectionVector> self_set);

// Full run: random initialization, config.iterations crowding steps, purge.
// self_set must be non-empty and normal-only (checked). log_sink, when set,
// receives one row every config.log_every iterations plus the final row.
DetectorSet generate_detectors(const FeatureSchema& schema,
                               std::span<const ConnectionVector> self_set, const GaConfig& config,
                               const std::function<void(const RunLogRow&)>& log_sink = {});

}  // namespace hids

#endif
