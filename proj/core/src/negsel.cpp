#include "hids/negsel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "hids/errors.hpp"

namespace hids {

double GaConfig::effective_mutation_rate(const FeatureSchema& schema) const {
    if (mutation_rate >= 0.0) return mutation_rate;
    return 1.0 / schema.gene_count();
}

void GaConfig::validate() const {
    if (population_size < 2) throw UsageError("population size must be >= 2");
    if (w1 < 0.0 || w1 > 1.0 || w2 < 0.0 || w2 > 1.0)
        throw UsageError("objective weights must lie in [0,1]");
    if (std::abs(w1 + w2 - 1.0) > 1e-12) throw UsageError("objective weights must sum to 1");
    if (crossover_rate < 0.0 || crossover_rate > 1.0)
        throw UsageError("crossover rate must lie in [0,1]");
    if (mutation_rate > 1.0) throw UsageError("mutation rate must lie in [0,1]");
}

double fitness_ratio(double obj, double min_v, double max_v) {
    if (max_v <= min_v) return 0.0;  // degenerate window: every individual ties
    return (obj - min_v) / (max_v - min_v);
}

double fitness_from_ratios(double fr1, double fr2, double w1, double w2) {
    return w1 * fr1 - w2 * fr2;
}

double fitness_of(double obj1, double obj2, const ObjectiveStats& stats, double w1, double w2) {
    return fitness_from_ratios(fitness_ratio(obj1, stats.min1, stats.max1),
                               fitness_ratio(obj2, stats.min2, stats.max2), w1, w2);
}

Detector uniform_crossover(const FeatureSchema& schema, const Detector& p1, const Detector& p2,
                           RandomStream& rng) {
    Detector child;
    child.genes.resize(p1.genes.size());
    for (std::size_t g = 0; g < p1.genes.size(); ++g)
        child.genes[g] = rng.below(2) == 0 ? p1.genes[g] : p2.genes[g];
    repair(schema, child);
    return child;
}

Detector mutate(const FeatureSchema& schema, const Detector& d, double rate, RandomStream& rng) {
    Detector out = d;
    const auto& layout = schema.layout();
    for (const FieldLayout& fl : layout) {
        const int span = fl.interval ? 2 : 1;
        for (int g = 0; g < span; ++g) {
            if (rng.real01() >= rate) continue;
            gene_t& gene = out.genes[fl.gene_offset + g];
            if (rng.below(2) == 0)
                gene = kUnspecified;
            else
                gene = static_cast<gene_t>(fl.vmin + rng.below(fl.domain));
        }
    }
    repair(schema, out);
    return out;
}

SelfIndex::SelfIndex(const FeatureSchema& schema, std::span<const ConnectionVector> self_set)
    : n_records_(self_set.size()), layout_(schema.layout()) {
    words_ = (n_records_ + 63) / 64;
    feature_count_ = static_cast<int>(layout_.size());
    prefix_.resize(feature_count_);
    for (int f = 0; f < feature_count_; ++f) {
        prefix_[f].assign(layout_[f].domain, std::vector<std::uint64_t>(words_, 0));
        for (std::size_t r = 0; r < n_records_; ++r) {
            const int t = self_set[r].values[f] - layout_[f].vmin;
            prefix_[f][t][r / 64] |= std::uint64_t{1} << (r % 64);
        }
        // Turn per-value bitsets into <=-prefix bitsets.
        for (int t = 1; t < layout_[f].domain; ++t)
            for (std::size_t w = 0; w < words_; ++w) prefix_[f][t][w] |= prefix_[f][t - 1][w];
    }
}

int SelfIndex::count_matches(const Detector& d) const {
    if (n_records_ == 0) return 0;
    std::vector<std::uint64_t> acc(words_, ~std::uint64_t{0});
    // Mask tail bits beyond the record count.
    if (n_records_ % 64 != 0) acc.back() = (std::uint64_t{1} << (n_records_ % 64)) - 1;

    for (int f = 0; f < feature_count_; ++f) {
        const FieldLayout& fl = layout_[f];
        const gene_t lo_gene = d.genes[fl.gene_offset];
        if (lo_gene == kUnspecified) continue;
        const int lo = lo_gene - fl.vmin;
        const int hi = fl.interval ? d.genes[fl.gene_offset + 1] - fl.vmin : lo;
        const auto& upper = prefix_[f][hi];
        if (lo == 0) {
            for (std::size_t w = 0; w < words_; ++w) acc[w] &= upper[w];
        } else {
            const auto& lower = prefix_[f][lo - 1];
            for (std::size_t w = 0; w < words_; ++w) acc[w] &= upper[w] & ~lower[w];
        }
    }
    int count = 0;
    for (std::uint64_t w : acc) count += std::popcount(w);
    return count;
}

NegselGa::NegselGa(const FeatureSchema& schema, std::span<const ConnectionVector> self_set,
                   const GaConfig& config)
    : schema_(schema),
      config_(config),
      mutation_rate_(config.effective_mutation_rate(schema)),
      index_(schema, self_set) {
    config_.validate();
    if (self_set.empty()) throw DataError("empty-self-set: detector generation needs normal records");
}

void NegselGa::init_random(RandomStream& rng) {
    std::vector<Detector> pop;
    pop.reserve(config_.population_size);
    for (int i = 0; i < config_.population_size; ++i) pop.push_back(random_detector(schema_, rng));
    init_with(std::move(pop));
}

void NegselGa::init_with(std::vector<Detector> population) {
    population_ = std::move(population);
    obj1_.resize(population_.size());
    obj2_.resize(population_.size());
    for (std::size_t i = 0; i < population_.size(); ++i) {
        obj1_[i] = generality(schema_, population_[i]);
        obj2_[i] = evaluate_obj2(population_[i]);
    }
}

int NegselGa::evaluate_obj2(const Detector& d) const { return index_.count_matches(d); }

ObjectiveStats NegselGa::stats_over_population() const {
    ObjectiveStats s;
    s.min1 = s.max1 = obj1_[0];
    s.min2 = s.max2 = obj2_[0];
    for (std::size_t i = 1; i < obj1_.size(); ++i) {
        s.min1 = std::min(s.min1, obj1_[i]);
        s.max1 = std::max(s.max1, obj1_[i]);
        s.min2 = std::min(s.min2, static_cast<double>(obj2_[i]));
        s.max2 = std::max(s.max2, static_cast<double>(obj2_[i]));
    }
    return s;
}

StepOutcome NegselGa::contest(const Detector& child, int a, int b) {
    const double child_obj1 = generality(schema_, child);
    const int child_obj2 = evaluate_obj2(child);

    // Normalization window over the current population plus the candidate.
    ObjectiveStats stats = stats_over_population();
    stats.min1 = std::min(stats.min1, child_obj1);
    stats.max1 = std::max(stats.max1, child_obj1);
    stats.min2 = std::min(stats.min2, static_cast<double>(child_obj2));
    stats.max2 = std::max(stats.max2, static_cast<double>(child_obj2));

    const double child_fit = fitness_of(child_obj1, child_obj2, stats, config_.w1, config_.w2);
    const double sim_a = similarity(schema_, child, population_[a]);
    const double sim_b = similarity(schema_, child, population_[b]);
    // Ties go to the first-drawn parent.
    const int target = sim_b > sim_a ? b : a;
    const double target_fit =
        fitness_of(obj1_[target], obj2_[target], stats, config_.w1, config_.w2);

    StepOutcome outcome;
    outcome.parent_a = a;
    outcome.parent_b = b;
    outcome.child_fitness = child_fit;
    outcome.loser_fitness = target_fit;
    if (child_fit > target_fit) {
        population_[target] = child;
        obj1_[target] = child_obj1;
        obj2_[target] = child_obj2;
        outcome.replaced = true;
        outcome.replaced_slot = target;
    }
    return outcome;
}

StepOutcome NegselGa::step(RandomStream& rng) {
    const auto pop = static_cast<std::uint32_t>(population_.size());
    const int a = static_cast<int>(rng.below(pop));
    int b = static_cast<int>(rng.below(pop - 1));
    if (b >= a) ++b;

    const bool cross = rng.real01() < config_.crossover_rate;
    Detector child = cross ? uniform_crossover(schema_, population_[a], population_[b], rng)
                           : population_[a];
    child = mutate(schema_, child, mutation_rate_, rng);

    if (!config_.two_children) return contest(child, a, b);

    // Experimental classic-crowding mode: a second, independently drawn child
    // competes against the other parent.
    Detector sibling = cross ? uniform_crossover(schema_, population_[b], population_[a], rng)
                             : population_[b];
    sibling = mutate(schema_, sibling, mutation_rate_, rng);
    StepOutcome first = contest(child, a, b);
    contest(sibling, b, a);
    return first;
}

RunLogRow NegselGa::log_row(std::uint64_t iteration) const {
    RunLogRow row;
    row.iteration = iteration;
    const ObjectiveStats stats = stats_over_population();
    double best = -2.0;
    double sum1 = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < population_.size(); ++i) {
        best = std::max(best, fitness_of(obj1_[i], obj2_[i], stats, config_.w1, config_.w2));
        sum1 += obj1_[i];
        sum2 += obj2_[i];
    }
    row.best_fitness = best;
    row.mean_generality = sum1 / static_cast<double>(population_.size());
    row.mean_self_matches = sum2 / static_cast<double>(population_.size());
    return row;
}

std::vector<Detector> purge(const FeatureSchema& schema, std::span<const Detector> detectors,
                            std::span<const ConnectionVector> self_set) {
    std::vector<Detector> kept;
    for (const Detector& d : detectors)
        if (count_self_matches(schema, d, self_set) == 0) kept.push_back(d);
    return kept;
}

DetectorSet generate_detectors(const FeatureSchema& schema,
                               std::span<const ConnectionVector> self_set, const GaConfig& config,
                               const std::function<void(const RunLogRow&)>& log_sink) {
    config.validate();
    if (self_set.empty()) throw DataError("empty-self-set: detector generation needs normal records");
    for (const ConnectionVector& cv : self_set)
        if (!cv.label || !cv.label->is_normal())
            throw DataError("self set must contain only normal-labeled records");

    NegselGa ga(schema, self_set, config);
    Mt64Stream rng(config.seed);
    ga.init_random(rng);

    if (log_sink) log_sink(ga.log_row(0));
    for (std::uint64_t it = 1; it <= config.iterations; ++it) {
        ga.step(rng);
        if (log_sink && (it % std::max<std::uint64_t>(1, config.log_every) == 0 ||
                         it == config.iterations))
            log_sink(ga.log_row(it));
    }

    DetectorSet set;
    // Purge runs the index-free reference loop.
    set.detectors = purge(schema, ga.population(), self_set);
    set.provenance.schema_digest = schema.digest();
    set.provenance.seed = config.seed;
    set.provenance.w1 = config.w1;
    set.provenance.w2 = config.w2;
    set.provenance.iterations = config.iterations;
    set.provenance.population_size = config.population_size;
    set.provenance.crossover_rate = config.crossover_rate;
    set.provenance.mutation_rate = config.effective_mutation_rate(schema);
    set.provenance.self_records = self_set.size();
    return set;
}

}  // namespace hids
