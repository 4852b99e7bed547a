#ifndef HIDS_SOM_HPP
#define HIDS_SOM_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hids/schema.hpp"

namespace hids {

struct SomConfig {
    int grid_side = 10;
    int epochs = 2000;
    double eta0 = 0.1;
    // <= 0 -> length of one side of the output grid.
    double sigma0 = 0.0;
    std::uint64_t seed = 1;
    double init_min = -0.1;
    double init_max = 0.1;
    // The width schedule's time constant is 1000/ln(sigma0); set to use
    // log10 instead (rescales the schedule only).
    bool log10_tau = false;

    double effective_sigma0() const { return sigma0 > 0.0 ? sigma0 : static_cast<double>(grid_side); }
    void validate() const;  // throws UsageError
};

struct LvqConfig {
    int epochs = 10;
    double alpha0 = 0.2;  // halves at the end of each epoch
    std::uint64_t seed = 1;

    void validate() const;  // throws UsageError
};

struct SomTrainingMeta {
    int epochs = 0;
    double eta0 = 0.0;
    double sigma0 = 0.0;
    std::uint64_t seed = 0;
    std::optional<LvqConfig> lvq;
    // Effective command configuration, echoed verbatim into the artifact.
    std::map<std::string, std::string> config_echo;
};

class SomModel {
public:
    int grid_side = 0;
    int input_dim = 0;
    std::vector<double> weights;           // grid_side^2 x input_dim, row-major
    std::vector<AttackClass> labels;       // empty until label_map
    std::string schema_digest;
    SomTrainingMeta training;

    int neuron_count() const { return grid_side * grid_side; }
    bool labelled() const { return !labels.empty(); }

    std::span<double> weight(int j) { return {weights.data() + static_cast<std::size_t>(j) * input_dim, static_cast<std::size_t>(input_dim)}; }
    std::span<const double> weight(int j) const { return {weights.data() + static_cast<std::size_t>(j) * input_dim, static_cast<std::size_t>(input_dim)}; }

    // Neuron j sits at (j mod side, j div side) on the output grid.
    int grid_x(int j) const { return j % grid_side; }
    int grid_y(int j) const { return j / grid_side; }

    std::string to_json_string() const;
    static SomModel from_json_string(const std::string& text);
};

// Weight components uniform in [init_min, init_max); unlabeled.
SomModel init_weights(const SomConfig& config, int input_dim);

// Index of the neuron with the smallest Euclidean distance to x; ties break
// to the lowest index.
int find_winner(const SomModel& som, std::span<const double> x);

// Gaussian neighborhood exp(-d^2 / (2 sigma^2)); d^2 is squared distance
// between grid positions, not weight vectors.
double neighborhood(double dist_sq, double sigma);

// Width schedule sigma0 * exp(-e / tau1) with tau1 = 1000 / ln(sigma0).
double tau1(double sigma0, bool log10_tau = false);
double sigma_at(int epoch, double sigma0, bool log10_tau = false);

// Learning-rate schedule eta0 * exp(-e / 1000).
double eta_at(int epoch, double eta0);

// Unsupervised training: per epoch every vector is presented once in a
// seed-shuffled order; the winner is found and every neuron moves by
// eta(e) * h(e) * (x - w). Vectors must be attack-only and non-empty.
SomModel train(SomModel som, std::span<const std::vector<double>> vectors, const SomConfig& config);

// Mean distance between each vector and its winner's weights.
double quantization_error(const SomModel& som, std::span<const std::vector<double>> vectors);

struct LabelledVector {
    std::vector<double> x;
    AttackClass cls;
};

struct LabelMapResult {
    SomModel model;
    // projections[j][c]: vectors of class c whose winner was neuron j.
    std::vector<std::array<std::int64_t, kAttackClassCount>> projections;
};

// Majority-class labelling; ties break by the fixed class order, neurons
// with zero projections inherit the nearest labelled neuron's class by grid
// distance (ties to the lowest index). Throws DataError on empty input.
LabelMapResult label_map(SomModel som, std::span<const LabelledVector> vectors);

// Supervised refinement: the winner moves toward same-class vectors and away
// from misclassified ones; alpha halves at each epoch end; labels unchanged.
SomModel lvq_train(SomModel som, std::span<const LabelledVector> vectors, const LvqConfig& config);

// Label of the winning neuron. Model must be labelled.
AttackClass classify(const SomModel& som, std::span<const double> x);

}  // namespace hids

#endif
