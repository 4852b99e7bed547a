#ifndef HIDS_PIPELINE_HPP
#define HIDS_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "hids/detector.hpp"
#include "hids/som.hpp"

namespace hids {

// Runtime outcome for one connection: anomaly verdict first, attack class
// only for flagged records (the SOM is never consulted otherwise).
struct Verdict {
    bool anomalous = false;
    std::optional<AttackClass> attack_class;
    std::optional<std::pair<int, int>> winning_neuron;  // grid (x, y)
    int matched_detector_count = 0;
};

// True iff at least one detector matches cv.
bool detect(const FeatureSchema& schema, const DetectorSet& detectors, const ConnectionVector& cv);

Verdict analyze(const FeatureSchema& schema, const DetectorSet& detectors, const SomModel& som,
                const ConnectionVector& cv);

// Per-class rates over {DoS, Probe, U2R, R2L}, indexed by AttackClass.
using ClassRates = std::array<double, kAttackClassCount>;

struct DetectionRates {
    double normal_accuracy = 0.0;  // fraction of normal records not flagged
    double false_positive_rate = 0.0;
    ClassRates per_class{};  // fraction of each class flagged
    std::array<std::int64_t, kAttackClassCount> class_totals{};
    std::int64_t normal_total = 0;
    std::int64_t unknown_total = 0;    // attack names outside the taxonomy
    std::int64_t unknown_flagged = 0;  // ... of which were flagged
};

struct ClassificationRates {
    ClassRates per_class{};  // fraction of each class classified as itself
    std::array<std::int64_t, kAttackClassCount> class_totals{};
};

struct OverallRates {
    double normal = 0.0;  // normal accuracy, carried through unchanged
    ClassRates per_class{};
};

DetectionRates evaluate_detection(const FeatureSchema& schema, const DetectorSet& detectors,
                                  std::span<const ConnectionVector> test_set);

ClassificationRates evaluate_classification(const FeatureSchema& schema, const SomModel& som,
                                            std::span<const ConnectionVector> attack_test_set);

// Elementwise product of detection and classification rates per attack
// class; the normal column is the detection-stage accuracy unchanged.
OverallRates evaluate_overall(const DetectionRates& detection,
                              const ClassificationRates& classification);

// Truth rows: normal, the four classes, then unknown attack names; predicted
// columns: normal plus the four classes. Row sums equal per-class test
// counts, so no record is lost or double-counted.
inline constexpr int kConfusionRows = kAttackClassCount + 2;
inline constexpr int kConfusionCols = kAttackClassCount + 1;

struct EvaluationReport {
    DetectionRates detection;
    ClassificationRates classification;
    OverallRates overall;
    std::array<std::array<std::int64_t, kConfusionCols>, kConfusionRows> confusion{};
    std::int64_t total_records = 0;
    std::string schema_digest;

    std::string to_json_string() const;
    // Aligned text tables in the Normal | DoS | Probe | U2R | R2L order.
    std::string to_text_tables() const;
};

// Full evaluation pass: detection rates, SOM classification rates on the
// known-class attacks, the multiplied overall rates and the per-record
// end-to-end confusion matrix. Records are scored independently; with
// threads > 1 the test set is split into chunks whose tallies merge in
// chunk order, so the result is identical for any thread count.
EvaluationReport evaluate(const FeatureSchema& schema, const DetectorSet& detectors,
                          const SomModel& som, std::span<const ConnectionVector> test_set,
                          int threads = 1);

}  // namespace hids

#endif
