#include "hids/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hids/errors.hpp"

namespace hids {

using nlohmann::json;

bool detect(const FeatureSchema& schema, const DetectorSet& detectors,
            const ConnectionVector& cv) {
    for (const Detector& d : detectors.detectors)
        if (matches(schema, d, cv)) return true;
    return false;
}

Verdict analyze(const FeatureSchema& schema, const DetectorSet& detectors, const SomModel& som,
                const ConnectionVector& cv) {
    Verdict v;
    for (const Detector& d : detectors.detectors)
        if (matches(schema, d, cv)) ++v.matched_detector_count;
    if (v.matched_detector_count == 0) return v;
    v.anomalous = true;
    const std::vector<double> x = encode_for_som(cv, schema);
    const int win = find_winner(som, x);
    v.attack_class = som.labels[win];
    v.winning_neuron = std::make_pair(som.grid_x(win), som.grid_y(win));
    return v;
}

DetectionRates evaluate_detection(const FeatureSchema& schema, const DetectorSet& detectors,
                                  std::span<const ConnectionVector> test_set) {
    DetectionRates r;
    std::array<std::int64_t, kAttackClassCount> flagged{};
    std::int64_t normal_flagged = 0;
    for (const ConnectionVector& cv : test_set) {
        if (!cv.label) continue;  // unlabeled records carry no ground truth
        const bool hit = detect(schema, detectors, cv);
        switch (cv.label->kind) {
            case LabelTag::Kind::Normal:
                ++r.normal_total;
                if (hit) ++normal_flagged;
                break;
            case LabelTag::Kind::Attack: {
                const int c = static_cast<int>(cv.label->cls);
                ++r.class_totals[c];
                if (hit) ++flagged[c];
                break;
            }
            case LabelTag::Kind::UnknownAttack:
                ++r.unknown_total;
                if (hit) ++r.unknown_flagged;
                break;
        }
    }
    r.normal_accuracy = r.normal_total == 0
                            ? 1.0
                            : 1.0 - static_cast<double>(normal_flagged) / r.normal_total;
    r.false_positive_rate = 1.0 - r.normal_accuracy;
    for (int c = 0; c < kAttackClassCount; ++c)
        r.per_class[c] = r.class_totals[c] == 0
                             ? 0.0
                             : static_cast<double>(flagged[c]) / r.class_totals[c];
    return r;
}

ClassificationRates evaluate_classification(const FeatureSchema& schema, const SomModel& som,
                                            std::span<const ConnectionVector> attack_test_set) {
    ClassificationRates r;
    std::array<std::int64_t, kAttackClassCount> correct{};
    for (const ConnectionVector& cv : attack_test_set) {
        if (!cv.label || cv.label->kind != LabelTag::Kind::Attack) continue;
        const int truth = static_cast<int>(cv.label->cls);
        ++r.class_totals[truth];
        const AttackClass predicted = classify(som, encode_for_som(cv, schema));
        if (static_cast<int>(predicted) == truth) ++correct[truth];
    }
    for (int c = 0; c < kAttackClassCount; ++c)
        r.per_class[c] = r.class_totals[c] == 0
                             ? 0.0
                             : static_cast<double>(correct[c]) / r.class_totals[c];
    return r;
}

OverallRates evaluate_overall(const DetectionRates& detection,
                              const ClassificationRates& classification) {
    OverallRates o;
    o.normal = detection.normal_accuracy;
    for (int c = 0; c < kAttackClassCount; ++c)
        o.per_class[c] = detection.per_class[c] * classification.per_class[c];
    return o;
}

namespace {

// Additive per-chunk counters; merging them in chunk order keeps the final
// report independent of the thread count.
struct Tallies {
    std::int64_t total = 0;
    std::int64_t normal_total = 0, normal_flagged = 0;
    std::int64_t unknown_total = 0, unknown_flagged = 0;
    std::array<std::int64_t, kAttackClassCount> class_totals{};
    std::array<std::int64_t, kAttackClassCount> class_flagged{};
    std::array<std::int64_t, kAttackClassCount> class_correct{};
    std::array<std::array<std::int64_t, kConfusionCols>, kConfusionRows> confusion{};

    void merge(const Tallies& o) {
        total += o.total;
        normal_total += o.normal_total;
        normal_flagged += o.normal_flagged;
        unknown_total += o.unknown_total;
        unknown_flagged += o.unknown_flagged;
        for (int c = 0; c < kAttackClassCount; ++c) {
            class_totals[c] += o.class_totals[c];
            class_flagged[c] += o.class_flagged[c];
            class_correct[c] += o.class_correct[c];
        }
        for (int r = 0; r < kConfusionRows; ++r)
            for (int c = 0; c < kConfusionCols; ++c) confusion[r][c] += o.confusion[r][c];
    }
};

Tallies tally_chunk(const FeatureSchema& schema, const DetectorSet& detectors,
                    const SomModel& som, std::span<const ConnectionVector> chunk) {
    Tallies t;
    for (const ConnectionVector& cv : chunk) {
        if (!cv.label) continue;
        ++t.total;
        const bool hit = detect(schema, detectors, cv);
        const bool known_attack = cv.label->kind == LabelTag::Kind::Attack;
        // The SOM is consulted once per record that needs a class: flagged
        // records (end-to-end view) and known attacks (SOM-only view).
        int predicted = -1;
        if (hit || known_attack)
            predicted = static_cast<int>(classify(som, encode_for_som(cv, schema)));

        int row;
        switch (cv.label->kind) {
            case LabelTag::Kind::Normal:
                row = 0;
                ++t.normal_total;
                if (hit) ++t.normal_flagged;
                break;
            case LabelTag::Kind::Attack: {
                const int c = static_cast<int>(cv.label->cls);
                row = 1 + c;
                ++t.class_totals[c];
                if (hit) ++t.class_flagged[c];
                if (predicted == c) ++t.class_correct[c];
                break;
            }
            default:
                row = kConfusionRows - 1;
                ++t.unknown_total;
                if (hit) ++t.unknown_flagged;
                break;
        }
        ++t.confusion[row][hit ? 1 + predicted : 0];
    }
    return t;
}

}  // namespace

EvaluationReport evaluate(const FeatureSchema& schema, const DetectorSet& detectors,
                          const SomModel& som, std::span<const ConnectionVector> test_set,
                          int threads) {
    Tallies total;
    if (threads <= 1 || test_set.size() < 512) {
        total = tally_chunk(schema, detectors, som, test_set);
    } else {
        const std::size_t n_chunks = std::min<std::size_t>(threads, test_set.size());
        const std::size_t chunk = (test_set.size() + n_chunks - 1) / n_chunks;
        std::vector<Tallies> partial(n_chunks);
        std::vector<std::thread> workers;
        for (std::size_t i = 0; i < n_chunks; ++i) {
            const std::size_t begin = i * chunk;
            const std::size_t end = std::min(test_set.size(), begin + chunk);
            workers.emplace_back([&, i, begin, end] {
                partial[i] = tally_chunk(schema, detectors, som, test_set.subspan(begin, end - begin));
            });
        }
        for (auto& w : workers) w.join();
        for (const Tallies& t : partial) total.merge(t);
    }

    EvaluationReport rep;
    rep.schema_digest = schema.digest();
    rep.total_records = total.total;
    rep.confusion = total.confusion;

    rep.detection.normal_total = total.normal_total;
    rep.detection.unknown_total = total.unknown_total;
    rep.detection.unknown_flagged = total.unknown_flagged;
    rep.detection.class_totals = total.class_totals;
    rep.detection.normal_accuracy =
        total.normal_total == 0
            ? 1.0
            : 1.0 - static_cast<double>(total.normal_flagged) / total.normal_total;
    rep.detection.false_positive_rate = 1.0 - rep.detection.normal_accuracy;
    rep.classification.class_totals = total.class_totals;
    for (int c = 0; c < kAttackClassCount; ++c) {
        rep.detection.per_class[c] =
            total.class_totals[c] == 0
                ? 0.0
                : static_cast<double>(total.class_flagged[c]) / total.class_totals[c];
        rep.classification.per_class[c] =
            total.class_totals[c] == 0
                ? 0.0
                : static_cast<double>(total.class_correct[c]) / total.class_totals[c];
    }
    rep.overall = evaluate_overall(rep.detection, rep.classification);
    return rep;
}

namespace {

constexpr const char* kClassNames[kAttackClassCount] = {"DoS", "Probe", "U2R", "R2L"};

json rates_json(const ClassRates& rates) {
    json j;
    for (int c = 0; c < kAttackClassCount; ++c) j[kClassNames[c]] = rates[c];
    return j;
}

json totals_json(const std::array<std::int64_t, kAttackClassCount>& totals) {
    json j;
    for (int c = 0; c < kAttackClassCount; ++c) j[kClassNames[c]] = totals[c];
    return j;
}

void append_rate_row(std::string& out, const char* title, double normal, const ClassRates& rates,
                     bool with_normal) {
    char buf[160];
    if (with_normal)
        std::snprintf(buf, sizeof buf, "%-16s %8.2f%% %8.2f%% %8.2f%% %8.2f%% %8.2f%%\n", title,
                      normal * 100.0, rates[0] * 100.0, rates[1] * 100.0, rates[2] * 100.0,
                      rates[3] * 100.0);
    else
        std::snprintf(buf, sizeof buf, "%-16s %9s %8.2f%% %8.2f%% %8.2f%% %8.2f%%\n", title, "-",
                      rates[0] * 100.0, rates[1] * 100.0, rates[2] * 100.0, rates[3] * 100.0);
    out += buf;
}

}  // namespace

std::string EvaluationReport::to_json_string() const {
    json j;
    j["format_version"] = 1;
    j["schema_digest"] = schema_digest;

    json det;
    det["normal_accuracy"] = detection.normal_accuracy;
    det["false_positive_rate"] = detection.false_positive_rate;
    det["rates"] = rates_json(detection.per_class);
    det["class_totals"] = totals_json(detection.class_totals);
    det["normal_total"] = detection.normal_total;
    det["unknown_attacks"] = {{"total", detection.unknown_total},
                              {"flagged", detection.unknown_flagged}};
    j["detection"] = std::move(det);

    json cls;
    cls["rates"] = rates_json(classification.per_class);
    cls["class_totals"] = totals_json(classification.class_totals);
    j["classification"] = std::move(cls);

    json ovr;
    ovr["normal"] = overall.normal;
    ovr["rates"] = rates_json(overall.per_class);
    j["overall"] = std::move(ovr);

    json conf;
    conf["rows"] = {"normal", "DoS", "Probe", "U2R", "R2L", "unknown"};
    conf["cols"] = {"normal", "DoS", "Probe", "U2R", "R2L"};
    conf["counts"] = json::array();
    for (const auto& row : confusion)
        conf["counts"].push_back(std::vector<std::int64_t>(row.begin(), row.end()));
    j["confusion"] = std::move(conf);
    j["total_records"] = total_records;
    return j.dump(2) + "\n";
}

std::string EvaluationReport::to_text_tables() const {
    std::string out;
    out += "                     Normal       DoS     Probe       U2R       R2L\n";
    append_rate_row(out, "detection", detection.normal_accuracy, detection.per_class, true);
    append_rate_row(out, "classification", 0.0, classification.per_class, false);
    append_rate_row(out, "overall", overall.normal, overall.per_class, true);

    char buf[200];
    std::snprintf(buf, sizeof buf, "\nfalse positive rate: %.4f%%\n",
                  detection.false_positive_rate * 100.0);
    out += buf;
    std::snprintf(buf, sizeof buf, "unknown attack names: %lld records, %lld flagged\n",
                  static_cast<long long>(detection.unknown_total),
                  static_cast<long long>(detection.unknown_flagged));
    out += buf;

    out += "\nconfusion (rows = truth, cols = predicted)\n";
    out += "          normal       DoS     Probe       U2R       R2L\n";
    static const char* row_names[kConfusionRows] = {"normal", "DoS", "Probe", "U2R", "R2L",
                                                    "unknown"};
    for (int r = 0; r < kConfusionRows; ++r) {
        std::snprintf(buf, sizeof buf, "%-8s %9lld %9lld %9lld %9lld %9lld\n", row_names[r],
                      static_cast<long long>(confusion[r][0]),
                      static_cast<long long>(confusion[r][1]),
                      static_cast<long long>(confusion[r][2]),
                      static_cast<long long>(confusion[r][3]),
                      static_cast<long long>(confusion[r][4]));
        out += buf;
    }
    return out;
}

}  // namespace hids
