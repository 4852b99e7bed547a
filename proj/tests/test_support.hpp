#ifndef HIDS_TEST_SUPPORT_HPP
#define HIDS_TEST_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hids/detector.hpp"
#include "hids/rng.hpp"
#include "hids/schema.hpp"
#include "hids/som.hpp"

namespace hids::test {

// Replays a pre-baked stream so GA steps can be hand-simulated exactly.
class ScriptedStream final : public RandomStream {
public:
    std::deque<std::uint32_t> ints;
    std::deque<double> reals;

    std::uint32_t below(std::uint32_t n) override {
        if (ints.empty()) throw std::runtime_error("scripted stream: ints exhausted");
        std::uint32_t v = ints.front();
        ints.pop_front();
        if (v >= n) throw std::runtime_error("scripted stream: value out of range");
        return v;
    }
    double real01() override {
        if (reals.empty()) throw std::runtime_error("scripted stream: reals exhausted");
        double v = reals.front();
        reals.pop_front();
        return v;
    }
};

// Two non-interval fields plus one 10-bin interval field; the layout used by
// several worked examples.
inline FeatureSchema tiny_schema() {
    FeatureSchema s;
    FeatureDef protocol;
    protocol.name = "protocol_type";
    protocol.kind = FeatureKind::Categorical;
    protocol.source_index = 2;
    protocol.categories = {"icmp", "tcp", "udp"};
    FeatureDef flag;
    flag.name = "logged_in";
    flag.kind = FeatureKind::Binary;
    flag.source_index = 12;
    FeatureDef count;
    count.name = "count";
    count.kind = FeatureKind::BinnedInteger;
    count.source_index = 23;
    count.bin_count = 10;
    count.bin_edges = {10, 20, 30, 40, 50, 60, 70, 80, 90};
    s.features = {protocol, flag, count};
    return s;
}

// Random small schema for oracle-equivalence sweeps: 2..6 features of mixed
// kinds with small domains.
inline FeatureSchema random_schema(std::mt19937_64& rng) {
    FeatureSchema s;
    const int n = 2 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
        FeatureDef f;
        f.name = "f" + std::to_string(i);
        f.source_index = i + 1;
        switch (rng() % 4) {
            case 0: {
                f.kind = FeatureKind::BinnedInteger;
                const int bins = 2 + static_cast<int>(rng() % 9);
                f.bin_count = bins;
                for (int e = 1; e < bins; ++e) f.bin_edges.push_back(e - 0.5);
                break;
            }
            case 1: f.kind = FeatureKind::Binary; break;
            case 2: {
                f.kind = FeatureKind::Categorical;
                const int cats = 2 + static_cast<int>(rng() % 4);
                for (int c = 0; c < cats; ++c) f.categories.push_back("c" + std::to_string(c));
                break;
            }
            default: f.kind = FeatureKind::PortCategory; break;
        }
        s.features.push_back(std::move(f));
    }
    return s;
}

inline ConnectionVector random_cv(const FeatureSchema& schema, std::mt19937_64& rng) {
    ConnectionVector cv;
    for (const FieldLayout& fl : schema.layout())
        cv.values.push_back(static_cast<value_t>(fl.vmin + rng() % fl.domain));
    return cv;
}

// Detector generator independent of hids::random_detector.
inline Detector random_test_detector(const FeatureSchema& schema, std::mt19937_64& rng) {
    Detector d;
    d.genes.assign(schema.gene_count(), kUnspecified);
    for (const FieldLayout& fl : schema.layout()) {
        if (rng() % 2 == 0) continue;
        if (fl.interval) {
            int a = fl.vmin + static_cast<int>(rng() % fl.domain);
            int b = fl.vmin + static_cast<int>(rng() % fl.domain);
            if (a > b) std::swap(a, b);
            d.genes[fl.gene_offset] = static_cast<gene_t>(a);
            d.genes[fl.gene_offset + 1] = static_cast<gene_t>(b);
        } else {
            d.genes[fl.gene_offset] = static_cast<gene_t>(fl.vmin + rng() % fl.domain);
        }
    }
    return d;
}

// Brute-force matching oracle, deliberately expressed differently from the
// production rule: per field, enumerate the accepted value set and test
// membership.
inline bool oracle_matches(const FeatureSchema& schema, const Detector& d,
                           const ConnectionVector& cv) {
    const auto& layout = schema.layout();
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const FieldLayout& fl = layout[i];
        std::vector<int> accepted;
        if (fl.interval) {
            const int lo = d.genes[fl.gene_offset];
            const int hi = d.genes[fl.gene_offset + 1];
            for (int v = fl.vmin; v <= fl.vmax; ++v)
                if (lo == kUnspecified || (v >= lo && v <= hi)) accepted.push_back(v);
        } else {
            const int g = d.genes[fl.gene_offset];
            for (int v = fl.vmin; v <= fl.vmax; ++v)
                if (g == kUnspecified || v == g) accepted.push_back(v);
        }
        bool found = false;
        for (int v : accepted)
            if (v == cv.values[i]) found = true;
        if (!found) return false;
    }
    return true;
}

inline int oracle_count_self_matches(const FeatureSchema& schema, const Detector& d,
                                     std::span<const ConnectionVector> self_set) {
    int n = 0;
    for (const ConnectionVector& cv : self_set)
        if (oracle_matches(schema, d, cv)) ++n;
    return n;
}

inline int oracle_find_winner(const SomModel& som, std::span<const double> x) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < som.neuron_count(); ++j) {
        double d = 0.0;
        for (int k = 0; k < som.input_dim; ++k)
            d += (x[k] - som.weights[static_cast<std::size_t>(j) * som.input_dim + k]) *
                 (x[k] - som.weights[static_cast<std::size_t>(j) * som.input_dim + k]);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

inline double oracle_quantization_error(const SomModel& som,
                                        std::span<const std::vector<double>> vectors) {
    double sum = 0.0;
    for (const auto& x : vectors) {
        const int j = oracle_find_winner(som, x);
        double d = 0.0;
        for (int k = 0; k < som.input_dim; ++k)
            d += (x[k] - som.weights[static_cast<std::size_t>(j) * som.input_dim + k]) *
                 (x[k] - som.weights[static_cast<std::size_t>(j) * som.input_dim + k]);
        sum += std::sqrt(d);
    }
    return sum / static_cast<double>(vectors.size());
}

// Builds one 41-field KDD line (plus optional label) with 1-based-column
// overrides on top of a plausible all-quiet record.
inline std::string kdd_line(const std::map<int, std::string>& overrides,
                            const std::string& label = "") {
    std::vector<std::string> fields(41, "0");
    fields[1] = "tcp";
    fields[2] = "http";
    fields[3] = "SF";
    for (const auto& [col, value] : overrides) fields[static_cast<std::size_t>(col) - 1] = value;
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += fields[i];
    }
    if (!label.empty()) {
        line += ',';
        line += label;
    }
    return line;
}

}  // namespace hids::test

#endif
