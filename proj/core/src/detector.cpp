#include "hids/detector.hpp"

#include <algorithm>

#include <json.hpp>

#include "hids/errors.hpp"

namespace hids {

using nlohmann::json;

bool matches(const FeatureSchema& schema, const Detector& d, const ConnectionVector& cv) {
    const auto& layout = schema.layout();
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const FieldLayout& fl = layout[i];
        const value_t v = cv.values[i];
        if (fl.interval) {
            const gene_t lo = d.genes[fl.gene_offset];
            const gene_t hi = d.genes[fl.gene_offset + 1];
            if (lo == kUnspecified) continue;
            if (v < lo || v > hi) return false;
        } else {
            const gene_t g = d.genes[fl.gene_offset];
            if (g == kUnspecified) continue;
            if (g != v) return false;
        }
    }
    return true;
}

double generality(const FeatureSchema& schema, const Detector& d) {
    const auto& layout = schema.layout();
    double sum = 0.0;
    for (const FieldLayout& fl : layout) {
        if (fl.interval) {
            const gene_t lo = d.genes[fl.gene_offset];
            const gene_t hi = d.genes[fl.gene_offset + 1];
            if (lo == kUnspecified)
                sum += 1.0;
            else
                sum += static_cast<double>(hi - lo + 1) / fl.domain;
        } else {
            if (d.genes[fl.gene_offset] == kUnspecified) sum += 1.0;
        }
    }
    return sum / static_cast<double>(layout.size());
}

int count_self_matches(const FeatureSchema& schema, const Detector& d,
                       std::span<const ConnectionVector> self_set) {
    int count = 0;
    for (const ConnectionVector& cv : self_set)
        if (matches(schema, d, cv)) ++count;
    return count;
}

double similarity(const FeatureSchema& schema, const Detector& a, const Detector& b) {
    const auto& layout = schema.layout();
    double sum = 0.0;
    for (const FieldLayout& fl : layout) {
        if (!fl.interval) {
            if (a.genes[fl.gene_offset] == b.genes[fl.gene_offset]) sum += 1.0;
            continue;
        }
        // Unspecified interval reads as the full range.
        auto range_of = [&fl](const Detector& d) -> std::pair<int, int> {
            const gene_t lo = d.genes[fl.gene_offset];
            if (lo == kUnspecified) return {0, fl.domain - 1};
            const int base = fl.vmin;
            return {lo - base, d.genes[fl.gene_offset + 1] - base};
        };
        auto [alo, ahi] = range_of(a);
        auto [blo, bhi] = range_of(b);
        const int inter = std::min(ahi, bhi) - std::max(alo, blo) + 1;
        if (inter <= 0) continue;  // disjoint ranges score 0
        const int uni = (ahi - alo + 1) + (bhi - blo + 1) - inter;
        sum += static_cast<double>(inter) / uni;
    }
    return sum;
}

void repair(const FeatureSchema& schema, Detector& d) {
    for (const FieldLayout& fl : schema.layout()) {
        if (!fl.interval) continue;
        gene_t& lo = d.genes[fl.gene_offset];
        gene_t& hi = d.genes[fl.gene_offset + 1];
        if (lo == kUnspecified || hi == kUnspecified) {
            lo = kUnspecified;
            hi = kUnspecified;
        } else if (lo > hi) {
            std::swap(lo, hi);
        }
    }
}

void validate_detector(const FeatureSchema& schema, const Detector& d) {
    if (static_cast<int>(d.genes.size()) != schema.gene_count())
        throw DataError("detector has " + std::to_string(d.genes.size()) + " genes, schema needs " +
                        std::to_string(schema.gene_count()));
    for (const FieldLayout& fl : schema.layout()) {
        const int span = fl.interval ? 2 : 1;
        for (int g = 0; g < span; ++g) {
            const gene_t v = d.genes[fl.gene_offset + g];
            if (v == kUnspecified) continue;
            if (v < fl.vmin || v > fl.vmax)
                throw DataError("detector gene " + std::to_string(fl.gene_offset + g) +
                                " out of range");
        }
        if (fl.interval) {
            const gene_t lo = d.genes[fl.gene_offset];
            const gene_t hi = d.genes[fl.gene_offset + 1];
            if ((lo == kUnspecified) != (hi == kUnspecified) ||
                (lo != kUnspecified && lo > hi))
                throw DataError("detector interval at gene " + std::to_string(fl.gene_offset) +
                                " not repaired");
        }
    }
}

Detector random_detector(const FeatureSchema& schema, RandomStream& rng) {
    Detector d;
    d.genes.assign(schema.gene_count(), kUnspecified);
    for (const FieldLayout& fl : schema.layout()) {
        if (rng.below(2) != 0) continue;  // field left unspecified
        if (fl.interval) {
            d.genes[fl.gene_offset] = static_cast<gene_t>(fl.vmin + rng.below(fl.domain));
            d.genes[fl.gene_offset + 1] = static_cast<gene_t>(fl.vmin + rng.below(fl.domain));
        } else {
            d.genes[fl.gene_offset] = static_cast<gene_t>(fl.vmin + rng.below(fl.domain));
        }
    }
    repair(schema, d);
    return d;
}

std::string DetectorSet::to_json_string() const {
    json j;
    j["format_version"] = 1;
    j["schema_digest"] = provenance.schema_digest;
    j["detectors"] = json::array();
    for (const Detector& d : detectors) {
        json jd;
        jd["genes"] = d.genes;
        j["detectors"].push_back(std::move(jd));
    }
    json meta;
    meta["seed"] = provenance.seed;
    meta["weights"] = {provenance.w1, provenance.w2};
    meta["iterations"] = provenance.iterations;
    meta["population_size"] = provenance.population_size;
    meta["crossover_rate"] = provenance.crossover_rate;
    meta["mutation_rate"] = provenance.mutation_rate;
    meta["self_records"] = provenance.self_records;
    meta["config_digest"] = provenance.config_digest;
    if (!provenance.config_echo.empty()) {
        meta["config"] = json::object();
        for (const auto& [k, v] : provenance.config_echo) meta["config"][k] = v;
    }
    j["meta"] = std::move(meta);
    return j.dump(2) + "\n";
}

DetectorSet DetectorSet::from_json_string(const std::string& text) try {
    json j = json::parse(text);
    if (j.value("format_version", 0) != 1) throw DataError("detector set: unsupported format_version");
    DetectorSet set;
    set.provenance.schema_digest = j.value("schema_digest", "");
    for (const auto& jd : j.at("detectors")) {
        Detector d;
        d.genes = jd.at("genes").get<std::vector<gene_t>>();
        set.detectors.push_back(std::move(d));
    }
    if (j.contains("meta")) {
        const json& meta = j["meta"];
        set.provenance.seed = meta.value("seed", std::uint64_t{0});
        if (meta.contains("weights") && meta["weights"].size() == 2) {
            set.provenance.w1 = meta["weights"][0].get<double>();
            set.provenance.w2 = meta["weights"][1].get<double>();
        }
        set.provenance.iterations = meta.value("iterations", std::uint64_t{0});
        set.provenance.population_size = meta.value("population_size", 0);
        set.provenance.crossover_rate = meta.value("crossover_rate", 0.0);
        set.provenance.mutation_rate = meta.value("mutation_rate", 0.0);
        set.provenance.self_records = meta.value("self_records", std::uint64_t{0});
        set.provenance.config_digest = meta.value("config_digest", "");
        if (meta.contains("config"))
            for (const auto& [k, v] : meta.at("config").items())
                set.provenance.config_echo[k] = v.get<std::string>();
    }
    return set;
} catch (const json::exception& e) {
    throw DataError(std::string("detector set: ") + e.what());
}

}  // namespace hids
