#ifndef HIDS_DETECTOR_HPP
#define HIDS_DETECTOR_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hids/rng.hpp"
#include "hids/schema.hpp"

namespace hids {

// A detector is an IF-THEN condition set over the schema features. Interval
// features carry lower/upper bound genes, single-value features one gene;
// -1 marks an unspecified condition. For the KDD-99 schema this is the
// 28-gene genotype.
struct Detector {
    std::vector<gene_t> genes;

    bool operator==(const Detector&) const = default;
};

// True iff every specified condition holds for cv: equality on single-value
// fields, inclusive [lower, upper] containment on interval fields.
bool matches(const FeatureSchema& schema, const Detector& d, const ConnectionVector& cv);

// obj1: fraction of antigen space covered. Unspecified field -> 1, specified
// single value -> 0, interval [lo,hi] over k bins -> (hi-lo+1)/k; averaged
// over the phenotypic fields.
double generality(const FeatureSchema& schema, const Detector& d);

// obj2: number of self records matched (the negative-selection penalty).
int count_self_matches(const FeatureSchema& schema, const Detector& d,
                       std::span<const ConnectionVector> self_set);

// Phenotypic similarity used by deterministic crowding: single-value fields
// score 1 on equality (unspecified == unspecified counts), interval fields
// score Jaccard overlap of the inclusive bin ranges with an unspecified
// interval read as the full range. Sum over fields; symmetric.
double similarity(const FeatureSchema& schema, const Detector& a, const Detector& b);

// Normalizes interval fields: a half-specified bound becomes fully
// unspecified, reversed bounds are swapped. Idempotent.
void repair(const FeatureSchema& schema, Detector& d);

// Checks gene count and per-gene legal ranges against a schema; throws
// DataError (used when loading detector files).
void validate_detector(const FeatureSchema& schema, const Detector& d);

// Each phenotypic field is left unspecified with probability 1/2, otherwise
// genes are drawn uniformly from the field's legal values (interval bounds
// drawn then ordered). Stream consumption order, per field: one below(2)
// draw (nonzero -> unspecified), then one below(domain) per gene.
Detector random_detector(const FeatureSchema& schema, RandomStream& rng);

struct DetectorProvenance {
    std::string schema_digest;
    std::uint64_t seed = 0;
    double w1 = 0.0;
    double w2 = 0.0;
    std::uint64_t iterations = 0;
    int population_size = 0;
    double crossover_rate = 0.0;
    double mutation_rate = 0.0;
    std::uint64_t self_records = 0;
    std::string config_digest;
    // Effective command configuration, echoed verbatim into the artifact.
    std::map<std::string, std::string> config_echo;
};

// Post-purge invariant: no detector matches any normal training record.
struct DetectorSet {
    std::vector<Detector> detectors;
    DetectorProvenance provenance;

    std::string to_json_string() const;
    static DetectorSet from_json_string(const std::string& text);
};

}  // namespace hids

#endif
