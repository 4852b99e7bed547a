#ifndef HIDS_SCHEMA_HPP
#define HIDS_SCHEMA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hids/kdd.hpp"

namespace hids {

using value_t = std::int16_t;
using gene_t = std::int16_t;

inline constexpr gene_t kUnspecified = -1;

// The four MIT Lincoln Labs attack classes. The declaration order is the
// fixed tie-break order used everywhere (labelling, reports).
enum class AttackClass : std::uint8_t { DoS = 0, Probe = 1, U2R = 2, R2L = 3 };
inline constexpr int kAttackClassCount = 4;

std::string to_string(AttackClass c);
std::optional<AttackClass> attack_class_from_string(std::string_view s);

// Ground-truth tag of a connection record. Attack names missing from the
// class map are kept verbatim and counted separately.
struct LabelTag {
    enum class Kind : std::uint8_t { Normal, Attack, UnknownAttack };
    Kind kind = Kind::Normal;
    AttackClass cls = AttackClass::DoS;  // valid iff kind == Attack
    std::string raw_name;                // original attack token (empty for normal)

    bool is_normal() const { return kind == Kind::Normal; }
    bool is_attack() const { return kind != Kind::Normal; }
};

enum class FeatureKind : std::uint8_t {
    BinnedInteger,
    BinnedReal,
    Categorical,   // token column, one value per observed category
    Binary,        // 0/1 column (nonzero collapses to 1)
    PortCategory,  // service token mapped through the port-category table
};

std::string to_string(FeatureKind k);
std::optional<FeatureKind> feature_kind_from_string(std::string_view s);

inline constexpr int kPortCategoryMin = 1;
inline constexpr int kPortCategoryCount = 9;
inline constexpr int kDefaultPortCategory = 8;  // System / Registered catch-all

struct FeatureDef {
    std::string name;
    FeatureKind kind = FeatureKind::Binary;
    int source_index = 0;  // 1-based column in the 41-field KDD record
    int bin_count = 0;     // requested bins (binned kinds only)

    // Fitted state. bin_edges has one entry fewer than the effective bin
    // count; tie collapse can leave it below bin_count, down to an empty
    // edge list for a constant column. edges_fitted distinguishes that
    // degenerate-but-fitted case from an unfitted template.
    std::vector<double> bin_edges;
    bool edges_fitted = false;
    std::vector<std::string> categories;  // Categorical only, sorted

    bool is_binned() const {
        return kind == FeatureKind::BinnedInteger || kind == FeatureKind::BinnedReal;
    }
    // Interval features occupy two genes (lower/upper bound) in a detector.
    bool is_interval() const { return is_binned(); }

    // Smallest legal encoded value (1 for port categories, 0 otherwise).
    value_t domain_min() const;
    // Number of legal encoded values after fitting.
    int domain_size() const;
    value_t domain_max() const { return static_cast<value_t>(domain_min() + domain_size() - 1); }
};

// Result of equal-frequency binning. `collapsed` is set when tie runs or too
// few distinct values reduced the effective bin count below the request.
struct BinFit {
    std::vector<double> edges;
    int effective_bins = 1;
    bool collapsed = false;
};

// Equal-frequency binning. Edges are placed only at midpoints between
// distinct adjacent observed values; quota cuts that land inside a tie run
// merge into the same edge. values must be non-empty, bin_count >= 2.
BinFit fit_bins(std::vector<double> values, int bin_count);

// Index of the half-open interval containing v: below the first edge -> 0,
// >= the last edge -> edges.size(). Total and monotone over all numbers.
int bin_value(std::span<const double> edges, double v);

// One encoded connection: one small integer per schema feature.
struct ConnectionVector {
    std::vector<value_t> values;
    std::optional<LabelTag> label;
};

// Per-feature genotype layout, derived from the fitted schema.
struct FieldLayout {
    int gene_offset = 0;  // first gene of this field
    bool interval = false;
    value_t vmin = 0;
    value_t vmax = 0;
    int domain = 1;  // vmax - vmin + 1
};

class FeatureSchema {
public:
    std::vector<FeatureDef> features;
    std::map<std::string, int> service_categories;          // token -> 1..9
    std::map<std::string, AttackClass> attack_classes;      // attack name -> class
    // Provenance echoed by fit-schema (input path, record counts, collapse
    // notes). Not part of the digest, so annotations cannot split artifacts.
    std::map<std::string, std::string> meta;

    bool fitted() const;

    int feature_count() const { return static_cast<int>(features.size()); }

    // Total gene count L (interval features contribute two genes).
    int gene_count() const;

    // Dimensionality of the real-vector encoding used by the SOM.
    int som_dim() const;

    const std::vector<FieldLayout>& layout() const;

    // Canonical JSON serialization (format_version 1).
    std::string to_json_string() const;
    static FeatureSchema from_json_string(const std::string& text);

    // Digest of the canonical serialization; artifacts trained under
    // different schemas are refused at evaluation time.
    std::string digest() const;

private:
    mutable std::vector<FieldLayout> layout_;  // derived cache
};

// Port-category lookup; unknown tokens fall into the Registered-ports
// catch-all (category 8).
int service_to_port_category(std::string_view service, const FeatureSchema& schema);

// Streaming accumulator for schema fitting: feed every training record,
// then fit(). Keeps only the columns the template needs.
class SchemaFitter {
public:
    explicit SchemaFitter(FeatureSchema schema_template);

    void add(const RawRecord& record);

    // Fits bin edges and categorical vocabularies; returns the fitted schema.
    // Collapsed features are reported through *notes when non-null.
    FeatureSchema fit(std::vector<std::string>* notes = nullptr) const;

    std::size_t record_count() const { return record_count_; }

private:
    FeatureSchema template_;
    std::vector<std::vector<double>> numeric_columns_;       // per binned feature
    std::vector<std::map<std::string, int>> token_columns_;  // per categorical feature
    std::size_t record_count_ = 0;
};

// Encodes a parsed record against a fitted schema. Throws MalformedRecord
// (with the supplied line number) on unparsable numerics or unknown
// categorical tokens. Unknown attack names are kept, not rejected.
ConnectionVector encode_connection(const RawRecord& record, const FeatureSchema& schema,
                                   std::uint64_t line_no = 0);

// Real-vector encoding for the SOM: bin index b of k bins -> b/(k-1)
// (0.0 when k == 1), binary -> 0/1, categorical and port category -> one-hot.
std::vector<double> encode_for_som(const ConnectionVector& cv, const FeatureSchema& schema);

// Built-in KDD-99 template: the 18-feature column mapping, the functional
// port categories and the Lincoln Labs attack taxonomy. Overridable by
// passing a template file to fit-schema.
FeatureSchema default_kdd_template();

}  // namespace hids

#endif
