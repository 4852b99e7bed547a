#include "hids/schema.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <set>

#include <json.hpp>

#include "hids/digest.hpp"
#include "hids/errors.hpp"

namespace hids {

using nlohmann::json;

std::string to_string(AttackClass c) {
    switch (c) {
        case AttackClass::DoS: return "DoS";
        case AttackClass::Probe: return "Probe";
        case AttackClass::U2R: return "U2R";
        case AttackClass::R2L: return "R2L";
    }
    return "?";
}

std::optional<AttackClass> attack_class_from_string(std::string_view s) {
    if (s == "DoS") return AttackClass::DoS;
    if (s == "Probe") return AttackClass::Probe;
    if (s == "U2R") return AttackClass::U2R;
    if (s == "R2L") return AttackClass::R2L;
    return std::nullopt;
}

std::string to_string(FeatureKind k) {
    switch (k) {
        case FeatureKind::BinnedInteger: return "binned-integer";
        case FeatureKind::BinnedReal: return "binned-real";
        case FeatureKind::Categorical: return "categorical";
        case FeatureKind::Binary: return "binary";
        case FeatureKind::PortCategory: return "port-category";
    }
    return "?";
}

std::optional<FeatureKind> feature_kind_from_string(std::string_view s) {
    if (s == "binned-integer") return FeatureKind::BinnedInteger;
    if (s == "binned-real") return FeatureKind::BinnedReal;
    if (s == "categorical") return FeatureKind::Categorical;
    if (s == "binary") return FeatureKind::Binary;
    if (s == "port-category") return FeatureKind::PortCategory;
    return std::nullopt;
}

value_t FeatureDef::domain_min() const {
    return kind == FeatureKind::PortCategory ? kPortCategoryMin : 0;
}

int FeatureDef::domain_size() const {
    switch (kind) {
        case FeatureKind::BinnedInteger:
        case FeatureKind::BinnedReal:
            if (!bin_edges.empty() || edges_fitted) return static_cast<int>(bin_edges.size()) + 1;
            return bin_count;  // nominal size for an unfitted template
        case FeatureKind::Categorical: return static_cast<int>(categories.size());
        case FeatureKind::Binary: return 2;
        case FeatureKind::PortCategory: return kPortCategoryCount;
    }
    return 1;
}

BinFit fit_bins(std::vector<double> values, int bin_count) {
    if (values.empty()) throw DataError("fit_bins: empty value set");
    if (bin_count < 2) throw DataError("fit_bins: bin_count must be >= 2");
    std::sort(values.begin(), values.end());

    // Distinct values with cumulative counts.
    std::vector<double> distinct;
    std::vector<std::size_t> cumulative;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (distinct.empty() || values[i] != distinct.back()) {
            distinct.push_back(values[i]);
            cumulative.push_back(i + 1);
        } else {
            cumulative.back() = i + 1;
        }
    }

    BinFit fit;
    if (distinct.size() < 2) {
        fit.effective_bins = 1;
        fit.collapsed = true;
        return fit;
    }

    const double n = static_cast<double>(values.size());
    const std::size_t boundary_count = distinct.size() - 1;
    for (int cut = 1; cut < bin_count; ++cut) {
        const double ideal = n * cut / bin_count;
        // Boundary after distinct[i] whose cumulative count is closest to the
        // quota; ties go to the earlier boundary.
        std::size_t best = 0;
        double best_err = std::abs(static_cast<double>(cumulative[0]) - ideal);
        for (std::size_t i = 1; i < boundary_count; ++i) {
            double err = std::abs(static_cast<double>(cumulative[i]) - ideal);
            if (err < best_err) {
                best = i;
                best_err = err;
            }
        }
        double edge = (distinct[best] + distinct[best + 1]) / 2.0;
        if (fit.edges.empty() || edge > fit.edges.back()) fit.edges.push_back(edge);
    }
    fit.effective_bins = static_cast<int>(fit.edges.size()) + 1;
    fit.collapsed = fit.effective_bins < bin_count;
    return fit;
}

int bin_value(std::span<const double> edges, double v) {
    int lo = 0, hi = static_cast<int>(edges.size());
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (v >= edges[mid])
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

bool FeatureSchema::fitted() const {
    for (const auto& f : features) {
        if (f.is_binned() && !f.edges_fitted && f.bin_edges.empty()) return false;
        if (f.kind == FeatureKind::Categorical && f.categories.empty()) return false;
    }
    return !features.empty();
}

int FeatureSchema::gene_count() const {
    int n = 0;
    for (const auto& f : features) n += f.is_interval() ? 2 : 1;
    return n;
}

int FeatureSchema::som_dim() const {
    int n = 0;
    for (const auto& f : features) {
        switch (f.kind) {
            case FeatureKind::Categorical: n += static_cast<int>(f.categories.size()); break;
            case FeatureKind::PortCategory: n += kPortCategoryCount; break;
            default: n += 1; break;
        }
    }
    return n;
}

const std::vector<FieldLayout>& FeatureSchema::layout() const {
    if (layout_.size() != features.size()) {
        layout_.clear();
        int offset = 0;
        for (const auto& f : features) {
            FieldLayout fl;
            fl.gene_offset = offset;
            fl.interval = f.is_interval();
            fl.vmin = f.domain_min();
            fl.domain = f.domain_size();
            fl.vmax = static_cast<value_t>(fl.vmin + fl.domain - 1);
            layout_.push_back(fl);
            offset += fl.interval ? 2 : 1;
        }
    }
    return layout_;
}

int service_to_port_category(std::string_view service, const FeatureSchema& schema) {
    auto it = schema.service_categories.find(std::string(service));
    if (it == schema.service_categories.end()) return kDefaultPortCategory;
    return it->second;
}

namespace {

double parse_number(const std::string& text, int column, std::uint64_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw MalformedRecord(line_no, "field " + std::to_string(column) + " is not numeric: '" + text + "'");
    if (v < 0.0)
        throw MalformedRecord(line_no, "field " + std::to_string(column) + " is negative: '" + text + "'");
    return v;
}

const std::string& column_of(const RawRecord& rec, int source_index) {
    return rec.fields[static_cast<std::size_t>(source_index - 1)];
}

}  // namespace

SchemaFitter::SchemaFitter(FeatureSchema schema_template) : template_(std::move(schema_template)) {
    numeric_columns_.resize(template_.features.size());
    token_columns_.resize(template_.features.size());
}

void SchemaFitter::add(const RawRecord& record) {
    for (std::size_t i = 0; i < template_.features.size(); ++i) {
        const FeatureDef& f = template_.features[i];
        const std::string& raw = column_of(record, f.source_index);
        if (f.is_binned()) {
            numeric_columns_[i].push_back(parse_number(raw, f.source_index, 0));
        } else if (f.kind == FeatureKind::Categorical) {
            token_columns_[i][raw] += 1;
        }
    }
    ++record_count_;
}

FeatureSchema SchemaFitter::fit(std::vector<std::string>* notes) const {
    if (record_count_ == 0) throw DataError("fit-schema: no training records");
    FeatureSchema out = template_;
    for (std::size_t i = 0; i < out.features.size(); ++i) {
        FeatureDef& f = out.features[i];
        if (f.is_binned()) {
            BinFit fit = fit_bins(numeric_columns_[i], f.bin_count);
            f.bin_edges = fit.edges;
            f.edges_fitted = true;
            if (fit.collapsed && notes) {
                notes->push_back(f.name + ": " + std::to_string(fit.effective_bins) +
                                 " effective bins (requested " + std::to_string(f.bin_count) + ")");
            }
        } else if (f.kind == FeatureKind::Categorical) {
            f.categories.clear();
            for (const auto& [token, count] : token_columns_[i]) f.categories.push_back(token);
            if (f.categories.empty()) throw DataError("fit-schema: no values for " + f.name);
        }
    }
    out.layout();
    return out;
}

ConnectionVector encode_connection(const RawRecord& record, const FeatureSchema& schema,
                                   std::uint64_t line_no) {
    ConnectionVector cv;
    cv.values.reserve(schema.features.size());
    for (const auto& f : schema.features) {
        const std::string& raw = column_of(record, f.source_index);
        switch (f.kind) {
            case FeatureKind::BinnedInteger:
            case FeatureKind::BinnedReal: {
                double v = parse_number(raw, f.source_index, line_no);
                cv.values.push_back(static_cast<value_t>(bin_value(f.bin_edges, v)));
                break;
            }
            case FeatureKind::Binary: {
                double v = parse_number(raw, f.source_index, line_no);
                cv.values.push_back(v != 0.0 ? 1 : 0);
                break;
            }
            case FeatureKind::Categorical: {
                auto it = std::lower_bound(f.categories.begin(), f.categories.end(), raw);
                if (it == f.categories.end() || *it != raw)
                    throw MalformedRecord(line_no, "unknown " + f.name + " token '" + raw + "'");
                cv.values.push_back(static_cast<value_t>(it - f.categories.begin()));
                break;
            }
            case FeatureKind::PortCategory:
                cv.values.push_back(static_cast<value_t>(service_to_port_category(raw, schema)));
                break;
        }
    }
    if (record.label) {
        LabelTag tag;
        if (*record.label == "normal") {
            tag.kind = LabelTag::Kind::Normal;
        } else {
            auto it = schema.attack_classes.find(*record.label);
            if (it != schema.attack_classes.end()) {
                tag.kind = LabelTag::Kind::Attack;
                tag.cls = it->second;
            } else {
                tag.kind = LabelTag::Kind::UnknownAttack;
            }
            tag.raw_name = *record.label;
        }
        cv.label = std::move(tag);
    }
    return cv;
}

std::vector<double> encode_for_som(const ConnectionVector& cv, const FeatureSchema& schema) {
    std::vector<double> out;
    out.reserve(schema.som_dim());
    for (std::size_t i = 0; i < schema.features.size(); ++i) {
        const FeatureDef& f = schema.features[i];
        const value_t v = cv.values[i];
        switch (f.kind) {
            case FeatureKind::BinnedInteger:
            case FeatureKind::BinnedReal: {
                const int k = f.domain_size();
                out.push_back(k <= 1 ? 0.0 : static_cast<double>(v) / (k - 1));
                break;
            }
            case FeatureKind::Binary: out.push_back(v != 0 ? 1.0 : 0.0); break;
            case FeatureKind::Categorical: {
                for (std::size_t c = 0; c < f.categories.size(); ++c)
                    out.push_back(static_cast<value_t>(c) == v ? 1.0 : 0.0);
                break;
            }
            case FeatureKind::PortCategory: {
                for (int c = kPortCategoryMin; c < kPortCategoryMin + kPortCategoryCount; ++c)
                    out.push_back(static_cast<value_t>(c) == v ? 1.0 : 0.0);
                break;
            }
        }
    }
    return out;
}

namespace {

json feature_to_json(const FeatureDef& f) {
    json j;
    j["name"] = f.name;
    j["kind"] = to_string(f.kind);
    j["source_index"] = f.source_index;
    if (f.is_binned()) {
        j["bin_count"] = f.bin_count;
        if (f.edges_fitted || !f.bin_edges.empty()) {
            j["bin_edges"] = f.bin_edges;
            const int effective = static_cast<int>(f.bin_edges.size()) + 1;
            if (effective != f.bin_count) j["effective_bin_count"] = effective;
        }
    }
    if (f.kind == FeatureKind::Categorical && !f.categories.empty()) j["categories"] = f.categories;
    return j;
}

FeatureDef feature_from_json(const json& j) {
    FeatureDef f;
    f.name = j.at("name").get<std::string>();
    auto kind = feature_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw DataError("schema: unknown feature kind '" + j.at("kind").get<std::string>() + "'");
    f.kind = *kind;
    f.source_index = j.at("source_index").get<int>();
    if (f.source_index < 1 || f.source_index > kKddFieldCount)
        throw DataError("schema: source_index out of range for " + f.name);
    if (f.is_binned()) {
        f.bin_count = j.at("bin_count").get<int>();
        if (j.contains("bin_edges")) {
            f.bin_edges = j.at("bin_edges").get<std::vector<double>>();
            f.edges_fitted = true;
            if (!std::is_sorted(f.bin_edges.begin(), f.bin_edges.end()) ||
                std::adjacent_find(f.bin_edges.begin(), f.bin_edges.end()) != f.bin_edges.end())
                throw DataError("schema: bin_edges for " + f.name + " not strictly increasing");
        }
    }
    if (j.contains("categories")) {
        f.categories = j.at("categories").get<std::vector<std::string>>();
        std::sort(f.categories.begin(), f.categories.end());
        if (std::adjacent_find(f.categories.begin(), f.categories.end()) != f.categories.end())
            throw DataError("schema: duplicate category for " + f.name);
    }
    return f;
}

}  // namespace

namespace {

json schema_core_json(const FeatureSchema& s) {
    json j;
    j["format_version"] = 1;
    j["features"] = json::array();
    for (const auto& f : s.features) j["features"].push_back(feature_to_json(f));
    j["service_categories"] = json::object();
    for (const auto& [token, cat] : s.service_categories) j["service_categories"][token] = cat;
    j["attack_classes"] = json::object();
    for (const auto& [name, cls] : s.attack_classes) j["attack_classes"][name] = to_string(cls);
    return j;
}

}  // namespace

std::string FeatureSchema::to_json_string() const {
    json j = schema_core_json(*this);
    j["digest"] = digest();
    if (!meta.empty()) {
        j["meta"] = json::object();
        for (const auto& [k, v] : meta) j["meta"][k] = v;
    }
    return j.dump(2) + "\n";
}

FeatureSchema FeatureSchema::from_json_string(const std::string& text) try {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/true);
    if (j.value("format_version", 0) != 1) throw DataError("schema: unsupported format_version");
    FeatureSchema s;
    for (const auto& jf : j.at("features")) s.features.push_back(feature_from_json(jf));
    if (s.features.empty()) throw DataError("schema: no features");
    if (j.contains("service_categories")) {
        for (const auto& [token, cat] : j.at("service_categories").items()) {
            int c = cat.get<int>();
            if (c < kPortCategoryMin || c >= kPortCategoryMin + kPortCategoryCount)
                throw DataError("schema: port category out of range for service '" + token + "'");
            s.service_categories[token] = c;
        }
    }
    if (j.contains("attack_classes")) {
        for (const auto& [name, cls] : j.at("attack_classes").items()) {
            auto c = attack_class_from_string(cls.get<std::string>());
            if (!c) throw DataError("schema: unknown attack class for '" + name + "'");
            s.attack_classes[name] = *c;
        }
    }
    if (j.contains("meta"))
        for (const auto& [k, v] : j.at("meta").items()) s.meta[k] = v.get<std::string>();
    if (j.contains("digest") && j.at("digest").get<std::string>() != s.digest())
        throw DataError("schema: embedded digest does not match content");
    s.layout();  // build the derived cache before any concurrent use
    return s;
} catch (const json::exception& e) {
    throw DataError(std::string("schema: ") + e.what());
}

std::string FeatureSchema::digest() const { return digest_hex(schema_core_json(*this).dump(2)); }

}  // namespace hids
