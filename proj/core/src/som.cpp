#include "hids/som.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "hids/errors.hpp"
#include "hids/rng.hpp"

namespace hids {

using nlohmann::json;

void SomConfig::validate() const {
    if (grid_side < 2) throw UsageError("grid side must be >= 2");
    if (epochs < 1) throw UsageError("epochs must be >= 1");
    if (eta0 <= 0.0 || eta0 >= 1.0) throw UsageError("eta0 must lie in (0,1)");
    if (effective_sigma0() <= 1.0) throw UsageError("sigma0 must be > 1");
    if (init_min >= init_max) throw UsageError("weight init range is empty");
}

void LvqConfig::validate() const {
    if (epochs < 1) throw UsageError("LVQ epochs must be >= 1");
    if (alpha0 <= 0.0 || alpha0 >= 1.0) throw UsageError("LVQ alpha0 must lie in (0,1)");
}

SomModel init_weights(const SomConfig& config, int input_dim) {
    config.validate();
    if (input_dim < 1) throw UsageError("SOM input dimension must be >= 1");
    SomModel som;
    som.grid_side = config.grid_side;
    som.input_dim = input_dim;
    som.weights.resize(static_cast<std::size_t>(som.neuron_count()) * input_dim);
    Mt64Stream rng(derive_seed(config.seed, "som-init"));
    const double span = config.init_max - config.init_min;
    for (double& w : som.weights) w = config.init_min + span * rng.real01();
    som.training.epochs = config.epochs;
    som.training.eta0 = config.eta0;
    som.training.sigma0 = config.effective_sigma0();
    som.training.seed = config.seed;
    return som;
}

int find_winner(const SomModel& som, std::span<const double> x) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < som.neuron_count(); ++j) {
        std::span<const double> w = som.weight(j);
        double d = 0.0;
        for (int k = 0; k < som.input_dim; ++k) {
            const double diff = x[k] - w[k];
            d += diff * diff;
        }
        if (d < best_d) {  // ties keep the lowest index
            best_d = d;
            best = j;
        }
    }
    return best;
}

double neighborhood(double dist_sq, double sigma) {
    return std::exp(-dist_sq / (2.0 * sigma * sigma));
}

double tau1(double sigma0, bool log10_tau) {
    return 1000.0 / (log10_tau ? std::log10(sigma0) : std::log(sigma0));
}

double sigma_at(int epoch, double sigma0, bool log10_tau) {
    return sigma0 * std::exp(-static_cast<double>(epoch) / tau1(sigma0, log10_tau));
}

double eta_at(int epoch, double eta0) {
    return eta0 * std::exp(-static_cast<double>(epoch) / 1000.0);
}

SomModel train(SomModel som, std::span<const std::vector<double>> vectors,
               const SomConfig& config) {
    config.validate();
    if (vectors.empty()) throw DataError("SOM training set is empty");
    for (const auto& v : vectors)
        if (static_cast<int>(v.size()) != som.input_dim)
            throw DataError("SOM training vector dimension mismatch");

    const int l = som.neuron_count();
    const double sigma0 = config.effective_sigma0();
    Mt64Stream order_rng(derive_seed(config.seed, "som-order"));

    // Grid positions, fixed for the run.
    std::vector<double> gx(l), gy(l);
    for (int j = 0; j < l; ++j) {
        gx[j] = som.grid_x(j);
        gy[j] = som.grid_y(j);
    }

    for (int e = 0; e < config.epochs; ++e) {
        const double eta = eta_at(e, config.eta0);
        const double sigma = sigma_at(e, sigma0, config.log10_tau);
        const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
        const auto order = shuffled_indices(static_cast<std::uint32_t>(vectors.size()), order_rng);
        for (std::uint32_t idx : order) {
            const std::vector<double>& x = vectors[idx];
            const int win = find_winner(som, x);
            const double wx = gx[win], wy = gy[win];
            for (int j = 0; j < l; ++j) {
                const double dx = gx[j] - wx, dy = gy[j] - wy;
                const double h = std::exp(-(dx * dx + dy * dy) * inv_two_sigma_sq);
                const double step = eta * h;
                std::span<double> w = som.weight(j);
                for (int k = 0; k < som.input_dim; ++k) w[k] += step * (x[k] - w[k]);
            }
        }
    }
    som.training.epochs = config.epochs;
    som.training.eta0 = config.eta0;
    som.training.sigma0 = sigma0;
    som.training.seed = config.seed;
    return som;
}

double quantization_error(const SomModel& som, std::span<const std::vector<double>> vectors) {
    if (vectors.empty()) throw DataError("quantization error needs at least one vector");
    double sum = 0.0;
    for (const auto& x : vectors) {
        const int win = find_winner(som, x);
        std::span<const double> w = som.weight(win);
        double d = 0.0;
        for (int k = 0; k < som.input_dim; ++k) {
            const double diff = x[k] - w[k];
            d += diff * diff;
        }
        sum += std::sqrt(d);
    }
    return sum / static_cast<double>(vectors.size());
}

LabelMapResult label_map(SomModel som, std::span<const LabelledVector> vectors) {
    if (vectors.empty()) throw DataError("label_map needs labelled vectors");
    const int l = som.neuron_count();
    LabelMapResult result;
    result.projections.assign(l, {});
    for (const LabelledVector& lv : vectors) {
        const int win = find_winner(som, lv.x);
        result.projections[win][static_cast<int>(lv.cls)] += 1;
    }

    som.labels.assign(l, AttackClass::DoS);
    std::vector<bool> has_projection(l, false);
    for (int j = 0; j < l; ++j) {
        std::int64_t total = 0;
        int best_c = 0;
        std::int64_t best_n = -1;
        for (int c = 0; c < kAttackClassCount; ++c) {
            total += result.projections[j][c];
            if (result.projections[j][c] > best_n) {  // ties keep the lower class index
                best_n = result.projections[j][c];
                best_c = c;
            }
        }
        if (total > 0) {
            som.labels[j] = static_cast<AttackClass>(best_c);
            has_projection[j] = true;
        }
    }

    // Zero-projection neurons inherit the nearest labelled neuron's class on
    // the grid; ties resolve to the lowest neuron index.
    for (int j = 0; j < l; ++j) {
        if (has_projection[j]) continue;
        int best = -1;
        int best_d = std::numeric_limits<int>::max();
        for (int k = 0; k < l; ++k) {
            if (!has_projection[k]) continue;
            const int dx = som.grid_x(j) - som.grid_x(k);
            const int dy = som.grid_y(j) - som.grid_y(k);
            const int d = dx * dx + dy * dy;
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        som.labels[j] = som.labels[best];
    }

    result.model = std::move(som);
    return result;
}

SomModel lvq_train(SomModel som, std::span<const LabelledVector> vectors,
                   const LvqConfig& config) {
    config.validate();
    if (!som.labelled()) throw DataError("LVQ needs a labelled model");
    if (vectors.empty()) throw DataError("LVQ training set is empty");

    Mt64Stream order_rng(derive_seed(config.seed, "lvq-order"));
    double alpha = config.alpha0;
    for (int e = 0; e < config.epochs; ++e) {
        const auto order = shuffled_indices(static_cast<std::uint32_t>(vectors.size()), order_rng);
        for (std::uint32_t idx : order) {
            const LabelledVector& lv = vectors[idx];
            const int win = find_winner(som, lv.x);
            const double sign = som.labels[win] == lv.cls ? 1.0 : -1.0;
            std::span<double> w = som.weight(win);
            for (int k = 0; k < som.input_dim; ++k) w[k] += sign * alpha * (lv.x[k] - w[k]);
        }
        alpha /= 2.0;  // halved at the end of each epoch
    }
    som.training.lvq = config;
    return som;
}

AttackClass classify(const SomModel& som, std::span<const double> x) {
    if (!som.labelled()) throw DataError("classify needs a labelled model");
    return som.labels[find_winner(som, x)];
}

std::string SomModel::to_json_string() const {
    json j;
    j["format_version"] = 1;
    j["grid_side"] = grid_side;
    j["input_dim"] = input_dim;
    j["weights"] = json::array();
    for (int n = 0; n < neuron_count(); ++n) {
        std::span<const double> w = weight(n);
        j["weights"].push_back(std::vector<double>(w.begin(), w.end()));
    }
    if (labelled()) {
        j["labels"] = json::array();
        for (AttackClass c : labels) j["labels"].push_back(to_string(c));
    } else {
        j["labels"] = nullptr;
    }
    j["schema_digest"] = schema_digest;
    json t;
    t["epochs"] = training.epochs;
    t["eta0"] = training.eta0;
    t["sigma0"] = training.sigma0;
    t["seed"] = training.seed;
    if (training.lvq) {
        json lv;
        lv["alpha0"] = training.lvq->alpha0;
        lv["epochs"] = training.lvq->epochs;
        t["lvq"] = std::move(lv);
    } else {
        t["lvq"] = nullptr;
    }
    if (!training.config_echo.empty()) {
        t["config"] = json::object();
        for (const auto& [k, v] : training.config_echo) t["config"][k] = v;
    }
    j["training"] = std::move(t);
    return j.dump(2) + "\n";
}

SomModel SomModel::from_json_string(const std::string& text) try {
    json j = json::parse(text);
    if (j.value("format_version", 0) != 1) throw DataError("SOM model: unsupported format_version");
    SomModel som;
    som.grid_side = j.at("grid_side").get<int>();
    som.input_dim = j.at("input_dim").get<int>();
    if (som.grid_side < 1 || som.input_dim < 1) throw DataError("SOM model: bad geometry");
    const auto& jw = j.at("weights");
    if (static_cast<int>(jw.size()) != som.neuron_count())
        throw DataError("SOM model: weight row count mismatch");
    som.weights.reserve(static_cast<std::size_t>(som.neuron_count()) * som.input_dim);
    for (const auto& row : jw) {
        if (static_cast<int>(row.size()) != som.input_dim)
            throw DataError("SOM model: weight dimension mismatch");
        for (const auto& v : row) som.weights.push_back(v.get<double>());
    }
    if (j.contains("labels") && !j["labels"].is_null()) {
        for (const auto& lbl : j["labels"]) {
            auto c = attack_class_from_string(lbl.get<std::string>());
            if (!c) throw DataError("SOM model: unknown label '" + lbl.get<std::string>() + "'");
            som.labels.push_back(*c);
        }
        if (static_cast<int>(som.labels.size()) != som.neuron_count())
            throw DataError("SOM model: label count mismatch");
    }
    som.schema_digest = j.value("schema_digest", "");
    if (j.contains("training")) {
        const json& t = j["training"];
        som.training.epochs = t.value("epochs", 0);
        som.training.eta0 = t.value("eta0", 0.0);
        som.training.sigma0 = t.value("sigma0", 0.0);
        som.training.seed = t.value("seed", std::uint64_t{0});
        if (t.contains("lvq") && !t["lvq"].is_null()) {
            LvqConfig lv;
            lv.alpha0 = t["lvq"].value("alpha0", 0.0);
            lv.epochs = t["lvq"].value("epochs", 0);
            som.training.lvq = lv;
        }
        if (t.contains("config"))
            for (const auto& [k, v] : t.at("config").items())
                som.training.config_echo[k] = v.get<std::string>();
    }
    return som;
} catch (const json::exception& e) {
    throw DataError(std::string("SOM model: ") + e.what());
}

}  // namespace hids
