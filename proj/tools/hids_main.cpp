#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "hids/digest.hpp"
#include "hids/errors.hpp"
#include "hids/kdd.hpp"
#include "hids/negsel.hpp"
#include "hids/pipeline.hpp"
#include "hids/render.hpp"
#include "hids/rng.hpp"
#include "hids/som.hpp"
#include "run_config.hpp"

namespace {

using namespace hids;
using hids::cli::Settings;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << content;
    if (!out) throw DataError("write failed for " + path);
}

FeatureSchema load_schema(const std::string& path) {
    FeatureSchema schema = FeatureSchema::from_json_string(read_file(path));
    if (!schema.fitted())
        throw DataError(path + " is an unfitted template; run fit-schema first");
    return schema;
}

void require_same_schema(const FeatureSchema& schema, const std::string& artifact_digest,
                         const std::string& what) {
    if (artifact_digest != schema.digest())
        throw ArtifactMismatch(what + " was trained under schema " + artifact_digest +
                               " but the loaded schema digests to " + schema.digest());
}

struct LoadCounts {
    std::uint64_t parsed = 0;
    std::uint64_t skipped = 0;
    std::uint64_t unknown_attacks = 0;
};

// Streams a KDD file into encoded ConnectionVectors. `keep` filters on the
// encoded record (already labeled); encode errors obey skip_malformed.
std::vector<ConnectionVector> load_encoded(
    const std::string& path, const FeatureSchema& schema, bool skip_malformed, LoadCounts& counts,
    const std::function<bool(const ConnectionVector&)>& keep = {}) {
    std::vector<ConnectionVector> out;
    counts.skipped = for_each_kdd_record(
        path, skip_malformed, [&](const RawRecord& rec, std::uint64_t line_no) {
            ConnectionVector cv = encode_connection(rec, schema, line_no);
            ++counts.parsed;
            if (cv.label && cv.label->kind == LabelTag::Kind::UnknownAttack)
                ++counts.unknown_attacks;
            if (!keep || keep(cv)) out.push_back(std::move(cv));
        });
    return out;
}

void add_config_option(CLI::App* cmd) {
    cmd->add_option("--config", "configuration file (key = value lines, # comments); "
                                "defaults to $HIDS_CONFIG");
}

Settings make_settings(const CLI::App& cmd) {
    Settings st;
    std::string path;
    const CLI::Option* opt = cmd.get_option("--config");
    if (opt->count() > 0) {
        path = opt->as<std::string>();
    } else if (const char* env = std::getenv("HIDS_CONFIG")) {
        path = env;
    }
    if (!path.empty()) st.load_file(path);
    return st;
}

// Every config key must be the twin of some flag.
void validate_config_keys(const CLI::App& app, const Settings& st) {
    std::set<std::string> known;
    for (const CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
        for (const CLI::Option* opt : sub->get_options())
            for (const std::string& name : opt->get_lnames()) known.insert(name);
    }
    for (const auto& [key, value] : st.file_values()) {
        if (!known.count(key)) throw UsageError("config: unknown key '" + key + "'");
    }
}

std::string required_path(Settings& st, const CLI::App& cmd, const std::string& key) {
    std::string value = st.get<std::string>(cmd, key, "");
    if (value.empty()) throw UsageError("--" + key + " is required");
    return value;
}

// Provenance records how an artifact was produced, not where it landed, so
// rerunning with a different output path yields byte-identical content.
std::map<std::string, std::string> provenance_echo(const Settings& st) {
    std::map<std::string, std::string> echo = st.echo();
    echo.erase("out");
    echo.erase("log");
    echo.erase("tables");
    return echo;
}

// ---------------------------------------------------------------- fit-schema

void run_fit_schema(const CLI::App& app, const CLI::App& cmd) {
    Settings st = make_settings(cmd);
    validate_config_keys(app, st);

    if (cmd.get_option("--dump-template")->count() > 0) {
        std::fputs(default_kdd_template().to_json_string().c_str(), stdout);
        return;
    }

    const std::string train = required_path(st, cmd, "train");
    const std::string out = required_path(st, cmd, "out");
    const std::string template_path = st.get<std::string>(cmd, "template", "");
    const bool skip_malformed = st.flag(cmd, "skip-malformed");

    FeatureSchema tmpl = template_path.empty()
                             ? default_kdd_template()
                             : FeatureSchema::from_json_string(read_file(template_path));

    SchemaFitter fitter(tmpl);
    std::uint64_t skipped = for_each_kdd_record(
        train, skip_malformed,
        [&](const RawRecord& rec, std::uint64_t) { fitter.add(rec); });

    std::vector<std::string> notes;
    FeatureSchema schema = fitter.fit(&notes);
    schema.meta = provenance_echo(st);
    schema.meta["records"] = std::to_string(fitter.record_count());
    schema.meta["skipped"] = std::to_string(skipped);
    for (std::size_t i = 0; i < notes.size(); ++i)
        schema.meta["collapsed_" + std::to_string(i)] = notes[i];

    write_file(out, schema.to_json_string());
    std::fprintf(stderr, "fitted schema over %llu records (digest %s)\n",
                 static_cast<unsigned long long>(fitter.record_count()),
                 schema.digest().c_str());
    for (const std::string& note : notes) std::fprintf(stderr, "  collapsed bins: %s\n", note.c_str());
}

// ----------------------------------------------------------- train-detectors

void run_train_detectors(const CLI::App& app, const CLI::App& cmd) {
    Settings st = make_settings(cmd);
    validate_config_keys(app, st);

    const std::string schema_path = required_path(st, cmd, "schema");
    const std::string train = required_path(st, cmd, "train");
    const std::string out = required_path(st, cmd, "out");
    const std::string log_path = st.get<std::string>(cmd, "log", "");
    const bool skip_malformed = st.flag(cmd, "skip-malformed");

    GaConfig cfg;
    cfg.population_size = st.get<int>(cmd, "population", 1600);
    cfg.iterations = st.get<std::uint64_t>(cmd, "iterations", 50000);
    cfg.crossover_rate = st.get<double>(cmd, "crossover-rate", 1.0);
    cfg.mutation_rate = st.get<double>(cmd, "mutation-rate", -1.0);
    cfg.w1 = st.get<double>(cmd, "w1", 0.6);
    cfg.w2 = st.get<double>(cmd, "w2", 0.4);
    cfg.seed = st.get<std::uint64_t>(cmd, "seed", 1);
    cfg.log_every = st.get<std::uint64_t>(cmd, "log-every", 100);
    cfg.two_children = st.flag(cmd, "two-children");
    const std::uint64_t self_sample = st.get<std::uint64_t>(cmd, "self-sample", 0);
    cfg.validate();

    FeatureSchema schema = load_schema(schema_path);
    LoadCounts counts;
    std::vector<ConnectionVector> self =
        load_encoded(train, schema, skip_malformed, counts,
                     [](const ConnectionVector& cv) { return cv.label && cv.label->is_normal(); });
    if (self.empty()) throw DataError("empty-self-set: no normal records in " + train);

    if (self_sample > 0 && self_sample < self.size()) {
        Mt64Stream sampler(derive_seed(cfg.seed, "self-sample"));
        const auto order = shuffled_indices(static_cast<std::uint32_t>(self.size()), sampler);
        std::vector<ConnectionVector> picked;
        picked.reserve(self_sample);
        for (std::uint64_t i = 0; i < self_sample; ++i) picked.push_back(std::move(self[order[i]]));
        self = std::move(picked);
    }
    std::fprintf(stderr, "training on %zu normal records (of %llu parsed, %llu skipped)\n",
                 self.size(), static_cast<unsigned long long>(counts.parsed),
                 static_cast<unsigned long long>(counts.skipped));

    std::ofstream log;
    if (!log_path.empty()) {
        log.open(log_path, std::ios::binary);
        if (!log) throw DataError("cannot write " + log_path);
        log << "iteration,best_fitness,mean_generality,mean_self_matches\n";
    }

    DetectorSet set = generate_detectors(schema, self, cfg, [&](const RunLogRow& row) {
        if (log.is_open()) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%llu,%.9g,%.9g,%.9g\n",
                          static_cast<unsigned long long>(row.iteration), row.best_fitness,
                          row.mean_generality, row.mean_self_matches);
            log << buf;
        }
    });

    set.provenance.config_echo = provenance_echo(st);
    std::string echo_text;
    for (const auto& [k, v] : set.provenance.config_echo) echo_text += k + "=" + v + "\n";
    set.provenance.config_digest = digest_hex(echo_text);
    write_file(out, set.to_json_string());
    std::fprintf(stderr, "kept %zu detectors after purge (of %d)\n", set.detectors.size(),
                 cfg.population_size);
}

// ----------------------------------------------------------------- train-som

void run_train_som(const CLI::App& app, const CLI::App& cmd) {
    Settings st = make_settings(cmd);
    validate_config_keys(app, st);

    const std::string schema_path = required_path(st, cmd, "schema");
    const std::string train_path = required_path(st, cmd, "train");
    const std::string out = required_path(st, cmd, "out");
    const bool skip_malformed = st.flag(cmd, "skip-malformed");

    SomConfig cfg;
    cfg.grid_side = st.get<int>(cmd, "grid", 10);
    cfg.epochs = st.get<int>(cmd, "epochs", 2000);
    cfg.eta0 = st.get<double>(cmd, "eta0", 0.1);
    cfg.sigma0 = st.get<double>(cmd, "sigma0", 0.0);
    cfg.seed = st.get<std::uint64_t>(cmd, "seed", 1);
    const double init_range = st.get<double>(cmd, "init-range", 0.1);
    cfg.init_min = -init_range;
    cfg.init_max = init_range;
    cfg.log10_tau = st.flag(cmd, "log10-tau");
    LvqConfig lvq;
    lvq.alpha0 = st.get<double>(cmd, "lvq-alpha0", 0.0);
    lvq.epochs = st.get<int>(cmd, "lvq-epochs", 10);
    lvq.seed = cfg.seed;
    cfg.validate();

    FeatureSchema schema = load_schema(schema_path);
    LoadCounts counts;
    std::vector<ConnectionVector> attacks = load_encoded(
        train_path, schema, skip_malformed, counts, [](const ConnectionVector& cv) {
            return cv.label && cv.label->kind == LabelTag::Kind::Attack;
        });
    if (attacks.empty())
        throw DataError("no attack records with known classes in " + train_path);
    std::fprintf(stderr,
                 "training on %zu attack records (of %llu parsed, %llu unknown names)\n",
                 attacks.size(), static_cast<unsigned long long>(counts.parsed),
                 static_cast<unsigned long long>(counts.unknown_attacks));

    std::vector<LabelledVector> data;
    data.reserve(attacks.size());
    for (const ConnectionVector& cv : attacks)
        data.push_back({encode_for_som(cv, schema), cv.label->cls});
    std::vector<std::vector<double>> vectors;
    vectors.reserve(data.size());
    for (const LabelledVector& lv : data) vectors.push_back(lv.x);

    SomModel som = init_weights(cfg, schema.som_dim());
    som = train(std::move(som), vectors, cfg);
    LabelMapResult labelled = label_map(std::move(som), data);
    som = std::move(labelled.model);
    if (lvq.alpha0 > 0.0) {
        lvq.validate();
        som = lvq_train(std::move(som), data, lvq);
    }

    som.schema_digest = schema.digest();
    som.training.config_echo = provenance_echo(st);
    write_file(out, som.to_json_string());
    std::fprintf(stderr, "trained %dx%d SOM (input dim %d)%s\n", cfg.grid_side, cfg.grid_side,
                 schema.som_dim(), lvq.alpha0 > 0.0 ? " with LVQ refinement" : "");
}

// ------------------------------------------------------------------ evaluate

void run_evaluate(const CLI::App& app, const CLI::App& cmd) {
    Settings st = make_settings(cmd);
    validate_config_keys(app, st);

    const std::string schema_path = required_path(st, cmd, "schema");
    const std::string detectors_path = required_path(st, cmd, "detectors");
    const std::string model_path = required_path(st, cmd, "model");
    const std::string test = required_path(st, cmd, "test");
    const std::string out = required_path(st, cmd, "out");
    const std::string tables_path = st.get<std::string>(cmd, "tables", "");
    const int threads = st.get<int>(cmd, "threads", 1);
    const bool skip_malformed = st.flag(cmd, "skip-malformed");

    FeatureSchema schema = load_schema(schema_path);
    DetectorSet detectors = DetectorSet::from_json_string(read_file(detectors_path));
    SomModel som = SomModel::from_json_string(read_file(model_path));
    require_same_schema(schema, detectors.provenance.schema_digest, "detector set");
    require_same_schema(schema, som.schema_digest, "SOM model");
    if (!som.labelled()) throw DataError("evaluate: model is not labelled");
    if (som.input_dim != schema.som_dim())
        throw DataError("evaluate: model input dimension does not fit the schema");
    for (const Detector& d : detectors.detectors) validate_detector(schema, d);

    LoadCounts counts;
    std::vector<ConnectionVector> records = load_encoded(test, schema, skip_malformed, counts);
    if (records.empty()) throw DataError("no test records in " + test);

    EvaluationReport report = evaluate(schema, detectors, som, records, threads);
    write_file(out, report.to_json_string());
    const std::string tables = report.to_text_tables();
    if (!tables_path.empty()) write_file(tables_path, tables);
    std::fputs(tables.c_str(), stdout);
    if (counts.skipped > 0)
        std::fprintf(stderr, "skipped %llu malformed records\n",
                     static_cast<unsigned long long>(counts.skipped));
}

// -------------------------------------------------------------------- detect

void run_detect(const CLI::App& app, const CLI::App& cmd) {
    Settings st = make_settings(cmd);
    validate_config_keys(app, st);

    FeatureSchema schema = load_schema(required_path(st, cmd, "schema"));
    DetectorSet detectors =
        DetectorSet::from_json_string(read_file(required_path(st, cmd, "detectors")));
    SomModel som = SomModel::from_json_string(read_file(required_path(st, cmd, "model")));
    require_same_schema(schema, detectors.provenance.schema_digest, "detector set");
    require_same_schema(schema, som.schema_digest, "SOM model");
    if (!som.labelled()) throw DataError("detect: model is not labelled");
    if (som.input_dim != schema.som_dim())
        throw DataError("detect: model input dimension does not fit the schema");
    for (const Detector& d : detectors.detectors) validate_detector(schema, d);

    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(std::cin, line)) {
        ++line_no;
        try {
            RawRecord rec = parse_kdd_record(line, line_no);
            ConnectionVector cv = encode_connection(rec, schema, line_no);
            Verdict v = analyze(schema, detectors, som, cv);
            if (v.anomalous)
                std::printf("%llu,anomalous,%s,%d,%d\n",
                            static_cast<unsigned long long>(line_no),
                            to_string(*v.attack_class).c_str(), v.winning_neuron->first,
                            v.winning_neuron->second);
            else
                std::printf("%llu,normal,-,-,-\n", static_cast<unsigned long long>(line_no));
        } catch (const MalformedRecord&) {
            std::printf("%llu,error,malformed-record\n", static_cast<unsigned long long>(line_no));
        }
        std::fflush(stdout);
    }
}

// --------------------------------------------------------------- render-grid

void run_render_grid(const CLI::App& app, const CLI::App& cmd) {
    Settings st = make_settings(cmd);
    validate_config_keys(app, st);

    const std::string model_path = required_path(st, cmd, "model");
    const std::string out = required_path(st, cmd, "out");
    std::string format = st.get<std::string>(cmd, "format", "");
    if (format.empty())
        format = out.size() > 4 && out.compare(out.size() - 4, 4, ".svg") == 0 ? "svg" : "text";
    if (format != "svg" && format != "text")
        throw UsageError("--format must be 'text' or 'svg'");

    SomModel som = SomModel::from_json_string(read_file(model_path));
    write_file(out, format == "svg" ? render_grid_svg(som) : render_grid_text(som));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid immune-system anomaly detector with SOM attack classification"};
    app.require_subcommand(1);

    CLI::App* fit = app.add_subcommand("fit-schema",
                                       "fit bin edges and vocabularies on training data");
    fit->add_option("--train", "KDD-format training file (.gz accepted)");
    fit->add_option("--out", "output schema JSON");
    fit->add_option("--template", "schema template JSON (defaults to the built-in KDD mapping)");
    fit->add_flag("--dump-template", "print the built-in template and exit");
    fit->add_flag("--skip-malformed", "skip and count malformed records instead of aborting");
    add_config_option(fit);

    CLI::App* gen = app.add_subcommand("train-detectors",
                                       "generate anomaly detectors by negative selection");
    gen->add_option("--schema", "fitted schema JSON");
    gen->add_option("--train", "KDD-format training file; only normal records are used");
    gen->add_option("--out", "output detector-set JSON");
    gen->add_option("--log", "convergence log CSV");
    gen->add_option("--log-every", "iterations between log rows (default 100)");
    gen->add_option("--population", "population size (default 1600)");
    gen->add_option("--iterations", "steady-state iterations (default 50000)");
    gen->add_option("--crossover-rate", "crossover probability (default 1.0)");
    gen->add_option("--mutation-rate", "per-gene mutation probability (default 1/L)");
    gen->add_option("--w1", "generality objective weight (default 0.6)");
    gen->add_option("--w2", "self-match penalty weight (default 0.4)");
    gen->add_option("--seed", "random seed (default 1)");
    gen->add_option("--self-sample", "train on a fixed-seed subsample of N normal records");
    gen->add_flag("--two-children", "classic two-child crowding (experimental)");
    gen->add_flag("--skip-malformed", "skip and count malformed records instead of aborting");
    add_config_option(gen);

    CLI::App* som = app.add_subcommand("train-som",
                                       "train and label the attack-classification SOM");
    som->add_option("--schema", "fitted schema JSON");
    som->add_option("--train", "KDD-format training file; only known-class attacks are used");
    som->add_option("--out", "output model JSON");
    som->add_option("--grid", "output grid side (default 10)");
    som->add_option("--epochs", "training epochs (default 2000)");
    som->add_option("--eta0", "initial learning rate (default 0.1)");
    som->add_option("--sigma0", "initial neighborhood width (default: grid side)");
    som->add_option("--init-range", "weights start uniform in [-R, R] (default 0.1)");
    som->add_option("--lvq-alpha0", "LVQ initial learning rate; 0 disables LVQ (default 0)");
    som->add_option("--lvq-epochs", "LVQ epochs (default 10)");
    som->add_option("--seed", "random seed (default 1)");
    som->add_flag("--log10-tau", "use log10 in the width schedule time constant");
    som->add_flag("--skip-malformed", "skip and count malformed records instead of aborting");
    add_config_option(som);

    CLI::App* ev = app.add_subcommand("evaluate", "score a labelled test set end to end");
    ev->add_option("--schema", "fitted schema JSON");
    ev->add_option("--detectors", "detector-set JSON");
    ev->add_option("--model", "SOM model JSON");
    ev->add_option("--test", "KDD-format labelled test file");
    ev->add_option("--out", "report JSON");
    ev->add_option("--tables", "also write the text tables here");
    ev->add_option("--threads", "worker threads for record scoring (default 1)");
    ev->add_flag("--skip-malformed", "skip and count malformed records instead of aborting");
    add_config_option(ev);

    CLI::App* det = app.add_subcommand("detect",
                                       "stream verdicts for KDD lines on standard input");
    det->add_option("--schema", "fitted schema JSON");
    det->add_option("--detectors", "detector-set JSON");
    det->add_option("--model", "SOM model JSON");
    add_config_option(det);

    CLI::App* render = app.add_subcommand("render-grid", "render the labelled output grid");
    render->add_option("--model", "SOM model JSON");
    render->add_option("--out", "output file");
    render->add_option("--format", "text or svg (default: by extension)");
    add_config_option(render);

    try {
        app.parse(argc, argv);
        if (fit->parsed()) run_fit_schema(app, *fit);
        if (gen->parsed()) run_train_detectors(app, *gen);
        if (som->parsed()) run_train_som(app, *som);
        if (ev->parsed()) run_evaluate(app, *ev);
        if (det->parsed()) run_detect(app, *det);
        if (render->parsed()) run_render_grid(app, *render);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ArtifactMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
