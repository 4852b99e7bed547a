#include <doctest.h>

#include <random>

#include "hids/pipeline.hpp"
#include "test_support.hpp"

using namespace hids;

namespace {

// Fixture: tiny schema, a detector set flagging count >= bin 8, and a SOM
// whose four corners are pinned to the four classes.
struct Fixture {
    FeatureSchema schema = test::tiny_schema();
    DetectorSet detectors;
    SomModel som;

    Fixture() {
        Detector d;
        d.genes = {kUnspecified, kUnspecified, 8, 9};
        detectors.detectors.push_back(d);
        detectors.provenance.schema_digest = schema.digest();

        som.grid_side = 2;
        som.input_dim = schema.som_dim();  // 3 + 1 + 1
        som.weights.assign(static_cast<std::size_t>(4) * som.input_dim, 0.0);
        // Separate neurons on the (binary, count) plane.
        som.weight(0)[3] = 0.0;
        som.weight(0)[4] = 1.0;  // DoS: count high
        som.weight(1)[3] = 1.0;
        som.weight(1)[4] = 1.0;  // Probe
        som.weight(2)[3] = 0.0;
        som.weight(2)[4] = 0.0;  // U2R
        som.weight(3)[3] = 1.0;
        som.weight(3)[4] = 0.0;  // R2L
        som.labels = {AttackClass::DoS, AttackClass::Probe, AttackClass::U2R, AttackClass::R2L};
        som.schema_digest = schema.digest();
    }

    ConnectionVector cv(value_t protocol, value_t login, value_t count,
                        std::optional<LabelTag> label = std::nullopt) const {
        ConnectionVector v;
        v.values = {protocol, login, count};
        v.label = label;
        return v;
    }
};

LabelTag normal_tag() { return LabelTag{}; }

LabelTag attack_tag(AttackClass c) {
    LabelTag t;
    t.kind = LabelTag::Kind::Attack;
    t.cls = c;
    t.raw_name = to_string(c);
    return t;
}

LabelTag unknown_tag() {
    LabelTag t;
    t.kind = LabelTag::Kind::UnknownAttack;
    t.raw_name = "zeroday";
    return t;
}

}  // namespace

TEST_CASE("detect is an OR over the detector set") {
    Fixture fx;
    CHECK(detect(fx.schema, fx.detectors, fx.cv(0, 0, 9)));
    CHECK_FALSE(detect(fx.schema, fx.detectors, fx.cv(0, 0, 3)));

    DetectorSet empty;
    CHECK_FALSE(detect(fx.schema, empty, fx.cv(0, 0, 9)));

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        FeatureSchema s = test::random_schema(rng);
        DetectorSet set;
        const int n = static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) set.detectors.push_back(test::random_test_detector(s, rng));
        ConnectionVector cv = test::random_cv(s, rng);
        bool any = false;
        for (const Detector& d : set.detectors) any = any || test::oracle_matches(s, d, cv);
        CHECK(detect(s, set, cv) == any);
    }
}

TEST_CASE("analyze composes detection with classification") {
    Fixture fx;

    Verdict quiet = analyze(fx.schema, fx.detectors, fx.som, fx.cv(0, 0, 0));
    CHECK_FALSE(quiet.anomalous);
    CHECK_FALSE(quiet.attack_class.has_value());
    CHECK_FALSE(quiet.winning_neuron.has_value());
    CHECK(quiet.matched_detector_count == 0);

    // count bin 9 -> encodes to 1.0 -> nearest DoS corner (login 0).
    Verdict loud = analyze(fx.schema, fx.detectors, fx.som, fx.cv(0, 0, 9));
    CHECK(loud.anomalous);
    CHECK(loud.matched_detector_count == 1);
    REQUIRE(loud.attack_class.has_value());
    CHECK(*loud.attack_class == AttackClass::DoS);
    REQUIRE(loud.winning_neuron.has_value());
    CHECK(loud.winning_neuron->first == 0);
    CHECK(loud.winning_neuron->second == 0);

    // Composition soundness against the primitives.
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        ConnectionVector cv = fx.cv(static_cast<value_t>(rng() % 3),
                                    static_cast<value_t>(rng() % 2),
                                    static_cast<value_t>(rng() % 10));
        Verdict v = analyze(fx.schema, fx.detectors, fx.som, cv);
        CHECK(v.anomalous == detect(fx.schema, fx.detectors, cv));
        if (v.anomalous)
            CHECK(*v.attack_class == classify(fx.som, encode_for_som(cv, fx.schema)));
    }
}

TEST_CASE("evaluate_detection counts a 10-record fixture by hand") {
    Fixture fx;
    std::vector<ConnectionVector> test_set;
    // 4 normals, one flagged (count 9).
    test_set.push_back(fx.cv(0, 0, 1, normal_tag()));
    test_set.push_back(fx.cv(1, 0, 2, normal_tag()));
    test_set.push_back(fx.cv(2, 1, 3, normal_tag()));
    test_set.push_back(fx.cv(0, 1, 9, normal_tag()));
    // 3 DoS: two flagged.
    test_set.push_back(fx.cv(0, 0, 9, attack_tag(AttackClass::DoS)));
    test_set.push_back(fx.cv(1, 0, 8, attack_tag(AttackClass::DoS)));
    test_set.push_back(fx.cv(1, 0, 0, attack_tag(AttackClass::DoS)));
    // 1 Probe unflagged, 1 U2R flagged.
    test_set.push_back(fx.cv(2, 1, 1, attack_tag(AttackClass::Probe)));
    test_set.push_back(fx.cv(0, 1, 8, attack_tag(AttackClass::U2R)));
    // 1 unknown attack name, flagged.
    test_set.push_back(fx.cv(0, 0, 9, unknown_tag()));

    DetectionRates rates = evaluate_detection(fx.schema, fx.detectors, test_set);
    CHECK(rates.normal_total == 4);
    CHECK(rates.normal_accuracy == doctest::Approx(3.0 / 4));
    CHECK(rates.false_positive_rate == doctest::Approx(1.0 / 4));
    CHECK(rates.normal_accuracy + rates.false_positive_rate == doctest::Approx(1.0));
    CHECK(rates.per_class[static_cast<int>(AttackClass::DoS)] == doctest::Approx(2.0 / 3));
    CHECK(rates.per_class[static_cast<int>(AttackClass::Probe)] == 0.0);
    CHECK(rates.per_class[static_cast<int>(AttackClass::U2R)] == doctest::Approx(1.0));
    CHECK(rates.per_class[static_cast<int>(AttackClass::R2L)] == 0.0);
    CHECK(rates.unknown_total == 1);
    CHECK(rates.unknown_flagged == 1);

    // Empty detector set: no attack detected, perfect normal accuracy.
    DetectorSet empty;
    DetectionRates none = evaluate_detection(fx.schema, empty, test_set);
    CHECK(none.normal_accuracy == doctest::Approx(1.0));
    for (double r : none.per_class) CHECK(r == 0.0);
}

TEST_CASE("evaluate_classification scores per-class recall") {
    Fixture fx;
    std::vector<ConnectionVector> attacks;
    // Perfectly classifiable corners.
    attacks.push_back(fx.cv(0, 0, 9, attack_tag(AttackClass::DoS)));
    attacks.push_back(fx.cv(0, 1, 9, attack_tag(AttackClass::Probe)));
    attacks.push_back(fx.cv(0, 0, 0, attack_tag(AttackClass::U2R)));
    attacks.push_back(fx.cv(0, 1, 0, attack_tag(AttackClass::R2L)));
    ClassificationRates perfect = evaluate_classification(fx.schema, fx.som, attacks);
    for (int c = 0; c < kAttackClassCount; ++c) {
        CHECK(perfect.per_class[c] == doctest::Approx(1.0));
        CHECK(perfect.class_totals[c] == 1);
    }

    // A misclassified DoS (lands on the U2R corner) halves the DoS rate.
    attacks.push_back(fx.cv(0, 0, 1, attack_tag(AttackClass::DoS)));
    ClassificationRates mixed = evaluate_classification(fx.schema, fx.som, attacks);
    CHECK(mixed.per_class[static_cast<int>(AttackClass::DoS)] == doctest::Approx(0.5));

    // Unknown attacks and normals are excluded from the denominators.
    attacks.push_back(fx.cv(0, 0, 0, unknown_tag()));
    attacks.push_back(fx.cv(0, 0, 0, normal_tag()));
    ClassificationRates same = evaluate_classification(fx.schema, fx.som, attacks);
    CHECK(same.class_totals == mixed.class_totals);
}

TEST_CASE("evaluate_overall multiplies detection by classification") {
    DetectionRates det;
    det.normal_accuracy = 0.994;
    det.per_class = {0.969, 0.685, 0.584, 0.125};
    ClassificationRates cls;
    cls.per_class = {0.9992, 0.9446, 0.5921, 0.4149};

    OverallRates overall = evaluate_overall(det, cls);
    CHECK(overall.normal == doctest::Approx(0.994));
    for (int c = 0; c < kAttackClassCount; ++c)
        CHECK(overall.per_class[c] ==
              doctest::Approx(det.per_class[c] * cls.per_class[c]).epsilon(1e-12));

    // classification = 1 -> overall = detection.
    ClassificationRates unit;
    unit.per_class = {1.0, 1.0, 1.0, 1.0};
    OverallRates same = evaluate_overall(det, unit);
    for (int c = 0; c < kAttackClassCount; ++c)
        CHECK(same.per_class[c] == doctest::Approx(det.per_class[c]));
}

TEST_CASE("the full report reconciles every record") {
    Fixture fx;
    std::mt19937_64 rng(11);
    std::vector<ConnectionVector> test_set;
    std::int64_t normals = 0, unknowns = 0;
    std::array<std::int64_t, kAttackClassCount> per_class{};
    for (int i = 0; i < 600; ++i) {
        ConnectionVector cv = fx.cv(static_cast<value_t>(rng() % 3),
                                    static_cast<value_t>(rng() % 2),
                                    static_cast<value_t>(rng() % 10));
        switch (rng() % 6) {
            case 0:
            case 1:
                cv.label = normal_tag();
                ++normals;
                break;
            case 2:
                cv.label = unknown_tag();
                ++unknowns;
                break;
            default: {
                AttackClass c = static_cast<AttackClass>(rng() % 4);
                cv.label = attack_tag(c);
                ++per_class[static_cast<int>(c)];
            }
        }
        test_set.push_back(std::move(cv));
    }

    EvaluationReport rep = evaluate(fx.schema, fx.detectors, fx.som, test_set);
    CHECK(rep.total_records == 600);
    CHECK(rep.detection.normal_total == normals);
    CHECK(rep.detection.unknown_total == unknowns);

    // Confusion rows sum to the per-class totals; nothing lost or duplicated.
    std::int64_t grand = 0;
    for (int r = 0; r < kConfusionRows; ++r) {
        std::int64_t row_sum = 0;
        for (int c = 0; c < kConfusionCols; ++c) row_sum += rep.confusion[r][c];
        grand += row_sum;
        if (r == 0) CHECK(row_sum == normals);
        if (r >= 1 && r <= 4) CHECK(row_sum == per_class[r - 1]);
        if (r == 5) CHECK(row_sum == unknowns);
    }
    CHECK(grand == 600);

    // Every rate lies in [0,1].
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    CHECK(in01(rep.detection.normal_accuracy));
    for (double v : rep.detection.per_class) CHECK(in01(v));
    for (double v : rep.classification.per_class) CHECK(in01(v));
    for (double v : rep.overall.per_class) CHECK(in01(v));

    // Serializations render without blowing up and embed the digest.
    const std::string json_text = rep.to_json_string();
    CHECK(json_text.find(fx.schema.digest()) != std::string::npos);
    const std::string tables = rep.to_text_tables();
    CHECK(tables.find("Normal") != std::string::npos);
    CHECK(tables.find("confusion") != std::string::npos);

    // The one-pass report agrees with the standalone operations and is
    // independent of the thread count.
    DetectionRates det = evaluate_detection(fx.schema, fx.detectors, test_set);
    ClassificationRates cls = evaluate_classification(fx.schema, fx.som, test_set);
    CHECK(rep.detection.normal_accuracy == doctest::Approx(det.normal_accuracy).epsilon(1e-12));
    for (int c = 0; c < kAttackClassCount; ++c) {
        CHECK(rep.detection.per_class[c] == doctest::Approx(det.per_class[c]).epsilon(1e-12));
        CHECK(rep.classification.per_class[c] == doctest::Approx(cls.per_class[c]).epsilon(1e-12));
    }
    EvaluationReport threaded = evaluate(fx.schema, fx.detectors, fx.som, test_set, 3);
    CHECK(threaded.to_json_string() == rep.to_json_string());
}
