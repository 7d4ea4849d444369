#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "json.hpp"
#include "mplsrisk/report.hpp"
#include "mplsrisk/scenario.hpp"

using namespace mplsrisk;
using nlohmann::json;

namespace {

#ifndef MPLSRISK_SCENARIO_DIR
#define MPLSRISK_SCENARIO_DIR "scenarios"
#endif

ScenarioFile baseline() {
    return load_scenario(std::string(MPLSRISK_SCENARIO_DIR) + "/baseline.json");
}

}  // namespace

TEST_CASE("analyze emits exactly the closed-form metric set for the baseline") {
    ReportDocument doc = analyze_scenario(baseline());
    std::set<std::string> ids;
    for (const MetricEntry& m : doc.report.metrics) {
        CHECK(m.analytic.has_value());
        CHECK_FALSE(m.empirical.has_value());  // no simulation executed
        ids.insert(m.id);
    }
    std::set<std::string> expected{
        "spoof.p_uniform",
        "spoof.p_weighted",
        "spoof.acceptance",
        "intercept.ratio",
        "intercept.effective_exposure",
        "confidentiality.security_strength_log2",
        "confidentiality.ipsec_intact",
        "dos.traffic_intensity",
        "dos.mm1_overload",
        "dos.erlang_b",
        "dos.limiter_admitted_rate",
        "reliability.config",
        "reliability.redundant",
    };
    CHECK(ids == expected);
}

TEST_CASE("analyze computes the expected baseline values") {
    ReportDocument doc = analyze_scenario(baseline());
    auto value = [&](const std::string& id) -> double {
        for (const MetricEntry& m : doc.report.metrics)
            if (m.id == id) return *m.analytic;
        FAIL("missing metric ", id);
        return 0.0;
    };
    CHECK(value("spoof.p_uniform") == doctest::Approx(0.1));
    // filter blocks 2 of 10 spoofed labels, auth forges at 0.05
    CHECK(value("spoof.acceptance") == doctest::Approx(0.08 * 0.05));
    CHECK(value("intercept.ratio") == doctest::Approx(1.75 * 0.3 / 32.0));
    CHECK(value("confidentiality.security_strength_log2") == 128.0);
    CHECK(value("confidentiality.ipsec_intact") == doctest::Approx(0.98 * 0.9));
    CHECK(value("dos.traffic_intensity") == doctest::Approx(1.4));
    // limiter at the target caps the offered rate at 2.5 -> rho_eff = 1.25
    CHECK(value("dos.mm1_overload") == doctest::Approx(0.2));
    CHECK(value("dos.limiter_admitted_rate") == doctest::Approx(2.5));
    CHECK(value("reliability.config") == doctest::Approx(std::exp(-3.0 / 40.0)));
    CHECK(value("reliability.redundant") == doctest::Approx(0.999));
}

TEST_CASE("weighted spoof row appears only when active sets support it") {
    // no label_space.active_sets: the weighted quantity is undefined
    ScenarioFile sc = load_scenario_from_string(R"({
      "version": 1,
      "topology": {"nodes": [{"id": 0, "role": "LER", "service_rate": 1.0}]},
      "label_space": {"size": 100},
      "spoof": {"labels": [1, 2, 3], "attack_weights": [[0, 1.0]]}
    })");
    ReportDocument doc = analyze_scenario(sc);
    bool has_uniform = false, has_weighted = false;
    for (const MetricEntry& m : doc.report.metrics) {
        if (m.id == "spoof.p_uniform") has_uniform = true;
        if (m.id == "spoof.p_weighted") has_weighted = true;
    }
    CHECK(has_uniform);
    CHECK_FALSE(has_weighted);
}

TEST_CASE("analytic-only rows are excluded from verdicts") {
    ReportDocument doc = analyze_scenario(baseline());
    for (Verdict v : doc.verdicts) CHECK(v == Verdict::AnalyticOnly);
    CHECK_FALSE(any_divergent(doc));
}

TEST_CASE("mm1 row vanishes for rho <= 1 only in value, not in presence") {
    ScenarioFile sc = baseline();
    sc.threat.dos->arrival_rate = 1.0;  // below the limiter and the service rate
    ReportDocument doc = analyze_scenario(sc);
    bool found = false;
    for (const MetricEntry& m : doc.report.metrics)
        if (m.id == "dos.mm1_overload") {
            found = true;
            CHECK(*m.analytic == 0.0);  // clamped stable-queue value
        }
    CHECK(found);
}

TEST_CASE("scenario with two redundant components reports their pooled reliability") {
    ScenarioFile sc = baseline();
    sc.mitigations.redundancy = RedundancyGroup{{0.9, 0.9}};
    ReportDocument doc = analyze_scenario(sc);
    for (const MetricEntry& m : doc.report.metrics)
        if (m.id == "reliability.redundant") CHECK(*m.analytic == doctest::Approx(0.99));
}

TEST_CASE("json rendering round-trips the payload exactly") {
    ScenarioFile sc = baseline();
    sc.simulation.trials = 1;
    sc.simulation.horizon = 200.0;
    ReportDocument doc = simulate_scenario(sc);
    std::string rendered = render_report(doc, ReportFormat::Json);

    json parsed = json::parse(rendered);
    CHECK(parsed["tool"] == "mplsrisk");
    CHECK(parsed["mode"] == "simulate");
    CHECK(parsed["scenario_digest"] == doc.scenario_digest);
    REQUIRE(parsed["metrics"].size() == doc.report.metrics.size());
    for (std::size_t i = 0; i < doc.report.metrics.size(); ++i) {
        const MetricEntry& m = doc.report.metrics[i];
        const json& row = parsed["metrics"][i];
        CHECK(row["id"] == m.id);
        if (m.analytic)
            CHECK(row["analytic"].get<double>() == *m.analytic);
        else
            CHECK(row["analytic"].is_null());
        if (m.empirical)
            CHECK(row["empirical"].get<double>() == *m.empirical);
        else
            CHECK(row["empirical"].is_null());
        CHECK(row["verdict"] == verdict_label(doc.verdicts[i]));
    }
}

TEST_CASE("text rendering lists one row per metric id") {
    ReportDocument doc = analyze_scenario(baseline());
    std::string text = render_report(doc, ReportFormat::Text);
    for (const MetricEntry& m : doc.report.metrics)
        CHECK(text.find(m.id) != std::string::npos);
    CHECK(text.find("overall: analytic-only") != std::string::npos);
}

TEST_CASE("rendering is a pure function of the document") {
    ReportDocument doc = analyze_scenario(baseline());
    CHECK(render_report(doc, ReportFormat::Json) == render_report(doc, ReportFormat::Json));
    CHECK(render_report(doc, ReportFormat::Text) == render_report(doc, ReportFormat::Text));
}

TEST_CASE("simulate overrides replace file values for simulation params only") {
    ScenarioFile sc = baseline();
    SimulateOverrides ov;
    ov.seed = 99;
    ov.trials = 1;
    ov.horizon = 150.0;
    ReportDocument doc = simulate_scenario(sc, ov);
    CHECK(doc.params.seed == 99);
    CHECK(doc.params.trials == 1);
    CHECK(doc.params.horizon == 150.0);
    CHECK(doc.params.warmup == 50.0);  // file value kept
    CHECK(doc.scenario_digest == sc.digest);
}

TEST_CASE("round12 is idempotent and stable through rendering") {
    for (double x : {0.1, 1.0 / 3.0, 2.0e-7, 123456.789, 4.0 / 19.0}) {
        double r = round12(x);
        CHECK(round12(r) == r);
    }
}
