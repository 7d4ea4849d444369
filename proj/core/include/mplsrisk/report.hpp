#pragma once

#include <optional>
#include <string>

#include "mplsrisk/scenario.hpp"
#include "mplsrisk/sim_engine.hpp"

namespace mplsrisk {

enum class ReportFormat { Text, Json };

struct ReportDocument {
    std::string scenario_digest;
    std::string tool_version;
    std::string mode;  // "analyze" | "simulate" | "validate"
    SimulationParams params;
    RiskReport report;
    std::vector<Verdict> verdicts;  // parallel to report.metrics
    ReportFormat format = ReportFormat::Text;
};

// Assembles the metric table for a scenario: every closed-form quantity the
// configured sections support, paired with empirical estimates when merged
// trial metrics are supplied. All numeric values are normalized to 12
// significant digits so rendered reports round-trip exactly.
RiskReport build_risk_report(const ScenarioFile& scenario, const TrialMetrics* merged,
                             std::uint32_t trials);

// Analytic metrics only; no simulation executed.
ReportDocument analyze_scenario(const ScenarioFile& scenario);

struct SimulateOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> trials;
    std::optional<double> horizon;
    unsigned threads = 1;  // never affects results, only wall time
};

// Full Monte Carlo run plus verdicts. Overrides beat file values for
// simulation parameters only.
ReportDocument simulate_scenario(const ScenarioFile& scenario,
                                 const SimulateOverrides& overrides = {});

std::string render_report(const ReportDocument& doc, ReportFormat format);

bool any_divergent(const ReportDocument& doc);

const char* verdict_label(Verdict v);

// Nearest double to the 12-significant-digit decimal rendering of x.
double round12(double x);

}  // namespace mplsrisk
