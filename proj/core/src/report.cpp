#include "mplsrisk/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "mplsrisk/errors.hpp"
#include "mplsrisk/interception.hpp"
#include "mplsrisk/queueing.hpp"
#include "mplsrisk/reliability.hpp"
#include "mplsrisk/version.hpp"

namespace mplsrisk {

namespace {

using nlohmann::json;

std::string format12(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", x);
    return buffer;
}

std::optional<double> round12_opt(std::optional<double> x) {
    if (!x) return std::nullopt;
    return round12(*x);
}

double binomial_half_width(double p_hat, std::uint64_t n) {
    return 3.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

struct ReportBuilder {
    const ScenarioFile& sc;
    const TrialMetrics* merged;
    RiskReport out;

    void add(std::string id, std::string formula, std::optional<double> analytic,
             std::optional<double> empirical = std::nullopt,
             std::optional<double> half_width = std::nullopt,
             std::optional<std::uint64_t> samples = std::nullopt) {
        out.metrics.push_back(MetricEntry{std::move(id), std::move(formula),
                                          round12_opt(analytic), round12_opt(empirical),
                                          round12_opt(half_width), samples});
    }

    const NodeCounters* target_counters(NodeId node) const {
        if (merged == nullptr) return nullptr;
        auto it = merged->nodes.find(node);
        return it == merged->nodes.end() ? nullptr : &it->second;
    }

    void spoof_rows() {
        const SpoofSet& spoof = sc.threat.spoof;
        if (spoof.labels.empty()) return;

        add("spoof.p_uniform", "|L_att|/m", p_spoof_uniform(spoof, sc.label_space));

        bool weighted_defined = !spoof.attack_weights.empty();
        for (const auto& [node, weight] : spoof.attack_weights) {
            if (weight <= 0.0) continue;
            auto it = sc.label_space.active_sets.find(node);
            if (it == sc.label_space.active_sets.end() || it->second.empty())
                weighted_defined = false;
        }
        if (weighted_defined)
            add("spoof.p_weighted", "sum_i w_i*|L_att&L_i|/|L_i|",
                p_spoof_weighted(spoof, sc.label_space));

        FilterPolicy no_filter;
        const FilterPolicy& policy =
            sc.mitigations.filter ? *sc.mitigations.filter : no_filter;
        double analytic =
            spoof_acceptance_probability(spoof, sc.label_space, sc.mitigations.auth, policy);
        std::optional<double> empirical;
        std::optional<double> hw;
        std::optional<std::uint64_t> samples;
        if (merged && merged->spoofed_injected > 0) {
            double p_hat = static_cast<double>(merged->spoofed_accepted) /
                           static_cast<double>(merged->spoofed_injected);
            empirical = p_hat;
            hw = binomial_half_width(p_hat, merged->spoofed_injected);
            samples = merged->spoofed_injected;
        }
        add("spoof.acceptance", "(|L_att passing filter|/m)*P_forge", analytic, empirical,
            hw, samples);
    }

    void interception_rows() {
        if (!sc.traffic_symbols || !sc.threat.interception) return;
        const SymbolDistribution& dist = *sc.traffic_symbols;
        const InterceptionScenario& icpt = *sc.threat.interception;

        double analytic = interception_ratio(dist, icpt);
        std::optional<double> empirical;
        std::optional<double> hw;
        std::optional<std::uint64_t> samples;
        if (merged && merged->tap_crossings > 0) {
            double p_hat = static_cast<double>(merged->tapped_count) /
                           static_cast<double>(merged->tap_crossings);
            double h_hat = empirical_entropy(merged->tapped_symbols);
            empirical = h_hat * p_hat / icpt.secure_data_size_bits;
            // Entropy estimator tolerance anchored at 0.05 bits per 1e5
            // samples, combined with the binomial error of the tap rate.
            double h_tol = 0.05 * std::sqrt(1e5 / static_cast<double>(
                                                      std::max<std::uint64_t>(
                                                          merged->tapped_count, 1)));
            hw = (h_tol * p_hat + h_hat * binomial_half_width(p_hat, merged->tap_crossings)) /
                 icpt.secure_data_size_bits;
            samples = merged->tapped_count;
        }
        add("intercept.ratio", "H(X)*p_tap/S", analytic, empirical, hw, samples);

        ConfidentialityConfig none;
        const ConfidentialityConfig& conf =
            sc.mitigations.confidentiality ? *sc.mitigations.confidentiality : none;
        add("intercept.effective_exposure", "R_intercept*leak_enc*leak_mask",
            effective_exposure(dist, icpt, conf));
    }

    void confidentiality_rows() {
        if (!sc.mitigations.confidentiality) return;
        const ConfidentialityConfig& conf = *sc.mitigations.confidentiality;
        add("confidentiality.security_strength_log2", "log2(2^k) = k",
            security_strength_log2(conf.key_bits));
        if (conf.encryption_enabled && conf.integrity_enabled)
            add("confidentiality.ipsec_intact", "(1-p_break)*(1-p_miss)",
                ipsec_intact_probability(conf));
    }

    void dos_rows() {
        if (!sc.threat.dos) return;
        const DosConfig& dos = *sc.threat.dos;
        const Node* target = nullptr;
        for (const Node& n : sc.topology.nodes)
            if (n.id == dos.target) target = &n;
        if (target == nullptr) return;

        bool limited = sc.mitigations.rate_limiter &&
                       sc.mitigations.rate_limiter->node == dos.target;
        double lambda = dos.arrival_rate;
        double lambda_eff =
            limited ? rate_limit(lambda, sc.mitigations.rate_limiter->config) : lambda;
        double mu = target->service_rate;

        add("dos.traffic_intensity", "rho = lambda/mu",
            traffic_intensity({lambda, mu, target->server_count}));

        const NodeCounters* c = target_counters(dos.target);

        if (target->server_count == 1) {
            double analytic = mm1_overload_loss({lambda_eff, mu, 1});
            std::optional<double> empirical;
            std::optional<double> hw;
            std::optional<std::uint64_t> samples;
            if (c && c->queue_offered > 0) {
                empirical = static_cast<double>(c->queue_offered - c->served) /
                            static_cast<double>(c->queue_offered);
                hw = 0.02;  // stated absolute tolerance for the overload fraction
                samples = c->queue_offered;
            }
            add("dos.mm1_overload", "max(0, 1 - 1/rho)", analytic, empirical, hw, samples);
        }

        {
            double analytic = erlang_b(lambda_eff / mu, target->server_count);
            std::optional<double> empirical;
            std::optional<double> hw;
            std::optional<std::uint64_t> samples;
            bool loss_system = target->queue_capacity && *target->queue_capacity == 0;
            if (loss_system && c && c->queue_offered > 0) {
                double p_hat = static_cast<double>(c->dropped_queue) /
                               static_cast<double>(c->queue_offered);
                empirical = p_hat;
                hw = binomial_half_width(p_hat, c->queue_offered);
                samples = c->queue_offered;
            }
            add("dos.erlang_b", "ErlangB(a, C)", analytic, empirical, hw, samples);
        }

        if (limited) {
            const RateLimiterAttachment& rl = *sc.mitigations.rate_limiter;
            double analytic = rate_limit(lambda, rl.config);
            std::optional<double> empirical;
            std::optional<double> hw;
            std::optional<std::uint64_t> samples;
            if (merged && merged->measured_time > 0.0 && merged->limiter_offered > 0) {
                empirical = static_cast<double>(merged->limiter_admitted) /
                            merged->measured_time;
                hw = 0.02 * analytic;  // 2% relative tolerance on the admitted rate
                samples = merged->limiter_admitted;
            }
            add("dos.limiter_admitted_rate", "min(lambda, lambda_max)", analytic, empirical,
                hw, samples);

            if (merged) {
                double w = rl.measure_interval;
                double p_analytic = poisson_within_limit_probability(
                    lambda * w, rl.config.max_rate * w);
                std::optional<double> p_emp;
                std::optional<double> p_hw;
                std::optional<std::uint64_t> p_samples;
                if (merged->limit_intervals_total > 0) {
                    double p_hat =
                        static_cast<double>(merged->limit_intervals_conforming) /
                        static_cast<double>(merged->limit_intervals_total);
                    p_emp = p_hat;
                    p_hw = binomial_half_width(p_hat, merged->limit_intervals_total);
                    p_samples = merged->limit_intervals_total;
                }
                add("dos.p_limit", "P[Poisson(lambda*w) <= lambda_max*w]", p_analytic,
                    p_emp, p_hw, p_samples);
            }
        }
    }

    void reliability_rows() {
        if (sc.config_state)
            add("reliability.config", "exp(-M/N)", config_reliability(*sc.config_state));
        if (sc.mitigations.redundancy)
            add("reliability.redundant", "1 - prod(1-R_i)",
                redundant_reliability(*sc.mitigations.redundancy));
    }
};

json metrics_to_json(const ReportDocument& doc) {
    json rows = json::array();
    for (std::size_t i = 0; i < doc.report.metrics.size(); ++i) {
        const MetricEntry& m = doc.report.metrics[i];
        json row;
        row["id"] = m.id;
        row["formula"] = m.formula;
        row["analytic"] = m.analytic ? json(*m.analytic) : json(nullptr);
        row["empirical"] = m.empirical ? json(*m.empirical) : json(nullptr);
        row["half_width"] = m.half_width ? json(*m.half_width) : json(nullptr);
        row["samples"] = m.samples ? json(*m.samples) : json(nullptr);
        row["verdict"] = verdict_label(doc.verdicts[i]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string overall_label(const ReportDocument& doc) {
    bool any_compared = false;
    for (Verdict v : doc.verdicts) {
        if (v == Verdict::Divergent) return "DIVERGENT";
        if (v == Verdict::Consistent) any_compared = true;
    }
    return any_compared ? "CONSISTENT" : "analytic-only";
}

std::string render_text(const ReportDocument& doc) {
    std::ostringstream os;
    os << kToolName << " " << doc.mode << " report\n";
    os << "scenario digest : " << doc.scenario_digest << "\n";
    os << "tool version    : " << doc.tool_version << "\n";
    if (doc.mode == "simulate")
        os << "seed=" << doc.params.seed << " trials=" << doc.params.trials
           << " horizon=" << format12(doc.params.horizon)
           << " warmup=" << format12(doc.params.warmup) << "\n";
    os << "\n";

    auto cell = [](std::optional<double> v) {
        return v ? format12(*v) : std::string("-");
    };
    auto row = [&os](const std::string& id, const std::string& analytic,
                     const std::string& empirical, const std::string& half_width,
                     const std::string& samples, const std::string& verdict) {
        os << std::left << std::setw(41) << id << std::setw(20) << analytic
           << std::setw(20) << empirical << std::setw(20) << half_width
           << std::setw(12) << samples << verdict << "\n";
    };
    row("metric", "analytic", "empirical", "half_width", "samples", "verdict");
    for (std::size_t i = 0; i < doc.report.metrics.size(); ++i) {
        const MetricEntry& m = doc.report.metrics[i];
        row(m.id, cell(m.analytic), cell(m.empirical), cell(m.half_width),
            m.samples ? std::to_string(*m.samples) : std::string("-"),
            verdict_label(doc.verdicts[i]));
    }
    os << "\noverall: " << overall_label(doc) << "\n";
    return os.str();
}

std::string render_json(const ReportDocument& doc) {
    json j;
    j["tool"] = kToolName;
    j["tool_version"] = doc.tool_version;
    j["mode"] = doc.mode;
    j["scenario_digest"] = doc.scenario_digest;
    if (doc.mode == "simulate") {
        j["simulation"] = {{"seed", doc.params.seed},
                           {"trials", doc.params.trials},
                           {"horizon", doc.params.horizon},
                           {"warmup", doc.params.warmup}};
    }
    j["metrics"] = metrics_to_json(doc);
    j["overall"] = overall_label(doc);
    return j.dump(2) + "\n";
}

}  // namespace

double round12(double x) {
    return std::strtod(format12(x).c_str(), nullptr);
}

const char* verdict_label(Verdict v) {
    switch (v) {
        case Verdict::Consistent: return "CONSISTENT";
        case Verdict::Divergent: return "DIVERGENT";
        case Verdict::AnalyticOnly: return "analytic-only";
    }
    return "analytic-only";
}

RiskReport build_risk_report(const ScenarioFile& scenario, const TrialMetrics* merged,
                             std::uint32_t trials) {
    ReportBuilder builder{scenario, merged, {}};
    builder.spoof_rows();
    builder.interception_rows();
    builder.confidentiality_rows();
    builder.dos_rows();
    builder.reliability_rows();
    builder.out.trials = trials;
    builder.out.simulated = merged != nullptr;
    if (merged) builder.out.merged = *merged;
    return std::move(builder.out);
}

ReportDocument analyze_scenario(const ScenarioFile& scenario) {
    ReportDocument doc;
    doc.scenario_digest = scenario.digest;
    doc.tool_version = kToolVersion;
    doc.mode = "analyze";
    doc.params = scenario.simulation;
    doc.report = build_risk_report(scenario, nullptr, 0);
    doc.verdicts = compare(doc.report);
    return doc;
}

ReportDocument simulate_scenario(const ScenarioFile& scenario,
                                 const SimulateOverrides& overrides) {
    ScenarioFile effective = scenario;
    if (overrides.seed) effective.simulation.seed = *overrides.seed;
    if (overrides.trials) effective.simulation.trials = *overrides.trials;
    if (overrides.horizon) effective.simulation.horizon = *overrides.horizon;
    if (!(effective.simulation.horizon > effective.simulation.warmup))
        throw ValidationError("simulation horizon must exceed warmup");
    if (effective.simulation.trials < 1)
        throw ValidationError("simulation trials must be >= 1");

    ReportDocument doc;
    doc.scenario_digest = scenario.digest;
    doc.tool_version = kToolVersion;
    doc.mode = "simulate";
    doc.params = effective.simulation;
    doc.report = run_experiment(effective, overrides.threads);
    doc.verdicts = compare(doc.report);
    return doc;
}

std::string render_report(const ReportDocument& doc, ReportFormat format) {
    return format == ReportFormat::Text ? render_text(doc) : render_json(doc);
}

bool any_divergent(const ReportDocument& doc) {
    for (Verdict v : doc.verdicts)
        if (v == Verdict::Divergent) return true;
    return false;
}

}  // namespace mplsrisk
