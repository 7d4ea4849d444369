#include "mplsrisk/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mplsrisk/errors.hpp"

namespace mplsrisk {

double traffic_intensity(const QueueModel& q) {
    if (!(q.service_rate > 0.0)) throw ModelError("service_rate must be > 0");
    return q.arrival_rate / q.service_rate;
}

double mm1_overload_loss(const QueueModel& q) {
    if (q.servers != 1)
        throw ModelError("wrong model: M/M/1 overload fraction needs exactly 1 server, got " +
                         std::to_string(q.servers));
    double rho = traffic_intensity(q);
    return rho > 1.0 ? 1.0 - 1.0 / rho : 0.0;
}

double erlang_b(double offered_load, std::uint32_t servers) {
    if (offered_load < 0.0) throw ModelError("offered load must be >= 0");
    if (servers < 1) throw ModelError("servers must be >= 1");
    double b = 1.0;
    for (std::uint32_t c = 1; c <= servers; ++c)
        b = offered_load * b / (static_cast<double>(c) + offered_load * b);
    return b;
}

double erlang_b(const QueueModel& q) {
    return erlang_b(traffic_intensity(q), q.servers);
}

double rate_limit(double offered_rate, const RateLimiterConfig& config) {
    if (offered_rate < 0.0) throw ModelError("offered rate must be >= 0");
    return std::min(offered_rate, config.max_rate);
}

TokenBucket::TokenBucket(const RateLimiterConfig& config)
    : TokenBucket(config, config.bucket_depth) {}

TokenBucket::TokenBucket(const RateLimiterConfig& config, double initial_tokens)
    : config_(config), tokens_(std::clamp(initial_tokens, 0.0, config.bucket_depth)) {
    if (!(config.max_rate > 0.0)) throw ModelError("max_rate must be > 0");
}

bool TokenBucket::admit(double packet_time) {
    if (packet_time < last_time_)
        throw ModelError("non-monotonic time: " + std::to_string(packet_time) +
                         " after " + std::to_string(last_time_));
    tokens_ = std::min(config_.bucket_depth,
                       tokens_ + (packet_time - last_time_) * config_.max_rate);
    last_time_ = packet_time;
    if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return true;
    }
    return false;
}

namespace {

std::size_t window_budget(const ShaperConfig& config) {
    if (!(config.interval > 0.0)) throw ModelError("shaper interval must be > 0");
    double budget = config.target_profile_rate * config.interval;
    if (budget < 1.0)
        throw ModelError("shaper profile admits no packet per interval (rate*interval < 1)");
    return static_cast<std::size_t>(budget + 1e-9);
}

}  // namespace

std::vector<double> shape_traffic(const std::vector<double>& arrival_times,
                                  const ShaperConfig& config) {
    const std::size_t budget = window_budget(config);
    if (!(config.smoothing > 0.0) || config.smoothing > 1.0)
        throw ModelError("smoothing must be in (0, 1]");

    std::vector<double> departures;
    departures.reserve(arrival_times.size());
    for (std::size_t k = 0; k < arrival_times.size(); ++k) {
        double arrival = arrival_times[k];
        if (k > 0 && arrival < arrival_times[k - 1])
            throw ModelError("non-monotonic time in arrival sequence");
        double minimal = arrival;
        if (k >= budget)
            minimal = std::max(arrival, departures[k - budget] + config.interval);
        double shaped = arrival + config.smoothing * (minimal - arrival);
        if (!departures.empty()) shaped = std::max(shaped, departures.back());
        departures.push_back(shaped);
    }
    return departures;
}

std::size_t profile_violations(const std::vector<double>& departure_times,
                               const ShaperConfig& config) {
    const std::size_t budget = window_budget(config);
    std::size_t violations = 0;
    for (std::size_t k = budget; k < departure_times.size(); ++k) {
        // budget+1 departures inside one half-open window of length interval
        if (departure_times[k] - departure_times[k - budget] < config.interval - 1e-9)
            ++violations;
    }
    return violations;
}

double fraction_within_limit(const std::vector<double>& interval_rates,
                             double max_rate) {
    if (interval_rates.empty()) throw ModelError("no interval rates supplied");
    std::size_t within = 0;
    for (double r : interval_rates)
        if (r <= max_rate + 1e-9) ++within;
    return static_cast<double>(within) / static_cast<double>(interval_rates.size());
}

double poisson_within_limit_probability(double mean_count, double limit_count) {
    if (mean_count < 0.0) throw ModelError("mean count must be >= 0");
    if (limit_count < 0.0) return 0.0;
    if (mean_count == 0.0) return 1.0;
    const std::uint64_t kmax = static_cast<std::uint64_t>(limit_count + 1e-9);
    // log-space accumulation: log p_k = -m + k log m - lgamma(k+1)
    double log_m = std::log(mean_count);
    double max_log = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    logs.reserve(kmax + 1);
    for (std::uint64_t k = 0; k <= kmax; ++k) {
        double lp = -mean_count + static_cast<double>(k) * log_m -
                    std::lgamma(static_cast<double>(k) + 1.0);
        logs.push_back(lp);
        max_log = std::max(max_log, lp);
    }
    double acc = 0.0;
    for (double lp : logs) acc += std::exp(lp - max_log);
    return std::min(1.0, std::exp(max_log) * acc);
}

}  // namespace mplsrisk
