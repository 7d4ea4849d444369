#pragma once

#include <cstdint>
#include <vector>

namespace mplsrisk {

struct QueueModel {
    double arrival_rate = 1.0;   // lambda
    double service_rate = 1.0;   // mu
    std::uint32_t servers = 1;   // C
};

struct RateLimiterConfig {
    double max_rate = 1.0;      // lambda_max, token refill rate
    double bucket_depth = 0.0;  // burst allowance in packets
};

struct ShaperConfig {
    double interval = 1.0;             // T
    double target_profile_rate = 1.0;  // departures per unit time allowed
    double smoothing = 1.0;            // fraction of the excess delay applied; 1 = full conformance
};

// rho = lambda / mu.
double traffic_intensity(const QueueModel& q);

// Overload (unserved-work) fraction of a single-server queue: 1 - 1/rho for
// rho > 1, clamped to 0 for a stable queue. Throws ModelError unless C == 1.
double mm1_overload_loss(const QueueModel& q);

// Erlang B blocking probability for offered load a = lambda/mu and C
// servers, via the stable recurrence B(c) = a B(c-1) / (c + a B(c-1)).
double erlang_b(double offered_load, std::uint32_t servers);
double erlang_b(const QueueModel& q);

// R(lambda) = min(lambda, lambda_max).
double rate_limit(double offered_rate, const RateLimiterConfig& config);

// Token-bucket policer. The bucket's clock starts at 0; tokens refill at
// max_rate up to bucket_depth and a packet consumes one token. Over any
// window of length w, admissions <= max_rate*w + bucket_depth. Packet times
// must be non-decreasing (ModelError otherwise). Single-stream use only.
class TokenBucket {
public:
    explicit TokenBucket(const RateLimiterConfig& config);
    TokenBucket(const RateLimiterConfig& config, double initial_tokens);

    bool admit(double packet_time);
    double tokens() const { return tokens_; }

private:
    RateLimiterConfig config_;
    double tokens_;
    double last_time_ = 0.0;
};

// Minimal-delay FIFO shaping: departures are arrivals delayed just enough
// that every window of length `interval` holds at most
// floor(target_profile_rate * interval) departures. Requires
// target_profile_rate * interval >= 1. With smoothing < 1 only that fraction
// of each packet's excess delay is applied and conformance is best-effort.
std::vector<double> shape_traffic(const std::vector<double>& arrival_times,
                                  const ShaperConfig& config);

// Sliding-window conformance check over a departure sequence; returns the
// number of violating indices (0 = conforming).
std::size_t profile_violations(const std::vector<double>& departure_times,
                               const ShaperConfig& config);

// Empirical P_limit: fraction of measured per-interval rates <= max_rate.
double fraction_within_limit(const std::vector<double>& interval_rates,
                             double max_rate);

// Analytic P_limit for Poisson traffic: P[N <= floor(limit_count)] with
// N ~ Poisson(mean_count). Evaluated in log space.
double poisson_within_limit_probability(double mean_count, double limit_count);

}  // namespace mplsrisk
