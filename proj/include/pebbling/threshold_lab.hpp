#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "pebbling/configuration.hpp"
#include "pebbling/error.hpp"
#include "pebbling/graph.hpp"
#include "pebbling/numeric.hpp"
#include "pebbling/pebble_engine.hpp"
#include "pebbling/random_model.hpp"

namespace pebbling {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double low = 0;
    double high = 1;
    bool contains(double x) const { return low <= x && x <= high; }
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95) {
    if (trials == 0) return {0, 1};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Two-sided normal quantile for the given confidence level.
inline double z_for_confidence(double confidence) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + confidence / 2);
}

struct MonteCarloOptions {
    RandomModel model = RandomModel::uniform_configuration;
    /// Per-trial node budget for the generic solver (0 = unlimited).
    std::uint64_t node_budget = 0;
    /// Largest tolerated fraction of undecided trials.
    double max_indeterminate = 0.01;
};

struct PEstimate {
    std::uint64_t t = 0;
    std::uint64_t trials = 0;  // decided trials
    std::uint64_t successes = 0;
    std::uint64_t indeterminate = 0;

    double p_hat() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials); }
    Interval ci() const { return wilson_interval(successes, trials); }
};

namespace detail {

// Runs trials [first, last) at size t; trial i draws from stream.child(i), so
// extending a run later reproduces exactly the same draws.
inline void run_trials(const Graph& g, SolvabilityOracle& oracle, std::uint64_t t, std::uint64_t first,
                       std::uint64_t last, SeededStream stream, const MonteCarloOptions& opts, PEstimate& est) {
    for (std::uint64_t i = first; i < last; ++i) {
        RandomSource rng(stream.child(i));
        const Configuration conf = sample(opts.model, g.size(), t, rng);
        try {
            if (oracle.solvable(conf)) ++est.successes;
            ++est.trials;
        } catch (const ResourceExhausted&) {
            ++est.indeterminate;
        }
    }
}

inline void check_indeterminate(const PEstimate& est, const MonteCarloOptions& opts) {
    const double total = static_cast<double>(est.trials + est.indeterminate);
    if (total > 0 && static_cast<double>(est.indeterminate) / total > opts.max_indeterminate)
        throw IndeterminateTrials(std::to_string(est.indeterminate) + " of " +
                                  std::to_string(est.trials + est.indeterminate) + " trials at t=" +
                                  std::to_string(est.t) + " exceeded the solver budget");
}

}  // namespace detail

/// Fraction of sampled size-t configurations that are solvable, with a 95%
/// Wilson interval.
inline PEstimate estimate_P(const Graph& g, std::uint64_t t, std::uint64_t trials, SeededStream stream,
                            const MonteCarloOptions& opts = {}) {
    if (trials < 1) throw InvalidParameter("trials must be at least 1");
    SolvabilityOracle oracle(g, {.node_budget = opts.node_budget});
    PEstimate est{.t = t};
    detail::run_trials(g, oracle, t, 0, trials, stream, opts, est);
    detail::check_indeterminate(est, opts);
    return est;
}

struct TauOptions {
    MonteCarloOptions mc{};
    /// Trials per point grow (doubling) up to this cap while the interval
    /// still contains alpha; 0 means 16x the base trial count.
    std::uint64_t trial_cap = 0;
    /// Two-sided confidence of the interval used to classify a point against
    /// alpha. It is stricter than the reported 95% interval because one
    /// estimate makes many classifications, each re-checked after every
    /// doubling of the trials.
    double decision_confidence = 0.999;
    std::uint64_t t_max = std::uint64_t{1} << 40;
};

struct PointRecord {
    PEstimate estimate;
    bool above = false;      // classified as P(t) >= alpha
    bool ambiguous = false;  // interval still contained alpha at the trial cap
};

struct ThresholdEstimate {
    std::uint64_t tau_hat = 0;
    Ratio alpha{1, 2};
    std::uint64_t t_low = 0;  // largest t classified below alpha (0 = nothing below)
    std::uint64_t t_high = 0;
    PEstimate p_at_tau;
    std::optional<PEstimate> p_at_low;
    std::uint64_t trials_per_point = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
    bool ambiguous = false;
    /// Smallest and largest evaluated t whose interval contained alpha, widened to include tau_hat.
    std::uint64_t tau_ci_low = 0;
    std::uint64_t tau_ci_high = 0;
    std::map<std::uint64_t, PointRecord> points;
};

/// Threshold estimate: doubling search for a bracket, then bisection.
///
/// Each evaluated t gets its own child stream. A point whose interval contains
/// alpha is re-run with doubled trials until the interval excludes alpha or
/// the trial cap is reached; a point still undecided at the cap is classified
/// as P(t) >= alpha (alpha cannot be rejected) and flagged ambiguous.
/// The reported tau interval uses the 95% point intervals.
inline ThresholdEstimate estimate_tau(const Graph& g, Ratio alpha, std::uint64_t trials, SeededStream stream,
                                      const TauOptions& opts = {}) {
    if (alpha.num <= 0 || alpha.den <= 0 || alpha.num >= alpha.den) throw InvalidParameter("alpha must lie in (0, 1)");
    if (trials < 1) throw InvalidParameter("trials must be at least 1");
    if (g.size() == 0) throw InvalidParameter("empty graph");
    const double a = alpha.value();
    if (!(opts.decision_confidence > 0 && opts.decision_confidence < 1))
        throw InvalidParameter("decision confidence must lie in (0, 1)");
    const std::uint64_t cap = opts.trial_cap == 0 ? 16 * trials : std::max(opts.trial_cap, trials);
    const double z = z_for_confidence(opts.decision_confidence);

    ThresholdEstimate out{.alpha = alpha,
                          .trials_per_point = trials,
                          .master_seed = stream.master_seed,
                          .stream_id = stream.stream_id};
    SolvabilityOracle oracle(g, {.node_budget = opts.mc.node_budget});

    auto classify = [&](std::uint64_t t) -> const PointRecord& {
        if (auto it = out.points.find(t); it != out.points.end()) return it->second;
        const SeededStream point_stream = stream.child(t);
        PointRecord rec;
        rec.estimate.t = t;
        std::uint64_t done = 0, goal = trials;
        for (;;) {
            detail::run_trials(g, oracle, t, done, goal, point_stream, opts.mc, rec.estimate);
            detail::check_indeterminate(rec.estimate, opts.mc);
            done = goal;
            const Interval ci = wilson_interval(rec.estimate.successes, rec.estimate.trials, z);
            if (ci.low > a) {
                rec.above = true;
                break;
            }
            if (ci.high < a) {
                rec.above = false;
                break;
            }
            if (done >= cap) {
                rec.above = true;
                rec.ambiguous = true;
                break;
            }
            goal = std::min(cap, 2 * done);
        }
        return out.points.emplace(t, rec).first->second;
    };

    std::uint64_t low = 0, high = 1;
    while (!classify(high).above) {
        low = high;
        if (high > opts.t_max / 2) throw ResourceExhausted("no t up to t_max reaches alpha", static_cast<std::int64_t>(low), -1);
        high *= 2;
    }
    while (high - low > 1) {
        const std::uint64_t mid = low + (high - low) / 2;
        if (classify(mid).above)
            high = mid;
        else
            low = mid;
    }

    out.tau_hat = high;
    out.t_low = low;
    out.t_high = high;
    out.p_at_tau = out.points.at(high).estimate;
    if (low > 0) out.p_at_low = out.points.at(low).estimate;
    out.ambiguous = out.points.at(high).ambiguous || (low > 0 && out.points.at(low).ambiguous);
    out.tau_ci_low = out.tau_ci_high = high;
    for (const auto& [t, rec] : out.points) {
        if (!rec.estimate.ci().contains(a)) continue;
        out.tau_ci_low = std::min(out.tau_ci_low, t);
        out.tau_ci_high = std::max(out.tau_ci_high, t);
    }
    return out;
}

struct SharpnessProbe {
    double omega = 1;
    std::uint64_t t_low = 0;
    std::uint64_t t_high = 0;
    PEstimate p_low;
    PEstimate p_high;
};

/// P at ceil(tau*omega) and max(1, floor(tau/omega)).
inline SharpnessProbe sharpness_probe(const Graph& g, double omega, const ThresholdEstimate& est,
                                      std::uint64_t trials, SeededStream stream, const MonteCarloOptions& opts = {}) {
    if (!(omega >= 1)) throw InvalidParameter("omega must be at least 1");
    SharpnessProbe out{.omega = omega};
    const long double tau = static_cast<long double>(est.tau_hat);
    out.t_high = static_cast<std::uint64_t>(snapped_ceil(tau * omega));
    out.t_low = static_cast<std::uint64_t>(std::max<std::int64_t>(1, snapped_floor(tau / omega)));
    out.p_low = estimate_P(g, out.t_low, trials, stream.child(0), opts);
    out.p_high = estimate_P(g, out.t_high, trials, stream.child(1), opts);
    return out;
}

struct StudyConfig {
    FamilyParams family_G{.family = Family::lollipop};
    FamilyParams family_H{.family = Family::double_lollipop, .m = 2};
    std::vector<std::uint64_t> sizes;
    Ratio alpha{1, 2};
    std::uint64_t trials = 2000;
    std::uint64_t master_seed = 0;
    TauOptions tau{};
};

struct StudyRow {
    std::uint64_t n = 0;
    std::optional<ThresholdEstimate> G;
    std::optional<ThresholdEstimate> H;
    double ratio = std::nan("");
    std::vector<std::string> diagnostics;
};

struct StudySeries {
    StudyConfig config;
    std::vector<StudyRow> rows;
    double slope_G = std::nan("");
    double slope_H = std::nan("");
};

/// Least-squares slope of log(y) against log(x).
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return std::nan("");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = k * sxx - sx * sx;
    if (den == 0) return std::nan("");
    return (k * sxy - sx * sy) / den;
}

/// tau estimates for both families at every size. Row i draws from streams
/// (master_seed, 2i) for G and (master_seed, 2i+1) for H.
inline StudySeries scaling_study(const StudyConfig& cfg) {
    if (!std::is_sorted(cfg.sizes.begin(), cfg.sizes.end()))
        throw InvalidParameter("study sizes must be ascending");
    StudySeries series{.config = cfg};
    std::size_t failures = 0, points = 0;
    std::vector<double> xs_G, ys_G, xs_H, ys_H;
    for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
        StudyRow row{.n = cfg.sizes[i]};
        auto run = [&](FamilyParams fp, std::uint64_t stream_id, const char* label) -> std::optional<ThresholdEstimate> {
            ++points;
            fp.n = row.n;
            try {
                const Graph g = generate(fp);
                return estimate_tau(g, cfg.alpha, cfg.trials, {cfg.master_seed, stream_id}, cfg.tau);
            } catch (const Error& e) {
                ++failures;
                row.diagnostics.push_back(std::string(label) + ": " + e.kind() + ": " + e.what());
                return std::nullopt;
            }
        };
        row.G = run(cfg.family_G, 2 * i, "G");
        row.H = run(cfg.family_H, 2 * i + 1, "H");
        if (row.G && row.G->ambiguous) row.diagnostics.push_back("G: ambiguous threshold point");
        if (row.H && row.H->ambiguous) row.diagnostics.push_back("H: ambiguous threshold point");
        if (row.G && row.H) row.ratio = static_cast<double>(row.G->tau_hat) / static_cast<double>(row.H->tau_hat);
        if (row.G) {
            xs_G.push_back(static_cast<double>(row.n));
            ys_G.push_back(static_cast<double>(row.G->tau_hat));
        }
        if (row.H) {
            xs_H.push_back(static_cast<double>(row.n));
            ys_H.push_back(static_cast<double>(row.H->tau_hat));
        }
        series.rows.push_back(std::move(row));
    }
    if (points > 0 && static_cast<double>(failures) > 0.2 * static_cast<double>(points))
        throw DomainError("scaling study aborted: " + std::to_string(failures) + " of " + std::to_string(points) +
                          " points failed");
    series.slope_G = log_log_slope(xs_G, ys_G);
    series.slope_H = log_log_slope(xs_H, ys_H);
    return series;
}

struct PathMass {
    std::uint64_t n = 0;
    std::uint64_t t = 0;
    std::uint64_t path_len = 0;
    std::uint64_t trials = 0;
    double mean = 0;           // mean pebbles on the path
    double stderr_mean = 0;
    double mean_occupied = 0;  // mean number of occupied path vertices
    double stderr_occupied = 0;
    double any_pebble_fraction = 0;

    /// E[pebbles on the path] under the uniform-configuration law: every vertex
    /// carries t/n in expectation.
    double first_moment() const { return static_cast<double>(t) * static_cast<double>(path_len) / static_cast<double>(n); }
    /// E[occupied path vertices]: each vertex is occupied with probability t/(n+t-1).
    double occupied_expectation() const {
        return n + t <= 1 ? 0.0
                          : static_cast<double>(t) * static_cast<double>(path_len) / static_cast<double>(n + t - 1);
    }
};

/// Empirical pebble mass on the path segment of a labeled lollipop.
inline PathMass markov_path_mass(const Graph& g, std::uint64_t t, std::uint64_t trials, SeededStream stream,
                                 RandomModel model = RandomModel::uniform_configuration) {
    if (g.family().family != Family::lollipop || g.labels().roles.empty())
        throw UnsupportedStructure("markov_path_mass needs a labeled lollipop");
    if (trials < 1) throw InvalidParameter("trials must be at least 1");
    std::vector<Vertex> path;
    for (Vertex v = 0; v < g.size(); ++v)
        if (g.labels().roles[v] == Role::path) path.push_back(v);

    PathMass out{.n = g.size(), .t = t, .path_len = path.size(), .trials = trials};
    double sum = 0, sum_sq = 0, occ = 0, occ_sq = 0;
    std::uint64_t any = 0;
    RandomSource rng(stream);
    for (std::uint64_t i = 0; i < trials; ++i) {
        const Configuration conf = sample(model, g.size(), t, rng);
        double mass = 0, used = 0;
        for (Vertex v : path) {
            mass += static_cast<double>(conf[v]);
            used += conf[v] > 0 ? 1 : 0;
        }
        sum += mass;
        sum_sq += mass * mass;
        occ += used;
        occ_sq += used * used;
        any += mass > 0 ? 1 : 0;
    }
    const double k = static_cast<double>(trials);
    auto stderr_of = [&](double s, double s2) {
        if (trials < 2) return 0.0;
        const double var = (s2 - s * s / k) / (k - 1);
        return std::sqrt(std::max(0.0, var) / k);
    };
    out.mean = sum / k;
    out.stderr_mean = stderr_of(sum, sum_sq);
    out.mean_occupied = occ / k;
    out.stderr_occupied = stderr_of(occ, occ_sq);
    out.any_pebble_fraction = static_cast<double>(any) / k;
    return out;
}

}  // namespace pebbling
