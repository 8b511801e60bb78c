#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pebbling/configuration.hpp"
#include "pebbling/error.hpp"
#include "pebbling/exact_counts.hpp"
#include "pebbling/graph.hpp"
#include "pebbling/numeric.hpp"
#include "pebbling/pi_search.hpp"
#include "pebbling/random_model.hpp"
#include "pebbling/threshold_lab.hpp"

namespace pebbling {

inline constexpr const char* kArtifactVersion = "0.1.0";

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string big_string(const BigInt& x) { return x.str(); }

inline Json nullable(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace detail

inline Json to_json(const FamilyParams& p) {
    Json j;
    j["family"] = std::string(to_string(p.family));
    j["n"] = p.n;
    j["m"] = p.m_mode == MMode::loglog ? Json("loglog") : Json(p.m);
    j["effective_m"] = p.n >= 1 ? Json(p.effective_m()) : Json(nullptr);
    j["epsilon"] = to_string(p.epsilon);
    j["path_len_override"] = p.path_len_override ? Json(*p.path_len_override) : Json(nullptr);
    return j;
}

inline FamilyParams family_params_from_json(const Json& j) {
    FamilyParams p;
    p.family = family_from_string(j.at("family").get<std::string>());
    p.n = j.at("n").get<std::uint64_t>();
    if (j.contains("m")) {
        if (j["m"].is_string()) {
            if (j["m"].get<std::string>() != "loglog") throw InvalidParameter("m must be an integer or \"loglog\"");
            p.m_mode = MMode::loglog;
        } else {
            p.m = j["m"].get<std::int64_t>();
        }
    }
    if (j.contains("epsilon")) p.epsilon = parse_ratio(j["epsilon"].get<std::string>());
    if (j.contains("path_len_override") && !j["path_len_override"].is_null())
        p.path_len_override = j["path_len_override"].get<std::uint64_t>();
    return p;
}

/// {"n", "edges", "labels", "family"}; edges sorted, each as [u, v] with u < v.
inline Json to_json(const Graph& g) {
    Json j;
    j["n"] = g.size();
    Json edges = Json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    const Labels& l = g.labels();
    Json labels = Json::object();
    if (!l.empty()) {
        Json roles = Json::array();
        for (Role r : l.roles) roles.push_back(std::string(to_string(r)));
        labels["roles"] = std::move(roles);
        labels["path_index"] = l.path_index;
        labels["gateways"] = l.gateways;
        labels["far_endpoints"] = l.far_endpoints;
        labels["blocks"] = l.blocks;
        labels["orbit_classes"] = l.orbit_classes;
    }
    j["labels"] = std::move(labels);
    j["family"] = to_json(g.family());
    return j;
}

inline Graph graph_from_json(const Json& j) {
    try {
        const auto n = j.at("n").get<std::size_t>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw InvalidParameter("edge must be a [u, v] pair");
            edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
        }
        Labels labels;
        if (j.contains("labels") && !j["labels"].empty()) {
            const Json& l = j["labels"];
            for (const auto& r : l.at("roles")) {
                const std::string s = r.get<std::string>();
                if (s != "path" && s != "clique" && s != "gateway") throw InvalidParameter("unknown role '" + s + "'");
                labels.roles.push_back(s == "path" ? Role::path : s == "clique" ? Role::clique : Role::gateway);
            }
            labels.path_index = l.value("path_index", std::vector<std::int64_t>{});
            labels.gateways = l.value("gateways", std::vector<Vertex>{});
            labels.far_endpoints = l.value("far_endpoints", std::vector<Vertex>{});
            labels.blocks = l.value("blocks", std::vector<std::vector<Vertex>>{});
            labels.orbit_classes = l.value("orbit_classes", std::vector<std::vector<Vertex>>{});
        }
        FamilyParams family{.family = Family::custom, .n = n};
        if (j.contains("family") && j["family"].is_object()) family = family_params_from_json(j["family"]);
        return Graph(n, edges, std::move(labels), family);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("malformed graph JSON: ") + e.what());
    }
}

inline Json to_json(const Configuration& c) {
    Json j;
    j["counts"] = std::vector<Count>(c.counts().begin(), c.counts().end());
    return j;
}

inline Configuration configuration_from_json(const Json& j) {
    try {
        return Configuration(j.at("counts").get<std::vector<Count>>());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("malformed configuration JSON: ") + e.what());
    }
}

/// Move list as [[from, to], ...].
inline Json witness_to_json(const std::vector<Move>& moves) {
    Json j = Json::array();
    for (const Move& m : moves) j.push_back({m.from, m.to});
    return j;
}

inline Json to_json(const PiResult& r) {
    Json j;
    j["pi"] = r.pi;
    j["witness"] = to_json(r.max_unsolvable_witness)["counts"];
    j["configs_examined"] = r.configs_examined;
    j["budget_used"] = r.budget_used;
    return j;
}

inline Json to_json(const ExactProbability& p) {
    Json j;
    j["numerator"] = detail::big_string(p.numerator);
    j["denominator"] = detail::big_string(p.denominator);
    j["value"] = p.value();
    return j;
}

inline Json to_json(const PEstimate& e) {
    Json j;
    j["t"] = e.t;
    j["p_hat"] = e.p_hat();
    const Interval ci = e.ci();
    j["ci"] = {ci.low, ci.high};
    j["successes"] = e.successes;
    j["trials"] = e.trials;
    j["indeterminate"] = e.indeterminate;
    return j;
}

inline Json to_json(const ThresholdEstimate& e) {
    Json j;
    j["tau_hat"] = e.tau_hat;
    j["alpha"] = to_string(e.alpha);
    j["bracket"] = {e.t_low, e.t_high};
    j["tau_ci"] = {e.tau_ci_low, e.tau_ci_high};
    j["p_at_tau"] = to_json(e.p_at_tau);
    j["p_at_low"] = e.p_at_low ? to_json(*e.p_at_low) : Json(nullptr);
    j["trials_per_point"] = e.trials_per_point;
    j["master_seed"] = e.master_seed;
    j["stream_id"] = e.stream_id;
    j["ambiguous"] = e.ambiguous;
    j["points_evaluated"] = e.points.size();
    return j;
}

inline Json to_json(const SharpnessProbe& s) {
    Json j;
    j["omega"] = s.omega;
    j["p_low"] = to_json(s.p_low);
    j["p_high"] = to_json(s.p_high);
    return j;
}

inline Json to_json(const PathMass& m) {
    Json j;
    j["n"] = m.n;
    j["t"] = m.t;
    j["path_len"] = m.path_len;
    j["trials"] = m.trials;
    j["mean"] = m.mean;
    j["stderr"] = m.stderr_mean;
    j["first_moment"] = m.first_moment();
    j["mean_occupied"] = m.mean_occupied;
    j["stderr_occupied"] = m.stderr_occupied;
    j["occupied_expectation"] = m.occupied_expectation();
    j["any_pebble_fraction"] = m.any_pebble_fraction;
    return j;
}

/// Error object written to stderr by the CLI.
inline Json to_json(const Error& e) {
    Json j;
    j["error"] = e.kind();
    j["message"] = e.what();
    if (const auto* r = dynamic_cast<const ResourceExhausted*>(&e)) {
        j["lower"] = r->lower();
        j["upper"] = r->upper() < 0 ? Json(nullptr) : Json(r->upper());
    }
    return j;
}

struct Manifest {
    std::string command;
    Json params = Json::object();
    std::uint64_t master_seed = 0;
    std::string artifact_version = kArtifactVersion;
    std::string timestamp;
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline Json to_json(const Manifest& m) {
    Json j;
    j["command"] = m.command;
    j["params"] = m.params;
    j["master_seed"] = m.master_seed;
    j["artifact_version"] = m.artifact_version;
    j["timestamp"] = m.timestamp;
    return j;
}

/// CSV with columns n,t,k,a_k (exact decimal) or n,t,k,log_a_k.
inline void write_birthday_csv(std::ostream& out, const BirthdayTable& table) {
    const bool exact = table.backend == Backend::exact_integer;
    out << (exact ? "n,t,k,a_k\n" : "n,t,k,log_a_k\n");
    const std::size_t rows = exact ? table.a.size() : table.log_a.size();
    for (std::size_t k = 0; k < rows; ++k) {
        out << table.n << ',' << table.t << ',' << k << ',';
        if (exact) {
            out << table.a[k].str();
        } else {
            std::ostringstream v;
            v.precision(17);
            v << static_cast<double>(table.log_a[k]);
            out << v.str();
        }
        out << '\n';
    }
}

/// Expected bin counts trials * a(k) / C(n+t-1, t).
inline std::vector<double> expected_birthday_counts(std::uint64_t n, std::uint64_t t, std::uint64_t trials) {
    if (t == 0) return {static_cast<double>(trials)};
    const BirthdayTable table = birthday_table(n, t, {.backend = Backend::log_space});
    const long double log_total = log_binomial(n + t - 1, t);
    std::vector<double> out;
    for (long double la : table.log_a)
        out.push_back(static_cast<double>(static_cast<long double>(trials) * std::exp(la - log_total)));
    return out;
}

/// CSV with columns k,count,expected_count.
inline void write_histogram_csv(std::ostream& out, const BirthdayHistogram& h) {
    const std::vector<double> expected = expected_birthday_counts(h.n, h.t, h.trials);
    out << "k,count,expected_count\n";
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
        std::ostringstream e;
        e.precision(12);
        e << expected[k];
        out << k << ',' << h.counts[k] << ',' << e.str() << '\n';
    }
}

inline Json to_json(const BirthdayHistogram& h) {
    Json j;
    j["n"] = h.n;
    j["t"] = h.t;
    j["trials"] = h.trials;
    j["counts"] = h.counts;
    j["expected_counts"] = expected_birthday_counts(h.n, h.t, h.trials);
    return j;
}

inline Json to_json(const StudyRow& r) {
    Json j;
    j["n"] = r.n;
    j["tau_G"] = r.G ? to_json(*r.G) : Json(nullptr);
    j["tau_H"] = r.H ? to_json(*r.H) : Json(nullptr);
    j["ratio"] = detail::nullable(r.ratio);
    j["diagnostics"] = r.diagnostics;
    return j;
}

inline Json study_params(const StudyConfig& c) {
    Json j;
    j["family_G"] = to_json(c.family_G);
    j["family_H"] = to_json(c.family_H);
    j["sizes"] = c.sizes;
    j["alpha"] = to_string(c.alpha);
    j["trials"] = c.trials;
    j["trial_cap"] = c.tau.trial_cap == 0 ? 16 * c.trials : c.tau.trial_cap;
    j["decision_confidence"] = c.tau.decision_confidence;
    j["model"] = std::string(to_string(c.tau.mc.model));
    return j;
}

/// JSONL: manifest line, one line per row, then a summary line with the slopes.
inline void write_study_jsonl(std::ostream& out, const StudySeries& s, const Manifest& m) {
    Json head;
    head["manifest"] = to_json(m);
    out << head.dump() << '\n';
    for (const StudyRow& r : s.rows) out << to_json(r).dump() << '\n';
    Json tail;
    tail["summary"] = {{"slope_G", detail::nullable(s.slope_G)}, {"slope_H", detail::nullable(s.slope_H)}};
    out << tail.dump() << '\n';
}

/// CSV: n,tau_G,tau_G_CI,tau_H,tau_H_CI,ratio; intervals written as "low-high".
inline void write_study_csv(std::ostream& out, const StudySeries& s) {
    out << "n,tau_G,tau_G_CI,tau_H,tau_H_CI,ratio\n";
    auto tau = [](const std::optional<ThresholdEstimate>& e) {
        return e ? std::to_string(e->tau_hat) : std::string();
    };
    auto ci = [](const std::optional<ThresholdEstimate>& e) {
        return e ? std::to_string(e->tau_ci_low) + "-" + std::to_string(e->tau_ci_high) : std::string();
    };
    for (const StudyRow& r : s.rows) {
        std::ostringstream ratio;
        ratio.precision(10);
        if (std::isfinite(r.ratio)) ratio << r.ratio;
        out << r.n << ',' << tau(r.G) << ',' << ci(r.G) << ',' << tau(r.H) << ',' << ci(r.H) << ',' << ratio.str()
            << '\n';
    }
}

}  // namespace pebbling
