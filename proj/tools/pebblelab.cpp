// pebblelab: command-line front end for the pebbling library.
//
// Exit codes: 0 success, 1 domain error (JSON object on stderr), 2 usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pebbling/exact_counts.hpp"
#include "pebbling/io.hpp"
#include "pebbling/pebble_engine.hpp"
#include "pebbling/pi_search.hpp"
#include "pebbling/random_model.hpp"
#include "pebbling/threshold_lab.hpp"

using namespace pebbling;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed = 0;
    std::uint64_t trials = 2000;
    std::string out;
    std::string format = "json";
};

struct GraphArgs {
    std::string file;
    std::string family = "path";
    std::uint64_t n = 0;
    std::string m = "0";
    std::string epsilon = "1/2";
    std::optional<std::uint64_t> path_len;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    sub->add_option("--trials", c.trials, "Monte Carlo trials per point")->capture_default_str();
    sub->add_option("--out", c.out, "Output file (default: stdout)");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

void add_graph(CLI::App* sub, GraphArgs& a) {
    sub->add_option("--graph", a.file, "Graph JSON file (instead of --family)");
    sub->add_option("--family", a.family, "path|complete|lollipop|double_lollipop|clique_chain")->capture_default_str();
    sub->add_option("--n", a.n, "Number of vertices");
    sub->add_option("--m", a.m, "Path extension m: an integer or 'loglog'")->capture_default_str();
    sub->add_option("--epsilon", a.epsilon, "Clique chain epsilon, e.g. 1/4 or 0.25")->capture_default_str();
    sub->add_option("--path-len", a.path_len, "Path length override");
}

void parse_m(const std::string& text, FamilyParams& p) {
    if (text == "loglog") {
        p.m_mode = MMode::loglog;
        return;
    }
    try {
        std::size_t used = 0;
        p.m = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::logic_error&) {
        throw UsageError("--m must be an integer or 'loglog'");
    }
}

FamilyParams family_params(const GraphArgs& a) {
    FamilyParams p;
    p.family = family_from_string(a.family);
    p.n = a.n;
    parse_m(a.m, p);
    p.epsilon = parse_ratio(a.epsilon);
    p.path_len_override = a.path_len;
    return p;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter("'" + path + "' is not valid JSON: " + e.what());
    }
}

Graph load_graph(const GraphArgs& a) {
    if (!a.file.empty()) return graph_from_json(read_json_file(a.file));
    if (a.n == 0) throw UsageError("either --graph or --n is required");
    return generate(family_params(a));
}

Json graph_params(const GraphArgs& a) {
    if (!a.file.empty()) return Json{{"graph", a.file}};
    return to_json(family_params(a));
}

Manifest manifest(const std::string& command, Json params, const Common& c) {
    params["trials"] = c.trials;
    params["format"] = c.format;
    return {.command = command, .params = std::move(params), .master_seed = c.seed, .timestamp = utc_timestamp()};
}

void require_json(const Common& c, const char* command) {
    if (c.format != "json") throw UsageError(std::string(command) + " only supports --format json");
}

// Writes `text` to --out or stdout.
void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw DomainError("cannot write '" + c.out + "'");
    f << text;
}

void emit_json(const Common& c, Json result, const Manifest& m) {
    result["manifest"] = to_json(m);
    emit(c, result.dump(2) + "\n");
}

// CSV output; the manifest goes to a paired <out>.manifest.json file.
void emit_csv(const Common& c, const std::string& csv, const Manifest& m) {
    emit(c, csv);
    if (!c.out.empty()) {
        std::ofstream f(c.out + ".manifest.json");
        if (!f) throw DomainError("cannot write manifest next to '" + c.out + "'");
        f << to_json(m).dump(2) << '\n';
    }
}

std::vector<Count> parse_counts(const std::string& text) {
    std::vector<Count> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoull(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw UsageError("--counts must be a comma-separated list of non-negative integers");
        }
    }
    return out;
}

RandomModel parse_model(const std::string& s) {
    return s == "iid" ? RandomModel::iid_pebbles : RandomModel::uniform_configuration;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph pebbling laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kArtifactVersion);

    Common common;
    GraphArgs ga;

    // graph gen
    auto* graph = app.add_subcommand("graph", "Graph utilities");
    graph->require_subcommand(1);
    auto* gen = graph->add_subcommand("gen", "Emit a generated graph as JSON (or its edge list as CSV)");
    add_graph(gen, ga);
    add_common(gen, common);

    // solve
    std::string config_file, counts_text;
    std::optional<Vertex> target;
    bool witness = false, generic = false;
    std::uint64_t node_budget = 0;
    auto* solve = app.add_subcommand("solve", "Decide reachability of a target or solvability of a configuration");
    add_graph(solve, ga);
    add_common(solve, common);
    auto* cfg_opt = solve->add_option("--config", config_file, "Configuration JSON file {\"counts\": [...]}");
    solve->add_option("--counts", counts_text, "Comma-separated pebble counts")->excludes(cfg_opt);
    solve->add_option("--target", target, "Target vertex (omit for whole-graph solvability)");
    solve->add_flag("--witness", witness, "Record a move sequence (with --target)");
    solve->add_flag("--generic", generic, "Use the generic search even when block labels are present");
    solve->add_option("--node-budget", node_budget, "Generic search node budget (0 = unlimited)");

    // pi
    std::uint64_t budget = 10'000'000;
    bool structural = false;
    auto* pi = app.add_subcommand("pi", "Exact pebbling number");
    add_graph(pi, ga);
    add_common(pi, common);
    pi->add_option("--budget", budget, "Maximum solver calls")->capture_default_str();
    pi->add_flag("--structural", structural, "Use the block-structure solver inside the search");

    // prob
    std::uint64_t t = 0;
    bool exact = false, mc = false;
    std::string model = "uniform";
    auto* prob = app.add_subcommand("prob", "P(G; t), exactly or by Monte Carlo");
    add_graph(prob, ga);
    add_common(prob, common);
    prob->add_option("--t", t, "Configuration size")->required();
    auto* prob_exact = prob->add_flag("--exact", exact, "Exhaustive orbit enumeration");
    auto* prob_mc = prob->add_flag("--mc", mc, "Monte Carlo estimate");
    prob_exact->excludes(prob_mc);
    prob->add_option("--model", model, "Random model")->check(CLI::IsMember({"uniform", "iid"}))->capture_default_str();

    // tau
    std::string alpha_text = "1/2";
    bool estimate = false;
    std::uint64_t trial_cap = 0;
    auto* tau = app.add_subcommand("tau", "Threshold tau_alpha, exactly or estimated");
    add_graph(tau, ga);
    add_common(tau, common);
    tau->add_option("--alpha", alpha_text, "Threshold level, e.g. 0.5 or 1/2")->capture_default_str();
    auto* tau_exact_flag = tau->add_flag("--exact", exact, "Scan exact probabilities upward from t = 1");
    tau->add_flag("--estimate", estimate, "Monte Carlo doubling and bisection (default)")->excludes(tau_exact_flag);
    tau->add_option("--trial-cap", trial_cap, "Largest trial count per point (default 16x --trials)");
    tau->add_option("--model", model, "Random model")->check(CLI::IsMember({"uniform", "iid"}))->capture_default_str();

    // birthday
    std::uint64_t bn = 0, bt = 0;
    std::optional<std::uint64_t> bj;
    std::string backend = "auto";
    bool empirical = false;
    auto* birthday = app.add_subcommand("birthday", "Exact birthday table, tail ratio, empirical histogram");
    add_common(birthday, common);
    birthday->add_option("--n", bn, "Number of vertices")->required();
    birthday->add_option("--t", bt, "Number of pebbles")->required();
    birthday->add_option("--j", bj, "Also report S(j)/S(t-1)");
    birthday->add_option("--backend", backend, "Arithmetic backend")
        ->check(CLI::IsMember({"auto", "exact", "log"}))
        ->capture_default_str();
    birthday->add_flag("--empirical", empirical, "Sample --trials configurations and histogram B(C)");

    // study
    std::vector<std::uint64_t> sizes{256, 1024, 4096, 16384};
    std::string family_g = "lollipop", family_h = "double_lollipop", study_m = "2";
    auto* study = app.add_subcommand("study", "Threshold scaling study of two families");
    add_common(study, common);
    study->add_option("--sizes", sizes, "Ascending list of n")->delimiter(',')->capture_default_str();
    study->add_option("--family-g", family_g, "First family")->capture_default_str();
    study->add_option("--family-h", family_h, "Second family")->capture_default_str();
    study->add_option("--m", study_m, "Path extension m for both families: integer or 'loglog'")->capture_default_str();
    study->add_option("--epsilon", ga.epsilon, "Clique chain epsilon")->capture_default_str();
    study->add_option("--alpha", alpha_text, "Threshold level")->capture_default_str();
    study->add_option("--trial-cap", trial_cap, "Largest trial count per point (default 16x --trials)");

    // sharpness
    double omega = 4;
    auto* sharp = app.add_subcommand("sharpness", "P at ceil(tau*omega) and floor(tau/omega)");
    add_graph(sharp, ga);
    add_common(sharp, common);
    sharp->add_option("--omega", omega, "Probe factor (>= 1)")->capture_default_str();
    sharp->add_option("--alpha", alpha_text, "Threshold level")->capture_default_str();

    // pathmass
    auto* pathmass = app.add_subcommand("pathmass", "Pebble mass on the path of a lollipop");
    add_graph(pathmass, ga);
    add_common(pathmass, common);
    pathmass->add_option("--t", t, "Configuration size")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            const Graph g = load_graph(ga);
            const Manifest m = manifest("graph gen", graph_params(ga), common);
            if (common.format == "csv") {
                std::ostringstream csv;
                csv << "u,v\n";
                for (auto [u, v] : g.edges()) csv << u << ',' << v << '\n';
                emit_csv(common, csv.str(), m);
            } else {
                emit_json(common, to_json(g), m);
            }
        } else if (solve->parsed()) {
            require_json(common, "solve");
            const Graph g = load_graph(ga);
            Configuration conf;
            if (!config_file.empty())
                conf = configuration_from_json(read_json_file(config_file));
            else if (!counts_text.empty())
                conf = Configuration(parse_counts(counts_text));
            else
                throw UsageError("--config or --counts is required");
            if (conf.size() != g.size()) throw InvalidParameter("configuration size does not match graph");
            Json params = graph_params(ga);
            params["counts"] = to_json(conf)["counts"];
            params["target"] = target ? Json(*target) : Json(nullptr);
            params["generic"] = generic;
            params["node_budget"] = node_budget;
            Json result;
            const SolverOptions opts{.record_witness = witness, .node_budget = node_budget};
            if (target) {
                if (!g.contains(*target)) throw InvalidParameter("target vertex out of range");
                SolvabilityOracle oracle(g, opts);
                if (!generic && !witness && oracle.uses_structural()) {
                    result["solvable"] = oracle.reachable(conf, *target);
                    result["solver"] = "structural";
                } else {
                    const SolveVerdict v = is_reachable(g, conf, *target, opts);
                    if (v.budget_exhausted)
                        throw ResourceExhausted("node budget exhausted before a verdict", 0, 1);
                    result["solvable"] = v.solvable;
                    result["solver"] = "generic";
                    result["witness"] = v.witness ? witness_to_json(*v.witness) : Json(nullptr);
                    result["nodes_explored"] = v.nodes_explored;
                }
            } else {
                SolvabilityOracle oracle(g, opts);
                if (generic || !oracle.uses_structural()) {
                    result["solvable"] = is_solvable(g, conf, opts);
                    result["solver"] = "generic";
                } else {
                    result["solvable"] = oracle.solvable(conf);
                    result["solver"] = "structural";
                }
            }
            emit_json(common, result, manifest("solve", params, common));
        } else if (pi->parsed()) {
            require_json(common, "pi");
            const Graph g = load_graph(ga);
            Json params = graph_params(ga);
            params["budget"] = budget;
            params["structural"] = structural;
            const PiResult r =
                pebbling_number_exact(g, OrbitSpec::from_graph(g), {.budget = budget, .use_structural = structural});
            emit_json(common, to_json(r), manifest("pi", params, common));
        } else if (prob->parsed()) {
            require_json(common, "prob");
            if (!exact && !mc) throw UsageError("prob needs --exact or --mc");
            const Graph g = load_graph(ga);
            Json params = graph_params(ga);
            params["t"] = t;
            params["method"] = exact ? "exact" : "mc";
            Json result;
            if (exact) {
                result = to_json(solvable_probability_exact(g, t, OrbitSpec::from_graph(g)));
            } else {
                params["model"] = model;
                result = to_json(estimate_P(g, t, common.trials, {common.seed, 0}, {.model = parse_model(model)}));
            }
            result["t"] = t;
            emit_json(common, result, manifest("prob", params, common));
        } else if (tau->parsed()) {
            require_json(common, "tau");
            const Graph g = load_graph(ga);
            const Ratio alpha = parse_ratio(alpha_text);
            Json params = graph_params(ga);
            params["alpha"] = to_string(alpha);
            params["method"] = exact ? "exact" : "estimate";
            Json result;
            if (exact) {
                const TauExactResult r = tau_exact(g, alpha, OrbitSpec::from_graph(g));
                result["tau"] = r.tau;
                result["p_at_tau"] = to_json(r.p_at_tau);
                result["p_before"] = r.p_before ? to_json(*r.p_before) : Json(nullptr);
            } else {
                TauOptions opts{.mc = {.model = parse_model(model)}, .trial_cap = trial_cap};
                params["model"] = model;
                params["trial_cap"] = trial_cap == 0 ? 16 * common.trials : trial_cap;
                params["decision_confidence"] = opts.decision_confidence;
                const ThresholdEstimate e = estimate_tau(g, alpha, common.trials, {common.seed, 0}, opts);
                result["tau"] = e.tau_hat;
                result["estimate"] = to_json(e);
            }
            emit_json(common, result, manifest("tau", params, common));
        } else if (birthday->parsed()) {
            const Backend b = backend == "exact" ? Backend::exact_integer
                              : backend == "log" ? Backend::log_space
                                                 : Backend::automatic;
            Json params{{"n", bn}, {"t", bt}, {"backend", backend}, {"empirical", empirical}};
            if (bj) params["j"] = *bj;
            const Manifest m = manifest("birthday", params, common);
            std::optional<BirthdayHistogram> hist;
            if (empirical) hist = empirical_birthday_distribution(bn, bt, common.trials, {common.seed, 0});
            if (common.format == "csv") {
                std::ostringstream csv;
                if (hist)
                    write_histogram_csv(csv, *hist);
                else
                    write_birthday_csv(csv, birthday_table(bn, bt, {.backend = b}));
                emit_csv(common, csv.str(), m);
            } else {
                const BirthdayTable table = birthday_table(bn, bt, {.backend = b});
                Json result;
                result["n"] = bn;
                result["t"] = bt;
                result["backend"] = std::string(to_string(table.backend));
                if (table.backend == Backend::exact_integer) {
                    Json a = Json::array();
                    for (const auto& x : table.a) a.push_back(x.str());
                    result["a"] = std::move(a);
                } else {
                    Json la = Json::array();
                    for (long double x : table.log_a) la.push_back(static_cast<double>(x));
                    result["log_a"] = std::move(la);
                }
                if (bj) {
                    const TailRatio tr = tail_ratio(bn, bt, *bj, {.backend = b});
                    Json tj;
                    tj["j"] = *bj;
                    tj["value"] = static_cast<double>(tr.value());
                    tj["log_value"] = static_cast<double>(tr.log_value);
                    tj["exact"] = tr.exact ? Json(tr.exact->str()) : Json(nullptr);
                    result["tail_ratio"] = std::move(tj);
                }
                if (hist) result["histogram"] = to_json(*hist);
                emit_json(common, result, m);
            }
        } else if (study->parsed()) {
            StudyConfig cfg;
            cfg.family_G = {.family = family_from_string(family_g), .epsilon = parse_ratio(ga.epsilon)};
            cfg.family_H = {.family = family_from_string(family_h), .epsilon = parse_ratio(ga.epsilon)};
            parse_m(study_m, cfg.family_G);
            parse_m(study_m, cfg.family_H);
            cfg.sizes = sizes;
            cfg.alpha = parse_ratio(alpha_text);
            cfg.trials = common.trials;
            cfg.master_seed = common.seed;
            cfg.tau.trial_cap = trial_cap;
            const Manifest m = manifest("study", study_params(cfg), common);
            const StudySeries s = scaling_study(cfg);
            std::ostringstream text;
            if (common.format == "csv") {
                write_study_csv(text, s);
                emit_csv(common, text.str(), m);
            } else {
                write_study_jsonl(text, s, m);
                emit(common, text.str());
            }
        } else if (sharp->parsed()) {
            require_json(common, "sharpness");
            const Graph g = load_graph(ga);
            const Ratio alpha = parse_ratio(alpha_text);
            Json params = graph_params(ga);
            params["alpha"] = to_string(alpha);
            params["omega"] = omega;
            const ThresholdEstimate e = estimate_tau(g, alpha, common.trials, {common.seed, 0});
            const SharpnessProbe p = sharpness_probe(g, omega, e, common.trials, {common.seed, 1});
            Json result;
            result["tau"] = e.tau_hat;
            result["estimate"] = to_json(e);
            result["probe"] = to_json(p);
            emit_json(common, result, manifest("sharpness", params, common));
        } else if (pathmass->parsed()) {
            require_json(common, "pathmass");
            const Graph g = load_graph(ga);
            Json params = graph_params(ga);
            params["t"] = t;
            emit_json(common, to_json(markov_path_mass(g, t, common.trials, {common.seed, 0})),
                      manifest("pathmass", params, common));
        }
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\nRun with --help for more information.\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << to_json(e).dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        Json j{{"error", "internal_error"}, {"message", e.what()}};
        std::cerr << j.dump() << '\n';
        return 1;
    }
    return 0;
}
