#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <diffnet/io.hpp>
#include <diffnet/pipeline.hpp>
#include <diffnet/synthgen.hpp>

namespace diffnet::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig
{
    std::string cond1_path;
    std::string cond2_path;
    std::string builtin;
    std::string spec1_path;
    std::string spec2_path;
    long long n = 200;
    std::uint64_t seed = 0;
    std::optional<double> lambda1;
    std::optional<double> lambda2;
    double alpha = 0.01;
    int folds = 10;
    std::string cv_rule = "one-se";
    std::size_t grid_length = 40;
    bool structural_only = false;
    double tolerance = 1e-6;
    int max_sweeps = 1000;
    std::size_t threads = 0;
    std::string out_dir;
    std::vector<std::string> formats{"json", "dot"};
};

void diagnostic(std::ostream& err, const char* level, std::string_view code, const std::string& message)
{
    err << json{{"level", level}, {"code", code}, {"message", message}}.dump() << '\n';
}

bool has_format(const RunConfig& cfg, const std::string& f)
{
    return std::find(cfg.formats.begin(), cfg.formats.end(), f) != cfg.formats.end();
}

LearnConfig learn_config(const RunConfig& cfg)
{
    LearnConfig lc;
    lc.lambda1 = cfg.lambda1;
    lc.lambda2 = cfg.lambda2;
    lc.alpha = cfg.alpha;
    lc.folds = cfg.folds;
    lc.seed = cfg.seed;
    lc.grid_length = cfg.grid_length;
    lc.one_standard_error = cfg.cv_rule == "one-se";
    lc.solver.tolerance = cfg.tolerance;
    lc.solver.max_sweeps = cfg.max_sweeps;
    lc.solver.threads = cfg.threads;
    lc.differential.structural_only = cfg.structural_only;
    return lc;
}

/// Loads both conditions from CSV files or simulates a builtin experiment.
StandardizedDataset<double> load_data(const RunConfig& cfg)
{
    const bool files = !cfg.cond1_path.empty() || !cfg.cond2_path.empty();
    if (files == !cfg.builtin.empty()) {
        throw Error(ErrorCode::InvalidArgument, "give either --cond1/--cond2 or --builtin");
    }
    if (files) {
        if (cfg.cond1_path.empty() || cfg.cond2_path.empty()) {
            throw Error(ErrorCode::InvalidArgument, "both --cond1 and --cond2 are required");
        }
        const auto raw1 = read_csv(cfg.cond1_path);
        const auto raw2 = read_csv(cfg.cond2_path);
        return standardize(raw1, raw2);
    }
    if (cfg.n < 1) throw Error(ErrorCode::InvalidArgument, "--n must be positive");
    const auto [raw1, raw2] = simulate_pair(builtin_experiment(cfg.builtin), cfg.n, cfg.seed);
    return standardize(raw1, raw2);
}

json cv_to_json(const Lambda1Selection<double>& cv, bool one_se)
{
    return {{"folds", cv.folds},
            {"rule", one_se ? "one-se" : "min"},
            {"grid", cv.grid},
            {"mean_error", cv.cv_mean},
            {"se_error", cv.cv_se},
            {"mean_error_cond1", cv.cv_mean_cond1},
            {"mean_error_cond2", cv.cv_mean_cond2},
            {"chosen_index", cv.chosen_index},
            {"chosen", cv.chosen}};
}

json lambda_report(const LambdaChoice& choice, const RunConfig& cfg, Index n_samples)
{
    json j;
    j["n_samples"] = n_samples;
    j["alpha"] = cfg.alpha;
    j["lambda1"] = choice.penalty.lambda1;
    j["lambda1_source"] = choice.cv ? "cv" : "explicit";
    j["cv"] = choice.cv ? cv_to_json(*choice.cv, cfg.cv_rule == "one-se") : json(nullptr);
    j["lambda2"] = choice.penalty.lambda2;
    j["lambda2_source"] = choice.heuristic ? "heuristic" : "explicit";
    j["s"] = choice.heuristic ? json(choice.heuristic->s) : json(nullptr);
    j["mean_rho_product"] = choice.heuristic ? json(choice.heuristic->mean_rho_product) : json(nullptr);
    j["warnings"] = choice.heuristic ? json(choice.heuristic->warnings) : json::array();
    return j;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content) || !f.flush()) {
        throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    }
}

void ensure_dir(const std::string& dir)
{
    if (dir.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error(ErrorCode::IoError, "cannot create output directory '" + dir + "'");
    }
}

std::string csv_text(const RawDataset<double>& data)
{
    std::ostringstream ss;
    write_csv(ss, data);
    return ss.str();
}

int cmd_learn(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    for (const auto& f : cfg.formats) {
        if (f != "json" && f != "dot") throw Error(ErrorCode::InvalidArgument, "unknown format '" + f + "'");
    }
    const auto data = load_data(cfg);
    const auto result = learn_network(data, learn_config(cfg));
    const auto& names = data.variable_names();

    json report = lambda_report(result.lambdas, cfg, data.n_samples());
    report["p"] = data.n_vars();
    report["variables"] = names;
    report["solver"] = {{"tolerance", cfg.tolerance}, {"max_sweeps", cfg.max_sweeps}};
    json nodes = json::array();
    json not_converged = json::array();
    for (const auto& node : result.fit.nodes) {
        const auto& name = names[static_cast<std::size_t>(node.node_index)];
        nodes.push_back({{"name", name},
                         {"converged", node.converged},
                         {"sweeps", node.sweeps_used},
                         {"objective", node.objective}});
        if (!node.converged) not_converged.push_back(name);
    }
    report["nodes"] = nodes;
    report["all_converged"] = result.fit.all_converged();
    report["not_converged"] = not_converged;
    report["edges"] = result.model.edges.size();
    report["differential_edges"] = result.subnetwork.edges.size();
    report["structural_only"] = cfg.structural_only;

    // Render everything before touching the output directory.
    std::map<std::string, std::string> files;
    if (has_format(cfg, "json")) {
        files["network.json"] = network_to_json(result.model, learn_config(cfg).differential).dump(2) + "\n";
        files["differential.json"] = differential_to_json(result.subnetwork, result.model).dump(2) + "\n";
    }
    if (has_format(cfg, "dot")) {
        files["network.dot"] = network_to_dot(result.model);
        files["differential.dot"] = differential_to_dot(result.subnetwork, result.model);
    }
    files["report.json"] = report.dump(2) + "\n";

    ensure_dir(cfg.out_dir);
    for (const auto& [name, content] : files) write_file(fs::path(cfg.out_dir) / name, content);

    if (result.lambdas.heuristic) {
        for (const auto& w : result.lambdas.heuristic->warnings) diagnostic(err, "warning", "DegenerateCorrelation", w);
    }
    for (const auto& name : not_converged) {
        diagnostic(err, "warning", "NotConverged", "node '" + name.get<std::string>() + "' hit max_sweeps");
    }

    out << "lambda1 = " << result.lambdas.penalty.lambda1 << ", lambda2 = " << result.lambdas.penalty.lambda2
        << '\n'
        << "edges: " << result.model.edges.size() << ", differential edges: "
        << result.subnetwork.edges.size() << ", differential nodes: " << result.subnetwork.nodes.size()
        << '\n';
    for (const auto& e : result.subnetwork.edges) {
        out << "  " << names[static_cast<std::size_t>(e.source)] << " -- "
            << names[static_cast<std::size_t>(e.target)]
            << (e.present1 && e.present2 ? " (weight change)" : e.present1 ? " (condition 1 only)" : " (condition 2 only)")
            << '\n';
    }
    out << "artifacts written to " << cfg.out_dir << '\n';
    return result.fit.all_converged() ? exit_ok : exit_not_converged;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    if (cfg.n < 1) throw Error(ErrorCode::InvalidArgument, "--n must be positive");
    const bool specs = !cfg.spec1_path.empty() || !cfg.spec2_path.empty();
    if (specs == !cfg.builtin.empty()) {
        throw Error(ErrorCode::InvalidArgument, "give either --builtin or --spec1/--spec2");
    }
    ExperimentPair pair;
    if (specs) {
        if (cfg.spec1_path.empty() || cfg.spec2_path.empty()) {
            throw Error(ErrorCode::InvalidArgument, "both --spec1 and --spec2 are required");
        }
        auto parse = [](const std::string& path) {
            try {
                return spec_from_json(json::parse(read_text_file(path)));
            } catch (const json::exception& ex) {
                throw Error(ErrorCode::ParseError, path + ": " + ex.what());
            }
        };
        pair = {parse(cfg.spec1_path), parse(cfg.spec2_path)};
    } else {
        pair = builtin_experiment(cfg.builtin);
    }
    const auto [raw1, raw2] = simulate_pair(pair, cfg.n, cfg.seed);

    std::map<std::string, std::string> files{
        {"cond1.csv", csv_text(raw1)},
        {"cond2.csv", csv_text(raw2)},
        {"spec1.json", spec_to_json(pair.cond1).dump(2) + "\n"},
        {"spec2.json", spec_to_json(pair.cond2).dump(2) + "\n"},
    };
    ensure_dir(cfg.out_dir);
    for (const auto& [name, content] : files) write_file(fs::path(cfg.out_dir) / name, content);

    out << "wrote " << cfg.n << " samples x " << raw1.n_vars() << " variables per condition to "
        << cfg.out_dir << '\n';
    return exit_ok;
}

int cmd_lambda(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto data = load_data(cfg);
    const auto choice = choose_lambdas(data, learn_config(cfg));
    const json report = lambda_report(choice, cfg, data.n_samples());
    if (choice.heuristic) {
        for (const auto& w : choice.heuristic->warnings) diagnostic(err, "warning", "DegenerateCorrelation", w);
    }
    out << report.dump(2) << '\n';
    return exit_ok;
}

void add_input_options(CLI::App& cmd, RunConfig& cfg)
{
    cmd.add_option("--cond1", cfg.cond1_path, "CSV samples for condition 1");
    cmd.add_option("--cond2", cfg.cond2_path, "CSV samples for condition 2");
    cmd.add_option("--builtin", cfg.builtin, "Simulate a builtin experiment instead of reading CSVs")
        ->check(CLI::IsMember(builtin_experiment_names()));
    cmd.add_option("--n", cfg.n, "Samples per condition for --builtin")->capture_default_str();
    cmd.add_option("--seed", cfg.seed, "Seed for simulation and fold assignment")->capture_default_str();
}

void add_lambda_options(CLI::App& cmd, RunConfig& cfg)
{
    cmd.add_option("--lambda1", cfg.lambda1, "Fixed lambda1 (skips cross-validation)")->check(CLI::NonNegativeNumber);
    cmd.add_option("--lambda2", cfg.lambda2, "Fixed lambda2 (skips the significance heuristic)")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--alpha", cfg.alpha, "Significance level for lambda2")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--folds", cfg.folds, "Cross-validation folds")->check(CLI::Range(2, 1000))->capture_default_str();
    cmd.add_option("--cv-rule", cfg.cv_rule, "Cross-validation rule")
        ->check(CLI::IsMember({"one-se", "min"}))
        ->capture_default_str();
    cmd.add_option("--grid-length", cfg.grid_length, "Number of lambda1 grid points")
        ->check(CLI::Range(2, 10000))
        ->capture_default_str();
    cmd.add_option("--tolerance", cfg.tolerance, "Coefficient-change convergence tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--max-sweeps", cfg.max_sweeps, "Maximum coordinate descent sweeps")
        ->check(CLI::Range(1, 1000000000))
        ->capture_default_str();
    cmd.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Learn the differential network between two experimental conditions", "diffnet"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* learn = app.add_subcommand("learn", "Fit both graphs and extract the differential sub-network");
    add_input_options(*learn, cfg);
    add_lambda_options(*learn, cfg);
    learn->add_option("--out", cfg.out_dir, "Output directory")->required();
    learn->add_option("--format", cfg.formats, "Graph formats to write")
        ->delimiter(',')
        ->check(CLI::IsMember({"json", "dot"}))
        ->capture_default_str();
    learn->add_flag("--structural-only", cfg.structural_only, "Ignore weight-only changes");

    auto* simulate = app.add_subcommand("simulate", "Sample paired datasets from two graphs");
    simulate->add_option("--builtin", cfg.builtin, "Builtin experiment")->check(CLI::IsMember(builtin_experiment_names()));
    simulate->add_option("--spec1", cfg.spec1_path, "Graph spec JSON for condition 1");
    simulate->add_option("--spec2", cfg.spec2_path, "Graph spec JSON for condition 2");
    simulate->add_option("--n", cfg.n, "Samples per condition")->capture_default_str();
    simulate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    simulate->add_option("--out", cfg.out_dir, "Output directory")->required();

    auto* lambda = app.add_subcommand("lambda", "Select lambda1 and lambda2 and print them as JSON");
    add_input_options(*lambda, cfg);
    add_lambda_options(*lambda, cfg);

    std::vector<std::string> argv_storage{"diffnet"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        diagnostic(err, "error", "InvalidArgument", e.what());
        return exit_error;
    }

    try {
        if (learn->parsed()) return cmd_learn(cfg, out, err);
        if (simulate->parsed()) return cmd_simulate(cfg, out, err);
        return cmd_lambda(cfg, out, err);
    } catch (const Error& e) {
        diagnostic(err, "error", to_string(e.code()), e.what());
    } catch (const std::exception& e) {
        diagnostic(err, "error", "Internal", e.what());
    }
    return exit_error;
}

} // namespace diffnet::cli
