// threshold-lab: samplers, covers, weight certificates, lemma sweeps,
// expectation thresholds, and reproducible campaigns for k-uniform
// random hypergraphs.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "tlab/commands.hpp"

namespace {

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw tlab::ValidationError("cannot open input file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw tlab::ValidationError("cannot open output file: " + path);
    out << data;
}

nlohmann::json parse_json(const std::string& text, const char* what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw tlab::ValidationError(std::string(what) + ": malformed JSON");
    return j;
}

unsigned workers_from_env() {
    if (const char* env = std::getenv("THRESHOLD_LAB_WORKERS")) {
        try {
            return static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            throw tlab::ValidationError("THRESHOLD_LAB_WORKERS is not a number");
        }
    }
    return 0;  // hardware default
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"threshold-lab: random hypergraph cover and threshold toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string output;
    std::string format = "json";
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--output", output, "output file (default: stdout)");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));

    // sample
    auto* sample = app.add_subcommand("sample", "sample a random hypergraph as JSON");
    unsigned s_n = 0, s_k = 0;
    unsigned long s_m = 0;
    double s_q = 0.0;
    std::string s_model = "gnm";
    sample->add_option("--n", s_n, "ground-set size")->required();
    sample->add_option("--k", s_k, "uniformity")->required();
    sample->add_option("--model", s_model, "model")->check(CLI::IsMember({"gnm", "gnq"}));
    sample->add_option("--m", s_m, "edge count (gnm)");
    sample->add_option("--q", s_q, "edge probability (gnq)");

    // verify
    auto* verify = app.add_subcommand("verify", "check that the cover catches the upset of g");
    std::string v_input;
    unsigned v_r = 2;
    double v_L = 4.0 * std::exp(3.0);
    std::string v_mode = "auto";
    std::uint64_t v_trials = 1000;
    unsigned long long v_budget = tlab::kDefaultNodeBudget;
    verify->add_option("input", v_input, "hypergraph JSON file (default: stdin)");
    verify->add_option("--r", v_r, "denominator r")->capture_default_str();
    verify->add_option("--L", v_L, "covering constant L")->capture_default_str();
    verify->add_option("--mode", v_mode, "verification mode")
        ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));
    verify->add_option("--trials", v_trials, "sampled-mode trials")->capture_default_str();
    verify->add_option("--budget", v_budget, "search node budget")->capture_default_str();

    // weights
    auto* weights = app.add_subcommand("weights", "cover summary and weight breakdown");
    std::string w_input;
    unsigned w_r = 2;
    double w_L = 4.0 * std::exp(3.0);
    std::string w_mode = "auto";
    std::uint64_t w_trials = 10000;
    weights->add_option("input", w_input, "hypergraph JSON file (default: stdin)");
    weights->add_option("--r", w_r, "denominator r")->capture_default_str();
    weights->add_option("--L", w_L, "covering constant L")->capture_default_str();
    weights->add_option("--mode", w_mode, "restricted-level weight mode")
        ->check(CLI::IsMember({"auto", "exact", "mc"}));
    weights->add_option("--trials", w_trials, "Monte Carlo trials")->capture_default_str();

    // claims
    auto* claims = app.add_subcommand("claims", "evaluate every weight-claim certificate");
    unsigned c_n = 0, c_k = 2, c_r = 2;
    unsigned long c_m = 0;
    double c_L = 4.0 * std::exp(3.0);
    claims->add_option("--n", c_n, "ground-set size")->required();
    claims->add_option("--k", c_k, "uniformity")->required();
    claims->add_option("--m", c_m, "edge count")->required();
    claims->add_option("--r", c_r, "denominator r")->required();
    claims->add_option("--L", c_L, "covering constant L")->capture_default_str();

    // lemmas
    auto* lemmas = app.add_subcommand("lemmas", "exact tail and covariance lemma sweeps");
    unsigned l_grid = 12;
    lemmas->add_option("--grid-max", l_grid, "largest population size N")->capture_default_str();

    // thresholds
    auto* thresholds = app.add_subcommand("thresholds", "q, q_f and their ratio for a family");
    std::string t_input;
    double t_tol = 1e-4;
    thresholds->add_option("input", t_input, "family JSON file (default: stdin)");
    thresholds->add_option("--tol", t_tol, "bisection tolerance")->capture_default_str();

    // campaign
    auto* campaign = app.add_subcommand("campaign", "seeded experiment grid, CSV + summary");
    std::string g_config;
    std::vector<unsigned> g_n_grid;
    unsigned g_k = 0, g_r = 0, g_seeds = 0;
    std::string g_m_rule;
    double g_L = 0.0;
    std::uint64_t g_trials = 0;
    bool g_timings = false;
    campaign->add_option("--config", g_config, "campaign config JSON file");
    campaign->add_option("--n-grid", g_n_grid, "ground-set sizes")->delimiter(',');
    campaign->add_option("--k", g_k, "uniformity");
    campaign->add_option("--r", g_r, "denominator r");
    campaign->add_option("--m-rule", g_m_rule, "m rule: list:..., frac:x, npj:x");
    campaign->add_option("--L", g_L, "covering constant L");
    campaign->add_option("--seeds-per-cell", g_seeds, "instances per cell");
    campaign->add_option("--trials-mc", g_trials, "Monte Carlo trials per weight");
    campaign->add_flag("--timings", g_timings, "emit measured runtime_ms (non-reproducible)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return tlab::kExitUsage;
    }

    try {
        if (sample->parsed()) {
            const auto model = (s_model == "gnm") ? tlab::SampleModel::gnm : tlab::SampleModel::gnq;
            if (model == tlab::SampleModel::gnm && sample->count("--m") == 0)
                throw tlab::ValidationError("sample: --m required for gnm");
            if (model == tlab::SampleModel::gnq && sample->count("--q") == 0)
                throw tlab::ValidationError("sample: --q required for gnq");
            auto res = tlab::cmd_sample(s_n, s_k, model, s_m, s_q, seed);
            write_output(output, res.output);
            return res.code;
        }
        if (verify->parsed()) {
            auto h = tlab::hypergraph_from_json(parse_json(read_input(v_input), "hypergraph"));
            const auto mode = v_mode == "exhaustive" ? tlab::VerifyMode::exhaustive
                              : v_mode == "sampled"  ? tlab::VerifyMode::sampled
                                                     : tlab::VerifyMode::automatic;
            auto res = tlab::cmd_verify(h, v_r, v_L, mode, v_trials, seed, v_budget);
            write_output(output, res.output);
            return res.code;
        }
        if (weights->parsed()) {
            auto h = tlab::hypergraph_from_json(parse_json(read_input(w_input), "hypergraph"));
            const auto mode = w_mode == "exact" ? tlab::WeightMode::exact
                              : w_mode == "mc"  ? tlab::WeightMode::monte_carlo
                                                : tlab::WeightMode::automatic;
            auto res = tlab::cmd_weights(h, w_r, w_L, mode, w_trials, seed);
            write_output(output, res.output);
            return res.code;
        }
        if (claims->parsed()) {
            auto res = tlab::cmd_claims(c_n, c_k, c_m, c_r, c_L);
            write_output(output, res.output);
            return res.code;
        }
        if (lemmas->parsed()) {
            auto res = tlab::cmd_lemmas(l_grid);
            write_output(output, res.output);
            return res.code;
        }
        if (thresholds->parsed()) {
            auto f = tlab::family_from_json(parse_json(read_input(t_input), "family"));
            auto res = tlab::cmd_thresholds(f, t_tol);
            write_output(output, res.output);
            return res.code;
        }
        if (campaign->parsed()) {
            tlab::CampaignConfig cfg;
            if (!g_config.empty())
                cfg = tlab::campaign_config_from_json(
                    parse_json(read_input(g_config), "campaign config"));
            // flags override file values
            if (!g_n_grid.empty()) cfg.n_grid = g_n_grid;
            if (campaign->count("--k")) cfg.k = g_k;
            if (campaign->count("--r")) cfg.r = g_r;
            if (!g_m_rule.empty()) cfg.m_rule = g_m_rule;
            if (campaign->count("--L")) cfg.L = g_L;
            if (campaign->count("--seeds-per-cell")) cfg.seeds_per_cell = g_seeds;
            if (campaign->count("--trials-mc")) cfg.trials_mc = g_trials;
            if (app.count("--seed")) cfg.master_seed = seed;
            if (app.count("--output")) cfg.output_path = output;

            auto res = tlab::cmd_campaign(cfg, workers_from_env(), g_timings);
            if (!cfg.output_path.empty()) {
                write_output(cfg.output_path, res.csv);
                std::cout << res.summary;
            } else if (format == "csv") {
                std::cout << res.csv;
                std::cerr << res.summary;
            } else {
                std::cout << res.csv << res.summary;
            }
            return res.code;
        }
    } catch (const tlab::CapacityError& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return tlab::kExitCapacity;
    } catch (const tlab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return tlab::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return tlab::kExitUsage;
    }
    return tlab::kExitUsage;
}
