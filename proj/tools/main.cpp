#include "config.hpp"
#include "experiments.hpp"
#include "table_io.hpp"

#include "selprior/errors.hpp"
#include "selprior/expfam.hpp"
#include "selprior/simulate.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

namespace {

using namespace selprior;
using namespace selprior::cli;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitLowAcceptance = 4;

PriorKind prior_arg(const std::string& name) {
    if (name == "uniform") return PriorKind::Uniform;
    if (name == "exact-matching" || name == "pmp") return PriorKind::ExactMatching;
    if (name == "jeffreys" || name == "selective-jeffreys")
        return PriorKind::SelectiveJeffreys;
    if (name == "nonselective-jeffreys") return PriorKind::NonSelectiveJeffreys;
    throw ConfigError("unknown prior '" + name + "'");
}

struct EvalArgs {
    std::string what;
    std::string model = "normal";
    double n = 20.0, gamma = 1.0, t = 0.0;
    double y = 0.0;
    bool y_set = false;
    double theta = 0.0;
    bool theta_set = false;
    double alpha = 0.5;
    std::string prior = "jeffreys";
    int n1 = 8, n2 = 2;
    double threshold = 1.0;
    double observed = 0.0;
    bool observed_set = false;
};

ExpFamModel1D eval_expfam_model(const EvalArgs& a) {
    if (a.model == "binomial") return make_binomial_model(a.n1, a.n2, a.threshold == 1.0 ? 0.5 : a.threshold);
    if (a.model == "exponential") return make_exponential_model(a.n1, a.n2, a.threshold);
    if (a.model == "invgauss") return make_inverse_gaussian_model(a.n1, a.n2, a.threshold);
    throw ConfigError("unknown model '" + a.model + "'");
}

int do_eval(const EvalArgs& a) {
    std::ostringstream echo;
    echo << "model: " << a.model;
    if (a.model == "normal") {
        echo << " n=" << format_value(a.n) << " gamma=" << format_value(a.gamma)
             << " t=" << format_value(a.t);
    } else {
        echo << " n1=" << a.n1 << " n2=" << a.n2
             << " threshold=" << format_value(a.threshold);
    }
    if (a.y_set) echo << " y=" << format_value(a.y);
    if (a.theta_set) echo << " theta=" << format_value(a.theta);
    echo << " prior=" << a.prior;
    std::cout << echo.str() << "\n";

    const PriorKind kind = prior_arg(a.prior);
    if (a.model == "normal") {
        const SplitNormalModel m(a.n, a.gamma, a.t);
        if (a.what == "prior") {
            const double v = std::exp(log_prior_density(m, kind, a.theta, a.y));
            std::cout << "prior_density = " << format_value(v) << "\n";
        } else if (a.what == "posterior") {
            const double v =
                posterior_cdf_at(m, a.y, kind, PosteriorMode::Selective, a.theta);
            std::cout << "posterior_cdf = " << format_value(v) << "\n";
        } else if (a.what == "quantile") {
            const auto curve = posterior_curve(m, a.y, kind, PosteriorMode::Selective);
            std::cout << "posterior_quantile = " << format_value(curve.quantile(a.alpha))
                      << " (alpha=" << format_value(a.alpha) << ")\n";
        } else { // coverage-cell
            CoverageSpec spec;
            spec.model = m;
            spec.prior = kind;
            spec.theta_grid = {a.theta};
            spec.alpha_grid = {a.alpha};
            const auto rep = coverage_deterministic(spec);
            std::cout << "coverage = " << format_value(rep.entries.front().estimate)
                      << " (alpha=" << format_value(a.alpha) << ")\n";
        }
        return kExitOk;
    }
    const ExpFamModel1D fam = eval_expfam_model(a);
    if (a.what == "prior") {
        std::optional<double> obs;
        if (a.observed_set) obs = a.observed;
        const double v = induced_prior_density(fam, kind, a.theta, obs);
        std::cout << "prior_density = " << format_value(v) << "\n";
        return kExitOk;
    }
    throw ConfigError("eval " + a.what + " supports --model normal only");
}

int real_main(int argc, char** argv) {
    CLI::App app{"selective-inference priors: experiment runner and evaluator"};
    app.require_subcommand(1);

    // run ------------------------------------------------------------
    auto* run = app.add_subcommand("run", "run an experiment and write CSV + metadata");
    std::string run_id;
    std::string config_path;
    std::string scale = "desk";
    std::uint64_t seed = 20240601;
    int threads = 1;
    std::string out_dir;
    run->add_option("experiment", run_id, "experiment id (see `list`)")->required();
    run->add_option("--config", config_path, "key = value config file");
    run->add_option("--scale", scale, "paper or desk presets")
        ->check(CLI::IsMember({"paper", "desk"}));
    run->add_option("--seed", seed, "base random seed");
    run->add_option("--threads", threads, "worker threads");
    run->add_option("--out", out_dir, "output directory");

    // eval -----------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "evaluate a single quantity");
    EvalArgs ea;
    eval->add_option("what", ea.what, "prior | posterior | quantile | coverage-cell")
        ->required()
        ->check(CLI::IsMember({"prior", "posterior", "quantile", "coverage-cell"}));
    eval->add_option("--model", ea.model, "normal | binomial | exponential | invgauss");
    eval->add_option("--n", ea.n, "effective sample size");
    eval->add_option("--gamma", ea.gamma, "selection fraction");
    eval->add_option("--t", ea.t, "selection threshold");
    auto* yopt = eval->add_option("--y", ea.y, "observed value");
    auto* thopt = eval->add_option("--theta", ea.theta, "parameter value");
    eval->add_option("--alpha", ea.alpha, "probability level");
    eval->add_option("--prior", ea.prior, "prior kind");
    eval->add_option("--n1", ea.n1, "selection batch size");
    eval->add_option("--n2", ea.n2, "follow-up batch size");
    eval->add_option("--threshold", ea.threshold, "selection threshold on the MLE");
    auto* obsopt = eval->add_option("--observed", ea.observed, "observed full-data MLE");

    // describe / list --------------------------------------------------
    auto* describe = app.add_subcommand("describe", "print experiment defaults");
    std::string describe_id;
    describe->add_option("experiment", describe_id)->required();
    auto* list = app.add_subcommand("list", "list experiment ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    ea.y_set = yopt->count() > 0;
    ea.theta_set = thopt->count() > 0;
    ea.observed_set = obsopt->count() > 0;

    if (list->parsed()) {
        for (const auto& id : experiment_ids()) std::cout << id << "\n";
        return kExitOk;
    }
    if (describe->parsed()) {
        std::cout << describe_experiment(describe_id);
        return kExitOk;
    }
    if (eval->parsed()) {
        return do_eval(ea);
    }

    ExperimentContext ctx;
    ctx.id = run_id;
    ctx.scale = scale;
    ctx.seed = seed;
    ctx.threads = threads;
    if (!config_path.empty()) {
        ctx.config = KvConfig::parse_file(config_path);
        if (ctx.config.has(ctx.id, "seed")) {
            ctx.seed = static_cast<std::uint64_t>(ctx.config.get_long(ctx.id, "seed", 0));
        }
    }
    if (run->get_option("--seed")->count() > 0) ctx.seed = seed;

    if (out_dir.empty()) {
        if (const char* env = std::getenv("SELPRIOR_OUT_DIR")) out_dir = env;
    }
    if (out_dir.empty()) out_dir = ".";

    ResultTable table = run_experiment(ctx);

    std::ostringstream canon;
    canon << ctx.id << "|" << ctx.scale << "|" << ctx.seed;
    for (const auto& [sec, kv] : ctx.config.sections()) {
        for (const auto& [k, v] : kv) canon << "|" << sec << "." << k << "=" << v;
    }
    table.metadata["config_hash"] = fnv1a(canon.str());

    const std::string csv_path = out_dir + "/" + ctx.id + ".csv";
    const std::string meta_path = out_dir + "/" + ctx.id + ".meta.json";
    write_csv_atomic(csv_path, table);
    write_json_atomic(meta_path, table.metadata);
    std::cout << "wrote " << csv_path << " (" << table.rows.size() << " rows) and "
              << meta_path << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return real_main(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const LowAcceptanceError& e) {
        std::cerr << "low-acceptance abort: " << e.what() << "\n";
        return kExitLowAcceptance;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
