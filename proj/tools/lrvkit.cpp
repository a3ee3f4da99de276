#include "lrvkit/changepoint.hpp"
#include "lrvkit/error.hpp"
#include "lrvkit/experiment_config.hpp"
#include "lrvkit/numeric.hpp"
#include "lrvkit/process.hpp"
#include "lrvkit/report.hpp"
#include "lrvkit/spectral.hpp"
#include "lrvkit/time_series.hpp"
#include "lrvkit/whittle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

using namespace lrvkit;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

// Re-emits a key=value record as a flat JSON object.
void print_record(const std::string& record, bool json) {
    if (!json) {
        std::cout << record;
        return;
    }
    nlohmann::ordered_json obj;
    std::istringstream lines(record);
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        const char* end = value.data() + value.size();
        long long integer = 0;
        double number = 0.0;
        const auto int_parse = std::from_chars(value.data(), end, integer);
        const auto [ptr, ec] = std::from_chars(value.data(), end, number);
        if (value == "true" || value == "false") {
            obj[key] = value == "true";
        } else if (int_parse.ec == std::errc{} && int_parse.ptr == end) {
            obj[key] = integer;
        } else if (ec == std::errc{} && ptr == end) {
            obj[key] = number;
        } else {
            obj[key] = value;
        }
    }
    std::cout << obj.dump() << '\n';
}

template <typename Record>
void emit(const Record& rec, bool json) {
    std::ostringstream out;
    write_record(out, rec);
    print_record(out.str(), json);
}

TimeSeries load_input(const std::string& path) {
    if (path == "-") return read_series(std::cin);
    return read_series(std::filesystem::path(path));
}

std::size_t resolve_bandwidth(std::size_t n, const std::optional<std::size_t>& m, const std::optional<double>& beta) {
    if (m && beta) throw Error(ErrorCode::InvalidArgument, "give either --m or --m-exponent, not both");
    if (m) return *m;
    if (beta) {
        if (!(*beta > 0.0 && *beta < 1.0)) throw Error(ErrorCode::InvalidArgument, "--m-exponent must lie in (0,1)");
        return static_cast<std::size_t>(bandwidth_from_exponent(static_cast<long>(n), *beta));
    }
    throw Error(ErrorCode::InvalidArgument, "a bandwidth is required (--m or --m-exponent)");
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonFiniteInput:
        case ErrorCode::DegenerateOrdinates:
        case ErrorCode::InvalidF0:
            return kExitNumeric;
        default:
            return kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Long-run variance, local Whittle and change-point tools"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json = false;
    app.add_flag("--json", json, "Print records as JSON");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate a Bernoulli-shift process");
    std::string model = "iid";
    std::size_t sim_n = 1000;
    std::uint64_t sim_seed = 0;
    std::string sim_out = "-";
    double variance = 1.0, d = 0.0, alpha0 = 0.0, alpha1 = 0.0, beta1 = 0.0, sv_alpha = 0.0, phi = 0.0, sigma_w2 = 0.0;
    std::vector<double> coefficients;
    sim->add_option("--model", model, "iid | linear | garch11 | sv")->check(CLI::IsMember({"iid", "linear", "garch11", "sv"}));
    sim->add_option("--n", sim_n, "Sample size")->required();
    sim->add_option("--seed", sim_seed, "Seed");
    sim->add_option("--out", sim_out, "Output file, '-' for stdout");
    sim->add_option("--variance", variance, "Innovation variance (iid, linear)");
    sim->add_option("--d", d, "Power-decay exponent, psi_j = (j+1)^-d (linear)");
    sim->add_option("--coefficients", coefficients, "Explicit psi_0, psi_1, ... (linear)")->delimiter(',');
    sim->add_option("--alpha0", alpha0, "GARCH intercept");
    sim->add_option("--alpha1", alpha1, "GARCH ARCH coefficient");
    sim->add_option("--beta1", beta1, "GARCH GARCH coefficient");
    sim->add_option("--sv-alpha", sv_alpha, "SV log-variance intercept");
    sim->add_option("--phi", phi, "SV autoregression");
    sim->add_option("--sigma-w2", sigma_w2, "SV log-variance innovation variance");

    // lrv
    auto* lrv = app.add_subcommand("lrv", "Smoothed-periodogram long-run variance");
    std::string input;
    std::optional<std::size_t> m;
    std::optional<double> beta;
    std::string path_name = "freq";
    lrv->add_option("--input", input, "Series file, '-' for stdin")->required();
    lrv->add_option("--m", m, "Bandwidth");
    lrv->add_option("--m-exponent", beta, "m = floor(n^beta)");
    lrv->add_option("--path", path_name, "freq | acov");

    // lw-fit
    auto* lw = app.add_subcommand("lw-fit", "Local Whittle estimate of H");
    double lower = HurstBounds{}.lower, upper = HurstBounds{}.upper;
    lw->add_option("--input", input, "Series file, '-' for stdin")->required();
    lw->add_option("--m", m, "Bandwidth");
    lw->add_option("--m-exponent", beta, "m = floor(n^beta)");
    lw->add_option("--lower", lower, "Lower bound of the H search");
    lw->add_option("--upper", upper, "Upper bound of the H search");

    // lrd-test
    auto* lrd = app.add_subcommand("lrd-test", "Change-in-mean versus long memory test");
    double alpha = 0.05;
    lrd->add_option("--input", input, "Series file, '-' for stdin")->required();
    lrd->add_option("--alpha", alpha, "Nominal level");
    lrd->add_option("--m", m, "Bandwidth");
    lrd->add_option("--m-exponent", beta, "m = floor(n^beta)");
    lrd->add_option("--lower", lower, "Lower bound of the H search");
    lrd->add_option("--upper", upper, "Upper bound of the H search");

    // mc
    auto* mc = app.add_subcommand("mc", "Run Monte Carlo experiments from a config file");
    std::string config_path;
    std::vector<std::string> experiments;
    bool full = false;
    std::optional<std::size_t> threads;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    std::optional<std::size_t> reps_override;
    mc->add_option("--config", config_path, "Experiment config file")->required();
    mc->add_option("--experiment", experiments, "Run only these experiments");
    mc->add_flag("--full", full, "Full size-table grid and full_reps");
    mc->add_option("--threads", threads, "Worker threads");
    mc->add_option("--out", out_dir, "Output directory");
    mc->add_option("--seed", seed_override, "Override master_seed");
    mc->add_option("--reps", reps_override, "Override reps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*sim) {
            ProcessSpec spec = ProcessSpec::iid(variance);
            if (model == "linear") {
                spec = coefficients.empty() ? ProcessSpec::linear_power_decay(d, variance)
                                            : ProcessSpec::linear(coefficients, variance);
            } else if (model == "garch11") {
                spec = ProcessSpec::garch11(alpha0, alpha1, beta1);
            } else if (model == "sv") {
                spec = ProcessSpec::stoch_vol(sv_alpha, phi, sigma_w2);
            }
            const TimeSeries x = simulate(spec, sim_n, sim_seed);
            if (sim_out == "-") {
                write_series(std::cout, x.values());
            } else {
                write_series(std::filesystem::path(sim_out), x.values());
            }
        } else if (*lrv) {
            const TimeSeries x = load_input(input);
            emit(lrv_smoothed_periodogram(x, resolve_bandwidth(x.size(), m, beta), parse_spectral_path(path_name)),
                 json);
        } else if (*lw) {
            const TimeSeries x = load_input(input);
            WhittleOptions opts;
            opts.bounds = {lower, upper};
            emit(fit_local_whittle(x, resolve_bandwidth(x.size(), m, beta), opts), json);
        } else if (*lrd) {
            const TimeSeries x = load_input(input);
            WhittleOptions opts;
            opts.bounds = {lower, upper};
            emit(lrd_test(x, resolve_bandwidth(x.size(), m, beta), alpha, opts), json);
        } else if (*mc) {
            RunConfig run = load_run_config(config_path);
            RunOptions options;
            options.full = full;
            options.threads = threads.value_or(run.threads.value_or(std::max(1u, std::thread::hardware_concurrency())));
            bool matched = experiments.empty();
            for (auto& exp : run.experiments) {
                if (!experiments.empty() &&
                    std::find(experiments.begin(), experiments.end(), exp.name) == experiments.end()) {
                    continue;
                }
                matched = true;
                if (seed_override) exp.master_seed = *seed_override;
                if (reps_override) {
                    exp.reps = *reps_override;
                    if (full) exp.full_reps = *reps_override;
                }
                validate(exp);
                const ExperimentOutput result = run_experiment(exp, options, run.source_text, out_dir);
                for (const auto& w : result.warnings) std::cerr << "warning: " << exp.name << ": " << w << '\n';
                for (const auto& f : result.files) std::cout << f.string() << '\n';
            }
            if (!matched) throw Error(ErrorCode::ConfigError, "no experiment matches --experiment");
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
