#pragma once

#include "lrvkit/process.hpp"
#include "lrvkit/whittle.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lrvkit {

enum class ExperimentKind { CltQn, CltWhittle, SizeTable, DensitySamples, BiasRate };

[[nodiscard]] std::string_view to_string(ExperimentKind kind) noexcept;

/// Statistic sampled by a density experiment.
enum class DensityStatistic {
    /// 2 sqrt(m)(H - 1/2) on the raw simulated series.
    NormalizedLwe,
    /// T^(R): the change-point residual statistic on series with a level shift.
    ResidualStatistic,
};

/// Level-shift design X_t = r_t + delta 1{t > floor(N theta)} and nominal test levels.
struct SizeParams {
    std::vector<double> deltas;
    std::vector<double> thetas;
    std::vector<double> levels;
};

/// One size-table cell to run when the full grid is not requested.
struct AnchorCell {
    double delta = 0.0;
    double theta = 0.0;
    double m_exponent = 0.0;
    std::size_t n = 0;
};

struct ExperimentConfig {
    std::string name;
    ExperimentKind kind = ExperimentKind::CltQn;
    ProcessSpec process = ProcessSpec::iid(1.0);
    std::vector<std::size_t> n_values;
    std::vector<double> m_exponents;
    std::optional<std::size_t> explicit_m;
    std::size_t reps = 1;
    std::optional<std::size_t> full_reps;
    std::uint64_t master_seed = 0;
    std::optional<SizeParams> size_params;
    std::vector<AnchorCell> anchors;
    HurstBounds bounds;
    std::vector<double> bias_ratios{0.02, 0.04, 0.08};
    DensityStatistic statistic = DensityStatistic::NormalizedLwe;
};

/// Throws ConfigError on any violated invariant.
void validate(const ExperimentConfig& config);

/// Bandwidths used for sample size n: explicit m, or floor(n^beta) per exponent.
[[nodiscard]] std::vector<std::size_t> bandwidths_for(const ExperimentConfig& config, std::size_t n);

struct RunConfig {
    std::vector<ExperimentConfig> experiments;
    std::optional<std::size_t> threads;
    std::string source_text;
};

/// Parses `key = value` lines. Keys before the first `[experiment NAME]`
/// header are defaults inherited by every experiment block. Lists are
/// comma-separated; `anchor` may repeat and takes "delta theta beta n".
[[nodiscard]] RunConfig parse_run_config(std::string_view text);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace lrvkit
