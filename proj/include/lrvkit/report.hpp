#pragma once

#include "lrvkit/experiment_config.hpp"
#include "lrvkit/montecarlo.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lrvkit {

/// Git-style blob hash: SHA-1 of "blob <len>\0<content>", lowercase hex.
[[nodiscard]] std::string content_hash(std::string_view content);

/// `#`-prefixed provenance lines: experiment, process, seed rule, reps and
/// the echoed config with its content hash.
void write_metadata(std::ostream& out, const ExperimentConfig& config, const RunOptions& options,
                    std::string_view config_text);

void write_summary_csv(std::ostream& out, const SampleExperiment& result);
/// One sample per line; cells are separated by `#` label lines.
void write_samples(std::ostream& out, const SampleExperiment& result);
void write_histogram_csv(std::ostream& out, const SampleExperiment& result);
void write_size_table_csv(std::ostream& out, const SizeTable& table);
void write_bias_csv(std::ostream& out, const BiasReport& report);

struct ExperimentOutput {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

/// Runs one experiment and writes <name>.csv (plus <name>.samples and
/// <name>.hist.csv for sampling experiments) into out_dir.
ExperimentOutput run_experiment(const ExperimentConfig& config, const RunOptions& options,
                                std::string_view config_text, const std::filesystem::path& out_dir);

}  // namespace lrvkit
