#pragma once

// Experiment runners driven by ExperimentConfig: manufactured-solution
// convergence, single propagation runs with their measurement probes, and
// the two-model steepness sweep. Results are held in memory and written in
// one pass after the run succeeds.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vbwave/analysis.hpp"
#include "vbwave/config.hpp"

namespace vbwave {

struct OutputFile {
    std::string name;     ///< file name relative to the output directory
    std::string content;
};

struct ExperimentResult {
    std::string name;
    /// Scalar results in insertion order, physical units when dimensional.
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<OutputFile> files;
    std::optional<ConvergenceTable> convergence;
    double seconds = 0.0;

    void set(const std::string& key, double value);
    [[nodiscard]] std::optional<double> metric(const std::string& key) const;
    /// metric() that throws when the key is missing.
    [[nodiscard]] double at(const std::string& key) const;
    [[nodiscard]] const OutputFile* file(const std::string& name) const;
    /// key=value lines.
    [[nodiscard]] std::string metrics_text() const;
};

/// Dispatches on config.kind.
ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentResult run_convergence(const ExperimentConfig& config);
ExperimentResult run_propagation(const ExperimentConfig& config);
ExperimentResult run_steepness(const ExperimentConfig& config);

/// Convergence table in the layout N, error, rate, ... for zeta then u.
std::string convergence_csv(const ConvergenceTable& zeta, const ConvergenceTable& u);

/// Writes config.echo, metrics.txt and every result file into `dir`.
void write_outputs(const ExperimentResult& result, const ExperimentConfig& config, const std::string& dir);

/// Output directory for a config: `override_dir` if given, else
/// $VBWAVE_OUTPUT_DIR/<output.dir> when the variable is set, else output.dir.
std::string resolve_output_dir(const ExperimentConfig& config, const std::string& override_dir = {});

struct JobOutcome {
    std::optional<ExperimentResult> result;
    std::string error;  ///< empty on success
};

/// Runs independent experiments on a pool of `jobs` threads (0: hardware
/// concurrency). Outcomes are in input order; errors are captured per job.
std::vector<JobOutcome> run_parallel(const std::vector<ExperimentConfig>& configs, int jobs = 0);

/// Compares a model gauge record with a CSV reference (columns t, zeta).
/// Throws ConfigError on a malformed file or when the time ranges do not overlap.
ReferenceComparison compare_reference(std::span<const double> t, std::span<const double> zeta,
                                      const std::string& reference_csv, double max_shift = 0.0);

}  // namespace vbwave
