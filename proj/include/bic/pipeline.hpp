#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bic/bayes.hpp"
#include "bic/correntropy.hpp"
#include "bic/series.hpp"

namespace bic {

inline constexpr std::string_view kVersion = "0.1.0";
// Key under which the prior-independent excess-return correntropy is stored.
inline constexpr std::string_view kExcessKey = "excess";

enum class CorrentropyInput { PosteriorPath, ExcessReturns };
enum class OutputFormat { Json, Csv, Both };

struct PipelineConfig {
  std::filesystem::path input_path;
  std::vector<double> priors{0.0, 0.25, 0.5, 0.75};
  // Exploratory: clamp priors into [eps, 1 - eps]. Off by default.
  std::optional<double> prior_clamp;
  double separation = 0.5;
  std::size_t window_length = 10;
  std::size_t stride = 0;  // 0 means stride == window_length
  std::optional<double> sigma;
  CorrentropyInput correntropy_input = CorrentropyInput::PosteriorPath;
  double threshold_k = 3.0;
  std::filesystem::path output_dir;
  OutputFormat format = OutputFormat::Both;

  // Throws ConfigInvalid.
  void validate() const;
  std::size_t effective_stride() const noexcept { return stride == 0 ? window_length : stride; }
};

struct PriorBranch {
  std::string key;  // shortest round-trip text of the prior, or kExcessKey
  CorrentropySeries correntropy;
  std::vector<AmbiguitySignal> signals;
};

struct PipelineReport {
  std::string version{kVersion};
  PipelineConfig config;
  SeriesStats stats;
  KernelBandwidth bandwidth{1.0};
  std::vector<PosteriorPath> paths;
  std::vector<bool> degenerate;  // per path: constant posterior series
  std::vector<PriorBranch> branches;
};

std::string prior_key(double prior);

// Pure function of (input bytes, config); config.input_path is only echoed.
PipelineReport run_pipeline_on(std::string_view csv_bytes, const PipelineConfig& config);

// Reads config.input_path (IoFailure) and runs the pipeline.
PipelineReport run_pipeline(const PipelineConfig& config);

std::string report_to_json(const PipelineReport& report);
std::string posterior_paths_to_csv(const PipelineReport& report);
std::string correntropy_to_csv(const PipelineReport& report);
std::string signals_to_csv(const PipelineReport& report);

// CSV of a single series: `pair_index,left_start,right_start,v`.
std::string to_csv(const CorrentropySeries& cs);
// CSV of a single path: `period,prior,posterior`.
std::string to_csv(const PosteriorPath& path);

// Writes report.json and/or the three CSVs into config.output_dir and returns
// the written paths in a fixed order. Throws IoFailure.
std::vector<std::filesystem::path> emit_report(const PipelineReport& report,
                                               const PipelineConfig& config);

// Parses a `period,prior,posterior` file back into paths (in first-seen prior order).
std::vector<PosteriorPath> parse_posterior_paths_csv(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Exit status for a library error: 2 config/parse, 3 numerical, 4 I/O.
int exit_code_for(ErrorCode code) noexcept;

// Compact %.17g rendering used in every emitted file.
std::string format_double(double v);

}  // namespace bic
