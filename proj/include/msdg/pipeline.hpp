#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msdg/graph.hpp"
#include "msdg/partial.hpp"
#include "msdg/pattern.hpp"
#include "msdg/simulate.hpp"
#include "msdg/smoothing.hpp"
#include "msdg/spectra.hpp"

namespace msdg {

struct AnalysisOptions {
  int p_max = 16;
  int q_max = 16;
  SmoothingKernel kernel = SmoothingKernel::uniform;
  /// Smoothing half width; when unset, max(2, minimal admissible for d).
  std::optional<int> bandwidth;
  double ridge = 1e-8;
  std::vector<double> alphas = {0.3, 0.6, 0.9};
  std::size_t min_count = 1;
  int threads = 0;  ///< 0 = hardware concurrency
};

struct AnalysisConfig {
  std::string input_path;
  LoadOptions load;
  AnalysisOptions options;
  std::string output_dir = ".";
};

struct PipelineTimings {
  double dft_seconds = 0.0;
  double smooth_seconds = 0.0;
  double invert_seconds = 0.0;
  double total_seconds = 0.0;
};

/// Everything the analysis computes, file-free. The per-frequency loop
/// (smoothing, inversion, partialisation) is the parallel region; outputs do
/// not depend on the worker count.
struct PipelineResult {
  MarkedPointPattern prepared;  ///< filtered, rescaled, demeaned
  std::vector<std::string> dropped;
  std::vector<std::string> warnings;
  SmootherSpec smoother;  ///< spec actually used (resolved bandwidth)
  SpectralMatrixField raw;
  SpectralMatrixField smoothed;
  PartialDependenceField partial;
  EdgeStatisticMatrix stats;
  std::size_t flagged_frequencies;
  std::size_t ridged_frequencies;
  std::size_t ridge_skipped;
  PipelineTimings timings;
};

/// Run the full estimation pipeline on an in-memory pattern.
PipelineResult analyze_pattern(const MarkedPointPattern& loaded, const AnalysisOptions& options);

struct AnalyzeResult {
  PipelineResult pipeline;
  std::vector<DependenceGraph> graphs;  ///< one per threshold, config order
  std::vector<std::string> written;     ///< artifact paths
};

/// Load, analyse and write artifacts: per threshold a DOT and a JSON graph,
/// one edge-statistic matrix, one run report. On error every partial output
/// is removed before the exception propagates.
AnalyzeResult run_analyze(const AnalysisConfig& config);

struct SimulateRunResult {
  MarkedPointPattern pattern;
  std::string output_path;
  std::vector<std::string> ground_truth;  ///< printable coupled-pair lines
};

/// Generate a pattern from a spec file and write it in load_pattern format.
SimulateRunResult run_simulate(const std::string& spec_path, const std::string& output_path);

struct RecoveryRow {
  int replicate;
  double alpha;
  int true_positives;
  int false_positives;
  double tp_rate;  ///< NaN when the spec has no coupled pair
  double fp_rate;
};

struct RecoverySummary {
  double alpha;
  double mean_tp_rate;
  double mean_fp_count;
  double mean_fp_rate;
};

struct RecoveryStudyResult {
  std::vector<std::pair<int, int>> true_pairs;
  std::vector<RecoveryRow> rows;          ///< replicates x thresholds
  std::vector<RecoverySummary> summary;   ///< one per threshold
};

/// Simulate/analyse/score `replicates` patterns; replicate r uses seed
/// spec.seed + r.
RecoveryStudyResult run_recovery_study(const SimulationSpec& spec, int replicates,
                                       const AnalysisOptions& options);

void write_recovery_rows(const RecoveryStudyResult& result, std::ostream& out);
void write_recovery_summary(const RecoveryStudyResult& result, std::ostream& out);

enum class DumpKind { raw, smoothed, partial };

/// Delimited dump of a spectral field: p,q,i,j,re,im rows over the upper
/// triangle (i <= j), or p,q,i,j,abs_d rows for the partial field.
void dump_spectra(const PipelineResult& result, DumpKind kind, std::ostream& out);

/// Edge statistics as a symmetric delimited matrix with name headers.
void write_edge_statistics(const EdgeStatisticMatrix& stats,
                           const std::vector<std::string>& names, std::ostream& out);

}  // namespace msdg
