#include "msdg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace msdg {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_alpha(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", alpha);
  return buf;
}

}  // namespace

PipelineResult analyze_pattern(const MarkedPointPattern& loaded, const AnalysisOptions& options) {
  const auto t_start = std::chrono::steady_clock::now();
  std::vector<std::string> warnings;

  FilterResult filtered = filter_min_count(loaded, options.min_count);
  const std::size_t d = filtered.pattern.dim();
  if (d < 2)
    throw std::runtime_error("analysis needs at least 2 types after filtering, got " +
                             std::to_string(d));
  if (d == 2)
    warnings.push_back(
        "only 2 types present: the partial dependence reduces to the ordinary coherence "
        "(no components to condition on)");

  MarkedPointPattern prepared = demean_marks(rescale_to_unit_square(filtered.pattern));

  for (double alpha : options.alphas)
    if (!(alpha > 0.0) || !(alpha < 1.0))
      throw std::runtime_error("threshold alpha must lie in (0,1)");

  SmootherSpec smoother;
  smoother.kernel = options.kernel;
  smoother.half_width =
      options.bandwidth.value_or(std::max(2, minimal_admissible_half_width(d)));
  smoother.ridge = options.ridge;
  validate_smoother(smoother, d, &warnings);

  const FrequencyGrid grid(options.p_max, options.q_max);
  PipelineTimings timings;

  auto t0 = std::chrono::steady_clock::now();
  const DftTable dft = compute_dft(prepared, grid, options.threads);
  SpectralMatrixField raw = assemble_periodogram_field(dft);
  timings.dft_seconds = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  SmoothingReport smoothing_report;
  SpectralMatrixField smoothed = smooth_field(raw, smoother, options.threads, &smoothing_report);
  timings.smooth_seconds = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  InversionPolicy policy;
  policy.ridge = smoother.ridge;
  const InverseField inverse = invert_field(smoothed, policy, options.threads);
  PartialDependenceField partial = partial_dependence(inverse);
  timings.invert_seconds = seconds_since(t0);

  EdgeStatisticMatrix stats = edge_statistics(partial);
  timings.total_seconds = seconds_since(t_start);

  const std::size_t flagged = partial.flagged_count();
  return PipelineResult{std::move(prepared),
                        std::move(filtered.dropped),
                        std::move(warnings),
                        smoother,
                        std::move(raw),
                        std::move(smoothed),
                        std::move(partial),
                        std::move(stats),
                        flagged,
                        inverse.ridged_count(),
                        smoothing_report.ridge_skipped,
                        timings};
}

namespace {

std::vector<std::string> type_names(const MarkedPointPattern& pattern) {
  std::vector<std::string> names;
  names.reserve(pattern.types.size());
  for (const auto& t : pattern.types) names.push_back(t.name);
  return names;
}

class OutputTracker {
 public:
  void write(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
    written_.push_back(path);
    out << content;
    if (!out.good()) throw std::runtime_error("write to '" + path + "' failed");
  }

  void discard_all() {
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  std::vector<std::string> written_;
};

std::string render_report(const AnalysisConfig& config, const PipelineResult& r,
                          const std::vector<DependenceGraph>& graphs,
                          const std::vector<std::string>& artifact_paths) {
  std::ostringstream out;
  const auto& pattern = r.prepared;
  out << "analysis report\n";
  out << "input: " << config.input_path << "\n";
  out << "points: " << pattern.points.size() << "\n";
  out << "types: " << pattern.dim() << "\n";
  for (std::size_t i = 0; i < pattern.types.size(); ++i) {
    const auto& t = pattern.types[i];
    out << "  [" << i << "] " << t.name << " n=" << t.count
        << " mark_mean=" << format_double(t.mark_mean) << "\n";
  }
  if (!r.dropped.empty()) {
    out << "dropped types (fewer than " << config.options.min_count << " points):";
    for (const auto& name : r.dropped) out << " " << name;
    out << "\n";
  }
  out << "grid: p_max=" << r.raw.grid().p_max() << " q_max=" << r.raw.grid().q_max() << " ("
      << r.raw.grid().size() << " frequencies, DC excluded downstream)\n";
  out << "smoothing: kernel=" << smoothing_kernel_name(r.smoother.kernel)
      << " bandwidth=" << r.smoother.half_width << " ridge=" << format_double(r.smoother.ridge)
      << "\n";
  out << "flagged frequencies: " << r.flagged_frequencies << "\n";
  out << "ridge retries during inversion: " << r.ridged_frequencies << "\n";
  for (const auto& g : graphs)
    out << "alpha=" << format_alpha(g.alpha) << ": " << g.edges.size() << " edge(s)\n";
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  out << "artifacts:\n";
  for (const auto& p : artifact_paths) out << "  " << p << "\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "timing: dft %.3fs, smoothing %.3fs, inversion %.3fs, total %.3fs\n",
                r.timings.dft_seconds, r.timings.smooth_seconds, r.timings.invert_seconds,
                r.timings.total_seconds);
  out << buf;
  return out.str();
}

}  // namespace

void write_edge_statistics(const EdgeStatisticMatrix& stats,
                           const std::vector<std::string>& names, std::ostream& out) {
  out << "type";
  for (const auto& n : names) out << "," << n;
  out << "\n";
  for (std::size_t i = 0; i < stats.dim; ++i) {
    out << names[i];
    for (std::size_t j = 0; j < stats.dim; ++j) out << "," << format_double(stats.at(i, j));
    out << "\n";
  }
}

AnalyzeResult run_analyze(const AnalysisConfig& config) {
  LoadDiagnostics diagnostics;
  const MarkedPointPattern loaded = load_pattern_file(config.input_path, config.load, &diagnostics);

  PipelineResult pipeline = analyze_pattern(loaded, config.options);
  pipeline.warnings.insert(pipeline.warnings.begin(), diagnostics.warnings.begin(),
                           diagnostics.warnings.end());

  const auto names = type_names(pipeline.prepared);
  std::vector<DependenceGraph> graphs;
  graphs.reserve(config.options.alphas.size());
  for (double alpha : config.options.alphas) graphs.push_back(build_msdgm(pipeline.stats, names, alpha));

  OutputTracker tracker;
  try {
    std::filesystem::create_directories(config.output_dir);
    const std::filesystem::path dir(config.output_dir);
    for (const auto& g : graphs) {
      const std::string stem = "graph_alpha_" + format_alpha(g.alpha);
      tracker.write((dir / (stem + ".dot")).string(), export_graph(g, GraphFormat::dot));
      tracker.write((dir / (stem + ".json")).string(), export_graph(g, GraphFormat::json));
    }
    {
      std::ostringstream stats_text;
      write_edge_statistics(pipeline.stats, names, stats_text);
      tracker.write((dir / "edge_statistics.csv").string(), stats_text.str());
    }
    std::vector<std::string> artifact_paths = tracker.written();
    const std::string report_path = (dir / "report.txt").string();
    artifact_paths.push_back(report_path);
    tracker.write(report_path, render_report(config, pipeline, graphs, artifact_paths));
  } catch (...) {
    tracker.discard_all();
    throw;
  }

  return AnalyzeResult{std::move(pipeline), std::move(graphs), tracker.written()};
}

SimulateRunResult run_simulate(const std::string& spec_path, const std::string& output_path) {
  const SimulationSpec spec = read_simulation_spec_file(spec_path);
  SimulateRunResult result{simulate_pattern(spec), output_path, {}};
  for (const auto& c : spec.couplings) {
    std::ostringstream line;
    line << result.pattern.types[c.source].name << "," << result.pattern.types[c.target].name
         << ",rho=" << format_double(c.rho) << ",sigma=" << format_double(c.sigma);
    result.ground_truth.push_back(line.str());
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write pattern file '" + output_path + "'");
  write_pattern_csv(result.pattern, out);
  if (!out.good()) throw std::runtime_error("write to '" + output_path + "' failed");
  return result;
}

RecoveryStudyResult run_recovery_study(const SimulationSpec& spec, int replicates,
                                       const AnalysisOptions& options) {
  if (replicates < 1) throw std::runtime_error("recovery study needs at least 1 replicate");
  validate_simulation_spec(spec);

  RecoveryStudyResult result;
  std::set<std::pair<int, int>> truth;
  for (const auto& c : spec.couplings) {
    if (c.rho <= 0.0) continue;  // a rho=0 coupling is no dependence at all
    truth.insert(std::minmax(c.source, c.target));
  }
  result.true_pairs.assign(truth.begin(), truth.end());

  const std::size_t pair_total =
      static_cast<std::size_t>(spec.dim) * (spec.dim - 1) / 2;
  const std::size_t negatives = pair_total - truth.size();

  struct Accumulator {
    double tp_rate_sum = 0.0;
    double fp_count_sum = 0.0;
    double fp_rate_sum = 0.0;
  };
  std::vector<Accumulator> acc(options.alphas.size());

  for (int r = 0; r < replicates; ++r) {
    SimulationSpec replicate_spec = spec;
    replicate_spec.seed = spec.seed + static_cast<std::uint64_t>(r);
    const MarkedPointPattern pattern = simulate_pattern(replicate_spec);
    const PipelineResult pipeline = analyze_pattern(pattern, options);
    const auto names = type_names(pipeline.prepared);

    for (std::size_t a = 0; a < options.alphas.size(); ++a) {
      const DependenceGraph graph = build_msdgm(pipeline.stats, names, options.alphas[a]);
      int tp = 0, fp = 0;
      for (const auto& e : graph.edges) {
        if (truth.count(e))
          ++tp;
        else
          ++fp;
      }
      RecoveryRow row;
      row.replicate = r;
      row.alpha = options.alphas[a];
      row.true_positives = tp;
      row.false_positives = fp;
      row.tp_rate = truth.empty() ? std::nan("") : static_cast<double>(tp) / truth.size();
      row.fp_rate = negatives == 0 ? std::nan("") : static_cast<double>(fp) / negatives;
      result.rows.push_back(row);

      acc[a].tp_rate_sum += truth.empty() ? 0.0 : row.tp_rate;
      acc[a].fp_count_sum += fp;
      acc[a].fp_rate_sum += negatives == 0 ? 0.0 : row.fp_rate;
    }
  }

  for (std::size_t a = 0; a < options.alphas.size(); ++a) {
    RecoverySummary s;
    s.alpha = options.alphas[a];
    s.mean_tp_rate = truth.empty() ? std::nan("") : acc[a].tp_rate_sum / replicates;
    s.mean_fp_count = acc[a].fp_count_sum / replicates;
    s.mean_fp_rate = negatives == 0 ? std::nan("") : acc[a].fp_rate_sum / replicates;
    result.summary.push_back(s);
  }
  return result;
}

void write_recovery_rows(const RecoveryStudyResult& result, std::ostream& out) {
  out << "replicate,alpha,true_positives,false_positives,tp_rate,fp_rate\n";
  for (const auto& r : result.rows) {
    out << r.replicate << "," << format_alpha(r.alpha) << "," << r.true_positives << ","
        << r.false_positives << "," << format_double(r.tp_rate) << ","
        << format_double(r.fp_rate) << "\n";
  }
}

void write_recovery_summary(const RecoveryStudyResult& result, std::ostream& out) {
  out << "alpha,mean_tp_rate,mean_fp_count,mean_fp_rate\n";
  for (const auto& s : result.summary) {
    out << format_alpha(s.alpha) << "," << format_double(s.mean_tp_rate) << ","
        << format_double(s.mean_fp_count) << "," << format_double(s.mean_fp_rate) << "\n";
  }
}

void dump_spectra(const PipelineResult& result, DumpKind kind, std::ostream& out) {
  const bool partial = kind == DumpKind::partial;
  const auto& grid = result.raw.grid();
  if (partial) {
    out << "p,q,i,j,abs_d\n";
    const auto& field = result.partial;
    for (std::size_t f = 0; f < grid.size(); ++f) {
      if (!field.usable(f)) continue;
      const auto pq = grid.at(f);
      for (std::size_t i = 0; i + 1 < field.dim(); ++i)
        for (std::size_t j = i + 1; j < field.dim(); ++j)
          out << pq.p << "," << pq.q << "," << i << "," << j << ","
              << format_double(field.strength(f, i, j)) << "\n";
    }
    return;
  }
  const SpectralMatrixField& field = kind == DumpKind::raw ? result.raw : result.smoothed;
  out << "p,q,i,j,re,im\n";
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto pq = grid.at(f);
    for (std::size_t i = 0; i < field.dim(); ++i) {
      for (std::size_t j = i; j < field.dim(); ++j) {
        const cdouble v = field.at(f, i, j);
        out << pq.p << "," << pq.q << "," << i << "," << j << "," << format_double(v.real())
            << "," << format_double(v.imag()) << "\n";
      }
    }
  }
}

}  // namespace msdg
