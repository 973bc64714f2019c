#pragma once

// Experiment subcommands behind the command-line tool. Everything is
// validated and computed before any file is touched; files are written to
// temporaries and renamed into place, and removed again on failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rfdmrp/config.hpp"
#include "rfdmrp/csv.hpp"
#include "rfdmrp/graph_spec.hpp"
#include "rfdmrp/rfd.hpp"
#include "rfdmrp/shortest_path.hpp"
#include "rfdmrp/simulator.hpp"

namespace rfdmrp::experiment {

enum class Subcommand { Run, Compare, SweepDensity, SweepGamma, RfdDemo };

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kIoFailure = 2,
  kDisconnectedSource = 3,
  kNoPathFound = 4,
};

struct ExperimentSpec {
  Subcommand subcommand = Subcommand::Run;
  std::string configPath;
  std::string outputDir = "out";
  std::vector<std::string> overrides;
  std::vector<std::uint64_t> seeds;
  std::optional<Protocol> protocol;
  std::vector<double> values;  // sweep points; defaults per subcommand
  std::string graphPath;       // rfd-demo only
  bool gnuplotScript = false;
};

inline const std::vector<double>& default_density_points() {
  static const std::vector<double> v{25, 50, 100, 150, 200};
  return v;
}

inline const std::vector<double>& default_gamma_points() {
  static const std::vector<double> v{0.0, 0.25, 0.5, 0.75, 1.0};
  return v;
}

inline constexpr std::size_t kDefaultSweepSeeds = 10;

/// Named file contents staged in memory.
using OutputSet = std::vector<std::pair<std::string, std::string>>;

/// Writes every file or none. Returns false and reports on failure.
inline bool commit(const std::filesystem::path& dir, const OutputSet& files, std::ostream& err) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create " << dir.string() << ": " << ec.message() << '\n';
    return false;
  }
  std::vector<fs::path> written;
  auto rollback = [&] {
    for (const auto& p : written) fs::remove(p, ec);
  };
  for (const auto& [name, contents] : files) {
    const fs::path target = dir / name;
    const fs::path temp = dir / (name + ".tmp");
    {
      std::ofstream out(temp, std::ios::binary | std::ios::trunc);
      out << contents;
      out.flush();
      if (!out) {
        fs::remove(temp, ec);
        rollback();
        err << "error: failed writing " << target.string() << '\n';
        return false;
      }
    }
    fs::rename(temp, target, ec);
    if (ec) {
      fs::remove(temp, ec);
      rollback();
      err << "error: failed writing " << target.string() << '\n';
      return false;
    }
    written.push_back(target);
  }
  return true;
}

namespace detail {

inline std::vector<std::uint64_t> resolve_seeds(const ExperimentSpec& spec, const SimConfig& base,
                                                std::size_t defaultCount) {
  if (!spec.seeds.empty()) return spec.seeds;
  std::vector<std::uint64_t> seeds;
  for (std::size_t k = 0; k < defaultCount; ++k) seeds.push_back(base.seed + k);
  return seeds;
}

inline std::string round_csv(const std::vector<const SimulationResult*>& runs) {
  std::ostringstream out;
  csv::write_round_header(out);
  for (const auto* run : runs) csv::write_round_rows(out, run->rounds);
  return out.str();
}

inline std::string summary_csv(const std::vector<LifetimeRecord>& records) {
  std::ostringstream out;
  csv::write_summary(out, records);
  return out.str();
}

inline std::string median_csv(const std::vector<LifetimeRecord>& records) {
  std::ostringstream out;
  csv::write_medians(out, median_table(records));
  return out.str();
}

inline std::string rounds_gnuplot(const std::vector<std::string>& roundFiles) {
  std::ostringstream gp;
  gp << "set datafile separator ','\nset key outside\nset xlabel 'Round'\n";
  const std::vector<std::pair<int, std::string>> series{
      {4, "Dead nodes"}, {5, "Alive nodes"}, {6, "Remaining energy (J)"},
      {7, "Packets to BS"}, {8, "Direct to BS (hop 0)"}};
  for (const auto& [column, label] : series) {
    gp << "set ylabel '" << label << "'\nplot ";
    for (std::size_t k = 0; k < roundFiles.size(); ++k)
      gp << (k ? ", " : "") << "'" << roundFiles[k] << "' using 3:" << column
         << " every ::1 with lines title '" << roundFiles[k] << "'";
    gp << "\npause -1\n";
  }
  return gp.str();
}

inline std::string sweep_gnuplot(const std::string& paramName) {
  std::ostringstream gp;
  gp << "set datafile separator ','\nset xlabel '" << paramName
     << "'\nset ylabel 'Network lifetime (rounds)'\n";
  gp << "plot for [p in 'RFDMRP LEACH MODLEACH'] 'summary_median.csv' using "
        "(strcol(1) eq p ? $3 : 1/0):7 every ::1 with linespoints title p\npause -1\n";
  return gp.str();
}

inline std::vector<LifetimeRecord> lifetimes_of(const std::vector<SimulationResult>& runs) {
  std::vector<LifetimeRecord> records;
  for (const auto& r : runs)
    records.push_back(LifetimeRecord{r.config.protocol, "none", 0.0, r.config.seed, r.lifetime});
  return records;
}

inline int simulate(const ExperimentSpec& spec, const SimConfig& base, std::ostream& out,
                    std::ostream& err) {
  std::vector<Protocol> protocols;
  if (spec.subcommand == Subcommand::Run)
    protocols = {spec.protocol.value_or(base.protocol)};
  else
    protocols = spec.protocol ? std::vector<Protocol>{*spec.protocol} : all_protocols();
  const auto seeds = resolve_seeds(spec, base, 1);

  std::vector<SimConfig> configs;
  for (Protocol p : protocols)
    for (std::uint64_t seed : seeds) {
      SimConfig c = base;
      c.protocol = p;
      c.seed = seed;
      configs.push_back(c);
    }
  const auto runs = run_batch(configs);

  OutputSet files;
  std::vector<std::string> roundFiles;
  std::vector<const SimulationResult*> everything;
  for (Protocol p : protocols) {
    std::vector<const SimulationResult*> mine;
    for (const auto& r : runs)
      if (r.config.protocol == p) mine.push_back(&r);
    everything.insert(everything.end(), mine.begin(), mine.end());
    const std::string name = "rounds_" + std::string(to_string(p)) + ".csv";
    files.emplace_back(name, round_csv(mine));
    roundFiles.push_back(name);
  }
  if (spec.subcommand == Subcommand::Compare) files.emplace_back("rounds_all.csv", round_csv(everything));
  const auto records = lifetimes_of(runs);
  files.emplace_back("summary.csv", summary_csv(records));
  files.emplace_back("summary_median.csv", median_csv(records));
  if (spec.gnuplotScript) files.emplace_back("plot.gp", rounds_gnuplot(roundFiles));

  if (!commit(spec.outputDir, files, err)) return kIoFailure;
  for (const auto& r : records)
    out << to_string(r.protocol) << " seed " << r.seed << ": first death " << r.lifetime.firstDeath
        << ", half " << r.lifetime.halfDeath << ", last " << r.lifetime.lastDeath
        << (r.lifetime.censored ? " (censored)" : "") << '\n';
  return kOk;
}

inline int run_sweep(const ExperimentSpec& spec, const SimConfig& base, std::ostream& out,
                     std::ostream& err) {
  const auto seeds = resolve_seeds(spec, base, kDefaultSweepSeeds);
  const auto protocols = spec.protocol ? std::vector<Protocol>{*spec.protocol} : all_protocols();
  std::vector<LifetimeRecord> records;
  std::string paramName;
  if (spec.subcommand == Subcommand::SweepDensity) {
    const auto& points = spec.values.empty() ? default_density_points() : spec.values;
    std::vector<std::size_t> counts;
    for (double v : points) {
      if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
        throw std::invalid_argument("node counts must be positive integers");
      counts.push_back(static_cast<std::size_t>(v));
    }
    records = sweep_density(base, counts, seeds, protocols);
    paramName = "node_count";
  } else {
    const auto& points = spec.values.empty() ? default_gamma_points() : spec.values;
    records = sweep_gamma(base, points, seeds, protocols);
    paramName = "gamma";
  }
  OutputSet files{{"summary.csv", summary_csv(records)},
                  {"summary_median.csv", median_csv(records)}};
  if (spec.gnuplotScript) files.emplace_back("plot.gp", sweep_gnuplot(paramName));
  if (!commit(spec.outputDir, files, err)) return kIoFailure;
  for (const auto& m : median_table(records))
    out << to_string(m.protocol) << ' ' << paramName << '=' << csv::format_param(m.paramValue)
        << ": median last death " << csv::format_real(m.lastDeath) << " over " << m.runs
        << " runs\n";
  return kOk;
}

inline std::string format_path(const rfd::Path& path, const std::vector<long long>& labels) {
  std::string s;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k) s += '-';
    s += std::to_string(labels[path[k]]);
  }
  return s;
}

}  // namespace detail

/// Runs the river-formation optimizer on a graph file for every seed and
/// prints each source's path next to the Dijkstra reference.
inline int rfd_demo(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  std::ifstream in(spec.graphPath);
  if (!in) {
    err << "error: cannot open graph spec " << spec.graphPath << '\n';
    return kIoFailure;
  }
  rfd::GraphSpec graphSpec;
  rfd::RfdParams params;
  try {
    graphSpec = rfd::parse_graph_spec(in);
    params = config::rfd_params_from(spec.overrides);
  } catch (const std::exception& e) {
    err << "error: " << spec.graphPath << ": " << e.what() << '\n';
    return kInvalidInput;
  }
  const auto& labels = graphSpec.labels;
  const rfd::TerrainGraph& declared = graphSpec.graph;

  // Disconnected sources are reported and left out of the run.
  rfd::TerrainGraph graph = declared;
  graph.clear_sources();
  std::vector<std::optional<rfd::ShortestPath>> oracle;
  int status = kOk;
  for (rfd::Vertex s : declared.sources()) {
    auto best = rfd::dijkstra(declared, s, declared.destination());
    if (!best) {
      out << "source " << labels[s] << ": disconnected from destination\n";
      status = kDisconnectedSource;
      continue;
    }
    graph.add_source(s);
    oracle.push_back(std::move(best));
  }
  if (graph.sources().empty()) return status;

  const std::vector<std::uint64_t> seeds = spec.seeds.empty() ? std::vector<std::uint64_t>{1} : spec.seeds;
  out << std::fixed << std::setprecision(6);
  for (std::uint64_t seed : seeds) {
    Rng rng = make_stream(seed, StreamPurpose::RiverFormation);
    const rfd::RfdResult result = rfd::run_rfd(graph, params, rng);
    for (std::size_t k = 0; k < result.sources.size(); ++k) {
      const auto& sr = result.sources[k];
      const auto& best = *oracle[k];
      out << "seed " << seed << " source " << labels[sr.source] << ": ";
      if (!sr.path) {
        out << "rfd none (no path found); oracle " << detail::format_path(best.path, labels)
            << " cost " << best.cost << '\n';
        if (status == kOk) status = kNoPathFound;
        continue;
      }
      const double cost = rfd::path_cost(declared, *sr.path);
      const double ratio = best.cost > 0.0 ? cost / best.cost : 1.0;
      out << "rfd " << detail::format_path(*sr.path, labels) << " cost " << cost << "; oracle "
          << detail::format_path(best.path, labels) << " cost " << best.cost << "; ratio "
          << ratio << "; iterations " << result.iterations
          << (result.converged ? " (converged)" : "") << '\n';
    }
  }
  return status;
}

/// Entry point shared by the CLI and the integration tests.
inline int run_experiment(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  if (spec.subcommand == Subcommand::RfdDemo) return rfd_demo(spec, out, err);
  try {
    const SimConfig base = config::load_config(spec.configPath, spec.overrides);
    if (spec.subcommand == Subcommand::Run || spec.subcommand == Subcommand::Compare)
      return detail::simulate(spec, base, out, err);
    return detail::run_sweep(spec, base, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace rfdmrp::experiment
