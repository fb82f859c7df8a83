#include "cli.hpp"

#include "qsteer/efficiency.hpp"
#include "qsteer/experiment_sim.hpp"
#include "qsteer/lhs_bound.hpp"
#include "qsteer/measurement_sets.hpp"
#include "qsteer/noise.hpp"
#include "qsteer/steering_eval.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsteer::cli {
namespace {

constexpr double kPi = std::numbers::pi;

// 17 significant digits: enough for binary64 values to round-trip exactly.
std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string pattern_string(const std::vector<int>& pattern) {
  std::string s;
  for (int v : pattern) s += v > 0 ? '+' : '-';
  return s;
}

ThetaGrid resolve_grid(const std::string& text, bool degrees) {
  ThetaGrid grid;
  if (text.empty()) return grid;  // default grid is already in radians
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') ||
      !std::getline(in, c) || c.find(':') != std::string::npos) {
    throw std::invalid_argument("grid must be start:stop:count");
  }
  try {
    std::size_t used = 0;
    grid.start = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    grid.stop = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    grid.count = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument(c);
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must be start:stop:count with numeric fields");
  }
  if (degrees) {
    grid.start *= kPi / 180.0;
    grid.stop *= kPi / 180.0;
  }
  return grid;
}

std::vector<MeasurementSet> resolve_sets(const std::vector<std::string>& labels,
                                         const std::vector<std::string>& files,
                                         std::ostream& err,
                                         std::initializer_list<SetLabel> fallback) {
  std::vector<MeasurementSet> sets;
  for (const std::string& name : labels) {
    sets.push_back(make_set(parse_set_label(name)));
  }
  for (const std::string& path : files) sets.push_back(load_set_file(path, &err));
  if (sets.empty()) {
    for (SetLabel label : fallback) sets.push_back(make_set(label));
  }
  return sets;
}

// Streams either to an --output file or to the caller's stdout.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file: " + path);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// curves_out.csv + "square" -> curves_out_square.csv
std::string with_suffix(const std::string& path, const std::string& tag) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "_" + tag;
  }
  return path.substr(0, dot) + "_" + tag + path.substr(dot);
}

NoiseKind parse_kind(const std::string& name) {
  if (name == "none") return NoiseKind::none;
  if (name == "colored") return NoiseKind::colored;
  if (name == "white") return NoiseKind::white;
  throw std::invalid_argument("unknown noise kind: " + name);
}

struct CommonOptions {
  std::vector<std::string> set_labels;
  std::vector<std::string> set_files;
  std::string grid_spec;
  bool degrees = false;
  std::string format = "csv";
  std::string output;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_grid) {
  cmd->add_option("--set", opt.set_labels,
                  "named measurement set (repeatable): square, octahedron, "
                  "custom4, custom5, icosahedron, dodecahedron, cube4, continuum");
  cmd->add_option("--set-file", opt.set_files,
                  "file with one direction per line (three numbers)");
  if (with_grid) {
    cmd->add_option("--grid", opt.grid_spec,
                    "theta grid as start:stop:count (default 0.001:pi/2:200)");
    cmd->add_flag("--degrees", opt.degrees, "interpret angle inputs as degrees");
  }
  cmd->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output", opt.output, "write to this file instead of stdout");
}

void cmd_bounds(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  const std::vector<MeasurementSet> sets = resolve_sets(
      opt.set_labels, opt.set_files, err,
      {SetLabel::square, SetLabel::octahedron, SetLabel::custom4, SetLabel::custom5,
       SetLabel::icosahedron, SetLabel::dodecahedron, SetLabel::cube4});
  OutputTarget target(opt.output, out);
  std::ostream& os = target.stream();
  if (opt.format == "json") {
    nlohmann::json report = nlohmann::json::array();
    for (const MeasurementSet& set : sets) {
      const SteeringBound bound = lhs_bound(set);
      nlohmann::json patterns = nlohmann::json::array();
      nlohmann::json states = nlohmann::json::array();
      for (std::size_t i = 0; i < bound.maximizing_patterns.size(); ++i) {
        patterns.push_back(pattern_string(bound.maximizing_patterns[i]));
        const Vec3 bloch = bound.saturating_states[i].bloch();
        states.push_back({bloch.x(), bloch.y(), bloch.z()});
      }
      report.push_back({{"set", set.name},
                        {"n", set.n()},
                        {"c_n", bound.c_n},
                        {"c_prime_n", bound.c_prime_n},
                        {"patterns", patterns},
                        {"saturating_states", states}});
    }
    os << report.dump(2) << '\n';
    return;
  }
  os << "set,n,c_n,c_prime_n,pattern,state_x,state_y,state_z\n";
  for (const MeasurementSet& set : sets) {
    const SteeringBound bound = lhs_bound(set);
    const std::string prefix = set.name + "," + std::to_string(set.n()) + "," +
                               fmt(bound.c_n) + "," + fmt(bound.c_prime_n);
    if (bound.maximizing_patterns.empty()) {
      os << prefix << ",,,,\n";  // continuum: the bound has no finite patterns
      continue;
    }
    for (std::size_t i = 0; i < bound.maximizing_patterns.size(); ++i) {
      const Vec3 bloch = bound.saturating_states[i].bloch();
      os << prefix << "," << pattern_string(bound.maximizing_patterns[i]) << ","
         << fmt(bloch.x()) << "," << fmt(bloch.y()) << "," << fmt(bloch.z())
         << "\n";
    }
  }
}

void write_eta_csv(std::ostream& os, const EfficiencyCurve& curve,
                   const ThetaGrid& grid) {
  os << "# set = " << curve.set_name << ", n = " << curve.n << "\n";
  os << "# grid = " << fmt(grid.start) << ":" << fmt(grid.stop) << ":" << grid.count
     << "\n";
  os << "theta,eta_c\n";
  for (const CurvePoint& p : curve.samples) {
    os << fmt(p.theta) << "," << fmt(p.eta) << "\n";
  }
}

void cmd_eta(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  const std::vector<MeasurementSet> sets = resolve_sets(
      opt.set_labels, opt.set_files, err,
      {SetLabel::square, SetLabel::octahedron, SetLabel::custom4, SetLabel::custom5,
       SetLabel::icosahedron, SetLabel::continuum});
  const ThetaGrid grid = resolve_grid(opt.grid_spec, opt.degrees);
  std::vector<EfficiencyCurve> curves;
  curves.reserve(sets.size());
  for (const MeasurementSet& set : sets) curves.push_back(efficiency_curve(set, grid));

  if (opt.format == "json") {
    nlohmann::json report = nlohmann::json::array();
    for (const EfficiencyCurve& curve : curves) {
      nlohmann::json samples = nlohmann::json::array();
      for (const CurvePoint& p : curve.samples) {
        samples.push_back({{"theta", p.theta}, {"eta", p.eta}});
      }
      report.push_back(
          {{"set", curve.set_name}, {"n", curve.n}, {"samples", samples}});
    }
    OutputTarget target(opt.output, out);
    target.stream() << report.dump(2) << '\n';
    return;
  }
  if (!opt.output.empty() && curves.size() > 1) {
    // Figure-ready: one file per curve.
    for (const EfficiencyCurve& curve : curves) {
      const std::string path = with_suffix(opt.output, curve.set_name);
      std::ofstream file(path);
      if (!file) throw std::invalid_argument("cannot open output file: " + path);
      write_eta_csv(file, curve, grid);
      err << "wrote " << path << "\n";
    }
    return;
  }
  OutputTarget target(opt.output, out);
  for (const EfficiencyCurve& curve : curves) write_eta_csv(target.stream(), curve, grid);
}

struct NoiseOptions {
  CommonOptions common;
  std::vector<double> epsilons{0.1};
  std::string kind = "colored";
  bool crossover_only = false;
};

void cmd_noise(const NoiseOptions& opt, std::ostream& out, std::ostream& err) {
  const std::vector<MeasurementSet> sets = resolve_sets(
      opt.common.set_labels, opt.common.set_files, err, {SetLabel::icosahedron});
  if (sets.size() != 1) {
    throw std::invalid_argument("noise works on exactly one measurement set");
  }
  const MeasurementSet& set = sets.front();
  const NoiseKind kind = parse_kind(opt.kind);
  const ThetaGrid grid = resolve_grid(opt.common.grid_spec, opt.common.degrees);
  const double c_n = lhs_bound(set).c_n;

  if (opt.crossover_only) {
    if (kind != NoiseKind::colored) {
      throw std::invalid_argument(
          "--crossover applies to colored noise (the white-noise threshold "
          "diverges before any crossover)");
    }
    const double eps_star = crossover_epsilon(set);
    OutputTarget target(opt.common.output, out);
    if (opt.common.format == "json") {
      const nlohmann::json report = {{"set", set.name},
                                     {"n", set.n()},
                                     {"kind", opt.kind},
                                     {"c_n", c_n},
                                     {"crossover_epsilon", eps_star}};
      target.stream() << report.dump(2) << '\n';
    } else {
      target.stream() << "set,n,kind,crossover_epsilon\n"
                      << set.name << "," << set.n() << "," << opt.kind << ","
                      << fmt(eps_star) << "\n";
    }
    return;
  }

  std::vector<NoiseCurve> curves;
  std::vector<NoiseMinimum> minima;
  for (double eps : opt.epsilons) {
    curves.push_back(noise_curve(set, eps, kind, grid));
    minima.push_back(min_over_theta(set, eps, kind));
  }
  const bool has_crossover = kind == NoiseKind::colored && !set.is_continuum();
  const double eps_star = has_crossover ? crossover_epsilon(set) : 0.0;

  OutputTarget target(opt.common.output, out);
  std::ostream& os = target.stream();
  if (opt.common.format == "json") {
    nlohmann::json report = {{"set", set.name},
                             {"n", set.n()},
                             {"kind", opt.kind},
                             {"c_n", c_n}};
    nlohmann::json curve_list = nlohmann::json::array();
    for (std::size_t i = 0; i < curves.size(); ++i) {
      nlohmann::json samples = nlohmann::json::array();
      for (const CurvePoint& p : curves[i].samples) {
        samples.push_back({{"theta", p.theta}, {"eta", p.eta}});
      }
      curve_list.push_back({{"epsilon", opt.epsilons[i]},
                            {"samples", samples},
                            {"theta_star", minima[i].theta_star},
                            {"eta_star", minima[i].eta_star}});
    }
    report["curves"] = curve_list;
    if (has_crossover) report["crossover_epsilon"] = eps_star;
    os << report.dump(2) << '\n';
    return;
  }
  os << "# set = " << set.name << ", n = " << set.n() << ", kind = " << opt.kind
     << "\n";
  os << "# grid = " << fmt(grid.start) << ":" << fmt(grid.stop) << ":" << grid.count
     << "\n";
  // Reference line of the figures: the noiseless maximally-entangled threshold.
  os << "# c_n = " << fmt(c_n) << "\n";
  os << "theta";
  for (double eps : opt.epsilons) os << ",eta[eps=" << eps << "]";
  os << "\n";
  for (std::size_t row = 0; row < curves.front().samples.size(); ++row) {
    os << fmt(curves.front().samples[row].theta);
    for (const NoiseCurve& curve : curves) os << "," << fmt(curve.samples[row].eta);
    os << "\n";
  }
  for (std::size_t i = 0; i < minima.size(); ++i) {
    os << "# min: epsilon=" << fmt(opt.epsilons[i])
       << " theta_star=" << fmt(minima[i].theta_star)
       << " eta_star=" << fmt(minima[i].eta_star) << "\n";
  }
  if (has_crossover) os << "# crossover_epsilon = " << fmt(eps_star) << "\n";
}

struct SimulateOptions {
  CommonOptions common;
  std::string adversary = "quantum";
  double theta = std::numeric_limits<double>::quiet_NaN();
  double eta = 1.0;
  double bob_eta = 1.0;
  double epsilon = 0.0;
  std::string kind = "none";
  std::uint64_t rounds = 1000000;
  std::uint64_t seed = 0;
  double sigma = 5.0;
};

void cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.common.format != "json") {
    throw std::invalid_argument("simulate reports a structured tally; only --format json");
  }
  const std::vector<MeasurementSet> sets = resolve_sets(
      opt.common.set_labels, opt.common.set_files, err, {SetLabel::octahedron});
  if (sets.size() != 1) {
    throw std::invalid_argument("simulate works on exactly one measurement set");
  }
  if (sets.front().is_continuum()) {
    throw std::invalid_argument("simulate needs a finite measurement set");
  }
  const MeasurementSet set = align_set(sets.front());
  const SteeringBound bound = lhs_bound(set);

  ExperimentTally tally;
  if (opt.adversary == "quantum") {
    if (std::isnan(opt.theta)) {
      throw std::invalid_argument("simulate --adversary quantum needs --theta");
    }
    const double theta = opt.common.degrees ? opt.theta * kPi / 180.0 : opt.theta;
    const NoiseKind kind = parse_kind(opt.kind);
    TwoQubitState state;
    switch (kind) {
      case NoiseKind::none:
        if (opt.epsilon != 0.0) {
          throw std::invalid_argument("--epsilon needs --kind colored or white");
        }
        state = pure_state(theta);
        break;
      case NoiseKind::colored: state = colored_state(theta, opt.epsilon); break;
      case NoiseKind::white: state = white_state(theta, opt.epsilon); break;
    }
    const AliceSettings alice = optimal_alice(theta, set);
    tally = simulate_quantum(state, alice, set, opt.eta, opt.rounds, opt.seed,
                             opt.bob_eta);
  } else if (opt.adversary == "lhs") {
    const LHSStrategy strategy = saturating_strategy(set, bound);
    tally = simulate_lhs(strategy, set, opt.rounds, opt.seed);
  } else {
    throw std::invalid_argument("unknown adversary: " + opt.adversary);
  }

  const Verdict v = verdict(tally, bound, opt.sigma);
  OutputTarget target(opt.common.output, out);
  write_tally_json(target.stream(), tally, v);
  err << "note: std_error uses independent binomial propagation per setting; "
         "correlations between the joint and marginal counts are ignored, so "
         "the error bar is conservative\n";
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"steering bounds, critical detection efficiencies and "
               "finite-sample steering experiments"};
  app.name("qsteer");
  app.require_subcommand(1);

  CommonOptions bounds_opt;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "local-hidden-state bounds C_n and their maximizers");
  add_common(bounds_cmd, bounds_opt, false);

  CommonOptions eta_opt;
  CLI::App* eta_cmd = app.add_subcommand(
      "eta", "critical detection efficiency as a function of entanglement");
  add_common(eta_cmd, eta_opt, true);

  NoiseOptions noise_opt;
  CLI::App* noise_cmd = app.add_subcommand(
      "noise", "critical efficiency of noisy states, minima and crossover");
  add_common(noise_cmd, noise_opt.common, true);
  noise_cmd->add_option("--epsilon", noise_opt.epsilons,
                        "noise weight (repeatable, default 0.1)");
  noise_cmd->add_option("--kind", noise_opt.kind, "noise model")
      ->check(CLI::IsMember({"colored", "white", "none"}));
  noise_cmd->add_flag("--crossover", noise_opt.crossover_only,
                      "report only the colored-noise crossover epsilon");

  SimulateOptions sim_opt;
  sim_opt.common.format = "json";  // the tally is structured; there is no CSV shape
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "finite-sample steering test against a quantum or LHS source");
  add_common(sim_cmd, sim_opt.common, false);
  sim_cmd->add_flag("--degrees", sim_opt.common.degrees,
                    "interpret --theta as degrees");
  sim_cmd->add_option("--adversary", sim_opt.adversary, "source to simulate")
      ->check(CLI::IsMember({"quantum", "lhs"}));
  sim_cmd->add_option("--theta", sim_opt.theta, "entanglement parameter");
  sim_cmd->add_option("--eta", sim_opt.eta, "Alice-side detection efficiency");
  sim_cmd->add_option("--bob-eta", sim_opt.bob_eta,
                      "Bob-side detection efficiency (his null rounds are discarded)");
  sim_cmd->add_option("--epsilon", sim_opt.epsilon, "noise weight for the source");
  sim_cmd->add_option("--kind", sim_opt.kind, "noise model for the source")
      ->check(CLI::IsMember({"none", "colored", "white"}));
  sim_cmd->add_option("--rounds", sim_opt.rounds, "number of rounds");
  sim_cmd->add_option("--seed", sim_opt.seed, "RNG seed");
  sim_cmd->add_option("--sigma", sim_opt.sigma, "claim threshold in standard errors");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (bounds_cmd->parsed()) {
      cmd_bounds(bounds_opt, out, err);
    } else if (eta_cmd->parsed()) {
      cmd_eta(eta_opt, out, err);
    } else if (noise_cmd->parsed()) {
      cmd_noise(noise_opt, out, err);
    } else if (sim_cmd->parsed()) {
      cmd_simulate(sim_opt, out, err);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace qsteer::cli
