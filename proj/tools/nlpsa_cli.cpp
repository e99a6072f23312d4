// nlpsa: design, analyse and apply phase-shifting algorithms for
// nonuniformly spaced phase steps.
//
// Exit status: 0 success, 2 usage error, 3 numerical failure (singular
// design, degenerate PCA stack), 4 I/O failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "nlpsa/demod.hpp"
#include "nlpsa/design.hpp"
#include "nlpsa/error.hpp"
#include "nlpsa/fringe.hpp"
#include "nlpsa/io.hpp"
#include "nlpsa/pca.hpp"
#include "nlpsa/spectrum.hpp"
#include "nlpsa/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlpsa::io::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int exit_code_for(nlpsa::ErrorKind kind) {
  using nlpsa::ErrorKind;
  switch (kind) {
    case ErrorKind::SingularDesign:
    case ErrorKind::DegenerateStack:
    case ErrorKind::ZeroCoefficients:
      return kExitNumerical;
    case ErrorKind::FileNotFound:
    case ErrorKind::IoError:
    case ErrorKind::FormatError:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw nlpsa::Error(nlpsa::ErrorKind::IoError,
                       fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  }
}

fs::path parent_or_cwd(const fs::path& file) {
  return file.has_parent_path() ? file.parent_path() : fs::path(".");
}

// Resolved configuration only; the thread count is deliberately left out so
// the file is identical for any parallel setting.
void write_run_metadata(const fs::path& dir, const std::string& command, const json& config) {
  json meta;
  meta["tool"] = "nlpsa";
  meta["version"] = nlpsa::kVersion;
  meta["command"] = command;
  meta["config"] = config;
  meta["seed"] = config.contains("seed") ? config["seed"] : json(nullptr);
  nlpsa::io::write_json(dir / "run-metadata.json", meta);
}

// Where a command takes its coefficients from: a design file, or inline
// steps (explicit or uniform) with an optional zero set.
struct DesignSource {
  std::string design_file;
  std::vector<double> steps;
  std::size_t uniform = 0;
  std::vector<double> zeros;
  double pass = 1.0;

  void attach(CLI::App& cmd, bool allow_file) {
    if (allow_file) cmd.add_option("--design", design_file, "Design JSON file");
    cmd.add_option("--steps", steps, "Phase steps in radians, comma separated")->delimiter(',');
    cmd.add_option("--uniform", uniform, "Use N uniform steps 2*pi*k/N");
    cmd.add_option("--zeros", zeros, "Spectral zero frequencies, comma separated")
        ->delimiter(',');
    cmd.add_option("--pass", pass, "Unit-response frequency")->capture_default_str();
  }

  nlpsa::CoefficientSet resolve() const {
    const int sources = !design_file.empty() + !steps.empty() + (uniform != 0);
    if (sources != 1) {
      throw UsageError("give exactly one of --design, --steps or --uniform");
    }
    if (!design_file.empty()) {
      if (!zeros.empty()) throw UsageError("--zeros cannot be combined with --design");
      return nlpsa::io::read_design(design_file);
    }
    if (uniform != 0 && zeros.empty() && pass == 1.0) return nlpsa::linear_lspsa(uniform);
    auto phase_steps = uniform != 0 ? nlpsa::uniform_steps(uniform) : nlpsa::PhaseSteps(steps);
    auto spec = zeros.empty() ? nlpsa::default_zero_set(phase_steps.size())
                              : nlpsa::DesignSpec::with_zeros(pass, zeros);
    return nlpsa::solve_coefficients(phase_steps, spec);
  }

  json config() const {
    json c;
    if (!design_file.empty()) c["design"] = design_file;
    if (!steps.empty()) c["steps"] = steps;
    if (uniform != 0) c["uniform"] = uniform;
    c["zeros"] = zeros.empty() ? json("default") : json(zeros);
    c["pass"] = pass;
    return c;
  }
};

// ---------------------------------------------------------------------------

struct DesignCommand {
  DesignSource source;
  std::string out;

  int run() const {
    const auto coeffs = source.resolve();
    fmt::print("{:>3}  {:>12}  {:>22}  {:>22}  {:>10}\n", "n", "theta", "re(c_n)", "im(c_n)",
               "|c_n|");
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
      const auto c = coeffs.values[n];
      fmt::print("{:>3}  {:>12.6f}  {:>22.15e}  {:>22.15e}  {:>10.6f}\n", n, coeffs.steps[n],
                 c.real(), c.imag(), std::abs(c));
    }
    fmt::print("zeros: {}\n", fmt::join(coeffs.spec.zeros(), ", "));
    fmt::print("pass frequency: {}\n", coeffs.spec.pass_omega());
    fmt::print("condition number (1-norm): {:.6g}\n", coeffs.condition_estimate);
    if (coeffs.condition_estimate > nlpsa::kConditionWarn) {
      fmt::print(stderr, "warning: design is ill-conditioned (condition number {:.3e})\n",
                 coeffs.condition_estimate);
    }
    if (!out.empty()) {
      const fs::path path(out);
      ensure_dir(parent_or_cwd(path));
      nlpsa::io::write_design(path, coeffs);
      auto config = source.config();
      config["out"] = out;
      write_run_metadata(parent_or_cwd(path), "design", config);
    }
    return kExitOk;
  }
};

struct SpectrumCommand {
  DesignSource source;
  double omega_min = -10.0;
  double omega_max = 10.0;
  std::size_t count = 2001;
  double threshold = nlpsa::kSpectralZeroTolerance;
  std::string out;

  int run(nlpsa::Parallelism par) const {
    const auto coeffs = source.resolve();
    const auto samples = nlpsa::sample_spectrum(coeffs, omega_min, omega_max, count, par);
    const fs::path path(out);
    ensure_dir(parent_or_cwd(path));
    nlpsa::io::write_spectrum_csv(path, samples);

    auto config = source.config();
    config["min"] = omega_min;
    config["max"] = omega_max;
    config["count"] = count;
    config["threshold"] = threshold;
    config["out"] = out;
    write_run_metadata(parent_or_cwd(path), "spectrum", config);

    const auto zeros = nlpsa::find_spectral_zeros(samples, threshold);
    fmt::print("{} samples on [{}, {}] written to {}\n", samples.size(), omega_min, omega_max, out);
    fmt::print("spectral zeros (|H| <= {:.0e}): {}\n", threshold, fmt::join(zeros, ", "));
    return kExitOk;
  }
};

struct SnrCommand {
  DesignSource source;
  std::vector<double> mc;

  int run(nlpsa::Parallelism par) const {
    const auto coeffs = source.resolve();
    const double pass = coeffs.spec.pass_omega();
    const double analytic = nlpsa::snr_gain(coeffs, pass);
    fmt::print("G_SNR (analytic, w={}): {:.3f}\n", pass, analytic);
    fmt::print("steps: {}\n", coeffs.size());
    if (!mc.empty()) {
      if (mc.size() != 3 || mc[0] < 0 || mc[2] < 0 || std::floor(mc[0]) != mc[0] ||
          std::floor(mc[2]) != mc[2]) {
        throw UsageError("--mc expects TRIALS SIGMA SEED");
      }
      const auto trials = static_cast<std::size_t>(mc[0]);
      const auto seed = static_cast<std::uint64_t>(mc[2]);
      const double estimate = nlpsa::mc_snr_gain(coeffs, mc[1], trials, seed, par);
      fmt::print("G_SNR (Monte Carlo, {} trials, sigma={}, seed={}): {:.3f}\n", trials, mc[1],
                 seed, estimate);
      fmt::print("relative difference: {:.3f}%\n", 100.0 * (estimate - analytic) / analytic);
    }
    return kExitOk;
  }
};

std::vector<nlpsa::Harmonic> parse_harmonics(const std::vector<std::string>& specs) {
  std::vector<nlpsa::Harmonic> out;
  for (const auto& s : specs) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) {
      throw UsageError(fmt::format("harmonic '{}' is not of the form ORDER:AMPLITUDE", s));
    }
    try {
      std::size_t used = 0;
      const int order = std::stoi(s.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("order");
      const auto rest = s.substr(colon + 1);
      const double amplitude = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("amplitude");
      out.push_back({order, amplitude});
    } catch (const std::logic_error&) {
      throw UsageError(fmt::format("harmonic '{}' is not of the form ORDER:AMPLITUDE", s));
    }
  }
  return out;
}

struct SimulateCommand {
  std::string scene = "quadratic";
  std::vector<double> params;
  std::size_t width = 128;
  std::size_t height = 128;
  std::vector<double> steps;
  std::size_t uniform = 0;
  std::optional<double> background;
  std::vector<std::string> harmonics{"1:1"};
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string out;

  int run(nlpsa::Parallelism par) const {
    if (steps.empty() == (uniform == 0)) throw UsageError("give exactly one of --steps or --uniform");
    const auto kind = nlpsa::parse_scene_kind(scene);
    auto scene_params = params;
    if (scene_params.empty()) {
      if (kind != nlpsa::SceneKind::Quadratic) throw UsageError("--params is required for this scene");
      scene_params = {3.0 * nlpsa::kPi};
    }
    const auto truth = nlpsa::synth_phase_map(kind, scene_params, width, height);
    const auto phase_steps = uniform != 0 ? nlpsa::uniform_steps(uniform) : nlpsa::PhaseSteps(steps);

    nlpsa::FringeProfile profile;
    profile.harmonics = parse_harmonics(harmonics);
    double contrast_sum = 0.0;
    for (const auto& h : profile.harmonics) contrast_sum += h.amplitude;
    profile.background = background.value_or(0.5 * contrast_sum);

    auto stack = nlpsa::simulate_stack(truth, phase_steps, profile, par);
    stack = nlpsa::add_awgn(std::move(stack), sigma, seed, par);
    nlpsa::io::write_stack(out, stack);

    json config;
    config["scene"] = scene;
    config["params"] = scene_params;
    config["width"] = width;
    config["height"] = height;
    config["steps"] = std::vector<double>(phase_steps.values().begin(), phase_steps.values().end());
    config["profile"] = nlpsa::io::profile_to_json(stack.profile);
    config["sigma"] = sigma;
    config["seed"] = seed;
    config["out"] = out;
    write_run_metadata(out, "simulate", config);
    fmt::print("wrote {} frames of {}x{} to {}\n", stack.frames.size(), width, height, out);
    return kExitOk;
  }
};

struct DemodulateCommand {
  std::string stack_dir;
  DesignSource source;
  std::string out;

  int run(nlpsa::Parallelism par) const {
    const auto stack = nlpsa::io::read_stack(stack_dir);
    const auto coeffs = source.resolve();
    const auto result = nlpsa::demodulate(stack, coeffs, par);

    const fs::path dir(out);
    ensure_dir(dir);
    nlpsa::io::write_grid_csv(dir / "phase.csv", result.phase);
    nlpsa::io::write_grid_csv(dir / "amplitude.csv", result.amplitude);
    std::size_t masked = 0;
    for (auto v : result.valid) masked += v == 0;
    fmt::print("demodulated {}x{} pixels, {} masked\n", stack.width(), stack.height(), masked);
    if (stack.truth) {
      const auto stats = nlpsa::phase_error(result.phase, *stack.truth, false);
      nlpsa::io::write_json(dir / "stats.json", nlpsa::io::stats_to_json(stats));
      fmt::print("phase error vs truth: rms {:.3e} rad, max {:.3e} rad\n", stats.rms,
                 stats.max_abs);
    }
    auto config = source.config();
    config["stack"] = stack_dir;
    config["out"] = out;
    write_run_metadata(dir, "demodulate", config);
    return kExitOk;
  }
};

struct CompareCommand {
  std::string stack_dir;
  DesignSource source;
  std::string out;

  int run(nlpsa::Parallelism par) const {
    const auto stack = nlpsa::io::read_stack(stack_dir);
    const auto coeffs = source.resolve();
    const fs::path dir(out);
    ensure_dir(dir / "nlpsa");
    ensure_dir(dir / "pca");

    json report;
    const auto nl = nlpsa::demodulate(stack, coeffs, par);
    nlpsa::io::write_grid_csv(dir / "nlpsa" / "phase.csv", nl.phase);
    nlpsa::io::write_grid_csv(dir / "nlpsa" / "amplitude.csv", nl.amplitude);
    std::optional<nlpsa::PhaseErrorStats> nl_stats;
    if (stack.truth) {
      nl_stats = nlpsa::phase_error(nl.phase, *stack.truth, false);
      nlpsa::io::write_json(dir / "nlpsa" / "stats.json", nlpsa::io::stats_to_json(*nl_stats));
      report["nlpsa"] = nlpsa::io::stats_to_json(*nl_stats);
    } else {
      report["nlpsa"] = json{{"rms", nullptr}};
    }

    std::optional<nlpsa::PhaseErrorStats> pca_stats;
    try {
      auto pca = nlpsa::pca_demodulate(stack, par);
      json pca_json;
      if (stack.truth) {
        const auto alignment = nlpsa::align_to_truth(pca, *stack.truth);
        pca_stats = alignment.stats;
        pca_json = nlpsa::io::stats_to_json(alignment.stats);
      } else {
        nlpsa::io::write_grid_csv(dir / "pca" / "phase_conjugate.csv", pca.conjugate_phase());
      }
      pca_json["sign_aligned"] = pca.sign_aligned;
      pca_json["eigenvalues"] = {pca.eigenvalues[0], pca.eigenvalues[1]};
      nlpsa::io::write_grid_csv(dir / "pca" / "phase.csv", pca.phase);
      nlpsa::io::write_json(dir / "pca" / "stats.json", pca_json);
      report["pca"] = pca_json;
    } catch (const nlpsa::Error& e) {
      if (e.kind() != nlpsa::ErrorKind::DegenerateStack) throw;
      report["pca"] = json{{"error", "DegenerateStack"}, {"message", e.what()}};
    }

    if (nl_stats && pca_stats) {
      report["separation_at_least_1e3"] = pca_stats->rms >= 1e3 * nl_stats->rms;
      report["ratio"] = nl_stats->rms > 0.0 ? json(pca_stats->rms / nl_stats->rms) : json(nullptr);
    }
    nlpsa::io::write_json(dir / "comparison.json", report);

    auto config = source.config();
    config["stack"] = stack_dir;
    config["out"] = out;
    write_run_metadata(dir, "compare", config);

    auto cell = [](const std::optional<nlpsa::PhaseErrorStats>& s) {
      return s ? fmt::format("{:.3e}", s->rms) : std::string("n/a");
    };
    fmt::print("{:<8} {:>12}\n", "method", "rms [rad]");
    fmt::print("{:<8} {:>12}\n", "NL-PSA", cell(nl_stats));
    fmt::print("{:<8} {:>12}\n", "PCA",
               report["pca"].contains("error") ? std::string("DegenerateStack") : cell(pca_stats));
    if (report.contains("separation_at_least_1e3")) {
      fmt::print("PCA/NL-PSA separation >= 1e3: {}\n",
                 report["separation_at_least_1e3"].get<bool>() ? "yes" : "no");
    }
    return kExitOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-shifting algorithm design and demodulation for nonuniform phase steps"};
  app.set_version_flag("--version", nlpsa::kVersion);
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads (results do not depend on this)")
      ->check(CLI::PositiveNumber);

  DesignCommand design;
  auto* design_cmd = app.add_subcommand("design", "Solve for PSA coefficients");
  design.source.attach(*design_cmd, false);
  design_cmd->add_option("-o,--out", design.out, "Write the design JSON here");

  SpectrumCommand spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Sample |H(w)| to CSV");
  spectrum.source.attach(*spectrum_cmd, true);
  spectrum_cmd->add_option("--min", spectrum.omega_min)->capture_default_str();
  spectrum_cmd->add_option("--max", spectrum.omega_max)->capture_default_str();
  spectrum_cmd->add_option("--count", spectrum.count)->capture_default_str();
  spectrum_cmd->add_option("--threshold", spectrum.threshold, "Zero-detection threshold")
      ->capture_default_str();
  spectrum_cmd->add_option("-o,--out", spectrum.out, "CSV output file")->required();

  SnrCommand snr;
  auto* snr_cmd = app.add_subcommand("snr", "Analytic (and optional Monte-Carlo) SNR gain");
  snr.source.attach(*snr_cmd, true);
  snr_cmd->add_option("--mc", snr.mc, "Monte-Carlo check: TRIALS SIGMA SEED")->expected(3);

  SimulateCommand simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Synthesize a fringe stack");
  simulate_cmd->add_option("--scene", simulate.scene, "constant | quadratic | gaussians")
      ->capture_default_str();
  simulate_cmd->add_option("--params", simulate.params, "Scene parameters, comma separated")
      ->delimiter(',');
  simulate_cmd->add_option("--width", simulate.width)->capture_default_str();
  simulate_cmd->add_option("--height", simulate.height)->capture_default_str();
  simulate_cmd->add_option("--steps", simulate.steps, "Phase steps in radians")->delimiter(',');
  simulate_cmd->add_option("--uniform", simulate.uniform, "Use N uniform steps");
  simulate_cmd->add_option("--background", simulate.background,
                           "Background a (default: half the summed harmonic amplitudes)");
  simulate_cmd->add_option("--harmonics", simulate.harmonics, "ORDER:AMPLITUDE list")
      ->delimiter(',')
      ->capture_default_str();
  simulate_cmd->add_option("--sigma", simulate.sigma, "AWGN standard deviation")
      ->capture_default_str();
  simulate_cmd->add_option("--seed", simulate.seed)->capture_default_str();
  simulate_cmd->add_option("-o,--out", simulate.out, "Output directory")->required();

  DemodulateCommand demodulate;
  auto* demodulate_cmd = app.add_subcommand("demodulate", "Recover wrapped phase from a stack");
  demodulate_cmd->add_option("--stack", demodulate.stack_dir, "Stack directory")->required();
  demodulate.source.attach(*demodulate_cmd, true);
  demodulate_cmd->add_option("-o,--out", demodulate.out, "Output directory")->required();

  CompareCommand compare;
  auto* compare_cmd = app.add_subcommand("compare", "NL-PSA versus PCA on one stack");
  compare_cmd->add_option("--stack", compare.stack_dir, "Stack directory")->required();
  compare.source.attach(*compare_cmd, true);
  compare_cmd->add_option("-o,--out", compare.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const nlpsa::Parallelism par{threads};
  try {
    if (*design_cmd) return design.run();
    if (*spectrum_cmd) return spectrum.run(par);
    if (*snr_cmd) return snr.run(par);
    if (*simulate_cmd) return simulate.run(par);
    if (*demodulate_cmd) return demodulate.run(par);
    if (*compare_cmd) return compare.run(par);
  } catch (const UsageError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const nlpsa::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    fmt::print(stderr, "error: IoError: {}\n", e.what());
    return kExitIo;
  }
  return kExitUsage;
}
