#pragma once

// Shared fixtures for the test binaries.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlpsa/design.hpp"

namespace nlpsa::testing {

namespace fs = std::filesystem;

inline const std::vector<double> kNonuniformSteps{0.0, 0.78, 1.81, 3.11, 4.54, 5.93, 7.24};
inline const std::vector<double> kNonuniformZeros{-2.0, -1.0, 0.0, 2.0, 3.0, 4.0};

// numpy.linalg.solve on the same system, printed with %.17g.
inline const std::vector<Complex> kNonuniformCoefficients{
    {0.0080564262863033476, 0.0},
    {0.084101299321180753, 0.083198180619790549},
    {-0.042817458473642003, 0.17557287853845399},
    {-0.22317677053651425, 0.0070530931111144647},
    {-0.039186617294297718, -0.22505883986003156},
    {0.191894721055032, -0.070740539168292413},
    {0.021128399641937894, 0.029975226758965065},
};
inline constexpr double kNonuniformSnrGain = 5.2100574557543267;

inline CoefficientSet nonuniform_design() {
  return solve_coefficients(PhaseSteps(kNonuniformSteps), DesignSpec::with_zeros(1.0, kNonuniformZeros));
}

/// Sorted steps in [0, 2 pi N / (N - 1)] with neighbouring gaps >= min_gap.
inline std::vector<double> random_steps(std::mt19937_64& rng, std::size_t n, double min_gap = 0.1) {
  const double upper = kTwoPi * static_cast<double>(n) / static_cast<double>(n - 1);
  std::uniform_real_distribution<double> dist(0.0, upper);
  for (;;) {
    std::vector<double> steps(n);
    for (auto& s : steps) s = dist(rng);
    std::sort(steps.begin(), steps.end());
    bool ok = true;
    for (std::size_t i = 1; i < n; ++i) ok = ok && steps[i] - steps[i - 1] >= min_gap;
    // Also keep the wrap-around pair apart modulo 2 pi.
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        ok = ok && std::abs(std::remainder(steps[j] - steps[i], kTwoPi)) >= min_gap;
      }
    }
    if (ok) return steps;
  }
}

/// Fresh empty directory under the system temp dir.
inline fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("nlpsa_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

inline std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

#ifdef NLPSA_CLI_PATH
/// Runs the CLI with `args` (shell syntax), capturing stdout and stderr.
inline CliRun run_cli(const std::string& args, const fs::path& workdir) {
  const auto out_file = workdir / "cli_stdout.txt";
  const auto err_file = workdir / "cli_stderr.txt";
  const std::string cmd = "cd '" + workdir.string() + "' && '" + NLPSA_CLI_PATH + "' " + args +
                          " > '" + out_file.string() + "' 2> '" + err_file.string() + "'";
  const int status = std::system(cmd.c_str());
  CliRun run;
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  run.out = slurp(out_file);
  run.err = slurp(err_file);
  return run;
}
#endif

}  // namespace nlpsa::testing
