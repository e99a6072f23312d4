#include "nlpsa/fringe.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "nlpsa/error.hpp"
#include "nlpsa/random.hpp"

namespace nlpsa {

SceneKind parse_scene_kind(std::string_view name) {
  if (name == "constant") return SceneKind::Constant;
  if (name == "quadratic") return SceneKind::Quadratic;
  if (name == "gaussians") return SceneKind::Gaussians;
  throw Error(ErrorKind::BadParams, fmt::format("unknown scene kind '{}'", name));
}

std::string_view to_string(SceneKind kind) noexcept {
  switch (kind) {
    case SceneKind::Constant: return "constant";
    case SceneKind::Quadratic: return "quadratic";
    case SceneKind::Gaussians: return "gaussians";
  }
  return "unknown";
}

PhaseMap synth_phase_map(SceneKind kind, std::span<const double> params, std::size_t width,
                         std::size_t height) {
  if (width == 0 || height == 0) {
    throw Error(ErrorKind::BadParams, fmt::format("empty scene {}x{}", width, height));
  }
  for (double p : params) {
    if (!std::isfinite(p)) throw Error(ErrorKind::BadParams, "scene parameters must be finite");
  }
  PhaseMap map(width, height);
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);

  switch (kind) {
    case SceneKind::Constant: {
      if (params.size() != 1) {
        throw Error(ErrorKind::BadParams, "constant scene takes exactly one parameter");
      }
      std::fill(map.values().begin(), map.values().end(), params[0]);
      break;
    }
    case SceneKind::Quadratic: {
      if (params.size() != 1) {
        throw Error(ErrorKind::BadParams, "quadratic scene takes exactly one parameter (peak)");
      }
      double peak_r2 = 0.0;
      for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
          const double u = 2.0 * static_cast<double>(x) / w - 1.0;
          const double v = 2.0 * static_cast<double>(y) / h - 1.0;
          map(x, y) = u * u + v * v;
          peak_r2 = std::max(peak_r2, map(x, y));
        }
      }
      // A 1x1 scene has r^2 = 2 at its only pixel, so peak_r2 > 0 always.
      for (auto& value : map.values()) value = params[0] * value / peak_r2;
      break;
    }
    case SceneKind::Gaussians: {
      if (params.size() % 4 != 0) {
        throw Error(ErrorKind::BadParams,
                    "gaussians scene takes (amplitude, cx, cy, width) groups of four");
      }
      for (std::size_t g = 0; g < params.size(); g += 4) {
        if (!(params[g + 3] > 0.0)) {
          throw Error(ErrorKind::BadParams, "gaussian width must be positive");
        }
      }
      for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
          const double u = (static_cast<double>(x) + 0.5) / w;
          const double v = (static_cast<double>(y) + 0.5) / h;
          double sum = 0.0;
          for (std::size_t g = 0; g < params.size(); g += 4) {
            const double du = u - params[g + 1];
            const double dv = v - params[g + 2];
            const double s = params[g + 3];
            sum += params[g] * std::exp(-(du * du + dv * dv) / (2.0 * s * s));
          }
          map(x, y) = sum;
        }
      }
      break;
    }
  }
  return map;
}

void FringeProfile::validate() const {
  if (!std::isfinite(background)) throw Error(ErrorKind::BadParams, "background must be finite");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorKind::BadParams, "noise sigma must be >= 0");
  for (std::size_t i = 0; i < harmonics.size(); ++i) {
    if (harmonics[i].order < 1) {
      throw Error(ErrorKind::BadParams,
                  fmt::format("harmonic order must be >= 1, got {}", harmonics[i].order));
    }
    if (!std::isfinite(harmonics[i].amplitude)) {
      throw Error(ErrorKind::BadParams, "harmonic amplitude must be finite");
    }
    for (std::size_t j = i + 1; j < harmonics.size(); ++j) {
      if (harmonics[i].order == harmonics[j].order) {
        throw Error(ErrorKind::BadParams,
                    fmt::format("harmonic order {} listed twice", harmonics[i].order));
      }
    }
  }
}

FringeProfile FringeProfile::pure(double background, double contrast) {
  return FringeProfile{background, {{1, contrast}}, 0.0, 0};
}

void FringeStack::validate() const {
  if (frames.size() != steps.size()) {
    throw Error(ErrorKind::FrameCountMismatch,
                fmt::format("{} frames for {} phase steps", frames.size(), steps.size()));
  }
  for (const auto& f : frames) {
    if (!f.same_shape(frames.front())) {
      throw Error(ErrorKind::DimensionMismatch, "frames differ in size");
    }
  }
  if (truth && !truth->same_shape(frames.front())) {
    throw Error(ErrorKind::DimensionMismatch, "truth map differs in size from the frames");
  }
}

FringeStack simulate_stack(const PhaseMap& truth, const PhaseSteps& steps,
                           const FringeProfile& profile, Parallelism par) {
  profile.validate();
  FringeStack stack{steps, {}, profile, truth};
  stack.frames.assign(steps.size(), Grid(truth.width(), truth.height()));

  const std::size_t rows = truth.height();
  parallel_for(steps.size() * rows, par, [&](std::size_t item) {
    const std::size_t n = item / rows;
    const std::size_t y = item % rows;
    Grid& frame = stack.frames[n];
    for (std::size_t x = 0; x < truth.width(); ++x) {
      const double arg = truth(x, y) + steps[n];
      double value = profile.background;
      for (const auto& h : profile.harmonics) {
        value += h.amplitude * std::cos(h.order * arg);
      }
      frame(x, y) = value;
    }
  });
  return stack;
}

FringeStack add_awgn(FringeStack stack, double sigma, std::uint64_t seed, Parallelism par) {
  if (!(sigma >= 0.0)) throw Error(ErrorKind::BadParams, "noise sigma must be >= 0");
  stack.validate();
  stack.profile.noise_sigma = sigma;
  stack.profile.seed = seed;
  if (sigma == 0.0) return stack;

  const std::size_t rows = stack.height();
  const std::size_t width = stack.width();
  parallel_for(stack.frames.size() * rows, par, [&](std::size_t item) {
    const std::size_t n = item / rows;
    const std::size_t y = item % rows;
    auto values = stack.frames[n].values();
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t p = y * width + x;
      values[p] += sigma * standard_normal(seed, n, p);
    }
  });
  return stack;
}

}  // namespace nlpsa
