#include "nlpsa/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "nlpsa/error.hpp"

namespace nlpsa::io {
namespace {

double parse_double(std::string_view token, std::size_t line) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorKind::FormatError,
                fmt::format("line {}: cannot parse '{}' as a number", line, token));
  }
  return value;
}

template <typename T>
T get_field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::FormatError, fmt::format("missing field '{}'", key));
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::FormatError, fmt::format("field '{}': {}", key, e.what()));
  }
}

}  // namespace

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

std::string grid_to_csv(const Grid& grid) {
  std::string out;
  out.reserve(grid.size() * 24);
  for (std::size_t y = 0; y < grid.height(); ++y) {
    const auto row = grid.row(y);
    for (std::size_t x = 0; x < row.size(); ++x) {
      if (x) out.push_back(',');
      fmt::format_to(std::back_inserter(out), "{:.17g}", row[x]);
    }
    out.push_back('\n');
  }
  return out;
}

Grid grid_from_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    std::size_t count = 0;
    for (;;) {
      const auto comma = line.find(',');
      values.push_back(parse_double(line.substr(0, comma), line_no));
      ++count;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (height == 0) {
      width = count;
    } else if (count != width) {
      throw Error(ErrorKind::FormatError,
                  fmt::format("line {} has {} values, expected {}", line_no, count, width));
    }
    ++height;
  }
  if (height == 0) throw Error(ErrorKind::FormatError, "empty grid");
  return Grid(width, height, std::move(values));
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, fmt::format("cannot open '{}' for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::IoError, fmt::format("failed writing '{}'", path.string()));
}

std::string read_text(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorKind::FileNotFound, fmt::format("'{}' does not exist", path.string()));
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_grid_csv(const fs::path& path, const Grid& grid) { write_text(path, grid_to_csv(grid)); }

Grid read_grid_csv(const fs::path& path) {
  try {
    return grid_from_csv(read_text(path));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::FormatError) throw;
    throw Error(ErrorKind::FormatError, fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string spectrum_to_csv(const SpectrumSamples& samples) {
  std::string out = "omega,re,im,mag\n";
  for (std::size_t k = 0; k < samples.size(); ++k) {
    fmt::format_to(std::back_inserter(out), "{:.17g},{:.17g},{:.17g},{:.17g}\n", samples.omegas[k],
                   samples.values[k].real(), samples.values[k].imag(), samples.magnitudes[k]);
  }
  return out;
}

void write_spectrum_csv(const fs::path& path, const SpectrumSamples& samples) {
  write_text(path, spectrum_to_csv(samples));
}

json design_to_json(const CoefficientSet& coeffs) {
  json doc;
  doc["steps"] = std::vector<double>(coeffs.steps.values().begin(), coeffs.steps.values().end());
  doc["constraints"] = json::array();
  for (const auto& c : coeffs.spec.constraints()) {
    doc["constraints"].push_back({{"omega", c.omega}, {"re", c.target.real()}, {"im", c.target.imag()}});
  }
  doc["coefficients"] = json::array();
  for (const auto& c : coeffs.values) doc["coefficients"].push_back({{"re", c.real()}, {"im", c.imag()}});
  doc["condition"] = coeffs.condition_estimate;
  return doc;
}

CoefficientSet design_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::FormatError, "design document is not an object");
  auto steps = PhaseSteps(get_field<std::vector<double>>(doc, "steps"));

  std::vector<Constraint> constraints;
  for (const auto& c : get_field<json>(doc, "constraints")) {
    constraints.push_back({get_field<double>(c, "omega"),
                           {get_field<double>(c, "re"), get_field<double>(c, "im")}});
  }
  std::vector<Complex> values;
  for (const auto& c : get_field<json>(doc, "coefficients")) {
    values.emplace_back(get_field<double>(c, "re"), get_field<double>(c, "im"));
  }
  if (values.size() != steps.size()) {
    throw Error(ErrorKind::FormatError,
                fmt::format("{} coefficients for {} steps", values.size(), steps.size()));
  }
  DesignSpec spec(std::move(constraints));
  if (spec.size() != steps.size()) {
    throw Error(ErrorKind::FormatError,
                fmt::format("{} constraints for {} steps", spec.size(), steps.size()));
  }
  const double residual = constraint_residual(values, steps, spec);
  if (!(residual <= kResidualTolerance)) {
    throw Error(ErrorKind::FormatError,
                fmt::format("coefficients miss their constraints by {:.3e}", residual));
  }
  return CoefficientSet{std::move(values), std::move(steps), std::move(spec),
                        get_field<double>(doc, "condition")};
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  const auto text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::FormatError, fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_design(const fs::path& path, const CoefficientSet& coeffs) {
  write_json(path, design_to_json(coeffs));
}

CoefficientSet read_design(const fs::path& path) {
  try {
    return design_from_json(read_json(path));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::FormatError) throw;
    throw Error(ErrorKind::FormatError, fmt::format("{}: {}", path.string(), e.what()));
  }
}

json profile_to_json(const FringeProfile& profile) {
  json doc;
  doc["background"] = profile.background;
  doc["harmonics"] = json::array();
  for (const auto& h : profile.harmonics) {
    doc["harmonics"].push_back({{"order", h.order}, {"amplitude", h.amplitude}});
  }
  doc["noise_sigma"] = profile.noise_sigma;
  doc["seed"] = profile.seed;
  return doc;
}

FringeProfile profile_from_json(const json& doc) {
  FringeProfile profile;
  profile.background = get_field<double>(doc, "background");
  for (const auto& h : get_field<json>(doc, "harmonics")) {
    profile.harmonics.push_back({get_field<int>(h, "order"), get_field<double>(h, "amplitude")});
  }
  profile.noise_sigma = get_field<double>(doc, "noise_sigma");
  profile.seed = get_field<std::uint64_t>(doc, "seed");
  profile.validate();
  return profile;
}

void write_stack(const fs::path& dir, const FringeStack& stack) {
  stack.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));

  json manifest;
  manifest["steps"] = std::vector<double>(stack.steps.values().begin(), stack.steps.values().end());
  manifest["width"] = stack.width();
  manifest["height"] = stack.height();
  manifest["profile"] = profile_to_json(stack.profile);
  manifest["frames"] = json::array();
  for (std::size_t n = 0; n < stack.frames.size(); ++n) {
    const auto name = fmt::format("frame_{:03}.csv", n);
    write_grid_csv(dir / name, stack.frames[n]);
    manifest["frames"].push_back(name);
  }
  if (stack.truth) {
    write_grid_csv(dir / "truth.csv", *stack.truth);
    manifest["truth"] = "truth.csv";
  } else {
    manifest["truth"] = nullptr;
  }
  write_json(dir / "manifest.json", manifest);
}

FringeStack read_stack(const fs::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw Error(ErrorKind::FileNotFound, fmt::format("no manifest.json in '{}'", dir.string()));
  }
  const auto manifest = read_json(manifest_path);
  const auto width = get_field<std::size_t>(manifest, "width");
  const auto height = get_field<std::size_t>(manifest, "height");

  FringeStack stack{PhaseSteps(get_field<std::vector<double>>(manifest, "steps")), {},
                    profile_from_json(get_field<json>(manifest, "profile")), std::nullopt};
  for (const auto& name : get_field<std::vector<std::string>>(manifest, "frames")) {
    auto frame = read_grid_csv(dir / name);
    if (frame.width() != width || frame.height() != height) {
      throw Error(ErrorKind::FormatError,
                  fmt::format("{} is {}x{}, manifest says {}x{}", name, frame.width(),
                              frame.height(), width, height));
    }
    stack.frames.push_back(std::move(frame));
  }
  const auto& truth = get_field<json>(manifest, "truth");
  if (!truth.is_null()) {
    stack.truth = PhaseMap(read_grid_csv(dir / truth.get<std::string>()));
  }
  stack.validate();
  return stack;
}

json stats_to_json(const PhaseErrorStats& stats) {
  return {{"rms", stats.rms}, {"max_abs", stats.max_abs}, {"piston_removed", stats.piston_removed}};
}

}  // namespace nlpsa::io
