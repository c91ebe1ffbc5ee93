// Copyright 2026 The qtoken Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtoken/measurement.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "qtoken/error.hpp"
#include "qtoken/parallel.hpp"

namespace qtoken {

const char* to_string(NoiseMode mode) noexcept {
  switch (mode) {
    case NoiseMode::kPhotonCount:
      return "photon_count";
    case NoiseMode::kBinaryReadout:
      return "binary_readout";
  }
  return "unknown";
}

NoiseMode noise_mode_from_string(const std::string& text) {
  if (text == "photon_count") return NoiseMode::kPhotonCount;
  if (text == "binary_readout") return NoiseMode::kBinaryReadout;
  throw PreconditionError("unknown noise_mode '" + text + "'");
}

double HardwareProfile::effective_contrast() const noexcept { return std::abs(observable.contrast()); }

void HardwareProfile::validate() const {
  if (name.empty()) throw PreconditionError("profile name must not be empty");
  if (shots_default < 1) throw PreconditionError("profile shots_default must be >= 1");
}

const std::vector<HardwareProfile>& builtin_profiles() {
  static const std::vector<HardwareProfile> profiles = [] {
    auto make = [](const char* name, double c, double sigma_norm) {
      return HardwareProfile{name, ObservableModel::from_contrast(c, sigma_norm), 100, NoiseMode::kPhotonCount};
    };
    return std::vector<HardwareProfile>{
        make("sherbrooke", 0.986, 1e-5), make("kyiv", 0.950, 0.026),   make("osaka", 0.896, 0.158),
        make("brisbane", 0.843, 0.270),  make("kyoto", 0.563, 0.377), make("ideal", 1.0, 0.0),
    };
  }();
  return profiles;
}

std::optional<HardwareProfile> find_builtin_profile(const std::string& name) {
  for (const auto& profile : builtin_profiles()) {
    if (profile.name == name) return profile;
  }
  return std::nullopt;
}

HardwareProfile profile_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw PreconditionError("profile document must be an object");
    const std::string name = doc.at("name").get<std::string>();
    const double sigma_norm = doc.value("sigma_exp_norm", 0.0);
    std::optional<ObservableModel> model;
    if (doc.contains("c")) {
      model = ObservableModel::from_contrast(doc.at("c").get<double>(), sigma_norm, doc.value("scale", 100.0));
    } else if (doc.contains("n0") && doc.contains("n1")) {
      const double n0 = doc.at("n0").get<double>();
      const double n1 = doc.at("n1").get<double>();
      model = ObservableModel(n0, n1, sigma_norm * (n0 + n1));
    } else {
      throw PreconditionError("profile needs either 'c' or both 'n0' and 'n1'");
    }
    HardwareProfile profile{name, *model, doc.value("shots_default", std::int64_t{100}),
                            noise_mode_from_string(doc.value("noise_mode", std::string("photon_count")))};
    profile.validate();
    return profile;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("invalid profile document: ") + e.what());
  }
}

nlohmann::json profile_to_json(const HardwareProfile& profile) {
  return {
      {"name", profile.name},
      {"n0", profile.observable.n0()},
      {"n1", profile.observable.n1()},
      {"c", profile.observable.contrast()},
      {"sigma_exp_norm", profile.observable.sigma_exp_norm()},
      {"shots_default", profile.shots_default},
      {"noise_mode", to_string(profile.noise_mode)},
  };
}

HardwareProfile load_profile_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open profile file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("profile file " + path.string() + ": " + e.what());
  }
  return profile_from_json(doc);
}

HardwareProfile resolve_profile(const std::string& reference) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(reference, ec)) return load_profile_file(reference);
  if (auto builtin = find_builtin_profile(reference)) return *builtin;
  throw PreconditionError("unknown profile '" + reference + "' (not a built-in name or a readable file)");
}

double fraction_from_counts(const ObservableModel& model, std::int64_t shots, double total_counts) {
  const double normalized = total_counts / (static_cast<double>(shots) * model.scale());
  return model.n1() >= model.n0() ? 1.0 - normalized : normalized;
}

double fraction_standard_error(const ObservableModel& model, std::int64_t shots, double n_zero_fraction) {
  const double c = std::abs(model.contrast());
  const double p0 = c > 0.0 ? std::clamp(((2.0 * n_zero_fraction - 1.0) / c + 1.0) / 2.0, 0.0, 1.0) : 0.5;
  const double p1 = 1.0 - p0;
  const double gap = model.n1() - model.n0();
  const double mean = p0 * model.n0() + p1 * model.n1();
  const double variance = p0 * p1 * gap * gap + mean + model.sigma_exp() * model.sigma_exp();
  return std::sqrt(variance / static_cast<double>(shots)) / model.scale();
}

namespace {

std::int64_t sample_binomial(Engine& engine, std::int64_t trials, double p) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  return std::binomial_distribution<std::int64_t>(trials, p)(engine);
}

double sample_poisson(Engine& engine, double mean) {
  if (mean <= 0.0) return 0.0;
  return static_cast<double>(std::poisson_distribution<std::int64_t>(mean)(engine));
}

// Probability that a single shot collapses to |0>, with rounding noise at
// the certain outcomes snapped away.
double projection_probability(const BlochAngles& prep, const BlochAngles& meas) {
  const double p0 = attacker_fraction(1.0, prep, meas);
  if (p0 > 1.0 - 1e-12) return 1.0;
  if (p0 < 1e-12) return 0.0;
  return p0;
}

MeasurementRecord make_record(const ObservableModel& model, const BlochAngles& prep, const BlochAngles& meas,
                              std::int64_t shots, double total_counts) {
  const double n = std::clamp(fraction_from_counts(model, shots, total_counts), 0.0, 1.0);
  return {shots, total_counts, n, fraction_standard_error(model, shots, n), prep, meas};
}

}  // namespace

MeasurementRecord simulate_measurement(const HardwareProfile& profile, const BlochAngles& prep,
                                       const BlochAngles& meas_axis, std::int64_t shots, const RngSeed& seed) {
  if (shots < 1) throw PreconditionError("shots must be >= 1");
  const ObservableModel& model = profile.observable;
  Engine engine = make_engine(seed);
  const double p0 = projection_probability(prep, meas_axis);

  double counts = 0.0;
  if (profile.noise_mode == NoiseMode::kPhotonCount) {
    // A sum of per-shot Poisson counts is Poisson in the summed mean.
    const std::int64_t zeros = sample_binomial(engine, shots, p0);
    counts = sample_poisson(engine, static_cast<double>(zeros) * model.n0()) +
             sample_poisson(engine, static_cast<double>(shots - zeros) * model.n1());
  } else {
    // Each shot reads bright (scale counts) or dark (0 counts). The bright
    // eigenstate is |1> when n1 >= n0, otherwise |0>.
    const double error_rate = (1.0 - profile.effective_contrast()) / 2.0;
    const double p_bright_state = model.n1() >= model.n0() ? 1.0 - p0 : p0;
    const double p_bright_read = p_bright_state * (1.0 - error_rate) + (1.0 - p_bright_state) * error_rate;
    counts = static_cast<double>(sample_binomial(engine, shots, p_bright_read)) * model.scale();
  }
  if (model.sigma_exp() > 0.0) {
    counts += std::normal_distribution<double>(0.0, model.sigma_exp() * std::sqrt(static_cast<double>(shots)))(engine);
  }
  // Keep the aggregate within the range a fraction in [0, 1] can map to, so
  // every record written out can be read back as replay data.
  counts = std::clamp(counts, 0.0, static_cast<double>(shots) * model.scale());
  return make_record(model, prep, meas_axis, shots, counts);
}

RabiScan summarize_rabi_records(std::vector<MeasurementRecord> records, double scale) {
  RabiScan scan;
  scan.scale = scale;
  if (records.empty()) return scan;
  scan.shots = records.front().shots;

  // Group by preparation angle in order of first appearance.
  std::vector<double> order;
  std::map<double, std::vector<double>> groups;
  for (const auto& record : records) {
    if (record.shots != scan.shots) throw DataError("Rabi records must share one shot count");
    const double theta = record.prep.theta();
    auto [it, inserted] = groups.try_emplace(theta);
    if (inserted) order.push_back(theta);
    it->second.push_back(record.total_counts / (static_cast<double>(record.shots) * scale));
  }
  for (double theta : order) {
    const auto& values = groups.at(theta);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = values.size() > 1 ? ss / static_cast<double>(values.size() - 1) : 0.0;
    scan.points.push_back({theta, mean, std::sqrt(var * static_cast<double>(scan.shots))});
  }
  scan.records = std::move(records);
  return scan;
}

RabiScan rabi_scan(const HardwareProfile& profile, std::span<const double> theta_grid, std::int64_t shots,
                   std::int64_t repetitions, const RngSeed& seed, int threads) {
  if (theta_grid.empty()) throw PreconditionError("Rabi scan needs a non-empty theta grid");
  if (shots < 1 || repetitions < 1) throw PreconditionError("shots and repetitions must be >= 1");
  const auto reps = static_cast<std::size_t>(repetitions);
  std::vector<BlochAngles> preps;
  preps.reserve(theta_grid.size());
  for (double theta : theta_grid) preps.emplace_back(theta, 0.0);
  const BlochAngles north;

  std::vector<MeasurementRecord> records(theta_grid.size() * reps);
  parallel_for(records.size(), threads, [&](std::size_t k) {
    const std::size_t point = k / reps;
    const std::size_t rep = k % reps;
    records[k] = simulate_measurement(profile, preps[point], north, shots, seed.child(point).child(rep));
  });
  return summarize_rabi_records(std::move(records), profile.observable.scale());
}

namespace {

double log_floor(double x) { return std::log(std::max(x, 1e-9)); }

}  // namespace

NoiseModelFit fit_noise_model(const RabiScan& scan) {
  std::vector<double> thetas;
  for (const auto& p : scan.points) thetas.push_back(p.theta);
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  if (thetas.size() < 5) {
    throw PreconditionError("noise-model fit needs at least 5 distinct theta values, got " +
                            std::to_string(thetas.size()));
  }

  // Expectation curve: mean = a u + b (1 - u), u = cos^2(theta/2).
  double suu = 0.0, suv = 0.0, svv = 0.0, suy = 0.0, svy = 0.0;
  for (const auto& p : scan.points) {
    const double u = std::pow(std::cos(p.theta / 2.0), 2);
    const double v = 1.0 - u;
    suu += u * u;
    suv += u * v;
    svv += v * v;
    suy += u * p.mean_norm;
    svy += v * p.mean_norm;
  }
  const double det = suu * svv - suv * suv;
  if (!(det > 1e-12 * std::max(1.0, suu * svv))) {
    throw FitError("degenerate theta grid: expectation curve is not identifiable");
  }
  const double a = (suy * svv - svy * suv) / det;
  const double b = (svy * suu - suy * suv) / det;
  const double scale = scan.scale;
  const double n0 = std::max(a, 0.0) * scale;
  const double n1 = std::max(b, 0.0) * scale;
  if (!(n0 + n1 > 0.0)) throw FitError("fitted eigenvalues are both zero");

  double mean_ss = 0.0;
  for (const auto& p : scan.points) {
    const double u = std::pow(std::cos(p.theta / 2.0), 2);
    const double r = p.mean_norm - (n0 * u + n1 * (1.0 - u)) / scale;
    mean_ss += r * r;
  }

  // Uncertainty curve: only sigma_exp is free. Squared log residuals weight
  // every theta by its relative error.
  const ObservableModel fixed(n0, n1, 0.0);
  std::vector<double> base_variance;
  double max_std = 0.0;
  for (const auto& p : scan.points) {
    const BlochAngles state(p.theta, 0.0);
    base_variance.push_back(projection_variance(fixed, state) + expectation_n(fixed, state));
    max_std = std::max(max_std, p.std_norm);
  }
  auto cost = [&](double sigma_norm) {
    double total = 0.0;
    const double exp_var = std::pow(sigma_norm * scale, 2);
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
      const double model_std = std::sqrt(base_variance[i] + exp_var) / scale;
      const double r = log_floor(scan.points[i].std_norm) - log_floor(model_std);
      total += r * r;
    }
    return total;
  };

  const double upper = 2.0 * max_std + 1e-6;
  constexpr int kGrid = 400;
  int best = 0;
  double best_cost = cost(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double c = cost(upper * i / kGrid);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  const double lo = upper * std::max(best - 1, 0) / kGrid;
  const double hi = upper * std::min(best + 1, kGrid) / kGrid;
  constexpr std::uintmax_t kMaxIterations = 200;
  std::uintmax_t iterations = kMaxIterations;
  auto [sigma_norm, min_cost] = boost::math::tools::brent_find_minima(cost, lo, hi, 40, iterations);
  if (iterations >= kMaxIterations) throw FitError("sigma_exp fit did not converge");
  if (cost(0.0) <= min_cost) {
    sigma_norm = 0.0;
    min_cost = cost(0.0);
  }

  ObservableModel model(n0, n1, sigma_norm * scale);
  const auto count = static_cast<double>(scan.points.size());
  return {model,
          model.contrast(),
          sigma_norm,
          std::sqrt(mean_ss / count),
          std::sqrt(min_cost / count),
          static_cast<int>(iterations)};
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <class T>
bool parse_number(const std::string& text, T& out) {
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  while (begin < end && *begin == ' ') ++begin;
  while (end > begin && end[-1] == ' ') --end;
  if (begin == end) return false;
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::vector<MeasurementRecord> parse_replay(std::istream& in, const ObservableModel& model) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw ParseError(1, "missing header");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (line != kReplayHeader) {
    throw ParseError(line_no, std::string("expected header '") + kReplayHeader + "'");
  }

  std::vector<MeasurementRecord> records;
  while (next_line()) {
    if (line.empty()) continue;
    const auto fields = split_csv_row(line);
    if (fields.size() != 6) {
      throw ParseError(line_no, "expected 6 fields, got " + std::to_string(fields.size()));
    }
    double values[4];
    for (int i = 0; i < 4; ++i) {
      if (!parse_number(fields[i], values[i]) || !std::isfinite(values[i])) {
        throw ParseError(line_no, "field " + std::to_string(i + 1) + " is not a number: '" + fields[i] + "'");
      }
    }
    std::int64_t shots = 0;
    if (!parse_number(fields[4], shots)) throw ParseError(line_no, "shots is not an integer: '" + fields[4] + "'");
    if (shots < 1) throw ParseError(line_no, "shots must be >= 1");
    double counts = 0.0;
    if (!parse_number(fields[5], counts) || !std::isfinite(counts)) {
      throw ParseError(line_no, "total_counts is not a number: '" + fields[5] + "'");
    }
    std::optional<BlochAngles> prep, meas;
    try {
      prep.emplace(values[0], values[1]);
      meas.emplace(values[2], values[3]);
    } catch (const PreconditionError& e) {
      throw ParseError(line_no, e.what());
    }
    const double n = fraction_from_counts(model, shots, counts);
    if (!(n >= 0.0 && n <= 1.0)) {
      throw DataError("line " + std::to_string(line_no) + ": counts imply n = " + std::to_string(n) +
                      ", outside [0, 1]");
    }
    records.push_back({shots, counts, n, fraction_standard_error(model, shots, n), *prep, *meas});
  }
  return records;
}

std::vector<MeasurementRecord> ingest_replay(const std::filesystem::path& path, const ObservableModel& model) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open replay file " + path.string());
  return parse_replay(in, model);
}

}  // namespace qtoken
