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

#include "qtoken/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>

#include "qtoken/error.hpp"
#include "qtoken/parallel.hpp"

namespace qtoken {

namespace {

// Stream tags keep the random streams of different pipeline stages apart.
enum : std::uint64_t {
  kTagRabi = 1,
  kTagBankAngles = 2,
  kTagBankAuth = 3,
  kTagAttackScan = 4,
  kTagForgeAngles = 5,
  kTagCampaign = 6,
};

struct Session {
  HardwareProfile profile;
  std::int64_t shots;
  std::filesystem::path out;
};

Session open_session(const RunConfig& config) {
  if (config.shots < 0) throw PreconditionError("shots must be >= 1");
  if (config.threads < 1) throw PreconditionError("threads must be >= 1");
  Session session{resolve_profile(config.profile), config.shots, config.resolved_out_dir()};
  if (session.shots == 0) session.shots = session.profile.shots_default;
  std::error_code ec;
  std::filesystem::create_directories(session.out, ec);
  if (ec) throw Error(ErrorCode::kRuntime, "cannot create output directory " + session.out.string());
  return session;
}

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  // sample std (n - 1)
  double standard_error() const { return count > 1 ? std / std::sqrt(static_cast<double>(count)) : NAN; }
};

Moments moments_of(const std::vector<double>& values) {
  Moments m;
  m.count = values.size();
  if (values.empty()) return m;
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

PlotSeries histogram(const std::string& label, const std::vector<double>& values, double lo, double hi, int bins) {
  PlotSeries series{label, {}, {}};
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    const int b = std::min(bins - 1, static_cast<int>((v - lo) / (hi - lo) * bins));
    counts[static_cast<std::size_t>(b)] += 1.0;
  }
  const double width = (hi - lo) / bins;
  const double total = std::max<double>(1.0, static_cast<double>(values.size()));
  for (int b = 0; b < bins; ++b) {
    series.x.push_back(lo + (b + 0.5) * width);
    series.y.push_back(counts[static_cast<std::size_t>(b)] / (total * width));
  }
  return series;
}

// ---- bank bench -----------------------------------------------------------

struct BankSamples {
  std::vector<BlochAngles> angles;
  std::vector<double> n_b;
};

BankSamples run_bank_samples(const Session& session, const RunConfig& config, const SamplingPlan& plan) {
  BankSamples out;
  out.angles = sample_bank_angles(plan, RngSeed{config.seed, kTagBankAngles});
  out.n_b.resize(out.angles.size());
  const RngSeed auth{config.seed, kTagBankAuth};
  parallel_for(out.angles.size(), config.threads, [&](std::size_t i) {
    out.n_b[i] = authenticate_token(session.profile, TokenSpec{std::to_string(i), out.angles[i]}, session.shots,
                                    auth.child(i));
  });
  return out;
}

constexpr int kThetaBins = 4;
constexpr int kPhiBins = 4;

CommandResult write_bank_bench(const Session& session, const RunConfig& config, const SamplingPlan& plan,
                               const BankSamples& samples) {
  CommandResult result;
  Table table{{"token", "theta_b", "phi_b", "n_b"}, {}};
  for (std::size_t i = 0; i < samples.angles.size(); ++i) {
    table.add_row({static_cast<std::int64_t>(i), samples.angles[i].theta(), samples.angles[i].phi(), samples.n_b[i]});
  }
  result.files.push_back(write_table(session.out, "nb_samples", table, config.format));

  std::vector<std::vector<double>> bins(kThetaBins * kPhiBins);
  for (std::size_t i = 0; i < samples.angles.size(); ++i) {
    const int ti = std::min(kThetaBins - 1, static_cast<int>(samples.angles[i].theta() / kPi * kThetaBins));
    const int pi = std::min(kPhiBins - 1, static_cast<int>(samples.angles[i].phi() / kTwoPi * kPhiBins));
    bins[static_cast<std::size_t>(ti * kPhiBins + pi)].push_back(samples.n_b[i]);
  }
  Table bin_table{{"theta_lo", "theta_hi", "phi_lo", "phi_hi", "count", "mean_n_b", "standard_error"}, {}};
  const Moments* lowest = nullptr;
  const Moments* highest = nullptr;
  std::vector<Moments> bin_moments;
  bin_moments.reserve(bins.size());
  for (int ti = 0; ti < kThetaBins; ++ti) {
    for (int pi = 0; pi < kPhiBins; ++pi) {
      const auto& values = bins[static_cast<std::size_t>(ti * kPhiBins + pi)];
      bin_moments.push_back(moments_of(values));
      const Moments& m = bin_moments.back();
      bin_table.add_row({kPi * ti / kThetaBins, kPi * (ti + 1) / kThetaBins, kTwoPi * pi / kPhiBins,
                         kTwoPi * (pi + 1) / kPhiBins, static_cast<std::int64_t>(m.count),
                         m.count ? m.mean : NAN, m.standard_error()});
    }
  }
  for (const auto& m : bin_moments) {
    if (m.count < 2) continue;
    if (!lowest || m.mean < lowest->mean) lowest = &m;
    if (!highest || m.mean > highest->mean) highest = &m;
  }
  result.files.push_back(write_table(session.out, "nb_angle_bins", bin_table, config.format));

  const Moments all = moments_of(samples.n_b);
  nlohmann::json doc = {
      {"schema", "qtoken.bank_bench"},
      {"schema_version", 1},
      {"profile", session.profile.name},
      {"strategy", to_string(plan.strategy)},
      {"tokens", samples.n_b.size()},
      {"shots", session.shots},
      {"expected_mean", (1.0 + session.profile.effective_contrast()) / 2.0},
      {"mean", all.mean},
      {"sample_std", all.std},
      {"standard_error", finite_or_null(all.standard_error())},
  };
  try {
    const GaussianFit fit = fit_gaussian(samples.n_b);
    doc["fit"] = {{"kind", "gaussian"}, {"mean", fit.mean}, {"std", fit.std}};
  } catch (const Error& e) {
    doc["fit"] = nullptr;
    doc["warning"] = e.what();
  }
  if (lowest && highest) {
    const double spread_se = std::hypot(lowest->standard_error(), highest->standard_error());
    doc["angle_dependence"] = {{"min_bin_mean", lowest->mean},
                               {"max_bin_mean", highest->mean},
                               {"spread", highest->mean - lowest->mean},
                               {"spread_standard_error", finite_or_null(spread_se)}};
  } else {
    doc["angle_dependence"] = nullptr;
  }
  const auto fit_path = session.out / "nb_fit.json";
  write_json_file(fit_path, doc);
  result.files.push_back(fit_path);

  if (config.svg) {
    const auto svg_path = session.out / "nb_hist.svg";
    write_text_file(svg_path, render_svg_plot("Bank self-acceptance " + session.profile.name, "n_b", "density",
                                              {histogram("n_b", samples.n_b, 0.0, 1.0, 100)}));
    result.files.push_back(svg_path);
  }
  result.summary = doc;
  return result;
}

// ---- forge bench ----------------------------------------------------------

std::vector<CampaignRow> run_forge_rows(const Session& session, const RunConfig& config, const ForgeRequest& request) {
  if (request.tokens == 0) throw PreconditionError("token count must be >= 1");
  if (request.attack_axes.empty()) throw PreconditionError("at least one attack axis is required");
  const auto bank = sample_bank_angles({SamplingStrategy::kUniformSphere, request.tokens, 0, 0},
                                       RngSeed{config.seed, kTagForgeAngles});
  CampaignOptions options;
  options.fallback_only = request.fallback_only;
  options.noiseless_attack = request.noiseless_attack;
  options.threads = config.threads;
  return run_attack_campaign(session.profile, bank, request.attack_axes, session.shots,
                             RngSeed{config.seed, kTagCampaign}, options);
}

constexpr int kForgeThetaBins = 10;

CommandResult write_forge_bench(const Session& session, const RunConfig& config, const ForgeRequest& request,
                                const std::vector<CampaignRow>& rows) {
  CommandResult result;
  Table table{{"theta_b", "phi_b", "theta_a", "phi_a", "n_a", "branch", "theta_f", "phi_f", "n_f"}, {}};
  std::vector<double> n_f;
  std::map<std::string, std::int64_t> branch_counts;
  std::vector<std::vector<double>> theta_bins(kForgeThetaBins);
  std::vector<double> pole, equator;
  for (const auto& row : rows) {
    table.add_row({row.bank.theta(), row.bank.phi(), row.attack_axis.theta(), row.attack_axis.phi(),
                   row.outcome.n_a_measured, std::string(to_string(row.outcome.branch)), row.outcome.forged.theta(),
                   row.outcome.forged.phi(), row.n_f});
    n_f.push_back(row.n_f);
    ++branch_counts[to_string(row.outcome.branch)];
    const int b = std::min(kForgeThetaBins - 1, static_cast<int>(row.bank.theta() / kPi * kForgeThetaBins));
    theta_bins[static_cast<std::size_t>(b)].push_back(row.n_f);
    const double z = std::abs(row.bank.z());
    if (z > 0.9) pole.push_back(row.n_f);
    if (z < 0.1) equator.push_back(row.n_f);
  }
  result.files.push_back(write_table(session.out, "campaign", table, config.format));

  Table bins{{"theta_lo", "theta_hi", "count", "mean_n_f", "standard_error"}, {}};
  for (int b = 0; b < kForgeThetaBins; ++b) {
    const Moments m = moments_of(theta_bins[static_cast<std::size_t>(b)]);
    bins.add_row({kPi * b / kForgeThetaBins, kPi * (b + 1) / kForgeThetaBins, static_cast<std::int64_t>(m.count),
                  m.count ? m.mean : NAN, m.standard_error()});
  }
  result.files.push_back(write_table(session.out, "nf_vs_theta", bins, config.format));

  const Moments all = moments_of(n_f);
  const Moments mp = moments_of(pole);
  const Moments me = moments_of(equator);
  nlohmann::json doc = {
      {"schema", "qtoken.forge_bench"},
      {"schema_version", 1},
      {"profile", session.profile.name},
      {"tokens", rows.size()},
      {"shots", session.shots},
      {"fallback_only", request.fallback_only},
      {"noiseless_attack", request.noiseless_attack},
      {"mean_n_f", all.mean},
      {"sample_std", all.std},
      {"standard_error", finite_or_null(all.standard_error())},
      {"branch_counts", branch_counts},
      {"pole_vs_equator",
       {{"pole_count", mp.count},
        {"pole_mean", finite_or_null(mp.count ? mp.mean : NAN)},
        {"pole_standard_error", finite_or_null(mp.standard_error())},
        {"equator_count", me.count},
        {"equator_mean", finite_or_null(me.count ? me.mean : NAN)},
        {"equator_standard_error", finite_or_null(me.standard_error())},
        {"difference", finite_or_null(mp.mean - me.mean)},
        {"difference_standard_error", finite_or_null(std::hypot(mp.standard_error(), me.standard_error()))}}},
  };
  try {
    const GaussianFit g = fit_gaussian(n_f);
    doc["gaussian"] = {{"mean", g.mean}, {"std", g.std}};
  } catch (const Error& e) {
    doc["gaussian"] = nullptr;
    doc["warnings"].push_back(e.what());
  }
  try {
    const SkewNormalFit s = fit_skew_normal(n_f);
    doc["skew_normal"] = {{"location", s.location}, {"scale", s.scale}, {"shape", s.shape},
                          {"mean", s.mean()},       {"std", s.stddev()}, {"mass_outside_unit", skew_normal_mass_outside_unit(s)}};
  } catch (const SkewFitError& e) {
    const auto& m = e.moment_estimate();
    doc["skew_normal"] = {{"location", m.location}, {"scale", m.scale}, {"shape", m.shape}, {"moment_estimate", true}};
    doc["warnings"].push_back(e.what());
  } catch (const Error& e) {
    doc["skew_normal"] = nullptr;
    doc["warnings"].push_back(e.what());
  }
  const auto fit_path = session.out / "forge_fit.json";
  write_json_file(fit_path, doc);
  result.files.push_back(fit_path);

  if (config.svg) {
    const auto svg_path = session.out / "nf_hist.svg";
    write_text_file(svg_path, render_svg_plot("Forged-token readings " + session.profile.name, "n_f", "density",
                                              {histogram("n_f", n_f, 0.0, 1.0, 50)}));
    result.files.push_back(svg_path);
  }
  result.summary = doc;
  return result;
}

// Reads one numeric column of a table written by an earlier run, in either
// output format.
std::vector<double> read_column(const std::filesystem::path& dir, const std::string& stem, const std::string& name) {
  std::vector<double> values;
  const auto csv = dir / (stem + ".csv");
  const auto json = dir / (stem + ".json");
  if (std::filesystem::exists(csv)) {
    const Table table = read_csv_file(csv);
    const std::size_t col = table.column(name);
    for (const auto& row : table.rows) values.push_back(cell_as_double(row[col]));
    return values;
  }
  std::ifstream in(json);
  if (!in) throw Error(ErrorCode::kRuntime, "neither " + csv.string() + " nor " + json.string() + " can be read");
  try {
    const auto doc = nlohmann::json::parse(in);
    const auto& columns = doc.at("columns");
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw DataError(json.string() + ": missing column '" + name + "'");
    const auto col = static_cast<std::size_t>(it - columns.begin());
    for (const auto& row : doc.at("rows")) values.push_back(row.at(col).get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(json.string() + ": " + e.what());
  }
  return values;
}

void append(CommandResult& into, CommandResult&& from) {
  into.files.insert(into.files.end(), from.files.begin(), from.files.end());
}

}  // namespace

std::filesystem::path RunConfig::resolved_out_dir() const {
  if (!out_dir.empty()) return out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return kDefaultOutDir;
}

nlohmann::json noise_fit_json(const std::string& profile, const RabiScan& scan, const NoiseModelFit& fit) {
  return {
      {"schema", "qtoken.noise_fit"},
      {"schema_version", 1},
      {"profile", profile},
      {"points", scan.points.size()},
      {"records", scan.records.size()},
      {"shots", scan.shots},
      {"scale", scan.scale},
      {"n0", fit.model.n0()},
      {"n1", fit.model.n1()},
      {"c", fit.contrast},
      {"sigma_exp", fit.model.sigma_exp()},
      {"sigma_exp_norm", fit.sigma_exp_norm},
      {"mean_rms_residual", fit.mean_rms_residual},
      {"std_rms_log_residual", fit.std_rms_log_residual},
  };
}

CommandResult cmd_rabi(const RunConfig& config, int theta_points, int repetitions) {
  if (theta_points < 5) throw PreconditionError("rabi needs at least 5 theta points");
  if (repetitions < 1) throw PreconditionError("repetitions must be >= 1");
  const Session session = open_session(config);
  std::vector<double> grid;
  for (int i = 0; i < theta_points; ++i) grid.push_back(kPi * i / (theta_points - 1));
  const RabiScan scan =
      rabi_scan(session.profile, grid, session.shots, repetitions, RngSeed{config.seed, kTagRabi}, config.threads);

  CommandResult result;
  Table table{{"theta", "mean_norm", "std_norm"}, {}};
  for (const auto& p : scan.points) table.add_row({p.theta, p.mean_norm, p.std_norm});
  result.files.push_back(write_table(session.out, "rabi", table, config.format));

  Table records{{"theta_prep", "phi_prep", "theta_meas", "phi_meas", "shots", "total_counts"}, {}};
  for (const auto& r : scan.records) {
    records.add_row({r.prep.theta(), r.prep.phi(), r.meas.theta(), r.meas.phi(), r.shots, r.total_counts});
  }
  result.files.push_back(write_table(session.out, "rabi_records", records, OutputFormat::kCsv));

  const NoiseModelFit fit = fit_noise_model(scan);
  const nlohmann::json doc = noise_fit_json(session.profile.name, scan, fit);
  const auto fit_path = session.out / "rabi_fit.json";
  write_json_file(fit_path, doc);
  result.files.push_back(fit_path);

  if (config.svg) {
    PlotSeries mean{"mean_norm", {}, {}}, spread{"std_norm", {}, {}};
    for (const auto& p : scan.points) {
      mean.x.push_back(p.theta);
      mean.y.push_back(p.mean_norm);
      spread.x.push_back(p.theta);
      spread.y.push_back(p.std_norm);
    }
    const auto svg_path = session.out / "rabi.svg";
    write_text_file(svg_path, render_svg_plot("Rabi scan " + session.profile.name, "theta (rad)",
                                              "normalized counts", {mean, spread}));
    result.files.push_back(svg_path);
  }
  result.summary = doc;
  return result;
}

CommandResult cmd_bank_bench(const RunConfig& config, const SamplingPlan& plan) {
  const Session session = open_session(config);
  const BankSamples samples = run_bank_samples(session, config, plan);
  return write_bank_bench(session, config, plan, samples);
}

CommandResult cmd_attack_scan(const RunConfig& config, const AttackScanRequest& request) {
  if (request.z_a.empty()) throw PreconditionError("attack-scan needs at least one z_a value");
  if (request.phi_a.empty()) throw PreconditionError("attack-scan needs at least one phi_a value");
  if (request.bank_z_points < 2 || request.bank_phi_points < 1) {
    throw PreconditionError("bank grid needs >= 2 z points and >= 1 phi point");
  }
  const Session session = open_session(config);
  std::vector<BlochAngles> axes;
  for (double z : request.z_a) {
    for (double phi : request.phi_a) axes.push_back(BlochAngles::from_z(z, phi));
  }
  std::vector<BlochAngles> bank;
  for (std::size_t i = 0; i < request.bank_z_points; ++i) {
    const double z = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(request.bank_z_points - 1);
    for (std::size_t j = 0; j < request.bank_phi_points; ++j) {
      bank.push_back(BlochAngles::from_z(z, kTwoPi * static_cast<double>(j) / static_cast<double>(request.bank_phi_points)));
    }
  }
  const double c = session.profile.effective_contrast();
  const std::size_t total = axes.size() * bank.size();
  std::vector<MeasurementRecord> records(total);
  const RngSeed base{config.seed, kTagAttackScan};
  parallel_for(total, config.threads, [&](std::size_t k) {
    records[k] = simulate_measurement(session.profile, bank[k % bank.size()], axes[k / bank.size()], session.shots,
                                      base.child(k));
  });

  CommandResult result;
  Table table{{"z_b", "phi_b", "z_a", "phi_a", "n_a", "n_a_analytic", "residual", "sigma_est"}, {}};
  double ss_residual = 0.0, ss_sigma = 0.0;
  nlohmann::json per_axis = nlohmann::json::array();
  for (std::size_t a = 0; a < axes.size(); ++a) {
    double axis_ss = 0.0, axis_sigma = 0.0;
    for (std::size_t b = 0; b < bank.size(); ++b) {
      const auto& r = records[a * bank.size() + b];
      const double analytic = attacker_fraction(c, bank[b], axes[a]);
      const double residual = r.n_zero_fraction - analytic;
      table.add_row({bank[b].z(), bank[b].phi(), axes[a].z(), axes[a].phi(), r.n_zero_fraction, analytic, residual,
                     r.sigma_est});
      axis_ss += residual * residual;
      axis_sigma += r.sigma_est * r.sigma_est;
    }
    ss_residual += axis_ss;
    ss_sigma += axis_sigma;
    const double count = static_cast<double>(bank.size());
    per_axis.push_back({{"z_a", axes[a].z()},
                        {"phi_a", axes[a].phi()},
                        {"rms_residual", std::sqrt(axis_ss / count)},
                        {"rms_standard_error", std::sqrt(axis_sigma / count)}});
  }
  result.files.push_back(write_table(session.out, "attack_scan", table, config.format));

  const double count = static_cast<double>(total);
  nlohmann::json doc = {
      {"schema", "qtoken.attack_scan"},
      {"schema_version", 1},
      {"profile", session.profile.name},
      {"shots", session.shots},
      {"rows", total},
      {"rms_residual", std::sqrt(ss_residual / count)},
      {"rms_standard_error", std::sqrt(ss_sigma / count)},
      {"per_axis", per_axis},
  };
  const auto path = session.out / "attack_scan_summary.json";
  write_json_file(path, doc);
  result.files.push_back(path);

  if (config.svg) {
    std::vector<PlotSeries> series;
    for (std::size_t a = 0; a < axes.size() && series.size() < 6; ++a) {
      PlotSeries s{"z_a=" + format_double(axes[a].z()), {}, {}};
      for (std::size_t b = 0; b < bank.size(); b += request.bank_phi_points) {
        s.x.push_back(bank[b].z());
        s.y.push_back(records[a * bank.size() + b].n_zero_fraction);
      }
      series.push_back(std::move(s));
    }
    const auto svg_path = session.out / "attack_scan.svg";
    write_text_file(svg_path, render_svg_plot("Attacker readings " + session.profile.name, "z_b", "n_a", series));
    result.files.push_back(svg_path);
  }
  result.summary = doc;
  return result;
}

CommandResult cmd_forge_bench(const RunConfig& config, const ForgeRequest& request) {
  const Session session = open_session(config);
  const auto rows = run_forge_rows(session, config, request);
  return write_forge_bench(session, config, request, rows);
}

CommandResult cmd_security(const RunConfig& config, const SecurityRequest& request) {
  // Validate the target before doing any simulation work.
  if (!(request.target_p_b > 0.0 && request.target_p_b < 1.0)) {
    throw PreconditionError("target_p_b must lie in (0, 1); " + std::to_string(request.target_p_b) +
                            " is unachievable");
  }
  if (request.tokens_list.empty()) throw PreconditionError("M list must not be empty");
  for (int m : request.tokens_list) {
    if (m < 1) throw PreconditionError("every M must be >= 1");
  }
  const Session session = open_session(config);
  CommandResult result;
  std::vector<double> n_b, n_f;
  if (!request.from_dir.empty()) {
    n_b = read_column(request.from_dir, "nb_samples", "n_b");
    n_f = read_column(request.from_dir, "campaign", "n_f");
  } else {
    const SamplingPlan plan{SamplingStrategy::kUniformSphere, request.forge.tokens, 0, 0};
    const BankSamples bank = run_bank_samples(session, config, plan);
    append(result, write_bank_bench(session, config, plan, bank));
    n_b = bank.n_b;
    const auto rows = run_forge_rows(session, config, request.forge);
    append(result, write_forge_bench(session, config, request.forge, rows));
    for (const auto& row : rows) n_f.push_back(row.n_f);
  }

  const GaussianFit bank_fit = fit_gaussian(n_b);
  const SkewNormalFit forger_fit = fit_skew_normal(n_f);
  const SecurityReport report =
      SecurityReport::build(session.profile.name, bank_fit, forger_fit, request.target_p_b, request.tokens_list);
  nlohmann::json doc = report_to_json(report);
  doc["samples"] = {{"n_b", n_b.size()}, {"n_f", n_f.size()}};
  const auto report_path = session.out / "security_report.json";
  write_json_file(report_path, doc);
  result.files.push_back(report_path);

  Table curve{{"n_T", "p_b", "p_f"}, {}};
  PlotSeries pb{"p_b", {}, {}}, pf{"p_f", {}, {}};
  constexpr int kCurvePoints = 201;
  for (int i = 0; i < kCurvePoints; ++i) {
    const double n_t = static_cast<double>(i) / (kCurvePoints - 1);
    const double p_b = acceptance_probability(bank_fit, n_t);
    const double p_f = acceptance_probability(forger_fit, n_t);
    curve.add_row({n_t, p_b, p_f});
    pb.x.push_back(n_t);
    pb.y.push_back(p_b);
    pf.x.push_back(n_t);
    pf.y.push_back(p_f);
  }
  result.files.push_back(write_table(session.out, "security_curve", curve, config.format));
  if (config.svg) {
    const auto svg_path = session.out / "security_curve.svg";
    write_text_file(svg_path, render_svg_plot("Acceptance probability " + session.profile.name, "n_T",
                                              "probability", {pb, pf}));
    result.files.push_back(svg_path);
  }
  result.summary = doc;
  return result;
}

FitKind fit_kind_from_string(const std::string& text) {
  if (text == "gaussian") return FitKind::kGaussian;
  if (text == "skew-normal" || text == "skew_normal") return FitKind::kSkewNormal;
  if (text == "noise-model" || text == "noise_model") return FitKind::kNoiseModel;
  throw PreconditionError("unknown fit kind '" + text + "' (expected gaussian, skew-normal or noise-model)");
}

CommandResult cmd_fit(const RunConfig& config, const std::filesystem::path& input, FitKind kind) {
  const Session session = open_session(config);
  auto records = ingest_replay(input, session.profile.observable);
  if (records.empty()) throw DataError("replay file " + input.string() + " has no records");

  nlohmann::json doc;
  if (kind == FitKind::kNoiseModel) {
    const RabiScan scan = summarize_rabi_records(std::move(records), session.profile.observable.scale());
    doc = noise_fit_json(session.profile.name, scan, fit_noise_model(scan));
  } else {
    std::vector<double> samples;
    for (const auto& r : records) samples.push_back(r.n_zero_fraction);
    if (kind == FitKind::kGaussian) {
      const GaussianFit fit = fit_gaussian(samples);
      doc = {{"schema", "qtoken.distribution_fit"}, {"schema_version", 1}, {"kind", "gaussian"},
             {"count", samples.size()},             {"mean", fit.mean},   {"std", fit.std}};
    } else {
      const SkewNormalFit fit = fit_skew_normal(samples);
      doc = {{"schema", "qtoken.distribution_fit"},
             {"schema_version", 1},
             {"kind", "skew_normal"},
             {"count", samples.size()},
             {"location", fit.location},
             {"scale", fit.scale},
             {"shape", fit.shape},
             {"mean", fit.mean()},
             {"std", fit.stddev()},
             {"mass_outside_unit", skew_normal_mass_outside_unit(fit)}};
    }
  }
  CommandResult result;
  const auto path = session.out / "fit.json";
  write_json_file(path, doc);
  result.files.push_back(path);
  result.summary = doc;
  return result;
}

}  // namespace qtoken
