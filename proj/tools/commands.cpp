#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

#include <CLI11.hpp>

namespace tin::cli {

namespace {

using nlohmann::json;

Complex parse_coefficient(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ChannelFileError(std::string("missing coefficient '") + key + "'");
  const json& v = doc.at(key);
  if (v.is_array()) {
    if (v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ChannelFileError(std::string("'") + key + "' must be [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
  }
  if (v.is_object()) {
    if (!v.contains("mag") || !v.contains("phase_rad") || !v["mag"].is_number() ||
        !v["phase_rad"].is_number())
      throw ChannelFileError(std::string("'") + key + "' must have numeric mag and phase_rad");
    const double mag = v["mag"].get<double>();
    if (mag < 0.0) throw ChannelFileError(std::string("'") + key + "' has negative magnitude");
    return std::polar(mag, v["phase_rad"].get<double>());
  }
  throw ChannelFileError(std::string("'") + key + "' must be an array or an object");
}

double parse_noise(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number())
    throw ChannelFileError(std::string("missing numeric '") + key + "'");
  const double n = doc.at(key).get<double>();
  if (!(n > 0.0) || !std::isfinite(n))
    throw ChannelFileError(std::string("'") + key + "' must be positive");
  return n;
}

std::string status_of(bool converged) { return converged ? "ok" : "not-converged"; }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Common {
  std::string channel;
  double p1 = 10.0;
  double p2 = 10.0;
  double eps_cp = 1e-4;
  double eps_bnb = 1e-6;
  bool serial = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--channel", c.channel, "channel file (JSON)")->required();
  cmd->add_option("--p1", c.p1, "power budget of user 1")->capture_default_str();
  cmd->add_option("--p2", c.p2, "power budget of user 2")->capture_default_str();
  cmd->add_option("--eps-cp", c.eps_cp, "cutting-plane tolerance")->capture_default_str();
  cmd->add_option("--eps-bnb", c.eps_bnb, "branch-and-bound tolerance")->capture_default_str();
  cmd->add_flag("--serial", c.serial, "disable multithreading");
}

RegionConfig make_config(const Common& c) {
  RegionConfig cfg;
  cfg.outer.epsilon_cp = c.eps_cp;
  cfg.outer.inner.epsilon = c.eps_bnb;
  cfg.outer.validate();
  cfg.execution = c.serial ? kernels::Execution::serial : kernels::Execution::parallel;
  return cfg;
}

// Opens --out or falls back to the given stream.
class Output {
public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw ChannelFileError("cannot open output file '" + path + "'");
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_;
};

int cmd_region(const Common& common, const std::string& method_name, std::size_t beta_count,
               std::optional<double> beta, std::uint64_t seed, std::size_t samples,
               const std::string& out_path, std::ostream& out) {
  const auto method = parse_method(method_name);
  if (!method) throw CLI::ValidationError("--method", "unknown method '" + method_name + "'");
  const ChannelRealization ch = load_channel(common.channel);
  const PowerBudget budget{common.p1, common.p2};
  RegionConfig cfg = make_config(common);
  cfg.sampling.seed = seed;
  cfg.sampling.random_samples = samples;

  const std::vector<double> betas = beta ? std::vector<double>{*beta} : beta_grid(beta_count);
  const RegionBoundary boundary = sweep_boundary(*method, ch, budget, betas, cfg);
  Output sink(out_path, out);
  write_region_csv(sink.get(), boundary);
  const bool converged = std::all_of(boundary.entries.begin(), boundary.entries.end(),
                                     [](const RegionEntry& e) { return e.converged; });
  return converged ? kExitOk : kExitNotConverged;
}

int cmd_solve(const Common& common, double beta, const std::string& out_path, std::ostream& out) {
  const ChannelRealization ch = load_channel(common.channel);
  const PowerBudget budget{common.p1, common.p2};
  const RegionConfig cfg = make_config(common);
  const RateProfile profile(beta);
  const TimeSharingSolution sol = ts_point(ch, budget, profile, cfg.outer);
  json doc = solution_document(sol, profile);
  doc["p1"] = budget.p1;
  doc["p2"] = budget.p2;
  Output sink(out_path, out);
  sink.get() << doc.dump(2) << '\n';
  return sol.converged ? kExitOk : kExitNotConverged;
}

struct VerifyOptions {
  std::string suite = "all";
  std::optional<std::size_t> trials;
  std::uint64_t seed = 1;
  std::size_t betas = 101;
  bool enhanced = false;
};

bool verify_lemma1(const ChannelRealization& ch, const PowerBudget& budget,
                   const RegionConfig& cfg, const VerifyOptions& opt, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Lemma1Report r =
      lemma1_check(ch, budget, opt.trials.value_or(100000), opt.seed, cfg.execution);
  out << "lemma1: " << (r.passed() ? "PASS" : "FAIL") << " trials=" << r.trials
      << " bound_violations=" << r.bound_violations
      << " max_bound_violation=" << format_number(r.max_bound_violation)
      << " max_alignment_error=" << format_number(r.max_alignment_error)
      << " max_enhancement_difference=" << format_number(r.max_enhancement_difference)
      << " max_proper_difference=" << format_number(r.max_proper_difference)
      << " simultaneous_alignment=" << (r.simultaneous_alignment ? "yes" : "no")
      << " runtime_s=" << format_number(seconds_since(start)) << '\n';
  return r.passed();
}

bool verify_theorem1(const ChannelRealization& ch, const PowerBudget& budget,
                     const RegionConfig& cfg, const VerifyOptions& opt, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  Theorem1Options options;
  options.trials = opt.trials.value_or(1000);
  options.seed = opt.seed;
  options.boundary_betas = opt.betas;
  const Theorem1Report r = theorem1_check(ch, budget, cfg, options);
  out << "theorem1: " << (r.passed() ? "PASS" : "FAIL") << " trials=" << r.trials
      << " violations=" << r.violations << " max_violation=" << format_number(r.max_violation)
      << " tolerance=" << format_number(r.tolerance) << " boundary_points=" << r.boundary_points
      << " boundary_converged=" << (r.boundary_converged ? "yes" : "no")
      << " runtime_s=" << format_number(seconds_since(start)) << '\n';
  return r.passed();
}

bool verify_duality(const ChannelRealization& ch, const PowerBudget& budget,
                    const RegionConfig& cfg, const VerifyOptions& opt, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto betas = beta_grid(opt.betas);
  const auto solutions = kernels::map_indexed<TimeSharingSolution>(
      betas.size(),
      [&](std::size_t i) { return ts_point(ch, budget, RateProfile(betas[i]), cfg.outer); },
      cfg.execution);
  double max_gap = 0.0;
  std::size_t max_active = 0, unconverged = 0;
  for (const auto& sol : solutions) {
    max_gap = std::max(max_gap, std::abs(sol.R - sol.dual_upper));
    max_active = std::max(max_active, sol.strategies.size());
    if (!sol.converged) ++unconverged;
  }
  const double tolerance = 2.0 * cfg.outer.epsilon_cp;
  const bool ok = max_gap <= tolerance && max_active <= 4 && unconverged == 0;
  out << "duality: " << (ok ? "PASS" : "FAIL") << " betas=" << betas.size()
      << " max_gap=" << format_number(max_gap) << " tolerance=" << format_number(tolerance)
      << " max_active_strategies=" << max_active << " unconverged=" << unconverged
      << " runtime_s=" << format_number(seconds_since(start)) << '\n';
  return ok;
}

bool verify_nesting(const ChannelRealization& ch, const PowerBudget& budget,
                    const RegionConfig& cfg, const VerifyOptions& opt, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto betas = beta_grid(opt.betas);
  const auto pure = sweep_boundary(Method::pure_proper, ch, budget, betas, cfg);
  const auto hull = sweep_boundary(Method::hull_proper, ch, budget, betas, cfg);
  const auto ts = sweep_boundary(Method::ts_proper, ch, budget, betas, cfg);
  double min_slack = std::numeric_limits<double>::infinity();
  bool converged = true;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    min_slack = std::min({min_slack, hull.entries[i].R - pure.entries[i].R,
                          ts.entries[i].R - hull.entries[i].R});
    converged = converged && ts.entries[i].converged;
  }
  const bool ok = min_slack >= -1e-6 && converged;
  out << "nesting: " << (ok ? "PASS" : "FAIL") << " betas=" << betas.size()
      << " min_slack=" << format_number(min_slack) << " tolerance=-1e-06"
      << " runtime_s=" << format_number(seconds_since(start)) << '\n';
  return ok;
}

int cmd_verify(const Common& common, const VerifyOptions& opt, std::ostream& out) {
  static const std::vector<std::string> suites{"lemma1", "theorem1", "duality", "nesting"};
  if (opt.suite != "all" && std::find(suites.begin(), suites.end(), opt.suite) == suites.end())
    throw CLI::ValidationError("--suite", "unknown suite '" + opt.suite + "'");
  ChannelRealization ch = load_channel(common.channel);
  if (opt.enhanced) ch = enhance(ch);
  const PowerBudget budget{common.p1, common.p2};
  budget.validate();
  const RegionConfig cfg = make_config(common);

  bool ok = true;
  for (const std::string& s : suites) {
    if (opt.suite != "all" && opt.suite != s) continue;
    if (s == "lemma1") ok = verify_lemma1(ch, budget, cfg, opt, out) && ok;
    if (s == "theorem1") ok = verify_theorem1(ch, budget, cfg, opt, out) && ok;
    if (s == "duality") ok = verify_duality(ch, budget, cfg, opt, out) && ok;
    if (s == "nesting") ok = verify_nesting(ch, budget, cfg, opt, out) && ok;
  }
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

ChannelRealization parse_channel(const json& doc) {
  if (!doc.is_object()) throw ChannelFileError("channel document must be an object");
  const ChannelRealization ch = ChannelRealization::from_coefficients(
      parse_coefficient(doc, "h11"), parse_coefficient(doc, "h12"), parse_coefficient(doc, "h21"),
      parse_coefficient(doc, "h22"), parse_noise(doc, "noise1"), parse_noise(doc, "noise2"));
  try {
    ch.validate();
  } catch (const PreconditionError& e) {
    throw ChannelFileError(e.what());
  }
  return ch;
}

ChannelRealization load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ChannelFileError("cannot open channel file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ChannelFileError("'" + path + "': " + e.what());
  }
  return parse_channel(doc);
}

json channel_to_json(const ChannelRealization& ch) {
  json doc;
  const char* names[2][2] = {{"h11", "h12"}, {"h21", "h22"}};
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j) doc[names[k][j]] = {ch.gain[k][j].real(), ch.gain[k][j].imag()};
  doc["noise1"] = ch.noise[0];
  doc["noise2"] = ch.noise[1];
  return doc;
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_region_csv(std::ostream& os, const RegionBoundary& boundary) {
  os << "method,beta,r1,r2,R,status\n";
  for (const RegionEntry& e : boundary.entries)
    os << to_string(e.method) << ',' << format_number(e.beta) << ',' << format_number(e.rates.r1)
       << ',' << format_number(e.rates.r2) << ',' << format_number(e.R) << ','
       << status_of(e.converged) << '\n';
}

json solution_document(const TimeSharingSolution& sol, const RateProfile& profile) {
  json doc;
  doc["R"] = sol.R;
  doc["beta"] = profile.beta();
  doc["mu"] = {sol.dual.mu[0], sol.dual.mu[1]};
  doc["lambda"] = {sol.dual.lambda[0], sol.dual.lambda[1]};
  doc["cuts"] = sol.cut_count;
  doc["converged"] = sol.converged;
  doc["dual_lower"] = sol.dual_lower;
  doc["dual_upper"] = sol.dual_upper;
  doc["strategies"] = json::array();
  for (const TimeSharingStrategy& s : sol.strategies)
    doc["strategies"].push_back({{"tau", s.tau},
                                 {"p1", s.p[0]},
                                 {"p2", s.p[1]},
                                 {"r1", s.rates.r1},
                                 {"r2", s.rates.r2}});
  return doc;
}

double evaluate_solution_document(const ChannelRealization& ch, const json& doc) {
  const RateProfile profile(doc.at("beta").get<double>());
  RatePair avg;
  for (const json& s : doc.at("strategies")) {
    const double tau = s.at("tau").get<double>();
    const RatePair r = rate_pair_proper(ch, {s.at("p1").get<double>(), s.at("p2").get<double>()});
    avg.r1 += tau * r.r1;
    avg.r2 += tau * r.r2;
  }
  return kernels::balanced_value(avg, profile);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-user Gaussian interference channel rate regions under TIN", "tinregion"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Common common;
  auto* region = app.add_subcommand("region", "compute a rate-region boundary as CSV");
  add_common(region, common);
  std::string method;
  std::size_t beta_count = 101;
  std::optional<double> beta;
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  std::string region_out;
  region->add_option("--method", method,
                     "pure-proper | hull-proper | ts-proper | pure-improper-samples | hull-improper")
      ->required();
  region->add_option("--betas", beta_count, "number of profiles from beta=1 down to 0")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  region->add_option("--beta", beta, "single profile beta in [0,1]")->check(CLI::Range(0.0, 1.0));
  region->add_option("--seed", seed, "seed of the random improper samples")->capture_default_str();
  region->add_option("--samples", samples, "random improper strategies added to the grid")
      ->capture_default_str();
  region->add_option("--out", region_out, "output file (default: stdout)");

  auto* verify = app.add_subcommand("verify", "run numerical verification suites");
  Common verify_common;
  add_common(verify, verify_common);
  VerifyOptions vopt;
  verify->add_option("--suite", vopt.suite, "lemma1 | theorem1 | duality | nesting | all")
      ->capture_default_str();
  verify->add_option("--trials", vopt.trials, "random trials (lemma1: 100000, theorem1: 1000)");
  verify->add_option("--seed", vopt.seed, "random seed")->capture_default_str();
  verify->add_option("--betas", vopt.betas, "profiles swept by theorem1, duality and nesting")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  verify->add_flag("--enhanced", vopt.enhanced, "replace every coefficient by its modulus first");

  auto* solve = app.add_subcommand("solve", "one time-sharing point as a JSON document");
  Common solve_common;
  add_common(solve, solve_common);
  double solve_beta = 0.5;
  std::string solve_out;
  solve->add_option("--beta", solve_beta, "profile beta in [0,1]")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  solve->add_option("--out", solve_out, "output file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (region->parsed())
      return cmd_region(common, method, beta_count, beta, seed, samples, region_out, out);
    if (verify->parsed()) return cmd_verify(verify_common, vopt, out);
    return cmd_solve(solve_common, solve_beta, solve_out, out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ChannelFileError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace tin::cli
