#include "heatkern/cli.hpp"

#include <omp.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heatkern/domain.hpp"
#include "heatkern/envelope.hpp"
#include "heatkern/errors.hpp"
#include "heatkern/jacobi.hpp"
#include "heatkern/oracle.hpp"
#include "heatkern/selftest.hpp"
#include "json.hpp"
#include "json_util.hpp"

namespace heatkern::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    double v = 0.0;
    const char* first = text.data() + pos;
    const char* last = text.data() + end;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last) {
      throw UsageError(std::string("could not parse ") + what + " entry '" + std::string(first, last) + "'");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

struct WeightArgs {
  std::string domain;
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  int d = 0;
  std::string kappa;
};

void add_weight_options(CLI::App* cmd, WeightArgs& w) {
  cmd->add_option("domain", w.domain, "interval, ball or simplex")
      ->required()
      ->check(CLI::IsMember({"interval", "ball", "simplex"}));
  cmd->add_option("--alpha", w.alpha, "interval weight exponent at x = 1");
  cmd->add_option("--beta", w.beta, "interval weight exponent at x = -1");
  cmd->add_option("--mu", w.mu, "ball weight parameter");
  cmd->add_option("--d", w.d, "dimension (ball, simplex)");
  cmd->add_option("--kappa", w.kappa, "simplex parameters, comma separated (d+1 entries)");
}

AnyWeight make_weight(const WeightArgs& a) {
  if (a.domain == "interval") return jacobi::IntervalWeight(a.alpha, a.beta);
  if (a.domain == "ball") {
    if (a.d < 1) throw UsageError("ball needs --d >= 1");
    return ball::BallWeight(a.mu, a.d);
  }
  const std::vector<double> kappa = parse_list(a.kappa, "--kappa");
  if (kappa.empty()) throw UsageError("simplex needs --kappa");
  const int d = a.d > 0 ? a.d : static_cast<int>(kappa.size()) - 1;
  return simplex::SimplexWeight(kappa, d);
}

std::vector<double> parse_point(const AnyWeight& w, const std::string& text, const char* what) {
  if (text.empty()) throw UsageError(std::string(what) + " is required");
  std::vector<double> p = parse_list(text, what);
  if (static_cast<int>(p.size()) != dimension(w)) {
    std::ostringstream os;
    os << what << " has " << p.size() << " coordinates, the " << domain_name(w) << " needs " << dimension(w);
    throw UsageError(os.str());
  }
  check_point(w, p);
  return p;
}

json base_record(const char* command, const AnyWeight& w) {
  return json{{"schema", 1}, {"command", command}, {"domain", domain_name(w)}, {"weight", weight_json(w)}};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

struct EvalArgs {
  WeightArgs weight;
  double t = 0.0;
  std::string x, y;
  std::string path = "integral";
  bool both = false;
  double tol = 1e-12;
  double t_min = kDefaultTMin;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const AnyWeight w = make_weight(a.weight);
  const auto x = parse_point(w, a.x, "--x");
  const auto y = parse_point(w, a.y, "--y");
  const TruncationPlan plan = choose_truncation(w, a.t, a.tol, a.t_min);
  json rec = base_record("eval", w);
  rec["t"] = a.t;
  rec["x"] = x;
  rec["y"] = y;
  rec["cutoff"] = plan.cutoff_N;
  rec["tail_tol"] = plan.tail_tol;

  auto route = [&](const std::string& path) -> double {
    if (path == "integral") return AnyHeatKernel(w, a.t, plan)(x, y);
    if (path == "series") return heat_kernel_series(w, a.t, x, y, plan);
    const auto basis = oracle::gram_schmidt_basis(w, oracle::max_basis_degree(dimension(w)));
    return oracle::heat_oracle(basis, a.t, x, y, a.tol);
  };

  if (a.both) {
    const double integral = route("integral");
    const double series = route("series");
    rec["integral"] = integral;
    rec["series"] = series;
    rec["difference"] = integral - series;
    out << num(integral) << ' ' << num(series) << ' ' << num(integral - series) << '\n';
  } else {
    const double v = route(a.path);
    rec["path"] = a.path;
    rec["value"] = v;
    out << num(v) << '\n';
  }
  out << rec.dump() << '\n';
  return kExitOk;
}

struct ProjectorArgs {
  WeightArgs weight;
  int n = 0;
  std::string x, y;
  std::string path = "closed";
  bool both = false;
  std::string fixtures;
};

int cmd_projector(const ProjectorArgs& a, std::ostream& out) {
  const AnyWeight w = make_weight(a.weight);
  const auto x = parse_point(w, a.x, "--x");
  const auto y = parse_point(w, a.y, "--y");
  if (a.n < 0) throw UsageError("--n must be >= 0");
  json rec = base_record("projector", w);
  rec["n"] = a.n;
  rec["x"] = x;
  rec["y"] = y;

  std::optional<oracle::OrthonormalBasis> basis;
  if (a.both || a.path == "oracle" || !a.fixtures.empty()) basis = oracle::gram_schmidt_basis(w, a.n);
  if (!a.fixtures.empty()) write_file(a.fixtures, oracle::basis_to_json(*basis));

  if (a.both) {
    const double closed = projector(w, a.n, x, y);
    const double gs = oracle::projector_oracle(*basis, a.n, x, y);
    rec["closed"] = closed;
    rec["oracle"] = gs;
    rec["difference"] = closed - gs;
    out << num(closed) << ' ' << num(gs) << ' ' << num(closed - gs) << '\n';
  } else {
    const double v = a.path == "oracle" ? oracle::projector_oracle(*basis, a.n, x, y) : projector(w, a.n, x, y);
    rec["path"] = a.path;
    rec["value"] = v;
    out << num(v) << '\n';
  }
  out << rec.dump() << '\n';
  return kExitOk;
}

struct ScanArgs {
  WeightArgs weight;
  std::string t_list = "0.01,0.03,0.1,0.3,1";
  int pairs = 400;
  std::uint64_t seed = 1;
  std::string out_dir = "envelope_out";
  bool negative_control = false;
  double tol = 1e-12;
  double t_min = kDefaultTMin;
  double u_max = 0.0;
};

int cmd_envelope_scan(const ScanArgs& a, int threads, std::ostream& out) {
  const AnyWeight w = make_weight(a.weight);
  envelope::ScanConfig cfg;
  cfg.t_list = parse_list(a.t_list, "--t");
  if (cfg.t_list.empty()) throw UsageError("--t needs at least one time");
  if (a.pairs < 1) throw UsageError("--pairs must be >= 1");
  cfg.sampler.seed = a.seed;
  cfg.sampler.pairs_per_t = a.pairs;
  cfg.sampler.u_max = a.u_max;
  cfg.tol = a.tol;
  cfg.t_min = a.t_min;
  cfg.threads = threads;
  cfg.negative_control = a.negative_control;

  const envelope::ScanResult result = envelope::run_scan(w, cfg);
  const std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  const int dim = dimension(w);
  const std::string report = envelope::report_json(w, cfg, result);
  write_file(dir / "samples.csv", envelope::samples_csv(result.training.retained, dim));
  write_file(dir / "holdout.csv", envelope::samples_csv(result.holdout.retained, dim));
  std::vector<envelope::EnvelopeSample> quarantined = result.training.quarantined;
  quarantined.insert(quarantined.end(), result.holdout.quarantined.begin(), result.holdout.quarantined.end());
  write_file(dir / "quarantine.csv", envelope::quarantine_csv(quarantined, dim));
  write_file(dir / "report.json", report);
  out << report;
  return result.passed() ? kExitOk : kExitInvariant;
}

int cmd_selftest(const std::string& level, bool inject_fault, std::ostream& out) {
  const selftest::Level lv = level == "full" ? selftest::Level::full : selftest::Level::quick;
  if (inject_fault) jacobi::testing::set_norm_fault(1.01);
  std::vector<selftest::SuiteResult> results;
  try {
    results = selftest::run(lv);
  } catch (...) {
    jacobi::testing::set_norm_fault(1.0);
    throw;
  }
  jacobi::testing::set_norm_fault(1.0);

  json suites = json::array();
  bool ok = true;
  for (const auto& r : results) {
    out << r.name << ": " << r.passed << "/" << r.passed + r.failed << " passed\n";
    for (const auto& f : r.failures) out << "  FAIL " << f << '\n';
    suites.push_back({{"name", r.name}, {"passed", r.passed}, {"failed", r.failed}});
    ok = ok && r.ok();
  }
  out << json{{"schema", 1}, {"command", "selftest"}, {"level", level}, {"fault_injected", inject_fault},
              {"suites", suites}, {"passed", ok}}
             .dump()
      << '\n';
  return ok ? kExitOk : kExitInvariant;
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", message}, {"kind", kind}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted heat kernels on the interval, ball and simplex", "heatkern"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate the heat kernel K(t, x, y)");
  add_weight_options(eval_cmd, eval.weight);
  eval_cmd->add_option("--t", eval.t, "time")->required();
  eval_cmd->add_option("--x", eval.x, "first point, comma separated")->required();
  eval_cmd->add_option("--y", eval.y, "second point, comma separated")->required();
  eval_cmd->add_option("--path", eval.path, "integral, series or oracle")
      ->check(CLI::IsMember({"integral", "series", "oracle"}));
  eval_cmd->add_flag("--both", eval.both, "print integral and series values and their difference");
  eval_cmd->add_option("--tol", eval.tol, "certified truncation tolerance");
  eval_cmd->add_option("--tmin", eval.t_min, "smallest admissible time");

  ProjectorArgs proj;
  CLI::App* proj_cmd = app.add_subcommand("projector", "evaluate the projector kernel P_n(x, y)");
  add_weight_options(proj_cmd, proj.weight);
  proj_cmd->add_option("--n", proj.n, "degree")->required();
  proj_cmd->add_option("--x", proj.x, "first point")->required();
  proj_cmd->add_option("--y", proj.y, "second point")->required();
  proj_cmd->add_option("--path", proj.path, "closed or oracle")->check(CLI::IsMember({"closed", "oracle"}));
  proj_cmd->add_flag("--both", proj.both, "print closed form and Gram-Schmidt values");
  proj_cmd->add_option("--write-fixtures", proj.fixtures, "write the Gram-Schmidt basis as JSON");

  ScanArgs scan;
  CLI::App* scan_cmd = app.add_subcommand("envelope-scan", "sample and fit the two-sided Gaussian envelope");
  add_weight_options(scan_cmd, scan.weight);
  scan_cmd->add_option("--t", scan.t_list, "times in [tmin, 1], comma separated");
  scan_cmd->add_option("--pairs", scan.pairs, "point pairs per time");
  scan_cmd->add_option("--seed", scan.seed, "sampler seed");
  scan_cmd->add_option("--out", scan.out_dir, "output directory");
  scan_cmd->add_flag("--negative-control", scan.negative_control, "check the fit against K == 1");
  scan_cmd->add_option("--tol", scan.tol, "certified truncation tolerance (also the quarantine threshold)");
  scan_cmd->add_option("--tmin", scan.t_min, "smallest admissible time");
  scan_cmd->add_option("--u-max", scan.u_max, "largest targeted dist^2/t (0: domain default)");

  std::string level = "quick";
  bool inject_fault = false;
  CLI::App* self_cmd = app.add_subcommand("selftest", "run the invariant suites");
  self_cmd->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  self_cmd->add_flag("--inject-fault", inject_fault, "corrupt the Jacobi norm constants first (must fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return kExitUsage;
  }

  if (threads > 0) omp_set_num_threads(threads);
  const int workers = threads > 0 ? threads : omp_get_max_threads();
  try {
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*proj_cmd) return cmd_projector(proj, out);
    if (*scan_cmd) return cmd_envelope_scan(scan, workers, out);
    return cmd_selftest(level, inject_fault, out);
  } catch (const UsageError& e) {
    print_error(err, "usage", e.what());
    return kExitUsage;
  } catch (const InvariantFailure& e) {
    print_error(err, "invariant", e.what());
    return kExitInvariant;
  } catch (const DomainError& e) {
    print_error(err, "domain", e.what());
    return kExitNumeric;
  } catch (const NumericalFailure& e) {
    print_error(err, "numerical", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    print_error(err, "runtime", e.what());
    return kExitNumeric;
  }
}

}  // namespace heatkern::cli
