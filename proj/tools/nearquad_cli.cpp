// nearquad: generate near-singular quadrature rules and reproduce the error studies.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "nearquad/nearquad.hpp"

namespace fs = std::filesystem;
using namespace nearquad;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 2, kDomain = 3, kIo = 4, kValidation = 5 };

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int thread_count() {
  if (const char* env = std::getenv("NEARQUAD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    throw usage_error(std::string("NEARQUAD_THREADS must be an integer in [1, 1024], got '") +
                      env + "'");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Write to a sibling temp file and rename, so a failed run never leaves a
// half-written output behind.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw io_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw io_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw io_error("cannot rename onto '" + path + "'");
  }
}

struct PointArgs {
  std::optional<double> x, y, r, theta;

  void add(CLI::App* cmd) {
    auto* ox = cmd->add_option("--x", x, "Field point abscissa");
    auto* oy = cmd->add_option("--y", y, "Field point height above the element");
    auto* oR = cmd->add_option("--R", r, "Field point distance from the element centre");
    auto* ot = cmd->add_option("--theta", theta, "Field point angle in radians");
    ox->needs(oy);
    oy->needs(ox);
    oR->needs(ot);
    ot->needs(oR);
    ox->excludes(oR);
    ox->excludes(ot);
    oy->excludes(oR);
    oy->excludes(ot);
  }

  FieldPoint resolve() const {
    if (x && y) return FieldPoint::cartesian(*x, *y);
    if (r && theta) {
      if (!(*r >= 0.0)) throw usage_error("--R must be non-negative");
      return FieldPoint::polar(*r, *theta);
    }
    throw usage_error("give the field point as --x/--y or --R/--theta");
  }
};

void check_rule_shape(int nodes, int order) {
  if (nodes < 1 || nodes > kMaxGaussOrder)
    throw usage_error("-N must lie in [1, " + std::to_string(kMaxGaussOrder) + "]");
  if (order < 1 || order > kMaxPolynomialOrder)
    throw usage_error("-M must lie in [1, " + std::to_string(kMaxPolynomialOrder) + "]");
}

MomentScheme parse_scheme(const std::string& s) {
  if (s == "auto") return MomentScheme::automatic;
  if (s == "forward") return MomentScheme::forward_recursion;
  if (s == "series") return MomentScheme::far_field_series;
  throw usage_error("--moments must be auto, forward or series");
}

void warn_if_unreliable(const QuadratureRule& rule) {
  if (rule.unreliable())
    std::cerr << "warning: moment residual " << format_double(rule.residual_norm)
              << " exceeds " << kResidualWarning << "; the rule does not meet every condition\n";
}

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrature rules for near-singular integrals on [-1, 1]"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "nearquad 1.0.0");

  // rule
  auto* rule_cmd = app.add_subcommand("rule", "Print the quadrature rule for one field point");
  PointArgs rule_point;
  rule_point.add(rule_cmd);
  int rule_n = 16, rule_m = 4;
  std::string rule_format = "text", rule_out;
  std::string rule_scheme = "auto";
  rule_cmd->add_option("-N,--nodes", rule_n, "Number of Gauss-Legendre nodes")->capture_default_str();
  rule_cmd->add_option("-M,--order", rule_m, "Polynomial order per basis block")->capture_default_str();
  rule_cmd->add_option("--format", rule_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  rule_cmd->add_option("--moments", rule_scheme, "auto, forward or series")->capture_default_str();
  rule_cmd->add_option("-o,--out", rule_out, "Output file (default stdout)");

  // integrate
  auto* int_cmd = app.add_subcommand(
      "integrate", "Integrate a/D + b/sqrt(D) + c log sqrt(D) + d for polynomial a, b, c, d");
  PointArgs int_point;
  int_point.add(int_cmd);
  int int_n = 16, int_m = 4;
  std::vector<double> ca, cb, cc, cd;
  int_cmd->add_option("-N,--nodes", int_n)->capture_default_str();
  int_cmd->add_option("-M,--order", int_m)->capture_default_str();
  int_cmd->add_option("-a", ca, "Coefficients of a, lowest degree first")->delimiter(',');
  int_cmd->add_option("-b", cb, "Coefficients of b")->delimiter(',');
  int_cmd->add_option("-c", cc, "Coefficients of c")->delimiter(',');
  int_cmd->add_option("-d", cd, "Coefficients of d")->delimiter(',');

  // check
  auto* check_cmd = app.add_subcommand("check", "Audit the closed-form moments against adaptive quadrature");
  double check_tol = 1e-9;
  double inject_fault = 0.0;
  check_cmd->add_option("--tolerance", check_tol, "Largest accepted relative discrepancy")
      ->capture_default_str();
  check_cmd->add_option("--inject-fault", inject_fault, "Relative perturbation of the first moment")
      ->group("");

  // table
  auto* table_cmd = app.add_subcommand("table", "RMS reference-integral errors on the standard grid");
  int which = 1;
  std::string table_out, table_scheme = "auto";
  table_cmd->add_option("which", which, "1 (N=16, M=4) or 2 (N=64, M=16)")->required();
  table_cmd->add_option("-o,--out", table_out, "CSV output file (default stdout)");
  table_cmd->add_option("--moments", table_scheme, "auto, forward or series")->capture_default_str();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Pointwise error curves and weight deviation");
  std::string sweep_kernel = "invr2", sweep_out;
  int sweep_n = 16, sweep_m = 4;
  std::vector<double> sweep_r{0.5, 1.0, 2.0}, sweep_theta;
  std::vector<int> sweep_deg{0};
  sweep_cmd->add_option("--kernel", sweep_kernel, "log, invr or invr2")->capture_default_str();
  sweep_cmd->add_option("-N,--nodes", sweep_n)->capture_default_str();
  sweep_cmd->add_option("-M,--order", sweep_m)->capture_default_str();
  sweep_cmd->add_option("--R", sweep_r, "Radii")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--theta", sweep_theta, "Angles (default: 16 angles (2i+1) pi/64)")->delimiter(',');
  sweep_cmd->add_option("--degrees", sweep_deg, "Monomial degrees n")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("-o,--out", sweep_out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (rule_cmd->parsed()) {
      check_rule_shape(rule_n, rule_m);
      const auto point = rule_point.resolve();
      const auto rule = generate_rule(RuleSpec(point, rule_n, rule_m), parse_scheme(rule_scheme));
      warn_if_unreliable(rule);
      std::ostringstream os;
      if (rule_format == "json")
        os << rule_to_json(rule).dump(2) << '\n';
      else
        write_rule_text(os, rule);
      write_output(rule_out, os.str());
      return kOk;
    }

    if (int_cmd->parsed()) {
      check_rule_shape(int_n, int_m);
      const auto point = int_point.resolve();
      const auto rule = generate_rule(RuleSpec(point, int_n, int_m));
      warn_if_unreliable(rule);
      for (const auto* c : {&ca, &cb, &cc, &cd})
        if (static_cast<int>(c->size()) > int_m)
          std::cerr << "warning: polynomial degree " << c->size() - 1
                    << " exceeds the rule's exactness degree " << int_m - 1 << '\n';
      auto f = [&](double t) {
        return horner(ca, t) * kernel_value(KernelKind::inv_r2, point, t) +
               horner(cb, t) * kernel_value(KernelKind::inv_r, point, t) +
               horner(cc, t) * kernel_value(KernelKind::log, point, t) + horner(cd, t);
      };
      const double modified = apply_rule(rule, f);
      const double gauss = apply_gauss(gauss_legendre(int_n), f);
      const auto ref = oracle_integrate(f, -1.0, 1.0, 1e-13);
      std::cout << "modified " << format_double(modified) << '\n'
                << "gauss    " << format_double(gauss) << '\n'
                << "adaptive " << format_double(ref.value) << '\n';
      return kOk;
    }

    if (check_cmd->parsed()) {
      if (!(check_tol > 0.0)) throw usage_error("--tolerance must be positive");
      const double fault = inject_fault;
      MomentProvider provider = [fault](KernelKind k, const FieldPoint& p, int count) {
        auto m = power_moments(k, p, count);
        m[0] *= 1.0 + fault;
        return m;
      };
      const auto report = run_moment_audit(provider, check_tol, audit_grid(), 32, thread_count());
      const auto& w = report.worst;
      std::cout << "checked " << report.entries.size() << " moments, worst relative discrepancy "
                << format_double(w.relative_discrepancy) << " (kernel " << to_string(w.kernel)
                << ", n " << w.degree << ", x " << format_double(w.x) << ", y "
                << format_double(w.y) << ")\n";
      if (!report.passed()) {
        std::cerr << "check failed: discrepancy exceeds tolerance " << format_double(check_tol)
                  << " at kernel " << to_string(w.kernel) << ", n " << w.degree << ", x "
                  << format_double(w.x) << ", y " << format_double(w.y) << '\n';
        return kValidation;
      }
      return kOk;
    }

    if (table_cmd->parsed()) {
      if (which != 1 && which != 2) throw usage_error("table must be 1 or 2");
      auto config = published_table_config(which);
      config.scheme = parse_scheme(table_scheme);
      const auto report = reference_error_table(config, thread_count());
      std::ostringstream os;
      write_table_csv(os, report);
      write_output(table_out, os.str());
      return kOk;
    }

    if (sweep_cmd->parsed()) {
      check_rule_shape(sweep_n, sweep_m);
      SweepConfig config;
      const auto kernel = parse_kernel(sweep_kernel);
      if (!kernel || *kernel == KernelKind::unit)
        throw usage_error("--kernel must be log, invr or invr2");
      config.kernel = *kernel;
      config.nodes = sweep_n;
      config.order = sweep_m;
      config.radii = sweep_r;
      config.thetas = sweep_theta.empty() ? standard_thetas() : sweep_theta;
      config.degrees = sweep_deg;
      try {
        config.validate();
      } catch (const contract_violation& e) {
        throw usage_error(e.what());
      }
      const auto report = pointwise_error_curves(config, thread_count());
      std::ostringstream os;
      write_error_report_csv(os, report);
      write_output(sweep_out, os.str());
      return kOk;
    }
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const singular_configuration& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kUsage;
}
