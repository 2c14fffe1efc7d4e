// Command-line front end: generate validated kernel files, run the
// verification registry, and evaluate the fundamental solution at a point.
//
// Exit codes: 0 success, 1 check/validation failure, 2 usage or config error.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rsc/checks.hpp"
#include "rsc/kernel_io.hpp"

namespace {

std::vector<double> parse_csv(const std::string& s, int n, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(piece, &pos));
      if (pos != piece.size()) throw std::invalid_argument(piece);
    } catch (...) {
      throw std::invalid_argument(std::string(what) + ": bad number '" +
                                  piece + "'");
    }
  }
  if ((int)out.size() != n)
    throw std::invalid_argument(std::string(what) + " needs " +
                                std::to_string(n) + " comma-separated values");
  return out;
}

int run_gen_kernel(int n, int k, const std::string& kind,
                   const std::string& out) {
  rsc::KernelFile f = rsc::gen_kernel(n, k, kind, out);
  std::cout << "wrote " << out << ": kind=" << f.kind << " n=" << f.n
            << " k=" << f.k << " terms=" << f.terms.size() << "\n";
  return 0;
}

int run_checks_cmd(rsc::CheckConfig cfg, const std::string& report_path) {
  std::vector<rsc::CheckResult> results = rsc::run_checks(cfg);
  bool all_ok = true;
  for (const auto& r : results) {
    std::cout << std::left << std::setw(26) << r.name << " " << std::setw(8)
              << r.status;
    if (r.status == "skipped") {
      std::cout << " (" << r.detail << ")";
    } else {
      if (r.exact_zero)
        std::cout << " residual=exact-zero";
      else
        std::cout << " residual=" << std::scientific << std::setprecision(3)
                  << r.residual;
      std::cout << " time=" << std::fixed << std::setprecision(1) << r.time_ms
                << "ms";
    }
    std::cout << "\n";
    if (r.status == "fail") {
      all_ok = false;
      if (!r.detail.empty()) std::cout << "    " << r.detail << "\n";
    }
  }
  std::cout << (all_ok ? "PASS" : "FAIL") << " (" << results.size()
            << " check" << (results.size() == 1 ? "" : "s") << ")\n";
  if (!report_path.empty()) {
    std::ofstream os(report_path);
    if (!os)
      throw std::invalid_argument("cannot open report file: " + report_path);
    os << rsc::render_report(results, cfg);
    if (!os) throw std::runtime_error("report write failed: " + report_path);
  }
  return all_ok ? 0 : 1;
}

int run_eval_ek(int n, int k, const std::string& xs, const std::string& us,
                const std::string& vs) {
  std::vector<double> x = parse_csv(xs, n, "--x");
  std::vector<double> u = parse_csv(us, n, "--u");
  std::vector<double> v = parse_csv(vs, n, "--v");
  double r2 = 0.0;
  for (double t : x) r2 += t * t;
  if (r2 == 0.0)
    throw std::invalid_argument("--x must be nonzero: E_k is singular at 0");
  rsc::checks_detail::NumericEk e = rsc::checks_detail::make_numeric_ek(n, k);
  rsc::MPoly<double> p = rsc::checks_detail::ek_uv(e, x);
  p = rsc::evaluate_space(p, rsc::Space::u, u);
  p = rsc::evaluate_space(p, rsc::Space::v, v);
  rsc::Multivector<double> val(n);
  for (const auto& [m, c] : p.terms()) val += c;  // every monomial is constant
  if (val.is_zero()) {
    std::cout << "0\n";
    return 0;
  }
  std::cout << std::setprecision(17);
  for (const auto& [b, s] : val.terms())
    std::cout << rsc::blade_name(b) << " " << s << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rarita-Schwinger operator toolkit: exact kernels and "
               "identity verification"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand(
      "gen-kernel", "build a kernel, validate it exactly, write the file");
  int gn = 0, gk = 0;
  std::string kind, out;
  gen->add_option("--n", gn, "ambient dimension (>= 3)")->required();
  gen->add_option("--k", gk, "spinor degree (>= 0)")->required();
  gen->add_option("--kind", kind, "zk (reproducing kernel) or ek (fundamental solution)")
      ->required()
      ->check(CLI::IsMember({"zk", "ek"}));
  gen->add_option("--out", out, "output path")->required();

  auto* chk = app.add_subcommand("check", "run verification checks");
  rsc::CheckConfig cfg;
  std::string report_path;
  chk->add_option("names", cfg.checks,
                  "check names, or 'all' for the default matrix")
      ->required();
  chk->add_option("--n", cfg.n, "ambient dimension");
  chk->add_option("--k", cfg.k, "spinor degree");
  chk->add_option("--tol", cfg.tolerance, "override numeric tolerance");
  chk->add_option("--quad-order", cfg.quad_order, "override quadrature order");
  chk->add_option("--seed", cfg.seed, "random seed");
  chk->add_option("--mode", cfg.scalar_mode, "exact or float")
      ->check(CLI::IsMember({"exact", "float"}));
  chk->add_option("--report", report_path, "write a structured report here");

  auto* ev = app.add_subcommand("eval-ek",
                                "evaluate E_k(x, u, v) at a single point");
  int en = 0, ek = 0;
  std::string xs, us, vs;
  ev->add_option("--n", en, "ambient dimension (>= 3)")->required();
  ev->add_option("--k", ek, "spinor degree (>= 0)")->required();
  ev->add_option("--x", xs, "evaluation point, n comma-separated values")
      ->required();
  ev->add_option("--u", us, "first spinor argument, n values")->required();
  ev->add_option("--v", vs, "second spinor argument, n values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits clean; any parse error is usage
  }

  try {
    if (gen->parsed()) return run_gen_kernel(gn, gk, kind, out);
    if (chk->parsed()) return run_checks_cmd(cfg, report_path);
    if (ev->parsed()) return run_eval_ek(en, ek, xs, us, vs);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
