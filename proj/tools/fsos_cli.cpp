// Command-line front end: certify/verify nonnegativity certificates, run
// transforms, bounds, the pigeonhole construction, SOHS lifting, the
// sparsest-structure search, and the benchmark experiments.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "fsos/bench.hpp"
#include "fsos/bounds.hpp"
#include "fsos/fsos.hpp"

namespace {

using namespace fsos;

int env_threads() {
  const char* v = std::getenv("FSOS_THREADS");
  if (!v) return static_cast<int>(std::thread::hardware_concurrency());
  int n = std::atoi(v);
  return n > 0 ? n : 1;
}

GroupSpec parse_group(const std::string& text) {
  std::vector<index_t> orders;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) orders.push_back(std::stoll(token));
  return GroupSpec(orders);
}

void check_group_flag(const std::string& flag, const GroupSpec& from_file) {
  if (flag.empty()) return;
  if (parse_group(flag) != from_file)
    throw ArgumentError("--group disagrees with the group stored in the input file");
}

struct CommonOpts {
  std::string group;
  std::string input;
  std::string output;
  double eps = 1e-3;
  double feas_tol = 1e-9;
  double tol = 1e-8;
  int max_iter = 20000;

  CertifyOptions certify() const {
    CertifyOptions o;
    o.eps_guidance = eps;
    o.feas_tol = feas_tol;
    o.tol = tol;
    o.max_iter = max_iter;
    return o;
  }
};

int cmd_certify(const CommonOpts& opts, bool universal) {
  LoadedFunction lf = function_from_json(load_json_file(opts.input));
  check_group_flag(opts.group, lf.spec);
  GroupFunction f = lf.as_function();
  FsosCertificate cert;
  if (universal) {
    cert = universal_certify(f, opts.certify());
  } else {
    CertifyResult result = fsos::certify(f, opts.certify());
    if (result.refuted()) {
      const auto& cx = *result.counterexample;
      std::printf("counterexample: f = %.17g at element", cx.value);
      for (index_t c : cx.point.coords()) std::printf(" %lld", static_cast<long long>(c));
      std::printf("\n");
      return 1;
    }
    cert = *result.certificate;
  }
  std::printf("sparsity %zu, squares %zu, coefficient error %.3e\n", cert.sparsity(),
              cert.squares.size(), cert.reported_error);
  if (!opts.output.empty()) save_json_file(opts.output, certificate_to_json(cert));
  return 0;
}

int cmd_verify(const CommonOpts& opts, const std::string& cert_path) {
  LoadedFunction lf = function_from_json(load_json_file(opts.input));
  check_group_flag(opts.group, lf.spec);
  FsosCertificate cert = certificate_from_json(load_json_file(cert_path));
  VerifyReport report = verify(lf.as_expansion(), cert, opts.tol);
  std::printf("%s: max coefficient deviation %.3e (tolerance %.3e)\n",
              report.accepted ? "accept" : "reject", report.deviation, opts.tol);
  return report.accepted ? 0 : 1;
}

int cmd_transform(const CommonOpts& opts, bool inverse) {
  LoadedFunction lf = function_from_json(load_json_file(opts.input));
  check_group_flag(opts.group, lf.spec);
  json out;
  if (inverse) {
    GroupFunction f = lf.as_function();
    out["group"] = group_to_json(f.spec());
    json vals = json::array();
    for (const cplx& v : f.values()) vals.push_back({v.real(), v.imag()});
    out["values"] = vals;
  } else {
    FourierExpansion e = lf.as_expansion();
    out["group"] = group_to_json(e.spec());
    out["coeffs"] = expansion_to_json_coeffs(e);
  }
  if (!opts.output.empty())
    save_json_file(opts.output, out);
  else
    std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_bound(const std::string& kind, index_t n, index_t d, index_t r, index_t m1,
              index_t m2, index_t d2, index_t t2) {
  BoundParams params;
  BoundReport report;
  if (kind == "parrilo") {
    params.N = n;
    params.d = d;
    report = closed_form_bounds(BoundKind::ParriloCyclic, params);
  } else if (kind == "z2n-degree") {
    params.n = n;
    params.r = r;
    report = closed_form_bounds(BoundKind::Z2nDegree, params);
  } else if (kind == "z2n-naive") {
    params.n = n;
    report = closed_form_bounds(BoundKind::Z2nNaive, params);
  } else if (kind == "z2n-split-c") {
    params.m1 = m1;
    params.m2 = m2;
    params.d1 = d;
    params.d2 = d2;
    report = closed_form_bounds(BoundKind::Z2nSplitC, params);
  } else if (kind == "z2n-split-cprime") {
    params.m1 = m1;
    params.d1 = d;
    params.t2 = t2;
    report = closed_form_bounds(BoundKind::Z2nSplitCPrime, params);
  } else {
    throw ArgumentError("unknown bound kind " + kind);
  }
  std::printf("bound %lld   [%s]\n", static_cast<long long>(report.value),
              report.formula.c_str());
  if (report.support)
    std::printf("support witness with %zu characters available\n", report.support->size());
  return 0;
}

int cmd_pigeonhole(index_t n, const std::string& output) {
  PigeonholeResult result = pigeonhole_certificate(n);
  std::printf("p_%lld on Z_%lld^%lld: support %zu, verify deviation %.3e\n",
              static_cast<long long>(n), static_cast<long long>(n),
              static_cast<long long>(n + 1), result.certificate.sparsity(),
              result.certificate.reported_error);
  if (!output.empty()) save_json_file(output, certificate_to_json(result.certificate));
  return result.certificate.reported_error <= 1e-9 ? 0 : 1;
}

int cmd_sohs(const std::string& cert_path) {
  FsosCertificate cert = certificate_from_json(load_json_file(cert_path));
  SohsExpression sohs = fsos_to_sohs(cert);
  std::fputs(sohs.to_string().c_str(), stdout);
  return 0;
}

int cmd_structure(const CommonOpts& opts) {
  LoadedFunction lf = function_from_json(load_json_file(opts.input));
  GroupSpec target = opts.group.empty() ? lf.spec : parse_group(opts.group);
  GroupFunction f = lf.as_function();
  std::vector<double> values;
  for (const cplx& v : f.values()) {
    if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v)))
      throw ArgumentError("structure: input data must be real-valued");
    values.push_back(v.real());
  }
  SparsestStructureSolution sol = solve_sparsest_structure(values, target);
  std::printf("sparsest support %zu under permutation", sol.sparsity);
  for (int i : sol.permutation) std::printf(" %d", i);
  std::printf("\n");
  return 0;
}

int cmd_bench(const std::string& experiment, index_t n, index_t deg, index_t supp,
              int squares, int trials, std::uint64_t seed, const CommonOpts& common,
              const std::string& output) {
  BenchConfig cfg;
  if (experiment == "deg")
    cfg.experiment = BenchExperiment::BoundedDegree;
  else if (experiment == "supp")
    cfg.experiment = BenchExperiment::BoundedSupport;
  else if (experiment == "fsos7")
    cfg.experiment = BenchExperiment::FixedSupportSquares;
  else
    throw ArgumentError("unknown experiment " + experiment + " (deg|supp|fsos7)");
  cfg.n = n;
  cfg.degree = deg;
  cfg.support = supp;
  cfg.squares = squares;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.threads = env_threads();
  cfg.certify_opts = common.certify();
  std::vector<BenchRow> rows = run_bench(cfg);
  std::string csv = bench_csv(rows);
  if (output.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream out(output);
    out << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse Fourier sum-of-squares certificates on finite abelian groups"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string cert_path, bound_kind = "parrilo", experiment = "deg", output;
  bool inverse = false;
  index_t n = 0, d = 0, r = 0, m1 = 0, m2 = 0, d2 = 0, t2 = 0, deg = 24, supp = 25;
  int trials = 10, squares = 15;
  std::uint64_t seed = 1;

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    cmd->add_option("--group", common.group, "group orders, comma separated (e.g. 2,2,2)");
    auto* in = cmd->add_option("--input", common.input, "input function file (JSON)");
    if (needs_input) in->required();
    cmd->add_option("--output", common.output, "output file");
    cmd->add_option("--eps", common.eps, "diagonal guidance threshold");
    cmd->add_option("--feas-tol", common.feas_tol, "PSD feasibility tolerance");
    cmd->add_option("--tol", common.tol, "verification tolerance");
    cmd->add_option("--max-iter", common.max_iter, "projection iteration cap");
  };

  auto* certify = app.add_subcommand("certify", "compute a sparse FSOS certificate");
  add_common(certify, true);
  auto* universal =
      app.add_subcommand("universal", "coefficient-independent certificate (exact ILP)");
  add_common(universal, true);
  auto* verify = app.add_subcommand("verify", "check a certificate against a function");
  add_common(verify, true);
  verify->add_option("--cert", cert_path, "certificate file")->required();
  auto* transform = app.add_subcommand("transform", "Fourier transform of a function file");
  add_common(transform, true);
  transform->add_flag("--inverse", inverse, "emit dense values instead of coefficients");

  auto* bound = app.add_subcommand("bound", "closed-form sparsity bounds");
  bound->add_option("--kind", bound_kind,
                    "parrilo|z2n-degree|z2n-naive|z2n-split-c|z2n-split-cprime");
  bound->add_option("--N", n, "cyclic order (parrilo) or n (z2n kinds)");
  bound->add_option("--d", d, "degree bound d (or d1)");
  bound->add_option("--r", r, "degree r for z2n-degree");
  bound->add_option("--m1", m1, "first block size");
  bound->add_option("--m2", m2, "second block size");
  bound->add_option("--d2", d2, "second block degree");
  bound->add_option("--t2", t2, "generating set size of the second block");

  auto* pigeonhole = app.add_subcommand("pigeonhole", "pigeon-hole certificate p_n");
  pigeonhole->add_option("--n", n, "number of holes")->required();
  pigeonhole->add_option("--output", output, "certificate output file");

  auto* sohs = app.add_subcommand("sohs", "lift a certificate on Z_N^n to Hermitian squares");
  sohs->add_option("--cert", cert_path, "certificate file")->required();

  auto* structure = app.add_subcommand("structure", "sparsest group structure (exact, |G|<=8)");
  add_common(structure, true);

  auto* bench = app.add_subcommand("bench", "randomized experiment harness (CSV)");
  add_common(bench, false);
  bench->add_option("--experiment", experiment, "deg|supp|fsos7");
  bench->add_option("--N", n, "group order (side length for fsos7)");
  bench->add_option("--deg", deg, "degree bound (deg experiment)");
  bench->add_option("--supp", supp, "support bound (supp/fsos7 experiments)");
  bench->add_option("--squares", squares, "number of squares (fsos7)");
  bench->add_option("--trials", trials, "number of instances");
  bench->add_option("--seed", seed, "base RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify->parsed()) return cmd_certify(common, false);
    if (universal->parsed()) return cmd_certify(common, true);
    if (verify->parsed()) return cmd_verify(common, cert_path);
    if (transform->parsed()) return cmd_transform(common, inverse);
    if (bound->parsed()) return cmd_bound(bound_kind, n, d, r, m1, m2, d2, t2);
    if (pigeonhole->parsed()) return cmd_pigeonhole(n, output);
    if (sohs->parsed()) return cmd_sohs(cert_path);
    if (structure->parsed()) return cmd_structure(common);
    if (bench->parsed())
      return cmd_bench(experiment, n == 0 ? 2500 : n, deg, supp, squares, trials, seed,
                       common, common.output);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  return 2;
}
