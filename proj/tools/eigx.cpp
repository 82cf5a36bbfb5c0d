#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eigx/analysis.hpp"
#include "eigx/experiment.hpp"
#include "eigx/mesh_io.hpp"
#include "eigx/verification.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 2, kSolver = 3, kVerify = 4 };

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw eigx::ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw eigx::ConfigError("cannot write " + path);
  out << text;
}

// Flags that were given on the command line; they override the config file.
struct RunFlags {
  std::string config, example, element, extrapolation, reference, crack_bc, cache_dir, out, svg;
  int first_level = 0, levels = 0, num_eigs = 0, reference_level = 0;
  double alpha = 0.0, tol = 0.0;
  std::uint64_t seed = 0;
};

eigx::ExperimentConfig build_config(const CLI::App& cmd, const RunFlags& f) {
  using eigx::ExperimentConfig;
  auto given = [&](const char* name) { return cmd.count(name) > 0; };

  ExperimentConfig c;
  if (given("--example")) c = ExperimentConfig::defaults_for(eigx::example_from_string(f.example));
  if (given("--config")) c = eigx::config_from_json(read_file(f.config), c);
  if (given("--example")) {
    const ExperimentConfig d = ExperimentConfig::defaults_for(eigx::example_from_string(f.example));
    if (d.example != c.example) {
      c.example = d.example;
      if (!given("--reference")) c.reference = d.reference;
      if (!given("--crack-bc")) c.crack_bc = d.crack_bc;
    }
  }
  if (given("--element")) c.element = eigx::space_kind_from_string(f.element);
  if (given("--first-level")) c.first_level = f.first_level;
  if (given("--levels")) c.levels = f.levels;
  if (given("--num-eigs")) c.num_eigs = f.num_eigs;
  if (given("--alpha")) c.alpha = f.alpha;
  if (given("--extrapolation")) {
    if (f.extrapolation == "known") c.extrapolation = eigx::ExtrapolationMode::Known;
    else if (f.extrapolation == "unknown") c.extrapolation = eigx::ExtrapolationMode::Unknown;
    else c.extrapolation = eigx::ExtrapolationMode::Both;
  }
  if (given("--reference"))
    c.reference = f.reference == "p3" ? eigx::ReferenceKind::P3 : eigx::ReferenceKind::Analytic;
  if (given("--reference-level")) c.reference_level = f.reference_level;
  if (given("--crack-bc")) c.crack_bc = eigx::crack_bc_from_string(f.crack_bc);
  if (given("--seed")) c.seed = f.seed;
  if (given("--tol")) c.tol = f.tol;
  if (given("--cache-dir")) c.cache_dir = f.cache_dir;
  if (given("--out")) c.out_csv = f.out;
  if (given("--svg")) c.out_svg = f.svg;
  c.validate();
  return c;
}

int cmd_run(const CLI::App& cmd, const RunFlags& f) {
  const eigx::ExperimentConfig c = build_config(cmd, f);
  const eigx::ExperimentResult r = eigx::run_example(c);
  const std::string csv = eigx::results_csv(r.rows);
  if (c.out_csv.empty()) std::cout << csv;
  else write_file(c.out_csv, csv);
  if (!c.out_svg.empty()) write_file(c.out_svg, eigx::results_svg(r.rows));
  int failed = 0;
  for (const auto& row : r.rows)
    if (!row.note.empty()) {
      std::fprintf(stderr, "level %d eig %d: %s\n", row.level, row.eig_index, row.note.c_str());
      ++failed;
    }
  return failed ? kSolver : kOk;
}

int cmd_verify(std::uint64_t seed, const std::string& out) {
  const eigx::VerificationReport r = eigx::run_verification_suite(seed);
  for (const auto& c : r.checks)
    std::fprintf(stderr, "%-6s %-32s %.3e (tol %.1e)\n",
                 c.informational ? "INFO" : (c.pass ? "PASS" : "FAIL"), c.id.c_str(), c.max_residual,
                 c.tolerance);
  if (out.empty()) std::cout << r.to_json() << "\n";
  else write_file(out, r.to_json() + "\n");
  return r.all_passed() ? kOk : kVerify;
}

int cmd_gamma(const std::string& example, int level) {
  const eigx::Mesh mesh = eigx::build_level(eigx::domain_from_string(example), level);
  const eigx::GammaConstants g = eigx::gamma_constants(mesh);
  std::printf("h        %.17g\n", g.h);
  std::printf("gamma11  %.17g\n", g.g11[0]);
  std::printf("gamma12  %.17g\n", g.g12[0]);
  std::printf("gamma22  %.17g\n", g.g22[0]);
  std::printf("spread   %.3e\n", g.spread());
  std::printf("constant %s\n", g.is_constant() ? "yes" : "no");
  return kOk;
}

int cmd_mesh_dump(const std::string& example, int level, const std::string& out) {
  const eigx::Mesh mesh = eigx::build_level(eigx::domain_from_string(example), level);
  const std::string json = eigx::mesh_to_json(mesh);
  if (out.empty()) std::cout << json << "\n";
  else write_file(out, json + "\n");
  return kOk;
}

int cmd_reference(const std::string& example, int level, int k, const std::string& crack_bc,
                  std::uint64_t seed, const std::string& cache_dir) {
  const eigx::Example e = eigx::example_from_string(example);
  eigx::ReferenceOptions opt;
  opt.crack_bc = crack_bc.empty() ? eigx::ExperimentConfig::defaults_for(e).crack_bc
                                  : eigx::crack_bc_from_string(crack_bc);
  opt.seed = seed;
  opt.cache_dir = cache_dir;
  const eigx::ReferenceResult r = eigx::reference_eigenvalues(e, level, k, opt);
  std::printf("index,reference,p3_raw,p3_rate\n");
  for (std::size_t i = 0; i < r.values.size(); ++i)
    std::printf("%zu,%.15e,%.15e,%.4f\n", i + 1, r.values[i], r.raw[i], r.alpha[i]);
  if (r.from_cache) std::fprintf(stderr, "loaded from cache\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigx: nonconforming eigenvalue experiments"};
  app.require_subcommand(1);

  RunFlags rf;
  auto* run = app.add_subcommand("run", "run an example over a range of levels");
  run->add_option("--config", rf.config, "JSON config; flags override it");
  run->add_option("--example", rf.example, "square, square_nonuniform, jump_triangle or crack");
  run->add_option("--element", rf.element, "cr, ecr or p3");
  run->add_option("--first-level", rf.first_level);
  run->add_option("--levels", rf.levels, "finest level");
  run->add_option("--num-eigs", rf.num_eigs);
  run->add_option("--alpha", rf.alpha, "rate for two-mesh extrapolation");
  run->add_option("--extrapolation", rf.extrapolation)->check(CLI::IsMember({"known", "unknown", "both"}));
  run->add_option("--reference", rf.reference)->check(CLI::IsMember({"analytic", "p3"}));
  run->add_option("--reference-level", rf.reference_level);
  run->add_option("--crack-bc", rf.crack_bc)->check(CLI::IsMember({"neumann", "dirichlet"}));
  run->add_option("--seed", rf.seed);
  run->add_option("--tol", rf.tol);
  run->add_option("--cache-dir", rf.cache_dir);
  run->add_option("--out", rf.out, "CSV path (stdout if absent)");
  run->add_option("--svg", rf.svg, "log-log error plot");

  std::uint64_t vseed = 7;
  std::string vout;
  auto* verify = app.add_subcommand("verify", "run the identity and invariant checks");
  verify->add_option("--seed", vseed);
  verify->add_option("--out", vout, "JSON report path (stdout if absent)");

  std::string gexample = "square";
  int glevel = 3;
  auto* gamma = app.add_subcommand("gamma", "RT interpolation constants of a mesh");
  gamma->add_option("--example", gexample);
  gamma->add_option("--level", glevel);

  std::string mexample = "square", mout;
  int mlevel = 1;
  auto* mesh = app.add_subcommand("mesh", "mesh utilities");
  mesh->require_subcommand(1);
  auto* dump = mesh->add_subcommand("dump", "write a mesh as JSON");
  dump->add_option("--example", mexample);
  dump->add_option("--level", mlevel);
  dump->add_option("--out", mout);

  std::string rexample = "square", rcrack, rcache = ".eigx-cache";
  int rlevel = 6, rk = 1;
  std::uint64_t rseed = 7;
  auto* ref = app.add_subcommand("reference", "P3 reference eigenvalues");
  ref->add_option("--example", rexample);
  ref->add_option("--level", rlevel);
  ref->add_option("--num-eigs", rk);
  ref->add_option("--crack-bc", rcrack)->check(CLI::IsMember({"neumann", "dirichlet"}));
  ref->add_option("--seed", rseed);
  ref->add_option("--cache-dir", rcache, "empty string disables the cache");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(*run, rf);
    if (*verify) return cmd_verify(vseed, vout);
    if (*gamma) return cmd_gamma(gexample, glevel);
    if (*dump) return cmd_mesh_dump(mexample, mlevel, mout);
    if (*ref) return cmd_reference(rexample, rlevel, rk, rcrack, rseed, rcache);
  } catch (const eigx::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const eigx::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kSolver;
  } catch (const eigx::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  }
  return kOk;
}
