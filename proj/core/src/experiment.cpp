#include "eigx/experiment.hpp"

#include <cmath>

namespace eigx {

std::string_view to_string(Example e) {
  switch (e) {
    case Example::Square: return "square";
    case Example::SquareNonuniform: return "square_nonuniform";
    case Example::JumpTriangle: return "jump_triangle";
    case Example::Crack: return "crack";
  }
  return "square";
}

Example example_from_string(std::string_view name) {
  if (name == "square" || name == "square2") return Example::Square;
  if (name == "square_nonuniform" || name == "square5") return Example::SquareNonuniform;
  if (name == "jump_triangle" || name == "jump" || name == "triangle_jump") return Example::JumpTriangle;
  if (name == "crack" || name == "crack8") return Example::Crack;
  throw ConfigError("unknown example '" + std::string(name) + "'");
}

Domain example_domain(Example e) {
  switch (e) {
    case Example::Square: return Domain::Square2;
    case Example::SquareNonuniform: return Domain::Square5;
    case Example::JumpTriangle: return Domain::TriangleJump;
    case Example::Crack: return Domain::Crack8;
  }
  return Domain::Square2;
}

CoefficientField example_coefficient(Example e, const Mesh& mesh) {
  if (e == Example::JumpTriangle)
    // x2 = 1 cuts elements at every level, so average instead of sampling
    return CoefficientField::split_at_height(mesh, 1.0, 2.0, 1.0);
  return CoefficientField::constant(mesh);
}

ExperimentConfig ExperimentConfig::defaults_for(Example e) {
  ExperimentConfig c;
  c.example = e;
  if (e == Example::JumpTriangle || e == Example::Crack) c.reference = ReferenceKind::P3;
  // only a clamped crack gives the singular first mode
  if (e == Example::Crack) c.crack_bc = CrackBC::Dirichlet;
  return c;
}

void ExperimentConfig::validate() const {
  if (element != SpaceKind::CR && element != SpaceKind::ECR && element != SpaceKind::P3)
    throw ConfigError("element must be cr, ecr or p3");
  if (first_level < 1) throw ConfigError("first level must be >= 1");
  if (levels < first_level) throw ConfigError("levels must be >= first level");
  if (num_eigs < 1) throw ConfigError("num_eigs must be >= 1");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (extrapolation == ExtrapolationMode::Unknown && levels - first_level + 1 < 3)
    throw ConfigError("three-mesh extrapolation needs at least three levels");
  if (reference == ReferenceKind::Analytic && example != Example::Square &&
      example != Example::SquareNonuniform)
    throw ConfigError("no analytic eigenvalues for " + std::string(to_string(example)));
  if (reference == ReferenceKind::P3 && reference_level < 3) throw ConfigError("reference level must be >= 3");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
}

std::vector<ResultRow> rows_for(const std::vector<ResultRow>& rows, int eig_index) {
  std::vector<ResultRow> out;
  for (const auto& r : rows)
    if (r.eig_index == eig_index) out.push_back(r);
  return out;
}

namespace {

void fill_rates(std::vector<ResultRow*>& seq, std::optional<double> ResultRow::*err,
                std::optional<double> ResultRow::*rate) {
  for (std::size_t i = 1; i < seq.size(); ++i) {
    const auto& a = seq[i - 1]->*err;
    const auto& b = seq[i]->*err;
    if (a && b && *a > 0.0 && *b > 0.0) seq[i]->*rate = std::log2(*a / *b);
  }
}

}  // namespace

ExperimentResult run_example(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  const int k = cfg.num_eigs;

  if (cfg.reference == ReferenceKind::Analytic) {
    res.reference = square_exact_eigenvalues(k);
  } else {
    ReferenceOptions ro;
    ro.crack_bc = cfg.crack_bc;
    ro.seed = cfg.seed;
    ro.cache_dir = cfg.cache_dir;
    res.reference = reference_eigenvalues(cfg.example, cfg.reference_level, k, ro).values;
  }

  EigenOptions eo;
  eo.k = k;
  eo.tol = cfg.tol;
  eo.seed = cfg.seed;

  auto mesh = std::make_shared<const Mesh>(build_level(example_domain(cfg.example), cfg.first_level));
  for (int level = cfg.first_level; level <= cfg.levels; ++level) {
    if (level > cfg.first_level) mesh = std::make_shared<const Mesh>(refine_uniform(*mesh));
    const FeSpace space(mesh, cfg.element, cfg.crack_bc);
    std::vector<ResultRow> level_rows(k);
    for (int i = 0; i < k; ++i) {
      level_rows[i].level = level;
      level_rows[i].h = mesh->h();
      level_rows[i].n_dofs = space.n_free();
      level_rows[i].eig_index = i + 1;
      if (!res.reference.empty()) level_rows[i].reference = res.reference[i];
    }
    if (space.n_free() < k) {
      for (auto& r : level_rows) r.note = "fewer free DOFs than requested eigenvalues";
    } else {
      try {
        const EigenSolution s = solve_eigenproblem(space, example_coefficient(cfg.example, *mesh), eo);
        for (int i = 0; i < k; ++i) level_rows[i].lambda_h = s.result.eigenvalues[i];
      } catch (const SolverError& e) {
        for (auto& r : level_rows) r.note = e.what();
      }
    }
    res.rows.insert(res.rows.end(), level_rows.begin(), level_rows.end());
  }

  const bool known = cfg.extrapolation != ExtrapolationMode::Unknown;
  const bool unknown = cfg.extrapolation != ExtrapolationMode::Known;
  for (int i = 1; i <= k; ++i) {
    std::vector<ResultRow*> seq;
    for (auto& r : res.rows)
      if (r.eig_index == i) seq.push_back(&r);
    for (std::size_t j = 0; j < seq.size(); ++j) {
      ResultRow& r = *seq[j];
      if (!r.lambda_h) continue;
      if (r.reference) r.error = std::abs(*r.reference - *r.lambda_h);
      if (known && j >= 1 && seq[j - 1]->lambda_h)
        r.exp1 = richardson_known(*r.lambda_h, *seq[j - 1]->lambda_h, cfg.alpha);
      if (unknown && j >= 2 && seq[j - 1]->lambda_h && seq[j - 2]->lambda_h) {
        try {
          r.exp2 = richardson_unknown(*seq[j - 2]->lambda_h, *seq[j - 1]->lambda_h, *r.lambda_h).value;
        } catch (const PreconditionError& e) {
          r.note = e.what();
        }
      }
      if (r.reference && r.exp1) r.exp1_error = std::abs(*r.reference - *r.exp1);
      if (r.reference && r.exp2) r.exp2_error = std::abs(*r.reference - *r.exp2);
    }
    fill_rates(seq, &ResultRow::error, &ResultRow::rate);
    fill_rates(seq, &ResultRow::exp1_error, &ResultRow::exp1_rate);
    fill_rates(seq, &ResultRow::exp2_error, &ResultRow::exp2_rate);
  }
  return res;
}

}  // namespace eigx
