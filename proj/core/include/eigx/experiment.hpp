#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eigx/analysis.hpp"
#include "eigx/extrapolation.hpp"

namespace eigx {

enum class Example { Square, SquareNonuniform, JumpTriangle, Crack };

std::string_view to_string(Example e);
/// Accepts square, square_nonuniform, jump_triangle, crack and the aliases
/// square2, square5, jump, triangle_jump, crack8.
Example example_from_string(std::string_view name);
Domain example_domain(Example e);

/// Piecewise-constant diffusion of an example (2 below x2 = 1 for the jump
/// triangle, 1 elsewhere).
CoefficientField example_coefficient(Example e, const Mesh& mesh);

enum class ExtrapolationMode { Known, Unknown, Both };
enum class ReferenceKind { Analytic, P3 };

struct ExperimentConfig {
  Example example = Example::Square;
  SpaceKind element = SpaceKind::CR;  // CR, ECR or P3
  int first_level = 1;
  int levels = 5;  // finest level
  int num_eigs = 1;
  ExtrapolationMode extrapolation = ExtrapolationMode::Both;
  double alpha = 2.0;
  ReferenceKind reference = ReferenceKind::Analytic;
  int reference_level = 6;
  CrackBC crack_bc = CrackBC::Neumann;
  std::uint64_t seed = 7;
  double tol = 1e-10;
  std::string cache_dir = ".eigx-cache";
  std::string out_csv;
  std::string out_svg;

  /// Per-example defaults: analytic reference on the square, P3 otherwise;
  /// the crack example clamps the crack faces.
  static ExperimentConfig defaults_for(Example e);
  void validate() const;
};

/// Parses a JSON object; unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base = {});

struct ResultRow {
  int level = 0;
  double h = 0.0;
  int n_dofs = 0;
  int eig_index = 0;  // 1-based
  std::optional<double> lambda_h;
  std::optional<double> reference;
  std::optional<double> error;
  std::optional<double> rate;
  std::optional<double> exp1, exp1_error, exp1_rate;
  std::optional<double> exp2, exp2_error, exp2_rate;
  std::string note;  // solver failure message, if any
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ResultRow> rows;
  std::vector<double> reference;  // per eigen index, empty if unavailable
};

ExperimentResult run_example(const ExperimentConfig& config);

/// level,h,n_dofs,eig_index,lambda_h,reference,error,rate,exp1,exp1_error,
/// exp1_rate,exp2,exp2_error,exp2_rate
std::string results_csv(const std::vector<ResultRow>& rows);

/// Log-log error plot, one polyline per eigen index and quantity.
std::string results_svg(const std::vector<ResultRow>& rows);

/// Rows of one eigen index in level order.
std::vector<ResultRow> rows_for(const std::vector<ResultRow>& rows, int eig_index);

struct ReferenceOptions {
  CrackBC crack_bc = CrackBC::Neumann;
  std::uint64_t seed = 7;
  double tol = 1e-10;
  std::string cache_dir;           // empty disables the cache
  long long max_dofs = 2'000'000;  // P3 budget on the finest level
};

struct ReferenceResult {
  std::vector<double> values;  // extrapolated, ascending by index
  std::vector<double> raw;     // P3 on level L
  std::vector<double> alpha;   // observed P3 rate per index
  bool from_cache = false;
};

/// Conforming P3 eigenvalues on levels L-2, L-1, L with one Richardson step
/// at the observed rate. Cached on disk keyed by example, level, count and
/// crack condition.
ReferenceResult reference_eigenvalues(Example example, int level, int k, const ReferenceOptions& options = {});

}  // namespace eigx
