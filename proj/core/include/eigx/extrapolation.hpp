#pragma once

#include <optional>
#include <vector>

namespace eigx {

/// Two-mesh extrapolation with known rate alpha:
/// (2^alpha lambda_h - lambda_2h) / (2^alpha - 1).
double richardson_known(double lambda_h, double lambda_2h, double alpha = 2.0);

struct UnknownRateExtrapolation {
  double value = 0.0;
  double alpha = 0.0;  // log2((l4h - l2h) / (l2h - lh)); NaN if the ratio is not positive
};

/// Three-mesh extrapolation that eliminates C h^alpha for unknown alpha.
/// Throws PreconditionError when l4h + lh - 2 l2h is (numerically) zero.
UnknownRateExtrapolation richardson_unknown(double lambda_4h, double lambda_2h, double lambda_h);

/// rate_i = log2(e_i / e_{i+1}); empty where either error is not positive.
std::vector<std::optional<double>> observed_rates(const std::vector<double>& errors);

}  // namespace eigx
