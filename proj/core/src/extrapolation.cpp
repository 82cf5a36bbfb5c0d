#include "eigx/extrapolation.hpp"

#include <cmath>
#include <limits>

#include "eigx/types.hpp"

namespace eigx {

double richardson_known(double lambda_h, double lambda_2h, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("extrapolation rate must be positive");
  const double f = std::exp2(alpha);
  return (f * lambda_h - lambda_2h) / (f - 1.0);
}

UnknownRateExtrapolation richardson_unknown(double l4h, double l2h, double lh) {
  const double denom = l4h + lh - 2.0 * l2h;
  const double scale = std::abs(l4h) + std::abs(l2h) + std::abs(lh);
  if (std::abs(denom) <= 64.0 * std::numeric_limits<double>::epsilon() * scale)
    throw PreconditionError("three-mesh extrapolation: vanishing second difference");
  UnknownRateExtrapolation r;
  r.value = ((l4h - l2h) * lh - (l2h - lh) * l2h) / denom;
  const double ratio = (l4h - l2h) / (l2h - lh);
  r.alpha = ratio > 0.0 ? std::log2(ratio) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

std::vector<std::optional<double>> observed_rates(const std::vector<double>& errors) {
  std::vector<std::optional<double>> rates;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] > 0.0 && errors[i + 1] > 0.0)
      rates.emplace_back(std::log2(errors[i] / errors[i + 1]));
    else
      rates.emplace_back(std::nullopt);
  }
  return rates;
}

}  // namespace eigx
