#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "eigx/experiment.hpp"

namespace eigx {

namespace {

void put(std::string& out, const std::optional<double>& v) {
  out += ',';
  if (!v) return;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", *v);
  out += buf;
}

}  // namespace

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "level,h,n_dofs,eig_index,lambda_h,reference,error,rate,exp1,exp1_error,exp1_rate,exp2,exp2_error,exp2_rate\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.15e,%d,%d", r.level, r.h, r.n_dofs, r.eig_index);
    out += buf;
    put(out, r.lambda_h);
    put(out, r.reference);
    put(out, r.error);
    put(out, r.rate);
    put(out, r.exp1);
    put(out, r.exp1_error);
    put(out, r.exp1_rate);
    put(out, r.exp2);
    put(out, r.exp2_error);
    put(out, r.exp2_rate);
    out += '\n';
  }
  return out;
}

std::string results_svg(const std::vector<ResultRow>& rows) {
  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> pts;  // (log10 h, log10 err)
  };
  std::map<std::string, Series> series;
  for (const auto& r : rows) {
    auto add = [&](const char* what, const std::optional<double>& e) {
      if (!e || *e <= 0.0) return;
      const std::string key = "lambda" + std::to_string(r.eig_index) + " " + what;
      series[key].label = key;
      series[key].pts.emplace_back(std::log10(r.h), std::log10(*e));
    };
    add("raw", r.error);
    add("exp1", r.exp1_error);
    add("exp2", r.exp2_error);
  }
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& [k, s] : series)
    for (auto [x, y] : s.pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (series.empty()) x0 = y0 = 0.0, x1 = y1 = 1.0;
  if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) y1 = y0 + 1.0;

  const double w = 640, h = 480, m = 60;
  auto px = [&](double x) { return m + (x - x0) / (x1 - x0) * (w - 2 * m); };
  auto py = [&](double y) { return h - m - (y - y0) / (y1 - y0) * (h - 2 * m); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n", w, h);
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.0f\" y=\"%.0f\" width=\"%.0f\" height=\"%.0f\" fill=\"none\" stroke=\"black\"/>\n",
                m, m, w - 2 * m, h - 2 * m);
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"%.0f\" font-size=\"12\">log10 h [%.2f, %.2f], log10 error [%.2f, %.2f]</text>\n",
                m, h - 20, x0, x1, y0, y1);
  out += buf;
  int c = 0;
  for (const auto& [key, s] : series) {
    const char* color = colors[c % 6];
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" points=\"";
    for (auto [x, y] : s.pts) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
      out += buf;
    }
    out += "\"/>\n";
    for (auto [x, y] : s.pts) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n", px(x), py(y), color);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\" font-size=\"11\" fill=\"%s\">%s</text>\n",
                  w - m - 150, m + 15.0 + 14.0 * c, color, s.label.c_str());
    out += buf;
    ++c;
  }
  out += "</svg>\n";
  return out;
}

ExperimentConfig config_from_json(const std::string& text, ExperimentConfig c) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "example") {
        const Example e = example_from_string(v.get<std::string>());
        const ExperimentConfig d = ExperimentConfig::defaults_for(e);
        c.example = e;
        if (!j.contains("reference")) c.reference = d.reference;
        if (!j.contains("crack_bc")) c.crack_bc = d.crack_bc;
      } else if (key == "element") {
        c.element = space_kind_from_string(v.get<std::string>());
      } else if (key == "first_level") {
        c.first_level = v.get<int>();
      } else if (key == "levels") {
        c.levels = v.get<int>();
      } else if (key == "num_eigs") {
        c.num_eigs = v.get<int>();
      } else if (key == "extrapolation") {
        const auto s = v.get<std::string>();
        if (s == "known" || s == "known_alpha") c.extrapolation = ExtrapolationMode::Known;
        else if (s == "unknown") c.extrapolation = ExtrapolationMode::Unknown;
        else if (s == "both") c.extrapolation = ExtrapolationMode::Both;
        else throw ConfigError("unknown extrapolation mode '" + s + "'");
      } else if (key == "alpha") {
        c.alpha = v.get<double>();
      } else if (key == "reference") {
        const auto s = v.get<std::string>();
        if (s == "analytic") c.reference = ReferenceKind::Analytic;
        else if (s == "p3") c.reference = ReferenceKind::P3;
        else throw ConfigError("unknown reference '" + s + "'");
      } else if (key == "reference_level") {
        c.reference_level = v.get<int>();
      } else if (key == "crack_bc") {
        c.crack_bc = crack_bc_from_string(v.get<std::string>());
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "tol") {
        c.tol = v.get<double>();
      } else if (key == "cache_dir") {
        c.cache_dir = v.get<std::string>();
      } else if (key == "out") {
        c.out_csv = v.get<std::string>();
      } else if (key == "svg") {
        c.out_svg = v.get<std::string>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  return c;
}

}  // namespace eigx
