#pragma once
// Run configuration read from a metric-spec file (YAML).
//
//   n: 5                  # dimension, 4..8
//   k: 2                  # form degree, 1..n-2
//   points: 10            # sample points
//   seed: 7
//   tol: 1.0e-8
//   jet_order: 4
//   rescale: "0.2*x1*x2"  # conformal factor for invariance checks (optional)
//   metric:
//     family: perturbed   # flat | sphere | conformal | analytic | perturbed
//     eps: 0.3            # perturbed
//     seed: 7             # perturbed
//     radius: 1.0         # sphere
//     signature: 5        # flat: number of positive directions
//     base: flat          # conformal: family name or nested metric map
//     f: "0.1*sin(x1)*x2" # conformal: g = e^{2f} base
//     g: {"11": "1 + pow(x2, 2)", "12": "x1/10"}  # analytic; missing entries from the identity
//
// Metric keys may also appear at top level instead of under `metric`.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "ckp/expr.hpp"
#include "ckp/metric.hpp"

namespace ckp {

// semantic error in a spec; line/column are 1-based, 0 when unknown
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0, int col = 0)
      : std::runtime_error(line > 0 ? msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)
                                    : msg),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int column() const { return col_; }

 private:
  int line_, col_;
};

struct MetricSpec {
  std::string family = "flat";
  double radius = 1.0, eps = 0.3;
  std::uint64_t seed = 7;
  int signature = -1;  // -1: definite
  std::optional<Expr> f;
  std::shared_ptr<MetricSpec> base;
  std::map<std::pair<int, int>, Expr> g;  // 0-based (a, b)
};

struct RunConfig {
  int n = 4, k = 2, points = 10;
  std::uint64_t seed = 7;
  double tol = 1e-8;
  int jet_order = 4;
  MetricSpec metric;
  std::optional<Expr> rescale;

  // throws UnsupportedDimension or ConfigError
  void validate() const;
  MetricChart chart() const;
  Expr rescale_factor() const;  // given, or a seeded polynomial
};

RunConfig parse_spec_text(const std::string& text);
RunConfig parse_spec_file(const std::string& path);

}  // namespace ckp
