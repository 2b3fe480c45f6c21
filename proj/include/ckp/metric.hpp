#pragma once
// Analytic metric families on a coordinate chart. Every family is reduced to
// expression entries g_ab(x), so jets are exact derivatives.

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ckp/expr.hpp"
#include "ckp/tensor.hpp"

namespace ckp {

class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MetricChart {
 public:
  enum class Family { Flat, RoundSphere, Conformal, Analytic, Perturbed };

  static MetricChart flat(int n, int p = -1);
  static MetricChart round_sphere(int n, double radius);
  static MetricChart conformal(const MetricChart& base, const Expr& f);
  static MetricChart analytic(int n, std::vector<Expr> entries);  // row-major n*n
  // delta + eps * (seeded sparse cubic polynomial), symmetric
  static MetricChart perturbed(int n, double eps, std::uint64_t seed);

  int dim() const { return n_; }
  Family family() const { return family_; }
  const std::string& id() const { return id_; }
  std::pair<int, int> signature() const { return {p_, n_ - p_}; }
  const Expr& entry(int a, int b) const { return g_[a * n_ + b]; }
  // true when the chart is conformally flat by construction
  bool conformally_flat() const { return conf_flat_; }

  Tensor metric_at(const std::vector<double>& x) const;
  JetTensor metric_jet(const std::vector<double>& x, int order) const;

 private:
  int n_ = 0, p_ = 0;
  Family family_ = Family::Flat;
  bool conf_flat_ = true;
  std::string id_;
  std::vector<Expr> g_;
};

// jets of the coordinate functions at x
std::vector<Jet> coordinate_jets(const std::vector<double>& x, int order);

// seeded sample points with |x_i| <= radius
std::vector<std::vector<double>> sample_points(int n, int count, std::uint64_t seed,
                                               double radius = 0.15);

// a seeded low-degree polynomial conformal factor (used when none is given)
Expr random_conformal_factor(int n, std::uint64_t seed, double scale = 0.3);

}  // namespace ckp
