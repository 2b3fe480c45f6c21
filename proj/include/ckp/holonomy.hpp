#pragma once
// Parallel transport for the deformed connection around coordinate loops and
// the dimension of the jointly fixed space (the space of parallel sections).

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ckp/metric.hpp"

namespace ckp {

// values of the connection matrix at a point, rows in the level-1 chain layout
using ConnectionField = std::function<Eigen::MatrixXd(const std::vector<double>&)>;
ConnectionField deformed_connection(const MetricChart& chart, int k);

// axis-aligned rectangle: origin -> +size e_a -> +size e_b -> back
struct Loop {
  int a = 0, b = 1;
  double size = 0.5;
  std::vector<double> origin;
};
std::vector<Loop> default_loops(int n, double size = 0.5);

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Transport {
  Eigen::MatrixXd matrix;
  int steps = 0, rejected = 0;
};
// adaptive RK4 with step doubling at local tolerance tol; throws TransportError
Transport transport_loop(const ConnectionField& A, const Loop& loop, int dim, double tol = 1e-9,
                         int max_steps = 200000);

struct HolonomyResult {
  int dimension = 0;
  long long expected = 0;            // C(n+2, k+1)
  std::vector<double> singular_values;  // of the stacked (transport - I), ascending
  double max_defect = 0;              // max |transport - I| over loops
  int steps = 0;
};
HolonomyResult holonomy_dimension(const MetricChart& chart, int k, const std::vector<Loop>& loops,
                                  double threshold = 1e-5, double tol = 1e-9);

}  // namespace ckp
