#pragma once
// Property suites behind the command line: each runs its checks at seeded
// sample points (OpenMP-parallel over points, or serially) and folds them into
// a report holding the largest residual per check.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ckp/config.hpp"
#include "ckp/linmap.hpp"
#include "ckp/report.hpp"

namespace ckp {

enum class Exec { Serial, Parallel };

// one point's named residuals, in a fixed order
using PointResiduals = std::vector<std::pair<std::string, double>>;
using PointKernel = std::function<PointResiduals(const std::vector<double>& x, int index)>;

// runs the kernel at every point; entry i of the result belongs to points[i].
// A kernel exception becomes a single ("error", NaN) entry with the message kept.
struct PointRun {
  std::vector<PointResiduals> residuals;
  std::vector<std::string> errors;
};
PointRun run_points(const std::vector<std::vector<double>>& points, const PointKernel& kernel, Exec exec);

// largest residual per name across points (NaN dominates)
PointResiduals fold_max(const PointRun& run);

// conformal Killing k-form of the flat model: sigma slot of the parallel
// section through s0, as a jet of the given order at x; when f is given it is
// carried to e^{2f} delta as e^{(k+1)f} sigma
JetMatrix flat_killing_form(int n, int k, const Eigen::VectorXd& s0, const std::vector<double>& x, int order,
                            const Expr* f = nullptr);

Report run_identities(const RunConfig& cfg, Exec exec = Exec::Parallel);
Report run_prolong(const RunConfig& cfg, Exec exec = Exec::Parallel);
Report run_invariance(const RunConfig& cfg, Exec exec = Exec::Parallel);
Report run_obstruction(const RunConfig& cfg, Exec exec = Exec::Parallel);  // k >= 2
Report run_holonomy(const RunConfig& cfg);
Report run_all(const RunConfig& cfg, Exec exec = Exec::Parallel);

}  // namespace ckp
