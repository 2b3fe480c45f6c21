// Acceptance run over the grid n = 4..6, k = 1..n-2 (seed 7, 10 points).
// Prints one PASS/FAIL line per criterion; lines marked "known deviation"
// record documented disagreements with tabulated values and do not affect
// the exit code. Exit status is 1 only on unexpected failures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ckp/bgg.hpp"
#include "ckp/invariance.hpp"
#include "ckp/suites.hpp"

using namespace ckp;

namespace {

constexpr std::uint64_t kSeed = 7;
constexpr int kPoints = 10;

struct GridPoint {
  int n, k;
};

std::vector<GridPoint> grid() {
  std::vector<GridPoint> g;
  for (int n = 4; n <= 6; ++n)
    for (int k = 1; k <= n - 2; ++k) g.push_back({n, k});
  return g;
}

RunConfig config(int n, int k, const std::string& metric) {
  std::ostringstream s;
  s << "n: " << n << "\nk: " << k << "\npoints: " << kPoints << "\nseed: " << kSeed << "\n";
  if (metric == "perturbed") s << "metric:\n  family: perturbed\n  eps: 0.3\n  seed: " << kSeed << "\n";
  if (metric == "conformal") s << "metric:\n  family: conformal\n  f: '0.2*x1*x2 - 0.1*sin(x3) + 0.05*x" << n << "'\n";
  if (metric == "flat") s << "metric:\n  family: flat\n";
  return parse_spec_text(s.str());
}

// suite reports, computed once per (suite, metric, n, k)
class Runs {
 public:
  const Report& get(const std::string& suite, const std::string& metric, int n, int k) {
    const std::string key = suite + "/" + metric + "/" + std::to_string(n) + "/" + std::to_string(k);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const RunConfig cfg = config(n, k, metric);
    Report r;
    if (suite == "identities") r = run_identities(cfg);
    else if (suite == "prolong") r = run_prolong(cfg);
    else if (suite == "invariance") r = run_invariance(cfg);
    else if (suite == "obstruction") r = run_obstruction(cfg);
    else if (suite == "holonomy") r = run_holonomy(cfg);
    return cache_.emplace(key, std::move(r)).first->second;
  }

 private:
  std::map<std::string, Report> cache_;
};

// folds matching checks: worst residual, first failure
struct Tally {
  double worst = 0;
  int checks = 0, failed = 0;
  std::string first_failure;

  void add(const CheckRecord& c) {
    ++checks;
    if (!(c.residual <= worst)) worst = c.residual;
    if (!c.pass) {
      ++failed;
      if (first_failure.empty())
        first_failure = c.name + " at (" + std::to_string(c.n) + "," + std::to_string(c.k) + ") = " + fmt(c.residual);
    }
  }
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
  }
};

class Board {
 public:
  void line(const std::string& id, const std::string& title, bool pass, const std::string& detail,
            bool known_deviation = false) {
    std::printf("%s  %-4s %s: %s%s\n", pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), detail.c_str(),
                known_deviation ? " [known deviation]" : "");
    std::fflush(stdout);
    if (!pass && !known_deviation) ++unexpected_;
  }
  void tally(const std::string& id, const std::string& title, const Tally& t) {
    std::string detail = std::to_string(t.checks) + " checks, worst " + Tally::fmt(t.worst);
    if (t.checks == 0) detail = "no checks ran";
    if (t.failed) detail += "; " + std::to_string(t.failed) + " failed, first " + t.first_failure;
    line(id, title, t.checks > 0 && t.failed == 0, detail);
  }
  int unexpected() const { return unexpected_; }

 private:
  int unexpected_ = 0;
};

using Select = std::function<bool(const CheckRecord&)>;

Select names(std::vector<std::string> wanted) {
  return [wanted](const CheckRecord& c) {
    for (const auto& w : wanted)
      if (c.name == w) return true;
    return false;
  };
}

void collect(Tally& t, const Report& r, const Select& pick) {
  for (const auto& c : r.checks())
    if (pick(c) && !c.known_deviation) t.add(c);
}

}  // namespace

int main() {
  Runs runs;
  Board board;
  const auto g = grid();

  {
    Tally t;
    for (auto [n, k] : g)
      collect(t, runs.get("identities", "perturbed", n, k),
              names({"kostant.nilpotent_partial", "kostant.nilpotent_partial_star", "kostant.adjoint"}));
    board.tally("1", "nilpotency and adjointness of the Kostant differentials", t);
  }

  {
    Tally t, deviations;
    std::string note;
    const Select entry = [](const CheckRecord& c) {
      return c.name.rfind("kostant.c", 0) == 0;
    };
    for (auto [n, k] : g) {
      const Report& r = runs.get("identities", "perturbed", n, k);
      collect(t, r, entry);
      for (const auto& c : r.checks())
        if (entry(c) && c.known_deviation) {
          deviations.add(c);
          if (note.empty()) note = c.name + " at (" + std::to_string(n) + "," + std::to_string(k) + "): " + c.note;
        }
    }
    // spot values of the Laplacian on the four slots at (4,2)
    const RunConfig cfg = config(4, 2, "perturbed");
    const auto x = sample_points(4, 1, kSeed).front();
    const PointData pd = point_data(curvature_pack(cfg.chart(), x, 3), 2, 0);
    std::string spot;
    bool spot_ok = true;
    for (const auto& e : kostant_spectrum(pd, kostant_ops(pd), kSeed)) {
      if (e.name.rfind("c0.", 0) != 0) continue;
      spot += (spot.empty() ? "" : ", ") + e.name.substr(3) + " " + to_string(e.expected);
      spot_ok &= std::abs(e.observed - to_double(e.expected)) < 1e-10 && e.residual < 1e-10;
    }
    t.checks += 1;
    if (!spot_ok) {
      ++t.failed;
      if (t.first_failure.empty()) t.first_failure = "spot values at (4,2)";
    }
    board.tally("2", "Kostant Laplacian eigenvalues (spot values at (4,2): " + spot + ")", t);
    if (deviations.checks)
      board.line("2", "Kostant Laplacian, tabulated eigenvalue on the trace part of the middle-right slot", false,
                 std::to_string(deviations.checks) + " grid points; " + note, true);
  }

  {
    Tally t;
    for (auto [n, k] : g)
      collect(t, runs.get("identities", "perturbed", n, k), [](const CheckRecord& c) {
        return c.name.rfind("curvature.", 0) == 0;
      });
    board.tally("3", "Weyl traces, alternations of C and A, Bianchi-type identity", t);
  }

  {
    Tally t;
    for (auto [n, k] : g) collect(t, runs.get("identities", "perturbed", n, k), names({"deform.delstar_K"}));
    board.tally("4", "d* of the curvature action equals its closed form", t);
  }

  {
    Tally t, top;
    double smallest_top = 1e300;
    for (auto [n, k] : g) {
      const Report& r = runs.get("prolong", "perturbed", n, k);
      collect(t, r,
              names({"normalization.full", "normalization.psi1_middle", "normalization.stage1",
                     "normalization.no_lowering", "normalization.homogeneity0_projected"}));
      collect(top, r, names({"normalization.psi1_top_lower_bound"}));
      for (const auto& c : r.checks())
        if (c.name == "normalization.psi1_top_lower_bound") smallest_top = std::min(smallest_top, c.residual);
    }
    t.checks += top.checks;
    t.failed += top.failed;
    if (t.first_failure.empty()) t.first_failure = top.first_failure;
    board.tally("5", "normalization of the deformed connection (first stage only: top slot residual >= " +
                         Tally::fmt(smallest_top) + ")",
                t);
  }

  {
    std::string literal;
    int corrected_bad = 0, tables = 0;
    for (int n = 4; n <= 8; ++n)
      for (int k = 1; k <= n - 2; ++k) {
        ++tables;
        corrected_bad += !compare_tables(n, k, TableReading::Corrected).equal();
        const auto lit = compare_tables(n, k, TableReading::Literal);
        if (lit.equal()) continue;
        literal += (literal.empty() ? "" : "; ") + std::string("(") + std::to_string(n) + "," + std::to_string(k) + "):";
        for (int i : lit.mismatched) literal += " H" + std::to_string(i);
      }
    board.line("6a", "exact equality of the two coefficient tables (derived from the hatted laws)", corrected_bad == 0,
               std::to_string(tables - corrected_bad) + "/" + std::to_string(tables) + " (n,k) pairs agree as rationals");
    if (!literal.empty())
      board.line("6a", "exact equality of the two coefficient tables as displayed", false, "differ at " + literal, true);
    Tally t;
    for (auto [n, k] : g)
      collect(t, runs.get("invariance", "perturbed", n, k), [](const CheckRecord& c) {
        return c.name.rfind("invariance.", 0) == 0 && c.name != "invariance.tables_exact";
      });
    board.tally("6b", "conformal naturality of the deformation and its transformation laws", t);
  }

  {
    Tally t;
    for (auto [n, k] : g)
      if (k == 1) collect(t, runs.get("prolong", "perturbed", n, k), names({"deform.k1_contraction"}));
    board.tally("7", "k = 1: deformation is the contraction with the curvature", t);
  }

  {
    Tally t;
    std::string dims;
    for (auto [n, k] : g) {
      const Report& r = runs.get("holonomy", "flat", n, k);
      collect(t, r, names({"holonomy.solution_dimension", "holonomy.loop_defect"}));
      for (const auto& s : r.solutions())
        if ((n == 4 && k == 2) || (n == 5 && (k == 1 || k == 3)))
          dims += (dims.empty() ? "" : ", ") + std::string("(") + std::to_string(n) + "," + std::to_string(k) +
                  ") " + std::to_string(s.dimension) + "/" + std::to_string(s.expected);
    }
    board.tally("8", "flat model solution dimension from holonomy: " + dims, t);
  }

  {
    Tally t;
    for (auto [n, k] : g) {
      if (k < 2) continue;
      collect(t, runs.get("obstruction", "perturbed", n, k),
              names({"obstruction.tractor_curvature", "obstruction.covariance"}));
      collect(t, runs.get("obstruction", "conformal", n, k),
              names({"obstruction.conformally_flat", "obstruction.covariance", "obstruction.killing_forms"}));
    }
    board.tally("9", "obstruction: curvature projection, conformal flatness, covariance, Killing forms", t);
  }

  {
    Tally t;
    for (auto [n, k] : g) {
      collect(t, runs.get("identities", "perturbed", n, k),
              names({"theta0.oracle", "theta0.normalized_lift", "theta0.hodge_random"}));
      collect(t, runs.get("prolong", "conformal", n, k),
              names({"prolong.solution_theta0", "prolong.parallel_lift", "prolong.solution_in_im_delstar"}));
    }
    board.tally("10", "first BGG operator against the projector oracle; solutions and the Hodge test", t);
  }

  if (board.unexpected()) std::printf("%d unexpected failure(s)\n", board.unexpected());
  return board.unexpected() ? 1 : 0;
}
