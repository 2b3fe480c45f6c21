#include "ckp/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "ckp/bgg.hpp"
#include "ckp/curvature.hpp"
#include "ckp/deform.hpp"
#include "ckp/holonomy.hpp"
#include "ckp/invariance.hpp"
#include "ckp/tractor.hpp"

namespace ckp {

namespace {

constexpr double kCurvatureTol = 1e-9;
constexpr double kNilpotentTol = 1e-12;
constexpr double kAdjointTol = 1e-10;
constexpr double kKostantTol = 1e-10;
constexpr double kThetaTol = 1e-10;
constexpr double kMiddleTol = 1e-9;
constexpr double kTopFloor = 1e-3;
constexpr double kContractionTol = 1e-10;
constexpr double kFlatTol = 1e-12;
constexpr double kCovarianceTol = 1e-9;
constexpr double kLoopTol = 1e-7;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// relative, with a floor so rounding noise is not amplified when the reference vanishes
double rel(double a, double b) { return a / std::max(b, 1e-3); }
double rel(const Eigen::MatrixXd& d, const Eigen::MatrixXd& ref) { return rel(d.norm(), ref.norm()); }

std::uint64_t point_seed(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// random k-form jet with every coefficient up to the given order
JetMatrix random_form_jet(int n, int k, int order, std::uint64_t seed) {
  const auto& tab = MonomialTable::get(n, order);
  const int d = FormBasis::get(n, k).dim();
  JetMatrix s(d, 1, &tab, order);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (int m = 0; m < tab.count(order); ++m)
    for (int i = 0; i < d; ++i) s.coeff(m)(i, 0) = nd(rng);
  return s;
}

Eigen::VectorXd random_vector(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = nd(rng);
  return v;
}

bool definite(const RunConfig& cfg) {
  const MetricSpec* m = &cfg.metric;
  while (m->family == "conformal" && m->base) m = m->base.get();
  return !(m->family == "flat" && m->signature >= 0 && m->signature != cfg.n);
}

// the chart is e^{2f} delta (f may be absent): solutions are known in closed form
bool flat_model(const RunConfig& cfg, const Expr** f) {
  *f = nullptr;
  const MetricSpec& m = cfg.metric;
  if (m.family == "flat") return m.signature < 0 || m.signature == cfg.n;
  if (m.family == "conformal" && m.f && (!m.base || (m.base->family == "flat" && m.base->signature < 0))) {
    *f = &*m.f;
    return true;
  }
  return false;
}

struct Context {
  const RunConfig& cfg;
  MetricChart chart;
  std::vector<std::vector<double>> points;
  explicit Context(const RunConfig& c) : cfg(c), chart(c.chart()), points(sample_points(c.n, c.points, c.seed)) {}
};

// fold a point run into checks with the given tolerances
using Adjust = std::function<void(CheckRecord&)>;

void add_checks(Report& rep, const Context& cx, const PointRun& run,
                const std::function<double(const std::string&)>& tolerance, const std::string& suite,
                const Adjust& adjust = nullptr) {
  for (const auto& [name, value] : fold_max(run)) {
    if (name == "error") continue;
    CheckRecord c = make_check(name, cx.cfg.n, cx.cfg.k, cx.chart.id(), value, tolerance(name));
    if (adjust) adjust(c);
    rep.add(c);
  }
  for (size_t i = 0; i < run.errors.size(); ++i) {
    if (run.errors[i].empty()) continue;
    CheckRecord c = make_check(suite + ".error", cx.cfg.n, cx.cfg.k, cx.chart.id(), kNaN, 0);
    c.note = "point " + std::to_string(i) + ": " + run.errors[i];
    rep.add(c);
  }
}

void require_jets(const RunConfig& cfg, const char* what) {
  if (cfg.jet_order < 4) throw ConfigError(std::string(what) + " needs jet_order >= 4");
}

}  // namespace

PointRun run_points(const std::vector<std::vector<double>>& points, const PointKernel& kernel, Exec exec) {
  const int count = static_cast<int>(points.size());
  PointRun run;
  run.residuals.resize(count);
  run.errors.resize(count);
  const bool parallel = exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < count; ++i) {
    try {
      run.residuals[i] = kernel(points[i], i);
    } catch (const std::exception& e) {
      run.residuals[i] = {{"error", kNaN}};
      run.errors[i] = e.what();
    }
  }
  return run;
}

PointResiduals fold_max(const PointRun& run) {
  PointResiduals out;
  for (const auto& pr : run.residuals) {
    for (const auto& [name, v] : pr) {
      auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == name; });
      if (it == out.end()) {
        out.emplace_back(name, v);
      } else if (std::isnan(v) || v > it->second) {
        if (!std::isnan(it->second)) it->second = v;
      }
    }
  }
  return out;
}

JetMatrix flat_killing_form(int n, int k, const Eigen::VectorXd& s0, const std::vector<double>& x, int order,
                            const Expr* f) {
  const auto& T0 = ChainSpace::get(n, k, 0);
  if (s0.size() != T0.dim()) throw std::invalid_argument("flat_killing_form: bad section size");
  const Eigen::MatrixXd A = connection_matrix(point_data(curvature_pack(MetricChart::flat(n), x, 3), k, 0)).value();
  const std::vector<Jet> X = coordinate_jets(x, order);
  const auto& tab = MonomialTable::get(n, order);
  const int N = T0.dim();
  // the A_c commute on the flat model, so s(x) = exp(-x^c A_c) s0; the series stops
  // because A_c raises the slot grading
  JetMatrix M(N, N, &tab, order);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < N; ++r)
      for (int j = 0; j < N; ++j) {
        const double a = A(c * N + r, j);
        if (a != 0.0) M.add(r, j, X[c], -a);
      }
  JetMatrix term(N, 1, &tab, order);
  for (int r = 0; r < N; ++r) term.add(r, 0, Jet(s0(r)));
  JetMatrix s = term;
  for (int m = 1; m <= 4; ++m) {
    term = (M * term) * (1.0 / m);
    s += term;
  }
  JetMatrix sigma = slot_embedding(T0, kSigma).transpose() * s;
  if (!f) return sigma;
  const Jet w = exp(f->eval(X) * static_cast<double>(k + 1));
  JetMatrix out(sigma.rows(), 1, &tab, order);
  for (int r = 0; r < sigma.rows(); ++r) out.add(r, 0, sigma.at(r, 0) * w);
  return out;
}

Report run_identities(const RunConfig& cfg, Exec exec) {
  const Context cx(cfg);
  const int n = cfg.n, k = cfg.k;
  const int J = std::max(cfg.jet_order, 3);
  const bool with_theta = cfg.jet_order >= 4, def = definite(cfg);
  const std::string deviating = "kostant.c1.midright.trace";

  const PointRun run = run_points(cx.points, [&](const std::vector<double>& x, int idx) {
    PointResiduals out;
    const CurvaturePack pack = curvature_pack(cx.chart, x, J);
    const IdentityResiduals ir = identity_residuals(pack);
    out.emplace_back("curvature.weyl_trace", ir.weyl_trace);
    out.emplace_back("curvature.weyl_alternation", ir.weyl_alt3);
    out.emplace_back("curvature.cotton_alternation", ir.cotton_alt3);
    out.emplace_back("curvature.weyl_divergence_identity", ir.bianchi);
    out.emplace_back("curvature.first_bianchi", ir.first_bianchi);

    const PointData pd0 = point_data(pack, k, 0), pd1 = point_data(pack, k, 1);
    const Eigen::MatrixXd K = curvature_action(pd0).value();
    out.emplace_back("tractor.curvature", rel(connection_curvature(connection_matrix(pd1)).value() - K, K));

    const KostantOps ops = kostant_ops(pd0);
    out.emplace_back("kostant.nilpotent_partial", (ops.d1 * ops.d0).norm());
    out.emplace_back("kostant.nilpotent_partial_star", (ops.ds1 * ops.ds2).norm());
    const double adj = std::max((ops.G1 * ops.d0 - (ops.G0 * ops.ds1).transpose()).norm(),
                                (ops.G2 * ops.d1 - (ops.G1 * ops.ds2).transpose()).norm());
    out.emplace_back("kostant.adjoint", adj);
    for (const KostantEntry& e : kostant_spectrum(pd0, ops, point_seed(cfg.seed, idx)))
      out.emplace_back("kostant." + e.name, std::max(std::abs(e.observed - to_double(e.expected)), e.residual));

    const Eigen::MatrixXd dsK = ops.ds2 * K;
    out.emplace_back("deform.delstar_K", rel(dsK - delstar_K_closed(pd0).value(), dsK));

    if (with_theta) {
      const PointData pd2 = point_data(pack, k, 2);
      const JetMatrix sigma = random_form_jet(n, k, 3, point_seed(cfg.seed ^ 0x5151, idx));
      const Theta0Result th = theta0(pd2, sigma);
      const Eigen::VectorXd oracle = hook_projector(pd0, k, HookPart::Zero) * form_covariant_derivative(pd2, sigma).value();
      out.emplace_back("theta0.oracle", rel(th.theta - oracle, oracle));
      out.emplace_back("theta0.normalized_lift", rel(ops.ds1 * th.nabla_L0, th.nabla_L0));
      if (def) {
        const HodgeParts parts = Hodge(ops, 1).split(th.nabla_L0);
        const double off = (parts.harmonic + parts.im_partial).norm() / th.nabla_L0.norm();
        const bool agree = (th.theta.norm() / th.nabla_L0.norm() > 1e-8) == (off > 1e-8);
        out.emplace_back("theta0.hodge_random", agree ? 0.0 : 1.0);
      }
    }
    return out;
  }, exec);

  // the tabulated mid-right trace value disagrees with the differentials
  std::string deviation_note;
  const PointData pd0 = point_data(curvature_pack(cx.chart, cx.points.at(0), 3), k, 0);
  for (const KostantEntry& e : kostant_spectrum(pd0, kostant_ops(pd0), cfg.seed)) {
    if ("kostant." + e.name != deviating) continue;
    std::ostringstream os;
    os << "tabulated " << to_string(e.expected) << ", observed " << e.observed;
    deviation_note = os.str();
  }
  Report rep;
  add_checks(
      rep, cx, run,
      [&](const std::string& name) {
        if (name.rfind("curvature.", 0) == 0 || name == "tractor.curvature" || name == "deform.delstar_K")
          return kCurvatureTol;
        if (name.rfind("kostant.nilpotent", 0) == 0) return kNilpotentTol;
        if (name == "kostant.adjoint") return kAdjointTol;
        if (name.rfind("kostant.", 0) == 0) return kKostantTol;
        if (name == "theta0.hodge_random") return 0.0;
        return kThetaTol;
      },
      "identities",
      [&](CheckRecord& c) {
        if (c.name != deviating) return;
        c.note = deviation_note;
        c.known_deviation = !c.pass;
      });
  return rep;
}

Report run_prolong(const RunConfig& cfg, Exec exec) {
  require_jets(cfg, "prolong");
  const Context cx(cfg);
  const int n = cfg.n, k = cfg.k;
  const Expr* f = nullptr;
  const bool model = flat_model(cfg, &f);
  const bool curved = !cx.chart.conformally_flat();

  const PointRun run = run_points(cx.points, [&](const std::vector<double>& x, int idx) {
    PointResiduals out;
    const CurvaturePack pack = curvature_pack(cx.chart, x, cfg.jet_order);
    const PointData pd0 = point_data(pack, k, 0), pd1 = point_data(pack, k, 1);
    const NormalizationResult nr = normalization(pd1, pd0);
    out.emplace_back("normalization.full", nr.full);
    out.emplace_back("normalization.psi1_middle", nr.psi1_middle);
    if (curved) out.emplace_back("normalization.psi1_top_lower_bound", nr.psi1_top);
    out.emplace_back("normalization.stage1", nr.stage1);
    if (k >= 2) out.emplace_back("normalization.homogeneity0_projected", nr.hom0_h2);
    out.emplace_back("normalization.no_lowering", rel(nr.negative_shift, nr.curvature_norm));
    if (k == 1) {
      const Eigen::MatrixXd psi = psi_matrix(pd0, PsiStage::Full).value();
      out.emplace_back("deform.k1_contraction", (contract_sK(pd1) - psi).norm());
    }
    if (model) {
      const PointData pd2 = point_data(pack, k, 2);
      const int N = ChainSpace::get(n, k, 0).dim();
      const JetMatrix sigma = flat_killing_form(n, k, random_vector(N, point_seed(cfg.seed ^ 0x7a7a, idx)), x, 3, f);
      const Theta0Result th = theta0(pd2, sigma);
      const double scale = std::max(th.L0.value().norm(), 1e-300);
      out.emplace_back("prolong.solution_theta0", th.theta.norm() / scale);
      const Eigen::MatrixXd conn = connection_matrix(pd0).value() + psi_matrix(pd0, PsiStage::Full).value();
      const Eigen::VectorXd par = covariant_derivative(JetMatrix::constant(conn), th.L0).value();
      out.emplace_back("prolong.parallel_lift", par.norm() / scale);
      if (definite(cfg)) {
        const HodgeParts parts = Hodge(kostant_ops(pd0), 1).split(th.nabla_L0);
        out.emplace_back("prolong.solution_in_im_delstar", (parts.harmonic + parts.im_partial).norm() / scale);
      }
    }
    return out;
  }, exec);

  Report rep;
  add_checks(
      rep, cx, run,
      [&](const std::string& name) {
        if (name == "normalization.psi1_middle" || name == "normalization.homogeneity0_projected" ||
            name == "normalization.no_lowering")
          return kMiddleTol;
        if (name == "normalization.psi1_top_lower_bound") return kTopFloor;
        if (name == "deform.k1_contraction") return kContractionTol;
        return cfg.tol;
      },
      "prolong",
      [](CheckRecord& c) {
        if (c.name != "normalization.psi1_top_lower_bound") return;
        c.pass = c.residual > c.tolerance;
        c.note = "lower bound: the single-stage deformation leaves a top-slot residual";
      });
  const PsiCoefficients pc = psi_coefficients(n, k);
  rep.add(CoefficientTable{"psi", n, k, pc.table()});
  return rep;
}

Report run_invariance(const RunConfig& cfg, Exec exec) {
  require_jets(cfg, "invariance");
  const Context cx(cfg);
  const int n = cfg.n, k = cfg.k;
  const Expr f = cfg.rescale_factor();

  const PointRun run = run_points(cx.points, [&](const std::vector<double>& x, int) {
    PointResiduals out;
    const RescaledPoint rp = rescaled_point(cx.chart, f, x, k, cfg.jet_order);
    const InvarianceResult r = invariance_check(rp);
    for (const auto& [name, v] : r.hatted) out.emplace_back("invariance.hatted." + name, v);
    out.emplace_back("invariance.homogeneity1_maps", r.middle);
    out.emplace_back("invariance.trans1", r.trans1);
    out.emplace_back("invariance.trans2", r.trans2);
    out.emplace_back("invariance.psi_naturality", r.naturality);

    // the section transform intertwines the connections
    const CurvaturePack pack = curvature_pack(cx.chart, x, cfg.jet_order);
    const RescaledPack rs = conformal_rescale_pack(cx.chart, f, x, cfg.jet_order);
    PointData pd1 = point_data(pack, k, 1);
    pd1.set_rescale(rs.upsilon);
    const Eigen::MatrixXd A = connection_matrix(point_data(pack, k, 0)).value();
    const Eigen::MatrixXd Ah = connection_matrix(point_data(rs.pack, k, 0)).value();
    for (auto reading : {TransformReading::Consistent, TransformReading::Printed}) {
      const JetMatrix T = transform_matrix(pd1, rs.f, reading);
      const int N = static_cast<int>(T.rows());
      double err = 0;
      for (int c = 0; c < n; ++c) {
        const Eigen::MatrixXd d = T.derivative(c).value() + Ah.middleRows(c * N, N) * T.value() -
                                  T.value() * A.middleRows(c * N, N);
        err = std::max(err, d.norm() / T.value().norm());
      }
      out.emplace_back(reading == TransformReading::Consistent ? "tractor.transform_naturality"
                                                               : "tractor.transform_naturality_displayed",
                       err);
    }
    const DhatWeyl dw = dhat_weyl(pack, rs);
    double dc = 0, dp = 0, ref = 0;
    for (size_t i = 0; i < dw.direct.size(); ++i) {
      dc = std::max(dc, std::abs(dw.direct.data()[i] - dw.corrected.data()[i]));
      dp = std::max(dp, std::abs(dw.direct.data()[i] - dw.printed.data()[i]));
      ref = std::max(ref, std::abs(dw.direct.data()[i]));
    }
    out.emplace_back("curvature.weyl_derivative_rescale", rel(dc, ref));
    out.emplace_back("curvature.weyl_derivative_rescale_displayed", rel(dp, ref));
    return out;
  }, exec);

  Report rep;
  add_checks(
      rep, cx, run, [&](const std::string&) { return cfg.tol; }, "invariance",
      [](CheckRecord& c) {
        if (c.pass) return;
        if (c.name == "tractor.transform_naturality_displayed") {
          c.known_deviation = true;
          c.note = "displayed top-slot law uses the untransformed mu";
        }
        if (c.name == "curvature.weyl_derivative_rescale_displayed") {
          c.known_deviation = true;
          c.note = "displayed law has A terms where Upsilon.C terms belong";
        }
      });

  // exact coefficient identities
  for (auto reading : {TableReading::Corrected, TableReading::Literal}) {
    const bool lit = reading == TableReading::Literal;
    const TableComparison tc = compare_tables(n, k, reading);
    CheckRecord c = make_check(lit ? "invariance.tables_exact_displayed" : "invariance.tables_exact", n, k,
                               "exact", static_cast<double>(tc.mismatched.size()), 0);
    if (!tc.equal()) {
      std::string s = "differ at";
      for (int i : tc.mismatched) s += " H" + std::to_string(i);
      c.note = s;
      c.known_deviation = lit;
    }
    rep.add(c);
    for (int t = 1; t <= 2; ++t) {
      const HCoefficients h = t == 1 ? trans1_coefficients(n, k, reading) : trans2_coefficients(n, k, reading);
      CoefficientTable tab{"trans" + std::to_string(t) + (lit ? ".displayed" : ".corrected"), n, k, {}};
      for (int i = 0; i < kHCount; ++i) tab.entries.emplace_back("H" + std::to_string(i + 1), h[i]);
      rep.add(tab);
    }
  }
  return rep;
}

Report run_obstruction(const RunConfig& cfg, Exec exec) {
  if (cfg.k < 2) throw ConfigError("obstruction needs k >= 2");
  const Context cx(cfg);
  const int n = cfg.n, k = cfg.k;
  const Expr f = cfg.rescale_factor();
  const Expr* model_f = nullptr;
  const bool model = flat_model(cfg, &model_f);
  const bool cflat = cx.chart.conformally_flat();

  const PointRun run = run_points(cx.points, [&](const std::vector<double>& x, int idx) {
    PointResiduals out;
    const CurvaturePack pack = curvature_pack(cx.chart, x, 3);
    const PointData pd = point_data(pack, k, 0);
    const Eigen::MatrixXd O = obstruction_matrix(pd);
    // bottom of K. on sigma, projected, is k times the obstruction
    const auto& T0 = ChainSpace::get(n, k, 0);
    const auto& T2 = ChainSpace::get(n, k, 2);
    const Eigen::MatrixXd bottom = project_H2_matrix(pd) * slot_embedding(T2, kSigma).transpose() *
                                   curvature_action(pd).value() * slot_embedding(T0, kSigma);
    out.emplace_back("obstruction.tractor_curvature", rel(bottom - k * O, bottom));
    if (cflat) out.emplace_back("obstruction.conformally_flat", O.norm());

    const RescaledPack rs = conformal_rescale_pack(cx.chart, f, x, 3);
    const Eigen::MatrixXd Oh = obstruction_matrix(point_data(rs.pack, k, 0));
    const double w = std::exp((k + 1) * rs.f.value());
    const Eigen::VectorXd sigma = random_vector(O.cols(), point_seed(cfg.seed ^ 0x0b0b, idx));
    out.emplace_back("obstruction.covariance", rel(Oh * (w * sigma) - w * (O * sigma), w * (O * sigma)));
    if (model) {
      const JetMatrix kf = flat_killing_form(n, k, random_vector(T0.dim(), point_seed(cfg.seed ^ 0x0c0c, idx)), x, 0,
                                             model_f);
      out.emplace_back("obstruction.killing_forms", (O * kf.value()).norm());
    }
    return out;
  }, exec);

  Report rep;
  add_checks(rep, cx, run, [&](const std::string& name) {
    if (name == "obstruction.tractor_curvature") return kThetaTol;
    if (name == "obstruction.conformally_flat") return kFlatTol;
    if (name == "obstruction.covariance") return kCovarianceTol;
    return cfg.tol;
  }, "obstruction");
  return rep;
}

Report run_holonomy(const RunConfig& cfg) {
  const MetricChart chart = cfg.chart();
  const int n = cfg.n, k = cfg.k;
  if (!chart.conformally_flat()) throw ConfigError("holonomy needs a conformally flat metric");
  Report rep;
  SolutionDimension sd{n, k, chart.id(), 0, binomial(n + 2, k + 1), 0, 0};
  try {
    const HolonomyResult h = holonomy_dimension(chart, k, default_loops(n));
    sd.dimension = h.dimension;
    sd.gap_low = h.dimension > 0 ? h.singular_values[h.dimension - 1] : 0.0;
    sd.gap_high = h.dimension < static_cast<int>(h.singular_values.size()) ? h.singular_values[h.dimension] : 0.0;
    rep.add(make_check("holonomy.solution_dimension", n, k, chart.id(),
                       std::abs(static_cast<double>(h.dimension - sd.expected)), 0));
    rep.add(make_check("holonomy.loop_defect", n, k, chart.id(), h.max_defect, kLoopTol));
  } catch (const TransportError& e) {
    CheckRecord c = make_check("holonomy.transport", n, k, chart.id(), kNaN, 0);
    c.note = e.what();
    rep.add(c);
  }
  rep.add(sd);
  return rep;
}

Report run_all(const RunConfig& cfg, Exec exec) {
  Report rep = run_identities(cfg, exec);
  rep.merge(run_prolong(cfg, exec));
  rep.merge(run_invariance(cfg, exec));
  if (cfg.k >= 2) rep.merge(run_obstruction(cfg, exec));
  if (cfg.chart().conformally_flat()) rep.merge(run_holonomy(cfg));
  return rep;
}

}  // namespace ckp
