#include "ckp/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace ckp {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line + 1; }
int col_of(const YAML::Node& node) { return node.Mark().column + 1; }

[[noreturn]] void fail(const std::string& msg, const YAML::Node& node) {
  throw ConfigError(msg, line_of(node), col_of(node));
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key, const char* what) {
  if (!node.IsScalar()) fail("'" + key + "' must be " + what, node);
  try {
    return node.as<T>();
  } catch (const YAML::BadConversion&) {
    fail("'" + key + "' must be " + what, node);
  }
}

Expr expression(const YAML::Node& node, const std::string& key) {
  const std::string text = scalar<std::string>(node, key, "an expression");
  try {
    return Expr::parse(text);
  } catch (const ParseError& e) {
    throw ParseError("bad expression for '" + key + "': " + e.what(), line_of(node), col_of(node));
  }
}

const std::set<std::string> kRunKeys = {"n", "k", "points", "seed", "tol", "jet_order", "rescale", "metric"};
const std::set<std::string> kMetricKeys = {"family", "eps", "radius", "signature", "base", "f", "g"};
const std::set<std::string> kFamilies = {"flat", "sphere", "conformal", "analytic", "perturbed"};

// (a, b) from "ab" or "a,b", 1-based in text
std::pair<int, int> entry_key(const YAML::Node& key) {
  std::string s = scalar<std::string>(key, "g", "an index pair");
  int a = 0, b = 0;
  if (s.size() == 2 && std::isdigit(static_cast<unsigned char>(s[0])) && std::isdigit(static_cast<unsigned char>(s[1]))) {
    a = s[0] - '0';
    b = s[1] - '0';
  } else {
    char comma = 0;
    std::istringstream in(s);
    if (!(in >> a >> comma >> b) || comma != ',' || !in.eof()) fail("metric entry key must look like \"12\" or \"1,2\"", key);
  }
  if (a < 1 || b < 1) fail("metric entry indices are 1-based", key);
  return {a - 1, b - 1};
}

void read_metric(const YAML::Node& map, MetricSpec& m, bool top_level, const std::set<std::string>& other) {
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (top_level && other.count(key)) continue;
    if (!kMetricKeys.count(key) && !(key == "seed" && !top_level))
      fail("unknown key '" + key + "'", kv.first);
    if (key == "family") {
      m.family = scalar<std::string>(v, key, "a family name");
      if (!kFamilies.count(m.family)) fail("unknown metric family '" + m.family + "'", v);
    } else if (key == "eps") {
      m.eps = scalar<double>(v, key, "a number");
    } else if (key == "radius") {
      m.radius = scalar<double>(v, key, "a number");
      if (!(m.radius > 0)) fail("'radius' must be positive", v);
    } else if (key == "signature") {
      m.signature = scalar<int>(v, key, "an integer");
    } else if (key == "seed") {
      m.seed = scalar<std::uint64_t>(v, key, "a non-negative integer");
    } else if (key == "f") {
      m.f = expression(v, key);
    } else if (key == "base") {
      m.base = std::make_shared<MetricSpec>();
      if (v.IsScalar()) {
        m.base->family = scalar<std::string>(v, key, "a family name");
        if (!kFamilies.count(m.base->family)) fail("unknown metric family '" + m.base->family + "'", v);
      } else if (v.IsMap()) {
        read_metric(v, *m.base, false, {});
      } else {
        fail("'base' must be a family name or a map", v);
      }
    } else if (key == "g") {
      if (!v.IsMap()) fail("'g' must be a map of entries", v);
      for (const auto& e : v) {
        const auto ab = entry_key(e.first);
        if (m.g.count(ab) || m.g.count({ab.second, ab.first})) fail("metric entry given twice", e.first);
        m.g.emplace(ab, expression(e.second, "g"));
      }
    }
  }
}

MetricChart build_chart(const MetricSpec& m, int n, std::uint64_t seed) {
  auto check = [&](const Expr& e, const char* what) {
    if (e.max_var() >= n) throw ConfigError(std::string(what) + " uses a coordinate beyond x" + std::to_string(n));
  };
  if (m.family == "flat") {
    if (m.signature > n) throw ConfigError("signature exceeds n");
    return MetricChart::flat(n, m.signature);
  }
  if (m.family == "sphere") return MetricChart::round_sphere(n, m.radius);
  if (m.family == "perturbed") return MetricChart::perturbed(n, m.eps, m.seed);
  if (m.family == "conformal") {
    if (!m.f) throw ConfigError("conformal metric needs 'f'");
    check(*m.f, "f");
    const MetricChart base = m.base ? build_chart(*m.base, n, seed) : MetricChart::flat(n);
    return MetricChart::conformal(base, *m.f);
  }
  if (m.family == "analytic") {
    std::vector<Expr> entries(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a) entries[a * n + a] = Expr(1.0);
    for (const auto& [ab, e] : m.g) {
      if (ab.first >= n || ab.second >= n) throw ConfigError("metric entry index beyond n");
      check(e, "metric entry");
      entries[ab.first * n + ab.second] = e;
      entries[ab.second * n + ab.first] = e;
    }
    return MetricChart::analytic(n, entries);
  }
  throw ConfigError("unknown metric family '" + m.family + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (n < 4 || n > 8) throw UnsupportedDimension("unsupported dimension n=" + std::to_string(n) + " (need 4..8)");
  if (k < 1 || k > n - 2) throw ConfigError("k must be in 1..n-2, got " + std::to_string(k));
  if (points < 1) throw ConfigError("points must be at least 1");
  if (!(tol > 0)) throw ConfigError("tol must be positive");
  if (jet_order < 3) throw ConfigError("jet_order must be at least 3");
  if (rescale && rescale->max_var() >= n) throw ConfigError("rescale uses a coordinate beyond x" + std::to_string(n));
}

MetricChart RunConfig::chart() const { return build_chart(metric, n, seed); }

Expr RunConfig::rescale_factor() const { return rescale ? *rescale : random_conformal_factor(n, seed + 1); }

RunConfig parse_spec_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  RunConfig cfg;
  if (root.IsNull()) {
    cfg.validate();
    return cfg;
  }
  if (!root.IsMap()) fail("spec must be a map", root);
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (key == "n") {
      cfg.n = scalar<int>(v, key, "an integer");
    } else if (key == "k") {
      cfg.k = scalar<int>(v, key, "an integer");
    } else if (key == "points") {
      cfg.points = scalar<int>(v, key, "an integer");
    } else if (key == "seed") {
      cfg.seed = scalar<std::uint64_t>(v, key, "a non-negative integer");
    } else if (key == "tol") {
      cfg.tol = scalar<double>(v, key, "a number");
    } else if (key == "jet_order") {
      cfg.jet_order = scalar<int>(v, key, "an integer");
    } else if (key == "rescale") {
      cfg.rescale = expression(v, key);
    } else if (key == "metric") {
      if (!v.IsMap()) fail("'metric' must be a map", v);
      read_metric(v, cfg.metric, false, {});
    } else if (!kMetricKeys.count(key)) {
      fail("unknown key '" + key + "'", kv.first);
    }
  }
  read_metric(root, cfg.metric, true, kRunKeys);
  cfg.validate();
  cfg.chart();  // family-level errors surface here rather than mid-run
  return cfg;
}

RunConfig parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

}  // namespace ckp
