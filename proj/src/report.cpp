#include "ckp/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace ckp {

using nlohmann::json;

CheckRecord make_check(std::string name, int n, int k, std::string metric, double residual, double tolerance) {
  CheckRecord c;
  c.name = std::move(name);
  c.n = n;
  c.k = k;
  c.metric = std::move(metric);
  c.residual = residual;
  c.tolerance = tolerance;
  c.pass = residual <= tolerance;
  return c;
}

void Report::merge(const Report& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
  tables_.insert(tables_.end(), other.tables_.begin(), other.tables_.end());
  solutions_.insert(solutions_.end(), other.solutions_.begin(), other.solutions_.end());
}

bool Report::pass() const {
  for (const auto& c : checks_)
    if (!c.pass && !c.known_deviation) return false;
  return true;
}

json Report::to_json() const {
  json j;
  j["checks"] = json::array();
  for (const auto& c : checks_) {
    json r = {{"name", c.name}, {"n", c.n},       {"k", c.k},         {"metric", c.metric},
              {"max_residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    if (c.known_deviation) r["known_deviation"] = true;
    if (!c.note.empty()) r["note"] = c.note;
    j["checks"].push_back(r);
  }
  if (!tables_.empty()) {
    j["coefficient_tables"] = json::array();
    for (const auto& t : tables_) {
      json e = json::object();
      for (const auto& [name, v] : t.entries) e[name] = to_string(v);
      j["coefficient_tables"].push_back({{"name", t.name}, {"n", t.n}, {"k", t.k}, {"entries", e}});
    }
  }
  if (!solutions_.empty()) {
    j["solution_dimensions"] = json::array();
    for (const auto& s : solutions_)
      j["solution_dimensions"].push_back({{"n", s.n},
                                          {"k", s.k},
                                          {"metric", s.metric},
                                          {"dimension", s.dimension},
                                          {"expected", s.expected},
                                          {"largest_fixed_singular_value", s.gap_low},
                                          {"smallest_moving_singular_value", s.gap_high}});
  }
  if (timing_) j["timing_seconds"] = *timing_;
  j["pass"] = pass();
  return j;
}

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  // keep floats recognisable as floats
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void dump(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ", ";
        first = false;
        out += json(it.key()).dump();
        out += ": ";
        dump(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        dump(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: out += number(j.get<double>()); break;
    default: out += j.dump(); break;
  }
}

}  // namespace

std::string canonical_dump(const json& j) {
  std::string out;
  dump(j, out);
  return out;
}

std::string to_canonical_json(const Report& r) { return canonical_dump(r.to_json()); }

void emit_report(const Report& r, const std::string& path) {
  const std::string text = to_canonical_json(r) + "\n";
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("cannot write report to stdout");
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open report file '" + path + "'");
  out << text;
  if (!out.flush()) throw std::runtime_error("cannot write report file '" + path + "'");
}

}  // namespace ckp
