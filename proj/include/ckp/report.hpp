#pragma once
// Check records and their canonical JSON form: keys sorted, ", " and ": "
// separators, exact rationals as "p/q" strings, one line.

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ckp/rational.hpp"

namespace ckp {

struct CheckRecord {
  std::string name;
  int n = 0, k = 0;
  std::string metric;
  double residual = 0;
  double tolerance = 0;
  bool pass = true;
  // a documented disagreement with the tabulated value: reported, but not
  // counted against the overall result
  bool known_deviation = false;
  std::string note;
};

// pass iff residual <= tolerance (NaN fails)
CheckRecord make_check(std::string name, int n, int k, std::string metric, double residual, double tolerance);

struct CoefficientTable {
  std::string name;
  int n = 0, k = 0;
  std::vector<std::pair<std::string, Rational>> entries;
};

struct SolutionDimension {
  int n = 0, k = 0;
  std::string metric;
  int dimension = 0;
  long long expected = 0;
  double gap_low = 0, gap_high = 0;  // largest fixed / smallest moving singular value
};

class Report {
 public:
  void add(CheckRecord c) { checks_.push_back(std::move(c)); }
  void add(CoefficientTable t) { tables_.push_back(std::move(t)); }
  void add(SolutionDimension s) { solutions_.push_back(std::move(s)); }
  void merge(const Report& other);
  void set_timing(double seconds) { timing_ = seconds; }

  const std::vector<CheckRecord>& checks() const { return checks_; }
  const std::vector<CoefficientTable>& tables() const { return tables_; }
  const std::vector<SolutionDimension>& solutions() const { return solutions_; }
  // conjunction over checks that are not known deviations
  bool pass() const;

  nlohmann::json to_json() const;

 private:
  std::vector<CheckRecord> checks_;
  std::vector<CoefficientTable> tables_;
  std::vector<SolutionDimension> solutions_;
  std::optional<double> timing_;
};

std::string canonical_dump(const nlohmann::json& j);
std::string to_canonical_json(const Report& r);
// path "-" writes to stdout; throws std::runtime_error on I/O failure
void emit_report(const Report& r, const std::string& path);

}  // namespace ckp
