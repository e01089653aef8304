#pragma once

#include "liouville/counterexamples.hpp"
#include "liouville/entire.hpp"
#include "liouville/multiplier.hpp"
#include "liouville/weights.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace lab {

using json = nlohmann::json;
using namespace liouville;

/// Malformed input file or option; exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json load_json(const std::string& path);

Weight parse_weight(const json& j);
PolyExpSum parse_function(const json& j);
Symbol parse_symbol(const json& j);
ZeroSequence parse_zeros(const json& j);

json to_json(const PolyExpSum& f);
json to_json(const ZeroSet& z);

/// One report row. Values in log units are written as {"log": v}.
struct Row {
  std::string tag;
  double lhs = 0, rhs = 0, margin = 0;
  bool log_domain = false;
  bool certified = true;
  bool pass = true;
  /// Excluded from the exit status.
  bool informational = false;
  long count = 1;
  /// Uncertified with less slack than kCriticalSlack (log units, or relative to |rhs|):
  /// an error in the uncertified part could flip the verdict.
  bool uncertified_critical() const;
};

inline constexpr double kCriticalSlack = 1e-3;

Row row_from(const Check& c);

struct Report {
  std::string command;
  std::vector<Row> rows;
  json values = json::object();
  std::string note;

  /// All non-informational rows pass and none is uncertified-critical.
  bool pass() const;
  /// Tags of the rows that fail or are uncertified-critical.
  std::vector<std::string> failing() const;
  json to_json() const;
};

/// Doubles as JSON numbers; non-finite values as the strings "inf", "-inf", "nan".
json number(double v);

void write_text(const std::string& path, const std::string& text);

/// CSV with a header row; numbers at full precision.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Minimal SVG line plot, one or more polylines over shared axes.
std::string svg_polyline(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                         const std::vector<std::pair<std::vector<double>, std::vector<double>>>& series);

}  // namespace lab
