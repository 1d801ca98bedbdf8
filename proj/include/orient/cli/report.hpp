#pragma once

// Result of one CLI run, rendered as a text table or as a single JSON
// document. Rendering is deterministic; timing is kept out of both forms.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "orient/series.hpp"

namespace orient::cli {

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string task;
  std::string theory;
  nlohmann::json echo;
  /// Label / value lines of the text table, in order.
  std::vector<std::pair<std::string, std::string>> rows;
  nlohmann::json result = nlohmann::json::object();
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
  int order = 0;
  std::optional<int> cap;
  double seconds = 0;

  bool passed() const;
  void add_row(std::string label, std::string value) { rows.emplace_back(std::move(label), std::move(value)); }
  void add_verdict(std::string name, bool pass, std::string detail = {});
};

/// {"monomial": "p/q", ...}; the empty monomial is "1".
nlohmann::json series_json(const TruncatedSeries& s);

std::string render_text(const Report& r);
std::string render_machine(const Report& r);

}  // namespace orient::cli
