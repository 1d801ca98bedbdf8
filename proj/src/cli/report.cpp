#include "orient/cli/report.hpp"

#include <algorithm>
#include <sstream>

namespace orient::cli {

bool Report::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

void Report::add_verdict(std::string name, bool pass, std::string detail) {
  verdicts.push_back({std::move(name), pass, std::move(detail)});
}

nlohmann::json series_json(const TruncatedSeries& s) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [e, c] : s.terms()) {
    auto m = TruncatedSeries::from_terms(s.table(), s.profile(), {{e, Rational(1)}});
    out[m.to_string()] = to_pair_string(c);
  }
  return out;
}

std::string render_text(const Report& r) {
  std::size_t width = 10;
  for (const auto& [label, value] : r.rows) width = std::max(width, label.size());
  for (const auto& v : r.verdicts) width = std::max(width, v.name.size());
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size() + 2, ' '); };

  std::ostringstream out;
  out << "task: " << r.task;
  if (!r.theory.empty()) out << "   theory: " << r.theory;
  out << "\ntruncation: order " << r.order;
  if (r.cap) out << ", cap " << *r.cap;
  out << "\n";
  if (!r.rows.empty()) out << "\n";
  for (const auto& [label, value] : r.rows) out << pad(label) << value << "\n";
  if (!r.verdicts.empty()) {
    out << "\n";
    for (const auto& v : r.verdicts) {
      out << pad(v.name) << (v.pass ? "PASS" : "FAIL");
      if (!v.detail.empty()) out << "  " << v.detail;
      out << "\n";
    }
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  for (const auto& n : r.notes) out << "note: " << n << "\n";
  out << "\nstatus: " << (r.passed() ? "pass" : "FAIL") << "\n";
  return out.str();
}

std::string render_machine(const Report& r) {
  nlohmann::json doc;
  doc["task"] = r.task;
  doc["theory"] = r.theory;
  doc["echo"] = r.echo;
  doc["result"] = r.result;
  doc["truncation"] = {{"order", r.order}};
  if (r.cap) doc["truncation"]["cap"] = *r.cap;
  doc["verdicts"] = nlohmann::json::array();
  for (const auto& v : r.verdicts) doc["verdicts"].push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  doc["warnings"] = r.warnings;
  doc["notes"] = r.notes;
  doc["status"] = r.passed() ? "pass" : "fail";
  return doc.dump(2) + "\n";
}

}  // namespace orient::cli
