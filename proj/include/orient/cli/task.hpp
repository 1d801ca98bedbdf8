#pragma once

// JSON task files. Schema (keys not listed are rejected):
//   task        "integrate" | "localize" | "fgl-inverse" | "n-series" | "check-axioms"
//   theory      "chow" | "ktheory" | "universal"
//   truncation  {"order": N, "cap": i, "max_raise": m}     all optional
//   integrate   space, lines?, bundles?, integrand, expect?, expect_chi?
//   localize    torus_rank?, integrand, expect?, compare_direct?, and either
//               standard_pn {"n", "obstruction"?, "bundles"?} or components + direct?
//   fgl-inverse expect? (list of coefficient expressions, u^0 first)
//   n-series    n, expect? (list, u^1 first)
//   check-axioms inject_fault?
// Spaces: "point" | {"projective": n, "name"?} | {"product": [a, b]}
//         | {"bundle": {"base": s, "summands": [line...], "name"?}}
// Lines: {"level name": degree, ...}. Summands: {"line"?: line, "character"?: [w...]}.

#include <optional>
#include <string>

#include <json.hpp>

#include "orient/cli/report.hpp"

namespace orient::cli {

struct RunOptions {
  /// Overrides truncation.cap.
  std::optional<int> cap;
  /// Overrides truncation.max_raise.
  std::optional<int> max_raise;
};

Report run_task(const nlohmann::json& task, const RunOptions& options = {});
/// Reads and parses the file; ParseError on I/O or JSON errors.
Report run_task_file(const std::string& path, const RunOptions& options = {});

}  // namespace orient::cli
