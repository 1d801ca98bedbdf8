// orient: batch front end.
//   orient run <file> [--truncation i] [--max-raise m] [--output text|machine]
//   orient check-axioms --theory T --order N [--inject-fault] [--output text|machine]
// Exit status: 0 pass, 1 verdict failure, 2 parse or other error, 3 insufficient truncation.

#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "orient/cli/axioms.hpp"
#include "orient/cli/expression.hpp"
#include "orient/cli/task.hpp"
#include "orient/errors.hpp"

namespace {

enum Exit { ok = 0, verdict_failed = 1, error = 2, truncation = 3 };

int emit(const orient::cli::Report& r, const std::string& format, double seconds) {
  std::cout << (format == "machine" ? orient::cli::render_machine(r) : orient::cli::render_text(r));
  std::cerr << "time: " << seconds << " s\n";
  return r.passed() ? ok : verdict_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations in oriented intersection theories"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--output", format, "Output format")->check(CLI::IsMember({"text", "machine"}));

  std::string file;
  orient::cli::RunOptions opts;
  auto* run = app.add_subcommand("run", "Run a JSON task file");
  run->add_option("file", file, "Task file")->required();
  run->add_option("--truncation", opts.cap, "Equivariant truncation cap")->check(CLI::PositiveNumber);
  run->add_option("--max-raise", opts.max_raise, "Largest cap the automatic raise may reach")
      ->check(CLI::PositiveNumber);
  run->add_option("--output", format, "Output format")->check(CLI::IsMember({"text", "machine"}));

  std::string theory;
  int order = 8;
  bool fault = false;
  auto* axioms = app.add_subcommand("check-axioms", "Run the axiom and consistency suite");
  axioms->add_option("--theory", theory, "chow, ktheory or universal")
      ->required()
      ->check(CLI::IsMember({"chow", "ktheory", "universal"}));
  axioms->add_option("--order", order, "Formal group law order N")->required();
  axioms->add_flag("--inject-fault", fault, "Perturb g(u) by u^3 before the inverse check");
  axioms->add_option("--output", format, "Output format")->check(CLI::IsMember({"text", "machine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : error;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  try {
    if (*run) {
      auto r = orient::cli::run_task_file(file, opts);
      return emit(r, format, elapsed());
    }
    auto r = orient::cli::check_axioms(orient::parse_fgl_kind(theory), order, fault);
    r.theory = theory;
    return emit(r, format, elapsed());
  } catch (const orient::InsufficientTruncation& e) {
    std::cerr << "insufficient truncation: " << e.what() << "\n";
    return truncation;
  } catch (const orient::cli::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return error;
  }
}
