#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pspin/pathlab.hpp"
#include "pspin/statapprox.hpp"

namespace pspin::cli {

enum class Command { PhaseDiagram, TransitionLines, GapScan, ExactGap, Overlap, StatApprox, PathEval };
enum class Format { Auto, Csv, Json };

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  Command command = Command::PhaseDiagram;
  int p = 11;  // 0 selects the p -> infinity mode
  int k = 2;
  int n_lambda = 256;
  int n_s = 256;
  bool grid = false;  // stat-approx: scan the grid instead of one point
  double lambda = 0.1;
  double s = 0.5;
  int n = 100;
  int max_iterations = 0;  // exact-gap Lanczos cap, 0 = default
  double beta = kInfiniteBeta;
  std::string path_file;
  int samples = 1001;
  bool strict = false;
  int threads = 0;  // 0 = runtime default
  std::string out;  // empty writes to stdout
  Format format = Format::Auto;

  ModelParams params() const;
  Format resolved_format() const;
};

std::string to_string(Command command);

// Validates every numeric field against the owning module before any work
// starts; throws DomainError.
void validate(const RunConfig& config);

// Runs one command. Returns 0 on success, 1 on validation errors and 2 on
// numerical failures; errors are written to `err` as one JSON object.
int run(const RunConfig& config, std::ostream& err);

// Same, writing the artifact to `out` instead of config.out.
int run_to(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (flags > --config file > defaults; PSPIN_THREADS overrides
// --threads). Returns nullopt after printing help or a parse error, with
// the exit code stored in *exit_code.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, int* exit_code,
                                    std::ostream& out, std::ostream& err);

// Whitespace-separated "lambda s" pairs, one per line, '#' comments.
AnnealPath load_path_file(const std::string& file, bool strict);
AnnealPath parse_path(std::istream& in, bool strict);

// Shortest round-trip JSON and 17-significant-digit CSV numbers.
std::string format_double(double x);

}  // namespace pspin::cli
