#pragma once

// Command-line front end: configuration parsing, evaluation and CSV/JSON output.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dipolecav/analysis.hpp"

namespace dipolecav::cli {

/// Bad flags, values or config keys. Maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { free3d, free2d, free1d, planar, channel, sweep, exponent, enhance, oracle };
enum class Format { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPointFailure = 3;
inline constexpr int kExitIo = 4;

struct RunConfig {
  Command command = Command::sweep;
  double p = 1.0;
  Geometry geometry = Free3D{};
  Placement placement;
  double x_min = 0.01, x_max = 100.0;
  std::size_t points = 100;
  std::vector<Component> components;
  SumControl ctrl;
  int window = 5;
  unsigned threads = 0;
  Format format = Format::csv;
  std::optional<std::string> out;
  /// exponent: report n only at these separations.
  std::vector<double> at;
  /// oracle options
  std::uint64_t seed = 20251019;
  int samples = 10;
  double tolerance = 1e-4;
};

/// Parses arguments (without the program name). Precedence: command-line
/// flag, then the JSON file given by --config, then the built-in default.
RunConfig parse_config(const std::vector<std::string>& args);

/// Length with optional unit suffixes: `<number>[sqrt2][pi][_over_p|over_p|L|a|b]`,
/// e.g. `1.1pi_over_p`, `0.5L`, `1.1sqrt2pi_over_p`, `3`. A bare number is an
/// absolute length. `refs` supplies L, a and b.
double parse_length(const std::string& text, double p, const std::map<std::string, double>& refs = {});

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

/// Writes the result of `config` to `os` in the configured format. Returns
/// kExitOk or kExitPointFailure.
int execute(const RunConfig& config, std::ostream& os);

/// Full program: parse, execute, write atomically to --out or stdout.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dipolecav::cli
