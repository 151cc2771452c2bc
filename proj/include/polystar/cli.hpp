#ifndef POLYSTAR_CLI_HPP
#define POLYSTAR_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "polystar/radial.hpp"

namespace polystar::cli {

/// Resolved run configuration, echoed into every report.
struct RunConfig {
  int q = 2;
  double m = 1.0;
  std::size_t grid_nodes = 2048;
  double tol = 1e-8;
  std::uint64_t seed = 42;
  std::string format = "json";  // json | csv | plain
  bool no_meta = false;
  unsigned jobs = 0;            // resolved before running (flag, env, cores)
};

/// Random test density: a seeded mixture of uniform balls and truncated
/// exponentials on a fixed grid. Used by `hls-check` and the property suites.
radial::RadialDensity random_density(std::mt19937_64& rng);

/// Runs one CLI invocation. args excludes the program name. Exit codes:
/// 0 ok, 1 usage error, 2 numerical failure, 3 domain violation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace polystar::cli

#endif  // POLYSTAR_CLI_HPP
