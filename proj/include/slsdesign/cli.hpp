#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slsdesign/information.hpp"
#include "slsdesign/solver.hpp"
#include "slsdesign/tables.hpp"

namespace slsdesign {

enum class Command { Solve, Analytic, Verify, ReduceSupport, Tables };
enum class OutputFormat { Json, Csv, Text };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Relative output paths are resolved against this directory when set.
inline constexpr const char* kOutputDirEnv = "SLSDESIGN_OUTPUT_DIR";

struct RunConfig {
  Command command = Command::Tables;
  int q = 0;
  std::vector<double> t;
  // Absent means both criteria where the command allows it.
  std::optional<Criterion> criterion;
  SolverConfig solver;
  OutputFormat output_format = OutputFormat::Text;
  std::optional<std::string> output_path;
  // solve: extra JSON copy of the result.
  std::optional<std::string> json_path;
  // analytic: ev1 | ev2 | odd | pD_q2 | pA_q2.
  // verify: the same plus uniform | p1 | p2 | p3 | example1.
  std::string measure;
  std::vector<TableId> tables;

  // Throws DomainError when command-specific fields are missing or t is
  // outside [0, 1).
  void validate() const;
};

// Executes one command. Returns kExitOk, or kExitFailure after writing the
// error to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv into a RunConfig and runs it. Usage errors return kExitUsage.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace slsdesign
