#pragma once

#include "akgraph/execution.hpp"
#include "akgraph/network.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace akgraph {

// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitStructural = 1,  // unreadable config, invalid network, bad arguments
    kExitAssumption = 2,  // rho <= lambda0 (1 - gamma) and similar
    kExitNumeric = 3,     // non-convergence, non-finite state
};

/// General-format rendering with 12 significant digits; "inf", "-inf" and
/// "nan" for the special values. Independent of locale.
std::string format_number(double v);

struct SweepRow {
    double w = 0.0;
    double lambda0 = 0.0;
    double g = 0.0;
    bool condition_holds = false;
    double t_minus = 0.0;
};

/// One row per weight value on edge (i, j), sorted by w.
std::vector<SweepRow> compute_sweep(const EconomyNetwork& net, std::size_t i, std::size_t j,
                                    std::span<const double> values, double t_max,
                                    Execution exec = Execution::parallel);

/// Entry point of the `akgraph` tool. Returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace akgraph
