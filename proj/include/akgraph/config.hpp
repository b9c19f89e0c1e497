#pragma once

#include "akgraph/network.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace akgraph {

/// Weight sweep over one edge (i, j), 0-based with i < j.
struct SweepSpec {
    std::size_t i = 0;
    std::size_t j = 2;
    Vector values;        // evaluated in any order, reported sorted
    double t_max = 300.0; // censoring horizon for T_minus
};

struct TwoNodeSpec {
    double w_from = 1e-3;
    double w_to = 1.0;
    int per_decade = 50;
};

struct OracleSpec {
    std::size_t points = 256;
    double lower = 0.0;
    double upper = 2.0;
    std::size_t control_points = 200;
    bool refine = true;  // also solve at half the resolution
};

struct RunConfig {
    EconomyNetwork network;
    double horizon = 1000.0;
    double dt = 0.01;
    double band_fraction = 0.01;
    double t_max = 1000.0;
    SweepSpec sweep;
    TwoNodeSpec two_node;
    OracleSpec oracle;
    std::string output_dir = "./out";
    std::uint64_t seed = 12345;
};

/// Parses the JSON configuration. Throws ValidationError with a one-line
/// message on malformed input. Network assumptions are not checked here.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// n evenly spaced values from `from` to `to` inclusive.
Vector linspace(double from, double to, std::size_t n);

} // namespace akgraph
