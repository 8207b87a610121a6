#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "geoalm/alm.hpp"
#include "geoalm/instances.hpp"

namespace geoalm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitIterCap = 3;
inline constexpr int kExitUsage = 64;

int exit_code(AlmStatus status);

struct ProblemInstance {
  ProblemSpec spec;
  std::optional<Graph> graph;  ///< set for MAXCUT selectors
  bool relaxation = false;     ///< maxcut-sdp
};

/// scholtes | cardinality | cardinality-w4 | obstacle:N | portfolio:FILE |
/// portfolio:synth:N:K | maxcut:FILE | maxcut-sdp:FILE
ProblemInstance resolve_problem(std::string_view selector, std::uint64_t seed);

/// FILE or synth:N:K.
PortfolioData resolve_portfolio(std::string_view source, std::uint64_t seed);

/// Set grammar for `project`; dimensions not given in the spec are taken from `dim`:
///   box:LO:HI  complementarity  switching  box-switching:SLO:SHI:TLO:THI
///   sparse:K  sparse-box:K:LO:HI  low-rank:ROWS:COLS:K  psd-rank:K
StructuredSet parse_set_spec(std::string_view spec, std::size_t dim);

/// Comma- or whitespace-separated reals.
std::vector<double> parse_point_list(std::string_view text);

std::string read_file(const std::string& path);

/// Entry point behind the executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geoalm::cli
