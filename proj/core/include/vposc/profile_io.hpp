#pragma once

// Columnar text format for solved steady states.
//
//   # vposc-profile 1
//   # family <polytropic_ball|polytropic_shell|king>
//   # k <k>
//   # l <l>
//   # L0 <L0>
//   # y0 <y0>
//   # R <R>
//   # Ri <Ri>
//   # E0 <E0>
//   # M_total <M>
//   # dr <dr>
//   # columns r y rho m dUdr
//   <one row per grid node, 17 significant digits>

#include <filesystem>
#include <iosfwd>

#include "vposc/steady_state.hpp"

namespace vposc {

void write_profile(std::ostream& out, const SteadyStateProfile& profile);
void write_profile(const std::filesystem::path& path, const SteadyStateProfile& profile);

/// Throws FormatError on malformed input.
SteadyStateProfile read_profile(std::istream& in);
SteadyStateProfile read_profile(const std::filesystem::path& path);

}  // namespace vposc
