#pragma once

// The quantitative self-test harness: every criterion the toolkit promises,
// runnable from the CLI (`fps selftest`) and as the acceptance test binary.

#include "fps/pencil.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fps {

/// The standing test fixtures: interval, pauli, cube, gegen.
std::vector<MonicPencil> standard_fixtures();

/// Runs all criteria, printing one pass/fail line each; returns the number
/// of failed criteria.
int run_selftest(std::uint64_t seed, std::ostream& out);

}  // namespace fps
