#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cifcompare/simulation.hpp"

namespace cifcompare {

/// Parses a `key = value` scenario description. Lines starting with '#' are
/// comments. Recognised keys:
///   id, model (bk1|bk2|dp3), p, beta, p1, p2, c, n1, n2,
///   censoring (none | uniform A B [A2 B2] | exponential R1 [R2] | target X),
///   truncation (none | gamma SHAPE SCALE FRACTION), sizes (after|before),
///   t1, t2, n_sim, B, alpha, seed, multiplier, tests, max_grid, threads, swap.
/// `censoring = target X` calibrates U(0, b) per group to P(C < T) = X.
/// Throws ConfigError naming the offending key.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical key = value rendering; parsing it yields the same scenario.
std::string describe(const Scenario& scenario);

}  // namespace cifcompare
