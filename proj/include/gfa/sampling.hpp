#pragma once

#include <cstdint>
#include <vector>

namespace gfa {

/// Log-uniformly spaced index schedule from n0 to n_max inclusive, at most
/// `count` distinct values. Used everywhere tail behaviour is sampled, so
/// that every estimator sees the same grid.
std::vector<long> geometric_schedule(long n0, long n_max, int count);

/// n0, 2 n0, 4 n0, ... capped by both n_max and max_count entries.
std::vector<long> doubling_schedule(long n0, long n_max, int max_count);

}  // namespace gfa
