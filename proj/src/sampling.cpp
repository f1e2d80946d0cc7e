#include "gfa/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace gfa {

std::vector<long> geometric_schedule(long n0, long n_max, int count) {
    std::vector<long> out;
    if (n0 < 1) n0 = 1;
    if (n_max < n0) n_max = n0;
    if (count < 2) count = 2;
    double ratio = std::log(static_cast<double>(n_max) / static_cast<double>(n0));
    for (int i = 0; i < count; ++i) {
        double t = static_cast<double>(i) / (count - 1);
        long n = static_cast<long>(std::llround(static_cast<double>(n0) * std::exp(ratio * t)));
        if (n < n0) n = n0;
        if (n > n_max) n = n_max;
        if (out.empty() || n > out.back()) out.push_back(n);
    }
    return out;
}

std::vector<long> doubling_schedule(long n0, long n_max, int max_count) {
    std::vector<long> out;
    if (n0 < 1) n0 = 1;
    for (long n = n0; n <= n_max && static_cast<int>(out.size()) < max_count; n *= 2) {
        out.push_back(n);
        if (n > n_max / 2) break;  // overflow guard
    }
    if (out.empty()) out.push_back(n0);
    return out;
}

}  // namespace gfa
