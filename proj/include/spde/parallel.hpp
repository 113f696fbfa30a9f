// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace spde {

/// Runs fn(i) for i in [0, n) on up to `threads` workers with a static
/// interleaved partition. Results must be written to per-index slots so the
/// outcome does not depend on scheduling. The exception of the lowest failing
/// index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::mutex m;
    std::size_t failed_index = n;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(m);
                    if (i < failed_index) {
                        failed_index = i;
                        failure = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

/// Pairwise (cascade) summation; fixed association order for a given length.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

struct SampleStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    double std_error = 0.0;
    std::size_t n = 0;
};

inline SampleStats sample_stats(std::span<const double> v) {
    SampleStats s;
    s.n = v.size();
    if (v.empty()) return s;
    s.mean = pairwise_sum(v) / static_cast<double>(v.size());
    if (v.size() > 1) {
        std::vector<double> d(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) d[i] = (v[i] - s.mean) * (v[i] - s.mean);
        s.variance = pairwise_sum(d) / static_cast<double>(v.size() - 1);
        s.std_error = std::sqrt(s.variance / static_cast<double>(v.size()));
    }
    return s;
}

}  // namespace spde
