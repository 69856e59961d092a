#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace opshift::numlin {

/// Splittable counter-based generator. Streams are keyed by (seed, tag) so
/// independent draws in an experiment never share state; identical keys give
/// identical streams on every platform (no libstdc++ distribution objects).
class SplitRng {
public:
    SplitRng(std::uint64_t seed, std::string_view tag);

    /// Derive an independent child stream, e.g. per trial or per cell.
    SplitRng split(std::string_view tag, std::uint64_t index = 0) const;

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 bits of mantissa.
    double uniform();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    /// Standard complex Gaussian (Box-Muller, unit variance per component).
    std::complex<double> gaussian();

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    SplitRng(std::uint64_t key, std::uint64_t counter) : key_(key), counter_(counter) {}

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace opshift::numlin
