#include "opshift/rng.hpp"

#include <cmath>
#include <numbers>

namespace opshift::numlin {

namespace {

// SplitMix64 finalizer; used both for key derivation and output whitening.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t hash_tag(std::uint64_t h, std::string_view tag) {
    // FNV-1a over the tag bytes, folded through mix64.
    std::uint64_t f = 0xcbf29ce484222325ULL ^ h;
    for (unsigned char c : tag) {
        f ^= c;
        f *= 0x100000001b3ULL;
    }
    return mix64(f);
}

} // namespace

SplitRng::SplitRng(std::uint64_t seed, std::string_view tag)
    : key_(hash_tag(mix64(seed), tag)), counter_(0) {}

SplitRng SplitRng::split(std::string_view tag, std::uint64_t index) const {
    return SplitRng(hash_tag(key_ ^ mix64(index + 0x51ed2701ULL), tag), 0);
}

std::uint64_t SplitRng::next_u64() {
    return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
}

double SplitRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::complex<double> SplitRng::gaussian() {
    // Box-Muller; guard the log against u == 0.
    double u = uniform();
    while (u <= 0.0)
        u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-std::log(u));
    const double phi = 2.0 * std::numbers::pi * v;
    return {r * std::cos(phi), r * std::sin(phi)};
}

std::uint64_t SplitRng::below(std::uint64_t n) {
    return n == 0 ? 0 : next_u64() % n;
}

} // namespace opshift::numlin
