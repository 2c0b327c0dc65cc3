#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace qusa {

using Complex = std::complex<double>;

/// Input file rejected; carries the source name and 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, int line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// A size cap was exceeded. Caps fail loudly instead of truncating.
class CapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// splitmix64 finalizer; mixes a base seed with a stream tag so that
/// independent consumers (phases, noise, moves) never share a stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random stream. Gaussians come from an explicit Box-Muller
/// transform and bounded ints from multiply-shift, so sequences are
/// bit-stable across standard library versions.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : rng_(seed) {}

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // uniform in (0,1]: never 0, so log() is finite
        const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
        const double u2 = static_cast<double>(rng_() >> 11) * 0x1p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// uniform in [0,1)
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }

    /// uniform in {0, ..., n-1}
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(rng_()) * n) >> 64);
    }

    std::uint64_t next_u64() { return rng_(); }

private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qusa
