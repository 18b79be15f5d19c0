#pragma once

#include <cstdint>

namespace coexsim {

/// Seedable deterministic random stream (xoshiro256++ seeded through splitmix64).
///
/// Identical (seed, stream) always produces the identical sample sequence, on
/// every platform and regardless of what other streams are drawn from in
/// between. Monte-Carlo trials each get their own child stream so results do
/// not depend on scheduling.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// Derived stream for sub-task i; deterministic in (seed, stream, i).
    RngStream child(std::uint64_t i) const;

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01();
    /// Uniform on [lo, hi); requires lo < hi.
    double uniform(double lo, double hi);
    /// Uniform integer on [lo, hi); requires lo < hi.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    int bit();
    /// Standard normal via Box-Muller.
    double normal();

private:
    std::uint64_t s_[4];
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace coexsim
