#ifndef WCR_RNG_HPP
#define WCR_RNG_HPP

#include <array>
#include <cstdint>

namespace wcr {

// Philox4x32-10 counter-based generator. One (seed, domain, stream) triple
// names an independent random stream; draws within a stream are a pure
// function of the block counter, so parallel consumers reproduce the
// sequential results exactly.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 2>& key,
                                              const std::array<std::uint32_t, 4>& counter);
};

// Domain tags keep unrelated uses of the same seed decorrelated.
enum class RngDomain : std::uint32_t {
    simulation = 1,
    initial_condition = 2,
    snapshot_extraction = 3,
    kernel_sampling = 4,
    observation_noise = 5,
    generic = 6,
};

class RngStream {
public:
    RngStream(std::uint64_t seed, RngDomain domain, std::uint64_t stream = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    // Uniform on [0, 1), 53-bit resolution.
    double uniform();
    // Uniform on [lo, hi).
    double uniform(double lo, double hi);
    // Integer uniform on [0, n), unbiased (rejection).
    std::uint64_t uniform_below(std::uint64_t n);
    // Standard normal via Box-Muller; pairs are cached.
    double normal();

    // Fisher-Yates over [first, last).
    template <typename It>
    void shuffle(It first, It last) {
        auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            auto j = uniform_below(i);
            std::swap(first[i - 1], first[j]);
        }
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> stream_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffer_pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;

    void refill();
};

}  // namespace wcr

#endif
