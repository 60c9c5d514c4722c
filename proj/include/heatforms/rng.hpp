#pragma once

// Counter-based random streams: Philox-4x32-10 keyed by the master seed with
// the path index in the counter block. Every (seed, path) pair owns an
// independent stream, so results do not depend on how paths are scheduled
// across threads.

#include <cmath>
#include <cstdint>

namespace heatforms {

struct Philox4x32 {
    static constexpr std::uint32_t kMulA = 0xD2511F53u;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

    std::uint32_t key0, key1;

    explicit Philox4x32(std::uint64_t seed)
        : key0(static_cast<std::uint32_t>(seed)), key1(static_cast<std::uint32_t>(seed >> 32)) {}

    struct Block {
        std::uint32_t v[4];
    };

    static inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                               std::uint32_t& lo) {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    Block operator()(std::uint64_t ctr_hi, std::uint64_t ctr_lo) const {
        std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
        std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
        std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
        std::uint32_t k0 = key0, k1 = key1;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(kMulA, c0, hi0, lo0);
            mulhilo(kMulB, c2, hi1, lo1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += kWeylA;
            k1 += kWeylB;
        }
        return Block{{c0, c1, c2, c3}};
    }
};

/// Stream of uniforms / standard normals for one path. Gaussians come in
/// Box-Muller pairs from one Philox block, so the draw count per block is
/// fixed and platform independent.
class GaussianStream {
  public:
    GaussianStream(std::uint64_t seed, std::uint64_t path_index)
        : gen_(seed), path_(path_index), counter_(0), have_spare_(false), spare_(0.0) {}

    void reset(std::uint64_t path_index) {
        path_ = path_index;
        counter_ = 0;
        have_spare_ = false;
    }

    /// Uniform on (0, 1], using 32 high bits of each word pair.
    double nextUniform() {
        const auto b = gen_(path_, counter_++);
        const std::uint64_t x =
            (static_cast<std::uint64_t>(b.v[0]) << 32) | static_cast<std::uint64_t>(b.v[1]);
        return (static_cast<double>(x >> 11) + 1.0) * (1.0 / 9007199254740992.0);
    }

    double nextGaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const auto b = gen_(path_, counter_++);
        const std::uint64_t xu =
            (static_cast<std::uint64_t>(b.v[0]) << 32) | static_cast<std::uint64_t>(b.v[1]);
        const std::uint64_t xv =
            (static_cast<std::uint64_t>(b.v[2]) << 32) | static_cast<std::uint64_t>(b.v[3]);
        const double u = (static_cast<double>(xu >> 11) + 1.0) * (1.0 / 9007199254740992.0);
        const double v = static_cast<double>(xv >> 11) * (1.0 / 9007199254740992.0);
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    Philox4x32 gen_;
    std::uint64_t path_;
    std::uint64_t counter_;
    bool have_spare_;
    double spare_;
};

}  // namespace heatforms
