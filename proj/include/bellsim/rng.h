#ifndef BELLSIM_RNG_H
#define BELLSIM_RNG_H

#include <array>
#include <cstdint>

namespace bellsim {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Pure: output depends only on (counter, key).
std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key);

/// Random stream addressed by (seed, trial, stream). Two generators with the
/// same address produce the same sequence regardless of construction order,
/// which is what makes per-trial sampling replayable and partitionable.
class CounterRng {
   public:
    CounterRng(uint64_t seed, uint64_t trial, uint32_t stream = 0);

    uint32_t next_u32();
    uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

   private:
    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> counter_;
    std::array<uint32_t, 4> block_{};
    int used_ = 4;
};

/// Stream ids; distinct streams of the same trial are independent.
inline constexpr uint32_t kSettingStream = 0;
inline constexpr uint32_t kOutcomeStream = 1;

}  // namespace bellsim

#endif
