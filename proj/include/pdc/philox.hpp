#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Each (key, counter) pair maps to four independent 32-bit words, so any
// gate can be simulated from its own stream without touching its neighbours.

#include <array>
#include <cstdint>
#include <limits>

namespace pdc {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57;
  static constexpr std::uint32_t kW0 = 0x9E3779B9;
  static constexpr std::uint32_t kW1 = 0xBB67AE85;
};

/// UniformRandomBitGenerator over one (seed, stream, gate) substream.
/// Counter layout: {draw block, stream, gate low, gate high}.
class GateStream {
 public:
  using result_type = std::uint32_t;

  GateStream(std::uint64_t seed, std::uint32_t stream, std::uint64_t gate)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, stream, static_cast<std::uint32_t>(gate), static_cast<std::uint32_t>(gate >> 32)} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) {
      out_ = Philox4x32::block(ctr_, key_);
      ++ctr_[0];
      pos_ = 0;
    }
    return out_[pos_++];
  }

  /// Uniform double in (0, 1] with 53 random bits.
  double uniform_pos() {
    const std::uint64_t hi = (*this)();
    const std::uint64_t lo = (*this)();
    const std::uint64_t bits = ((hi << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter out_{};
  int pos_ = 4;
};

}  // namespace pdc
