#ifndef WTP_PHILOX_HPP
#define WTP_PHILOX_HPP

#include <array>
#include <cstdint>

namespace wtp {

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
// Streams are keyed by (seed, stream); draws advance only the counter, so
// sample-indexed streams produce identical output no matter how work is
// split across threads.
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = 0xD2511F53ULL * ctr[0];
      const std::uint64_t p1 = 0xCD9E8D57ULL * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }

  std::uint32_t next_u32() {
    if (have_ == 0) {
      buf_ = block(ctr_, key_);
      have_ = 4;
      if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit draw counter; stream words untouched
    }
    return buf_[4 - have_--];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // uniform in [0,1), 53-bit mantissa
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // index into the discrete cdf over [0, size): smallest i with u < cdf[i]
  int next_index(const double* cdf, int size) {
    const double u = next_double();
    for (int i = 0; i < size - 1; ++i)
      if (u < cdf[i]) return i;
    return size - 1;
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int have_ = 0;
};

}  // namespace wtp

#endif
