#ifndef WTP_SPONGE_HPP
#define WTP_SPONGE_HPP

#include <cstdint>
#include <vector>

namespace wtp {

// One cell of the digit set: k coordinates, coordinate i in [0, m_i).
using Digit = std::vector<int>;

// Digit system of a self-affine carpet/sponge: expansion bases m_1 <= ... <= m_k
// (all >= 2) and a nonempty set of admissible digits.  The level-i symbolic
// factor keeps the first k-i+1 coordinates of every digit (level 1 is the full
// system, level k sees only the slowest coordinate).  Immutable after create().
class SpongeSpec {
 public:
  static SpongeSpec create(std::vector<int> bases, std::vector<Digit> digits);

  int k() const { return static_cast<int>(bases_.size()); }
  const std::vector<int>& bases() const { return bases_; }
  // lexicographically sorted, duplicate-free
  const std::vector<Digit>& digits() const { return digits_; }
  int digit_count() const { return static_cast<int>(digits_.size()); }

  int prefix_length(int level) const { return k() - level + 1; }
  // A_level, sorted prefixes of length k-level+1; A_1 == digits()
  const std::vector<Digit>& alphabet(int level) const;
  int alphabet_size(int level) const { return static_cast<int>(alphabet(level).size()); }
  // digit index -> index into alphabet(level)
  int level_index(int level, int digit_idx) const;

 private:
  SpongeSpec() = default;
  std::vector<int> bases_;
  std::vector<Digit> digits_;
  std::vector<std::vector<Digit>> alphabets_;     // [level-1]
  std::vector<std::vector<int>> level_indices_;   // [level-1][digit_idx]
};

// Weight vector a = (a_1,...,a_k), a_1 > 0, a_i >= 0, with partial sums
// b_i = a_1+...+a_i and the segment schedule t_i(n) = ceil(b_i * n).
class WeightVector {
 public:
  static WeightVector create(std::vector<double> a);

  int k() const { return static_cast<int>(a_.size()); }
  const std::vector<double>& a() const { return a_; }
  double a(int i) const { return a_[i - 1]; }
  const std::vector<double>& partial_sums() const { return b_; }
  double b(int i) const { return b_[i - 1]; }
  double total() const { return b_.back(); }

  // t_0(n) = 0; t_i(n) = ceil(b_i * n) for i in 1..k
  std::int64_t t(int i, std::int64_t n) const;
  std::int64_t segment_length(int i, std::int64_t n) const { return t(i, n) - t(i - 1, n); }

 private:
  WeightVector() = default;
  std::vector<double> a_;
  std::vector<double> b_;
};

// Dimension weights of the sponge: a_1 = 1/ln m_k and
// a_i = 1/ln m_{k+1-i} - 1/ln m_{k+2-i}, so that b_i = 1/ln m_{k+1-i}.
WeightVector canonical_weights(const SpongeSpec& spec);

// First k-level+1 coordinates of d; level 1 is the identity.
Digit project_digit(const SpongeSpec& spec, const Digit& d, int level);

}  // namespace wtp

#endif
