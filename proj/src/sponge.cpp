#include "wtp/sponge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wtp/errors.hpp"

namespace wtp {

SpongeSpec SpongeSpec::create(std::vector<int> bases, std::vector<Digit> digits) {
  if (bases.empty()) throw ValidationError("sponge: need at least one base");
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i] < 2) throw ValidationError("sponge: bases must be >= 2");
    if (i > 0 && bases[i] < bases[i - 1])
      throw ValidationError("sponge: bases must be nondecreasing");
  }
  if (digits.empty()) throw ValidationError("sponge: digit set is empty");
  const int k = static_cast<int>(bases.size());
  for (const Digit& d : digits) {
    if (static_cast<int>(d.size()) != k)
      throw ValidationError("sponge: digit arity does not match base count");
    for (int i = 0; i < k; ++i)
      if (d[i] < 0 || d[i] >= bases[i])
        throw ValidationError("sponge: digit coordinate " + std::to_string(d[i]) +
                              " out of range for base " + std::to_string(bases[i]));
  }
  std::sort(digits.begin(), digits.end());
  digits.erase(std::unique(digits.begin(), digits.end()), digits.end());

  SpongeSpec spec;
  spec.bases_ = std::move(bases);
  spec.digits_ = std::move(digits);
  spec.alphabets_.resize(k);
  spec.level_indices_.resize(k);
  for (int level = 1; level <= k; ++level) {
    const int len = k - level + 1;
    std::vector<Digit> prefixes;
    prefixes.reserve(spec.digits_.size());
    for (const Digit& d : spec.digits_)
      prefixes.emplace_back(d.begin(), d.begin() + len);
    std::sort(prefixes.begin(), prefixes.end());
    prefixes.erase(std::unique(prefixes.begin(), prefixes.end()), prefixes.end());
    std::vector<int>& index = spec.level_indices_[level - 1];
    index.resize(spec.digits_.size());
    for (std::size_t j = 0; j < spec.digits_.size(); ++j) {
      const Digit p(spec.digits_[j].begin(), spec.digits_[j].begin() + len);
      index[j] = static_cast<int>(
          std::lower_bound(prefixes.begin(), prefixes.end(), p) - prefixes.begin());
    }
    spec.alphabets_[level - 1] = std::move(prefixes);
  }
  return spec;
}

const std::vector<Digit>& SpongeSpec::alphabet(int level) const {
  if (level < 1 || level > k()) throw ValidationError("sponge: level out of range");
  return alphabets_[level - 1];
}

int SpongeSpec::level_index(int level, int digit_idx) const {
  if (level < 1 || level > k()) throw ValidationError("sponge: level out of range");
  return level_indices_[level - 1][digit_idx];
}

WeightVector WeightVector::create(std::vector<double> a) {
  if (a.empty()) throw ValidationError("weights: empty vector");
  if (!(a[0] > 0.0)) throw ValidationError("weights: a_1 must be > 0");
  for (double w : a)
    if (!std::isfinite(w) || w < 0.0)
      throw ValidationError("weights: entries must be finite and >= 0");
  WeightVector wv;
  wv.b_.resize(a.size());
  double run = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    run += a[i];
    wv.b_[i] = run;
  }
  wv.a_ = std::move(a);
  return wv;
}

std::int64_t WeightVector::t(int i, std::int64_t n) const {
  if (i == 0) return 0;
  return static_cast<std::int64_t>(std::ceil(b_[i - 1] * static_cast<double>(n)));
}

WeightVector canonical_weights(const SpongeSpec& spec) {
  const int k = spec.k();
  std::vector<double> a(k);
  a[0] = 1.0 / std::log(static_cast<double>(spec.bases()[k - 1]));
  for (int i = 2; i <= k; ++i) {
    a[i - 1] = 1.0 / std::log(static_cast<double>(spec.bases()[k - i])) -
               1.0 / std::log(static_cast<double>(spec.bases()[k - i + 1]));
  }
  return WeightVector::create(std::move(a));
}

Digit project_digit(const SpongeSpec& spec, const Digit& d, int level) {
  if (level < 1 || level > spec.k()) throw ValidationError("project_digit: level out of range");
  if (static_cast<int>(d.size()) != spec.k())
    throw ValidationError("project_digit: digit arity mismatch");
  return Digit(d.begin(), d.begin() + spec.prefix_length(level));
}

}  // namespace wtp
