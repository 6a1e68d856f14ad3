#include "wtp/estimators.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "wtp/errors.hpp"
#include "wtp/numeric.hpp"
#include "wtp/philox.hpp"

namespace wtp {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// cached per-level log marginals: table[level-1][alphabet index]
std::vector<std::vector<double>> log_marginals(const SpongeSpec& spec,
                                               const BernoulliMeasure& measure) {
  std::vector<std::vector<double>> table(spec.k());
  for (int level = 1; level <= spec.k(); ++level) {
    std::vector<double> q = pushforward(spec, measure, level);
    table[level - 1].resize(q.size());
    for (std::size_t u = 0; u < q.size(); ++u)
      table[level - 1][u] = q[u] > 0.0 ? std::log(q[u]) : kNegInf;
  }
  return table;
}

}  // namespace

WeightedCylinder weighted_cylinder_of(const SpongeSpec& spec, const WeightVector& a,
                                      std::span<const int> x, std::int64_t n) {
  if (a.k() != spec.k()) throw ValidationError("cylinder: weight arity mismatch");
  if (n < 0) throw ValidationError("cylinder: negative order");
  const std::int64_t need = a.t(spec.k(), n);
  if (static_cast<std::int64_t>(x.size()) < need)
    throw ValidationError("cylinder: sequence shorter than t_k(n)");
  WeightedCylinder cyl;
  cyl.n = n;
  cyl.segments.resize(spec.k());
  for (int level = 1; level <= spec.k(); ++level) {
    const std::int64_t lo = a.t(level - 1, n), hi = a.t(level, n);
    auto& seg = cyl.segments[level - 1];
    seg.reserve(hi - lo);
    for (std::int64_t j = lo; j < hi; ++j)
      seg.push_back(spec.level_index(level, x[j]));
  }
  return cyl;
}

double log_cylinder_mass(const SpongeSpec& spec, const WeightVector& a,
                         const BernoulliMeasure& measure, const WeightedCylinder& cyl) {
  if (static_cast<int>(cyl.segments.size()) != spec.k())
    throw ValidationError("cylinder mass: segment count does not match the spec");
  for (int level = 1; level <= spec.k(); ++level)
    if (static_cast<std::int64_t>(cyl.segments[level - 1].size()) !=
        a.segment_length(level, cyl.n))
      throw ValidationError("cylinder mass: segment length breaks the schedule");
  const auto table = log_marginals(spec, measure);
  double ll = 0.0;
  for (int level = 1; level <= spec.k(); ++level)
    for (int sym : cyl.segments[level - 1]) ll += table[level - 1][sym];
  return ll;
}

double cylinder_mass(const SpongeSpec& spec, const WeightVector& a,
                     const BernoulliMeasure& measure, const WeightedCylinder& cyl) {
  return std::exp(log_cylinder_mass(spec, a, measure, cyl));
}

CylinderCount weighted_cylinder_count(const SpongeSpec& spec, const WeightVector& a,
                                      std::int64_t n) {
  if (n < 1) throw ValidationError("cylinder count: order must be >= 1");
  if (a.k() != spec.k()) throw ValidationError("cylinder count: weight arity mismatch");
  CylinderCount out;
  out.n = n;
  for (int level = 1; level <= spec.k(); ++level)
    out.log_count += static_cast<double>(a.segment_length(level, n)) *
                     std::log(static_cast<double>(spec.alphabet_size(level)));
  out.rate = out.log_count / static_cast<double>(n);
  if (out.log_count <= 512.0 * std::log(2.0)) {
    BigInt total = 1;
    for (int level = 1; level <= spec.k(); ++level)
      total *= boost::multiprecision::pow(BigInt(spec.alphabet_size(level)),
                                          static_cast<unsigned>(a.segment_length(level, n)));
    out.exact = total.str();
  }
  return out;
}

CylinderCount weighted_cylinder_count_sft(const SpongeSpec& spec, const WeightVector& a,
                                          const std::vector<std::vector<bool>>& allowed,
                                          std::int64_t n, double budget) {
  if (n < 1) throw ValidationError("cylinder count: order must be >= 1");
  const int nd = spec.digit_count();
  if (nd > 64) throw ValidationError("cylinder count: SFT path supports at most 64 digits");
  if (static_cast<int>(allowed.size()) != nd)
    throw ValidationError("cylinder count: allowed relation size mismatch");

  // per-position observation level
  const std::int64_t len = a.t(spec.k(), n);
  std::vector<int> level_at(len);
  for (int level = 1, pos = 0; level <= spec.k(); ++level)
    for (std::int64_t j = a.t(level - 1, n); j < a.t(level, n); ++j) level_at[pos++] = level;

  // successor masks: digit u -> mask of allowed v
  std::vector<std::uint64_t> succ(nd, 0);
  for (int u = 0; u < nd; ++u)
    for (int v = 0; v < nd; ++v)
      if (allowed[u][v]) succ[u] |= 1ULL << v;

  // the full-shift count bounds the SFT count, so it decides exactness
  const bool exact = weighted_cylinder_count(spec, a, n).log_count <= 512.0 * std::log(2.0);

  // determinized DP: live subset of digits -> number of observation strings
  std::map<std::uint64_t, BigInt> big;
  std::map<std::uint64_t, double> logd;  // log-domain fallback
  {
    // position 0 observes level_at[0]; group digits by observed symbol
    std::map<int, std::uint64_t> first;
    for (int d = 0; d < nd; ++d) first[spec.level_index(level_at[0], d)] |= 1ULL << d;
    for (const auto& [sym, mask] : first) {
      if (exact)
        big[mask] += 1;
      else
        logd[mask] = 0.0;
    }
  }
  double touched = static_cast<double>(exact ? big.size() : logd.size());

  for (std::int64_t pos = 1; pos < len; ++pos) {
    const int level = level_at[pos];
    const int symbols = spec.alphabet_size(level);
    std::map<std::uint64_t, BigInt> nbig;
    std::map<std::uint64_t, double> nlogd;
    auto expand = [&](std::uint64_t mask, auto&& emit) {
      std::vector<std::uint64_t> per_symbol(symbols, 0);
      for (int u = 0; u < nd; ++u) {
        if (!(mask >> u & 1)) continue;
        std::uint64_t s = succ[u];
        while (s) {
          const int v = std::countr_zero(s);
          s &= s - 1;
          per_symbol[spec.level_index(level, v)] |= 1ULL << v;
        }
      }
      for (int y = 0; y < symbols; ++y)
        if (per_symbol[y]) emit(per_symbol[y]);
    };
    if (exact) {
      for (const auto& [mask, cnt] : big)
        expand(mask, [&](std::uint64_t next) { nbig[next] += cnt; });
      big = std::move(nbig);
      touched += static_cast<double>(big.size());
    } else {
      for (const auto& [mask, lc] : logd)
        expand(mask, [&](std::uint64_t next) {
          auto it = nlogd.find(next);
          if (it == nlogd.end())
            nlogd[next] = lc;
          else
            it->second = log_add(it->second, lc);
        });
      logd = std::move(nlogd);
      touched += static_cast<double>(logd.size());
    }
    if (touched > budget)
      throw ResourceError("cylinder count: subset table exceeded budget of " +
                          std::to_string(budget));
  }

  CylinderCount out;
  out.n = n;
  if (exact) {
    BigInt total = 0;
    for (const auto& [mask, cnt] : big) total += cnt;
    out.exact = total.str();
    out.log_count = std::log(total.convert_to<double>());
  } else {
    out.log_count = kNegInf;
    for (const auto& [mask, lc] : logd) out.log_count = log_add(out.log_count, lc);
  }
  out.rate = out.log_count / static_cast<double>(n);
  return out;
}

double min_information_rate(const SpongeSpec& spec, const WeightVector& a,
                            const BernoulliMeasure& measure, std::int64_t n) {
  if (n < 1) throw ValidationError("min information rate: order must be >= 1");
  if (a.k() != spec.k()) throw ValidationError("min information rate: weight arity mismatch");
  double total = 0.0;
  for (int level = 1; level <= spec.k(); ++level) {
    const std::vector<double> q = pushforward(spec, measure, level);
    double mx = 0.0;
    for (double x : q) mx = std::max(mx, x);
    total += static_cast<double>(a.segment_length(level, n)) * std::log(mx);
  }
  return -total / static_cast<double>(n) + 0.0;  // avoid -0.0
}

std::vector<int> sample_orbit(const SpongeSpec& spec, const BernoulliMeasure& measure,
                              std::int64_t length, std::uint64_t seed, std::uint64_t stream) {
  if (measure.size() != spec.digit_count())
    throw ValidationError("sample: measure does not match the spec");
  std::vector<double> cdf(measure.p().size());
  double run = 0.0;
  for (std::size_t d = 0; d < cdf.size(); ++d) {
    run += measure.p(static_cast<int>(d));
    cdf[d] = run;
  }
  Philox rng(seed, stream);
  std::vector<int> x(length);
  for (std::int64_t j = 0; j < length; ++j)
    x[j] = rng.next_index(cdf.data(), static_cast<int>(cdf.size()));
  return x;
}

McEstimate brin_katok_mc(const SpongeSpec& spec, const WeightVector& a,
                         const BernoulliMeasure& measure, std::int64_t n,
                         std::int64_t samples, std::uint64_t seed, int threads) {
  if (n < 1 || samples < 1) throw ValidationError("brin-katok: need n >= 1 and samples >= 1");
  const auto table = log_marginals(spec, measure);
  const std::int64_t len = a.t(spec.k(), n);
  std::vector<int> level_at(len);
  for (int level = 1, pos = 0; level <= spec.k(); ++level)
    for (std::int64_t j = a.t(level - 1, n); j < a.t(level, n); ++j) level_at[pos++] = level;

  std::vector<double> values(samples);
  auto worker = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t s = lo; s < hi; ++s) {
      const std::vector<int> x = sample_orbit(spec, measure, len, seed, s);
      double ll = 0.0;
      for (std::int64_t j = 0; j < len; ++j)
        ll += table[level_at[j] - 1][spec.level_index(level_at[j], x[j])];
      values[s] = -ll / static_cast<double>(n);
    }
  };
  if (threads <= 1) {
    worker(0, samples);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (samples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::int64_t lo = t * chunk, hi = std::min(samples, lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  McEstimate est;
  est.n = n;
  est.samples = samples;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(samples);
  if (samples > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.stderr_ = std::sqrt(ss / static_cast<double>(samples - 1) /
                            static_cast<double>(samples));
  } else {
    est.stderr_ = std::numeric_limits<double>::quiet_NaN();
  }
  return est;
}

std::vector<std::pair<std::int64_t, double>> smb_information_path(
    const SpongeSpec& spec, const WeightVector& a, const BernoulliMeasure& measure,
    std::span<const int> x, const std::vector<std::int64_t>& n_list) {
  std::vector<std::pair<std::int64_t, double>> path;
  path.reserve(n_list.size());
  for (const std::int64_t n : n_list) {
    if (n < 1) throw ValidationError("information path: n must be >= 1");
    const WeightedCylinder cyl = weighted_cylinder_of(spec, a, x, n);
    path.emplace_back(n, -log_cylinder_mass(spec, a, measure, cyl) / static_cast<double>(n));
  }
  return path;
}

double AdditivePotentialSampler::log_phi(std::span<const int> x, std::int64_t n) const {
  if (static_cast<std::int64_t>(x.size()) < n)
    throw ValidationError("sampler: prefix shorter than n");
  double s = 0.0;
  for (std::int64_t j = 0; j < n; ++j) s += f_(x[j]);
  return s;
}

MatrixProductSampler::MatrixProductSampler(const SpongeSpec& spec, std::vector<Mat2> per_digit)
    : mats_(std::move(per_digit)) {
  if (static_cast<int>(mats_.size()) != spec.digit_count())
    throw ValidationError("sampler: need one matrix per digit");
  for (const Mat2& m : mats_)
    for (const auto& row : m)
      for (double v : row)
        if (!std::isfinite(v) || v < 0.0)
          throw ValidationError("sampler: matrix entries must be finite and >= 0");
}

double MatrixProductSampler::log_phi(std::span<const int> x, std::int64_t n) const {
  if (static_cast<std::int64_t>(x.size()) < n)
    throw ValidationError("sampler: prefix shorter than n");
  if (n == 0) return 0.0;
  Mat2 acc = mats_[x[0]];
  double scale = 0.0;
  for (std::int64_t j = 0; j < n; ++j) {
    if (j > 0) {
      const Mat2& m = mats_[x[j]];
      Mat2 next{};
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          next[r][c] = acc[r][0] * m[0][c] + acc[r][1] * m[1][c];
      acc = next;
    }
    const double norm = acc[0][0] + acc[0][1] + acc[1][0] + acc[1][1];
    if (norm == 0.0) return kNegInf;
    scale += std::log(norm);
    for (auto& row : acc)
      for (double& v : row) v /= norm;
  }
  return scale;
}

std::vector<FeketeEstimate> fekete_rate(const SubadditivePotentialSampler& sampler,
                                        const SpongeSpec& spec,
                                        const BernoulliMeasure& measure,
                                        std::vector<std::int64_t> n_list,
                                        std::int64_t samples, std::uint64_t seed) {
  if (n_list.empty()) throw ValidationError("fekete: empty n list");
  for (std::int64_t n : n_list)
    if (n < 1) throw ValidationError("fekete: n must be >= 1");
  std::sort(n_list.begin(), n_list.end());
  if (samples < 1) throw ValidationError("fekete: samples must be >= 1");
  const std::int64_t max_n = n_list.back();

  std::vector<std::vector<double>> per_n(n_list.size(), std::vector<double>(samples));
  for (std::int64_t s = 0; s < samples; ++s) {
    const std::vector<int> x = sample_orbit(spec, measure, 2 * max_n, seed, s);
    const std::span<const int> xs(x);
    for (std::size_t i = 0; i < n_list.size(); ++i)
      per_n[i][s] = sampler.log_phi(xs, n_list[i]) / static_cast<double>(n_list[i]);
    if (s < 8) {
      // sub-additivity is a per-orbit identity, so a handful of spot checks
      // on real sampled prefixes is an exact test, not a statistical one
      for (std::size_t i = 0; i < n_list.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          const std::int64_t nn = n_list[i], mm = n_list[j];
          const double whole = sampler.log_phi(xs, nn + mm);
          const double left = sampler.log_phi(xs, nn);
          const double right = sampler.log_phi(xs.subspan(nn), mm);
          if (whole > left + right + 1e-9)
            throw SubadditivityError("fekete: log phi_{n+m} exceeds log phi_n + log phi_m at n=" +
                                     std::to_string(nn) + ", m=" + std::to_string(mm));
        }
    }
  }

  std::vector<FeketeEstimate> out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    FeketeEstimate e;
    e.n = n_list[i];
    double sum = 0.0;
    for (double v : per_n[i]) sum += v;
    e.estimate = sum / static_cast<double>(samples);
    if (samples > 1) {
      double ss = 0.0;
      for (double v : per_n[i]) ss += (v - e.estimate) * (v - e.estimate);
      e.stderr_ = std::sqrt(ss / static_cast<double>(samples - 1) /
                            static_cast<double>(samples));
    } else {
      e.stderr_ = std::numeric_limits<double>::quiet_NaN();
    }
    best = std::min(best, e.estimate);
    e.running_min = best;
    out.push_back(e);
  }
  return out;
}

PointCloud generate_sponge_points(const SpongeSpec& spec, int depth, double budget) {
  if (depth < 1) throw ValidationError("sponge points: depth must be >= 1");
  if (static_cast<double>(depth) * std::log(static_cast<double>(spec.digit_count())) >
      std::log(budget))
    throw ResourceError("sponge points: |D|^depth exceeds budget of " + std::to_string(budget));
  const int k = spec.k();

  PointCloud cloud;
  cloud.dim = k;
  cloud.coords.assign(k, 0.0);  // origin, refined level by level
  std::vector<double> scale(k, 1.0);
  for (int lev = 1; lev <= depth; ++lev) {
    for (int i = 0; i < k; ++i) scale[i] /= static_cast<double>(spec.bases()[i]);
    std::vector<double> next;
    next.reserve(cloud.coords.size() * spec.digit_count());
    const std::int64_t pts = cloud.count();
    for (std::int64_t p = 0; p < pts; ++p)
      for (const Digit& d : spec.digits())
        for (int i = 0; i < k; ++i)
          next.push_back(cloud.coords[p * k + i] + d[i] * scale[i]);
    cloud.coords = std::move(next);
  }
  return cloud;
}

BoxCountFit box_counting_estimate(const PointCloud& points, const std::vector<int>& j_list) {
  if (points.count() == 0) throw ValidationError("box counting: empty point set");
  if (j_list.size() < 2) throw ValidationError("box counting: need at least 2 scales");
  BoxCountFit fit;
  std::vector<double> xs, ys;
  for (int j : j_list) {
    if (j < 0 || j > 62) throw ValidationError("box counting: scale exponent out of range");
    const double side = std::ldexp(1.0, j);  // 2^j boxes per unit
    std::vector<std::vector<std::int64_t>> cells;
    cells.reserve(points.count());
    for (std::int64_t p = 0; p < points.count(); ++p) {
      std::vector<std::int64_t> idx(points.dim);
      for (int i = 0; i < points.dim; ++i) {
        const double c = points.point(p)[i];
        idx[i] = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(c * side)),
                                        static_cast<std::int64_t>(side) - 1);
      }
      cells.push_back(std::move(idx));
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    fit.counts.emplace_back(j, static_cast<std::int64_t>(cells.size()));
    xs.push_back(static_cast<double>(j) * std::log(2.0));
    ys.push_back(std::log(static_cast<double>(cells.size())));
  }
  const std::size_t m = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  fit.slope = num / den;
  return fit;
}

}  // namespace wtp
