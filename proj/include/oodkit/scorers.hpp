// Copyright 2026 The oodkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OODKIT__SCORERS_HPP_
#define OODKIT__SCORERS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "oodkit/binary_io.hpp"
#include "oodkit/error.hpp"
#include "oodkit/linalg.hpp"
#include "oodkit/neighbors.hpp"

namespace oodkit
{

// Every scorer emits "higher = more out-of-distribution".

enum class ScorerKind : std::uint8_t { kd = 0, md = 1, knn = 2, lof = 3, lcp = 4 };

inline constexpr ScorerKind kAllScorerKinds[] = {
  ScorerKind::kd, ScorerKind::md, ScorerKind::knn, ScorerKind::lof, ScorerKind::lcp};

inline std::string_view to_string(ScorerKind k)
{
  switch (k) {
    case ScorerKind::kd:
      return "kd";
    case ScorerKind::md:
      return "md";
    case ScorerKind::knn:
      return "knn";
    case ScorerKind::lof:
      return "lof";
    case ScorerKind::lcp:
      return "lcp";
  }
  return "?";
}

inline ScorerKind parse_scorer_kind(std::string_view s)
{
  for (auto k : kAllScorerKinds) {
    if (to_string(k) == s) return k;
  }
  throw ParameterError("unknown scorer kind '" + std::string(s) + "'");
}

/// How LCP turns neighbor distances into reconstruction weights.
enum class LcpWeighting : std::uint8_t {
  kernel = 0,   // normalized exp(-d^2 / (2 sigma_i^2))
  literal = 1,  // normalized d^2 / (2 sigma_i^2), the formula as printed
};

inline std::string_view to_string(LcpWeighting w)
{
  return w == LcpWeighting::kernel ? "kernel" : "literal";
}

inline LcpWeighting parse_lcp_weighting(std::string_view s)
{
  if (s == "kernel") return LcpWeighting::kernel;
  if (s == "literal") return LcpWeighting::literal;
  throw ParameterError("unknown lcp weighting '" + std::string(s) + "'");
}

inline constexpr std::size_t kDefaultK = 20;
inline constexpr double kDistanceSumFloor = 1e-12;
inline constexpr double kSigmaFloor = 1e-8;
inline constexpr std::size_t kMedianSubsample = 1000;

struct KdScorer
{
  Matrix train;
  double sigma = 1.0;
};

struct MdScorer
{
  RealVector mean;
  Matrix inv_cov;
  double jitter = 0.0;
};

struct KnnScorer
{
  Matrix train;
  std::size_t k = kDefaultK;
};

struct LofScorer
{
  Matrix train;
  std::size_t k = kDefaultK;
  RealVector train_lrd;
};

struct LcpScorer
{
  Matrix train;
  std::size_t k = kDefaultK;
  double perplexity = 0.0;
  RealVector sigmas;  // one per training row
  LcpWeighting weighting = LcpWeighting::kernel;
  std::size_t degenerate_count = 0;   // rows whose neighbors were all at distance 0
  std::size_t unconverged_count = 0;  // rows whose target perplexity was unreachable
};

using FittedScorer = std::variant<KdScorer, MdScorer, KnnScorer, LofScorer, LcpScorer>;

inline ScorerKind kind_of(const FittedScorer & s)
{
  return static_cast<ScorerKind>(s.index());
}

using ParamList = std::vector<std::pair<std::string, std::string>>;

struct ScoreReport
{
  std::vector<double> scores;
  ScorerKind kind = ScorerKind::kd;
  ParamList params;
};

namespace detail
{

inline std::string fmt_real(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void check_query_dims(const Matrix & queries, std::size_t cols, std::string_view who)
{
  if (queries.cols() != cols) {
    throw DimensionError(
      std::string(who) + ": queries have " + std::to_string(queries.cols()) +
      " features, scorer was fit on " + std::to_string(cols));
  }
}

inline void check_finite(const Matrix & m, std::string_view who)
{
  if (!m.all_finite()) {
    throw DataError(std::string(who) + ": input contains non-finite values");
  }
}

inline double sum_distances(const NeighborList & nl)
{
  double s = 0.0;
  for (double d : nl.sq_distances) {
    s += std::sqrt(d);
  }
  return std::max(s, kDistanceSumFloor);
}

}  // namespace detail

// ---- kernel density --------------------------------------------------------

/// Median of pairwise Euclidean distances over at most `max_rows` rows
/// drawn with a seeded shuffle. Falls back to the mean positive distance,
/// then to 1, when the median is zero.
inline double median_pairwise_distance(
  const Matrix & train, std::uint64_t seed = 0, std::size_t max_rows = kMedianSubsample)
{
  std::vector<std::size_t> idx(train.rows());
  std::iota(idx.begin(), idx.end(), 0);
  if (idx.size() > max_rows) {
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(max_rows);
  }
  if (idx.size() < 2) {
    return 1.0;
  }
  std::vector<double> d;
  d.reserve(idx.size() * (idx.size() - 1) / 2);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      d.push_back(std::sqrt(sq_distance(train.row(idx[a]), train.row(idx[b]))));
    }
  }
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  double med = d[mid];
  if (d.size() % 2 == 0) {
    const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
    med = 0.5 * (med + lower);
  }
  if (med > 0.0) {
    return med;
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : d) {
    if (v > 0.0) {
      sum += v;
      ++n;
    }
  }
  return n > 0 ? sum / static_cast<double>(n) : 1.0;
}

/// Unset sigma selects the median heuristic.
inline KdScorer kd_fit(const Matrix & train, std::optional<double> sigma = {}, std::uint64_t seed = 0)
{
  detail::check_finite(train, "kd_fit");
  const double s = sigma ? *sigma : median_pairwise_distance(train, seed);
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw ParameterError("kd_fit: sigma must be > 0, got " + detail::fmt_real(s));
  }
  return {train, s};
}

/// Negated mean Gaussian kernel value against every training row.
inline ScoreReport kd_score(const KdScorer & s, const Matrix & queries)
{
  detail::check_query_dims(queries, s.train.cols(), "kd_score");
  ScoreReport rep{{}, ScorerKind::kd, {{"sigma", detail::fmt_real(s.sigma)}}};
  rep.scores.reserve(queries.rows());
  const double two_sigma_sq = 2.0 * s.sigma * s.sigma;
  const double n = static_cast<double>(s.train.rows());
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    double density = 0.0;
    for (std::size_t i = 0; i < s.train.rows(); ++i) {
      density += std::exp(-sq_distance(queries.row(q), s.train.row(i)) / two_sigma_sq);
    }
    rep.scores.push_back(-(density / n));
  }
  return rep;
}

// ---- Mahalanobis -----------------------------------------------------------

/// A zero `initial_jitter` inverts the covariance exactly when it is
/// positive definite and escalates from 1e-9 otherwise.
inline MdScorer md_fit(const Matrix & train, double initial_jitter = 0.0, const JitterPolicy & policy = {})
{
  detail::check_finite(train, "md_fit");
  if (train.rows() < 2) {
    throw DimensionError("md_fit: need at least 2 training rows, got " + std::to_string(train.rows()));
  }
  auto inv = regularized_inverse(covariance(train), initial_jitter, policy);
  return {mean_vector(train), std::move(inv.inverse), inv.jitter};
}

inline ScoreReport md_score(const MdScorer & s, const Matrix & queries)
{
  detail::check_query_dims(queries, s.mean.size(), "md_score");
  ScoreReport rep{{}, ScorerKind::md, {{"jitter", detail::fmt_real(s.jitter)}}};
  const std::size_t d = s.mean.size();
  RealVector diff(d);
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const auto x = queries.row(q);
    for (std::size_t j = 0; j < d; ++j) {
      diff[j] = x[j] - s.mean[j];
    }
    double quad = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      double inner = 0.0;
      for (std::size_t b = 0; b < d; ++b) {
        inner += s.inv_cov(a, b) * diff[b];
      }
      quad += diff[a] * inner;
    }
    rep.scores.push_back(quad);
  }
  return rep;
}

// ---- kNN -------------------------------------------------------------------

inline KnnScorer knn_fit(const Matrix & train, std::size_t k = kDefaultK)
{
  detail::check_finite(train, "knn_fit");
  if (k < 1 || k > train.rows()) {
    throw ParameterError(
      "knn: k=" + std::to_string(k) + " must lie in [1, " + std::to_string(train.rows()) + "]");
  }
  return {train, k};
}

/// Mean squared distance to the k nearest training rows.
inline ScoreReport knn_score(const KnnScorer & s, const Matrix & queries)
{
  detail::check_query_dims(queries, s.train.cols(), "knn_score");
  ScoreReport rep{{}, ScorerKind::knn, {{"k", std::to_string(s.k)}}};
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const auto nl = knn_query(s.train, queries.row(q), s.k);
    double sum = 0.0;
    for (double d : nl.sq_distances) {
      sum += d;
    }
    rep.scores.push_back(sum / static_cast<double>(s.k));
  }
  return rep;
}

inline ScoreReport knn_score(const Matrix & train, const Matrix & queries, std::size_t k)
{
  return knn_score(knn_fit(train, k), queries);
}

// ---- LOF -------------------------------------------------------------------
//
// lrd(x) = |N_k(x)| / sum of plain Euclidean distances to N_k(x); the sum is
// floored at 1e-12 so duplicate points stay finite. No reachability distance.

inline LofScorer lof_fit(const Matrix & train, std::size_t k = kDefaultK)
{
  detail::check_finite(train, "lof_fit");
  if (k < 2 || k + 1 > train.rows()) {
    throw ParameterError(
      "lof: k=" + std::to_string(k) + " must lie in [2, " +
      std::to_string(train.rows() > 0 ? train.rows() - 1 : 0) + "]");
  }
  LofScorer s{train, k, {}};
  s.train_lrd.reserve(train.rows());
  for (const auto & nl : knn_self(train, k)) {
    s.train_lrd.push_back(static_cast<double>(k) / detail::sum_distances(nl));
  }
  return s;
}

/// Mean of lrd(neighbor) / lrd(query) over the query's k training neighbors.
inline ScoreReport lof_score(const LofScorer & s, const Matrix & queries)
{
  detail::check_query_dims(queries, s.train.cols(), "lof_score");
  ScoreReport rep{{}, ScorerKind::lof, {{"k", std::to_string(s.k)}}};
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const auto nl = knn_query(s.train, queries.row(q), s.k);
    const double lrd_q = static_cast<double>(s.k) / detail::sum_distances(nl);
    double sum = 0.0;
    for (auto i : nl.indices) {
      sum += s.train_lrd[i] / lrd_q;
    }
    rep.scores.push_back(sum / static_cast<double>(s.k));
  }
  return rep;
}

// ---- perplexity-calibrated bandwidth ----------------------------------------

/// exp(entropy) of the normalized weights exp(-d / (2 sigma^2)) over squared
/// distances `sq_dists`. Weights are shifted by the minimum distance, which
/// leaves the normalized distribution unchanged.
inline double perplexity_at(std::span<const double> sq_dists, double sigma)
{
  const double dmin = *std::min_element(sq_dists.begin(), sq_dists.end());
  const double inv = 1.0 / (2.0 * sigma * sigma);
  double z = 0.0;
  double weighted = 0.0;
  for (double d : sq_dists) {
    const double a = -(d - dmin) * inv;
    const double w = std::exp(a);
    z += w;
    weighted += w * a;
  }
  const double entropy = std::log(z) - weighted / z;
  return std::exp(entropy);
}

struct SigmaSearchResult
{
  double sigma = kSigmaFloor;
  double perplexity = 1.0;  // achieved
  bool degenerate = false;  // every distance was zero
  bool converged = false;   // |achieved - target| <= tol
};

/// Finds sigma whose kernel weights over `sq_dists` reach `target_perplexity`.
/// Brackets by doubling/halving from the RMS distance, then bisects sigma
/// geometrically. Returns the closest sigma seen when the target cannot be
/// reached, with converged = false.
inline SigmaSearchResult sigma_binary_search(
  std::span<const double> sq_dists, double target_perplexity, double tol = 1e-5,
  std::size_t max_iter = 200)
{
  if (sq_dists.empty()) {
    throw ParameterError("sigma_binary_search: empty distance list");
  }
  if (!(target_perplexity > 1.0) || target_perplexity > static_cast<double>(sq_dists.size())) {
    throw ParameterError(
      "sigma_binary_search: target perplexity " + detail::fmt_real(target_perplexity) +
      " must lie in (1, " + std::to_string(sq_dists.size()) + "]");
  }
  if (!(tol > 0.0)) {
    throw ParameterError("sigma_binary_search: tol must be > 0");
  }
  double dmax = 0.0;
  double dsum = 0.0;
  for (double d : sq_dists) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw ParameterError("sigma_binary_search: distances must be finite and >= 0");
    }
    dmax = std::max(dmax, d);
    dsum += d;
  }
  if (dmax == 0.0) {
    return {kSigmaFloor, static_cast<double>(sq_dists.size()), true,
            std::abs(static_cast<double>(sq_dists.size()) - target_perplexity) <= tol};
  }

  SigmaSearchResult best;
  double best_gap = std::numeric_limits<double>::infinity();
  auto eval = [&](double sigma) {
    const double p = perplexity_at(sq_dists, sigma);
    const double gap = std::abs(p - target_perplexity);
    if (gap < best_gap) {
      best_gap = gap;
      best.sigma = sigma;
      best.perplexity = p;
    }
    return p;
  };

  double sigma = std::max(kSigmaFloor, std::sqrt(dsum / static_cast<double>(sq_dists.size())));
  double p = eval(sigma);
  double lo = 0.0;
  double hi = 0.0;
  if (p < target_perplexity) {
    lo = sigma;
    hi = sigma;
    std::size_t it = 0;
    while (p < target_perplexity && best_gap > tol && it++ < max_iter) {
      lo = hi;
      hi *= 2.0;
      p = eval(hi);
    }
    if (p < target_perplexity) hi = 0.0;
  } else {
    lo = sigma;
    hi = sigma;
    std::size_t it = 0;
    while (p > target_perplexity && best_gap > tol && it++ < max_iter && lo > kSigmaFloor) {
      hi = lo;
      lo = std::max(kSigmaFloor, lo * 0.5);
      p = eval(lo);
    }
    if (p > target_perplexity) lo = 0.0;
  }

  if (lo > 0.0 && hi > 0.0) {
    for (std::size_t it = 0; it < max_iter && best_gap > tol; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (mid <= lo || mid >= hi) break;
      const double pm = eval(mid);
      if (pm < target_perplexity) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  best.converged = best_gap <= tol;
  return best;
}

// ---- local conditional probability reconstruction -------------------------

/// Fits one bandwidth per training row over its own k neighbors (self
/// excluded). An unset perplexity defaults to k / 3.
inline LcpScorer lcp_fit(
  const Matrix & train, std::size_t k = kDefaultK, std::optional<double> target_perplexity = {},
  LcpWeighting weighting = LcpWeighting::kernel, double tol = 1e-5)
{
  detail::check_finite(train, "lcp_fit");
  if (k < 1 || k + 1 > train.rows()) {
    throw ParameterError(
      "lcp: k=" + std::to_string(k) + " must lie in [1, " +
      std::to_string(train.rows() > 0 ? train.rows() - 1 : 0) + "]");
  }
  const double perp = target_perplexity ? *target_perplexity : static_cast<double>(k) / 3.0;
  if (!(perp > 1.0) || perp > static_cast<double>(k)) {
    throw ParameterError(
      "lcp: perplexity=" + detail::fmt_real(perp) + " must lie in (1, k=" + std::to_string(k) + "]");
  }
  LcpScorer s{train, k, perp, {}, weighting, 0, 0};
  s.sigmas.reserve(train.rows());
  for (const auto & nl : knn_self(train, k)) {
    const auto r = sigma_binary_search(nl.sq_distances, perp, tol);
    s.sigmas.push_back(r.sigma);
    s.degenerate_count += r.degenerate ? 1 : 0;
    s.unconverged_count += (!r.degenerate && !r.converged) ? 1 : 0;
  }
  return s;
}

/// Builds an LCP scorer with caller-supplied bandwidths.
inline LcpScorer lcp_from_sigmas(
  const Matrix & train, std::size_t k, RealVector sigmas,
  LcpWeighting weighting = LcpWeighting::kernel)
{
  if (k < 1 || k > train.rows()) {
    throw ParameterError("lcp: k=" + std::to_string(k) + " out of range");
  }
  if (sigmas.size() != train.rows()) {
    throw DimensionError("lcp: one sigma per training row required");
  }
  for (double v : sigmas) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ParameterError("lcp: sigmas must be finite and > 0");
    }
  }
  return {train, k, 0.0, std::move(sigmas), weighting, 0, 0};
}

/// Normalized reconstruction weights for one neighborhood. Falls back to
/// uniform weights when every raw weight is zero.
inline RealVector lcp_weights(const LcpScorer & s, const NeighborList & nl)
{
  RealVector w(nl.size());
  double z = 0.0;
  for (std::size_t i = 0; i < nl.size(); ++i) {
    const double sigma = s.sigmas[nl.indices[i]];
    const double scaled = nl.sq_distances[i] / (2.0 * sigma * sigma);
    w[i] = s.weighting == LcpWeighting::kernel ? std::exp(-scaled) : scaled;
    z += w[i];
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(nl.size()));
    return w;
  }
  for (double & v : w) {
    v /= z;
  }
  return w;
}

/// Squared error of reconstructing each query from its neighbors.
inline ScoreReport lcp_score(const LcpScorer & s, const Matrix & queries)
{
  detail::check_query_dims(queries, s.train.cols(), "lcp_score");
  ScoreReport rep{
    {},
    ScorerKind::lcp,
    {{"k", std::to_string(s.k)},
     {"perplexity", detail::fmt_real(s.perplexity)},
     {"weighting", std::string(to_string(s.weighting))},
     {"degenerate_sigmas", std::to_string(s.degenerate_count)},
     {"unconverged_sigmas", std::to_string(s.unconverged_count)}}};
  const std::size_t d = s.train.cols();
  RealVector recon(d);
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const auto x = queries.row(q);
    const auto nl = knn_query(s.train, x, s.k);
    const auto w = lcp_weights(s, nl);
    std::fill(recon.begin(), recon.end(), 0.0);
    for (std::size_t i = 0; i < nl.size(); ++i) {
      const auto xi = s.train.row(nl.indices[i]);
      for (std::size_t j = 0; j < d; ++j) {
        recon[j] += w[i] * xi[j];
      }
    }
    rep.scores.push_back(sq_distance(x, recon));
  }
  return rep;
}

// ---- uniform interface -----------------------------------------------------

struct ScorerParams
{
  std::size_t k = kDefaultK;
  std::optional<double> sigma;       // kd
  std::optional<double> perplexity;  // lcp, default k / 3
  LcpWeighting weighting = LcpWeighting::kernel;
  double md_jitter = 0.0;
  std::uint64_t seed = 0;  // kd median-heuristic subsample
};

inline FittedScorer fit_scorer(ScorerKind kind, const Matrix & train, const ScorerParams & p = {})
{
  switch (kind) {
    case ScorerKind::kd:
      return kd_fit(train, p.sigma, p.seed);
    case ScorerKind::md:
      return md_fit(train, p.md_jitter);
    case ScorerKind::knn:
      return knn_fit(train, p.k);
    case ScorerKind::lof:
      return lof_fit(train, p.k);
    case ScorerKind::lcp:
      return lcp_fit(train, p.k, p.perplexity, p.weighting);
  }
  throw ParameterError("unknown scorer kind");
}

inline ScoreReport score(const FittedScorer & s, const Matrix & queries)
{
  ScoreReport rep = std::visit(
    [&](const auto & fitted) -> ScoreReport {
      using T = std::decay_t<decltype(fitted)>;
      if constexpr (std::is_same_v<T, KdScorer>) return kd_score(fitted, queries);
      else if constexpr (std::is_same_v<T, MdScorer>) return md_score(fitted, queries);
      else if constexpr (std::is_same_v<T, KnnScorer>) return knn_score(fitted, queries);
      else if constexpr (std::is_same_v<T, LofScorer>) return lof_score(fitted, queries);
      else return lcp_score(fitted, queries);
    },
    s);
  for (double v : rep.scores) {
    if (!std::isfinite(v)) {
      throw NumericalError(std::string(to_string(rep.kind)) + ": non-finite score produced");
    }
  }
  return rep;
}

// ---- persistence ----------------------------------------------------------
//
// "OODKIT-SC" | u32 version | u8 kind | payload. Matrices are
// (u64 rows, u64 cols, rows*cols f64), vectors (u64 n, n f64); all LE.

inline constexpr std::string_view kScorerMagic = "OODKIT-SC";
inline constexpr std::uint32_t kScorerVersion = 1;

namespace detail
{
inline void put_matrix(ByteWriter & w, const Matrix & m)
{
  w.u64(m.rows());
  w.u64(m.cols());
  w.f64s(m.data());
}

inline void put_vector(ByteWriter & w, std::span<const double> v)
{
  w.u64(v.size());
  w.f64s(v);
}

inline Matrix get_matrix(ByteReader & r)
{
  const auto rows = r.u64();
  const auto cols = r.count(0);
  if (rows == 0 || cols == 0) r.fail("empty matrix");
  if (rows > std::numeric_limits<std::size_t>::max() / 8 / cols) r.fail("matrix shape overflow");
  RealVector data(static_cast<std::size_t>(rows) * cols);
  const auto payload = r.raw(data.size() * 8);
  ByteReader pr(payload);
  for (double & v : data) v = pr.f64();
  return Matrix(static_cast<std::size_t>(rows), cols, std::move(data));
}

inline RealVector get_vector(ByteReader & r)
{
  RealVector v(r.count(8));
  for (double & x : v) x = r.f64();
  return v;
}
}  // namespace detail

inline std::string serialize_scorer(const FittedScorer & s)
{
  ByteWriter w;
  w.raw(kScorerMagic);
  w.u32(kScorerVersion);
  w.u8(static_cast<std::uint8_t>(kind_of(s)));
  std::visit(
    [&](const auto & f) {
      using T = std::decay_t<decltype(f)>;
      if constexpr (std::is_same_v<T, KdScorer>) {
        w.f64(f.sigma);
        detail::put_matrix(w, f.train);
      } else if constexpr (std::is_same_v<T, MdScorer>) {
        w.f64(f.jitter);
        detail::put_vector(w, f.mean);
        detail::put_matrix(w, f.inv_cov);
      } else if constexpr (std::is_same_v<T, KnnScorer>) {
        w.u64(f.k);
        detail::put_matrix(w, f.train);
      } else if constexpr (std::is_same_v<T, LofScorer>) {
        w.u64(f.k);
        detail::put_matrix(w, f.train);
        detail::put_vector(w, f.train_lrd);
      } else {
        w.u64(f.k);
        w.f64(f.perplexity);
        w.u8(static_cast<std::uint8_t>(f.weighting));
        w.u64(f.degenerate_count);
        w.u64(f.unconverged_count);
        detail::put_matrix(w, f.train);
        detail::put_vector(w, f.sigmas);
      }
    },
    s);
  return w.bytes();
}

inline FittedScorer deserialize_scorer(std::string_view bytes)
{
  ByteReader r(bytes);
  if (r.raw(kScorerMagic.size()) != kScorerMagic) {
    throw DataError("not a scorer file (bad magic)");
  }
  const auto version = r.u32();
  if (version != kScorerVersion) {
    throw DataError("unsupported scorer file version " + std::to_string(version));
  }
  const auto tag = r.u8();
  FittedScorer out;
  switch (tag) {
    case 0: {
      KdScorer s;
      s.sigma = r.f64();
      s.train = detail::get_matrix(r);
      out = std::move(s);
      break;
    }
    case 1: {
      MdScorer s;
      s.jitter = r.f64();
      s.mean = detail::get_vector(r);
      s.inv_cov = detail::get_matrix(r);
      if (s.inv_cov.rows() != s.mean.size() || s.inv_cov.cols() != s.mean.size()) {
        r.fail("md payload shape mismatch");
      }
      out = std::move(s);
      break;
    }
    case 2: {
      KnnScorer s;
      s.k = r.u64();
      s.train = detail::get_matrix(r);
      out = std::move(s);
      break;
    }
    case 3: {
      LofScorer s;
      s.k = r.u64();
      s.train = detail::get_matrix(r);
      s.train_lrd = detail::get_vector(r);
      if (s.train_lrd.size() != s.train.rows()) r.fail("lof payload length mismatch");
      out = std::move(s);
      break;
    }
    case 4: {
      LcpScorer s;
      s.k = r.u64();
      s.perplexity = r.f64();
      const auto wt = r.u8();
      if (wt > 1) r.fail("unknown lcp weighting tag");
      s.weighting = static_cast<LcpWeighting>(wt);
      s.degenerate_count = r.u64();
      s.unconverged_count = r.u64();
      s.train = detail::get_matrix(r);
      s.sigmas = detail::get_vector(r);
      if (s.sigmas.size() != s.train.rows()) r.fail("lcp payload length mismatch");
      out = std::move(s);
      break;
    }
    default:
      r.fail("unknown scorer kind tag " + std::to_string(tag));
  }
  if (!r.at_end()) {
    r.fail("trailing bytes after scorer payload");
  }
  return out;
}

inline void save_scorer(const FittedScorer & s, const std::filesystem::path & path)
{
  write_file_atomic(path, serialize_scorer(s));
}

inline FittedScorer load_scorer(const std::filesystem::path & path)
{
  return deserialize_scorer(read_file(path));
}

}  // namespace oodkit

#endif  // OODKIT__SCORERS_HPP_
