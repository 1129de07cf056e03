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

#ifndef OODKIT__EVAL_HPP_
#define OODKIT__EVAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "oodkit/error.hpp"

namespace oodkit
{

/// One ROC operating point: rows with score >= threshold are flagged OOD.
struct RocPoint
{
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve
{
  std::vector<RocPoint> points;  // strictest threshold (+inf) first
  double auc = 0.5;
};

/// Labels: 1 = outlier, 0 = normal. Scores follow "higher = more OOD".
///
/// The sweep visits unique scores in descending order and moves each tie
/// group as one step. AUC is the Mann-Whitney statistic
/// P(outlier > normal) + 0.5 * P(tie), which equals the trapezoidal area
/// under the tie-grouped curve.
inline RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> labels)
{
  if (scores.size() != labels.size()) {
    throw DimensionError(
      "roc_curve: " + std::to_string(scores.size()) + " scores vs " +
      std::to_string(labels.size()) + " labels");
  }
  std::size_t pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1) {
      throw ParameterError("roc_curve: labels must be 0 or 1");
    }
    if (!std::isfinite(scores[i])) {
      throw DataError("roc_curve: non-finite score at position " + std::to_string(i));
    }
    pos += labels[i];
  }
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) {
    throw ParameterError(
      "roc_curve: both classes are required (got " + std::to_string(pos) + " outliers, " +
      std::to_string(neg) + " normals)");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  const double p = static_cast<double>(pos);
  const double n = static_cast<double>(neg);
  std::size_t tp = 0;
  std::size_t fp = 0;
  // Twice the Mann-Whitney U, an exact integer for any realistic size.
  double twice_u = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    std::size_t gp = 0;
    std::size_t gn = 0;
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      if (labels[order[i]] == 1) ++gp; else ++gn;
    }
    twice_u += static_cast<double>(gn) * (2.0 * static_cast<double>(tp) + static_cast<double>(gp));
    tp += gp;
    fp += gn;
    curve.points.push_back({s, static_cast<double>(fp) / n, static_cast<double>(tp) / p});
  }
  curve.auc = twice_u / (2.0 * p * n);
  return curve;
}

/// Trapezoidal area under the curve's points.
inline double trapezoid_area(const RocCurve & c)
{
  double a = 0.0;
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    a += (c.points[i].fpr - c.points[i - 1].fpr) * (c.points[i].tpr + c.points[i - 1].tpr) * 0.5;
  }
  return a;
}

enum class Verdict : std::uint8_t { outlier = 0, normal = 1 };

/// Normal iff score <= theta; the boundary counts as normal.
inline Verdict threshold_decide(double score, double theta)
{
  return score <= theta ? Verdict::normal : Verdict::outlier;
}

/// Ids of the k highest scores, highest first; ties keep input order.
template <typename Id>
std::vector<Id> top_k_outliers(std::span<const double> scores, std::span<const Id> ids, std::size_t k)
{
  if (scores.size() != ids.size()) {
    throw DimensionError("top_k_outliers: scores and ids differ in length");
  }
  if (k > scores.size()) {
    throw ParameterError(
      "top_k_outliers: k=" + std::to_string(k) + " exceeds " + std::to_string(scores.size()) +
      " entries");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<Id> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back(ids[order[i]]);
  }
  return out;
}

/// "threshold,fpr,tpr" table with 17 significant digits, then "# auc=<value>".
inline std::string format_roc_csv(const RocCurve & c, std::span<const std::string> comments = {})
{
  std::string out;
  for (const auto & line : comments) {
    out += "# " + line + "\n";
  }
  out += "threshold,fpr,tpr\n";
  char buf[128];
  for (const auto & pt : c.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", pt.threshold, pt.fpr, pt.tpr);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "# auc=%.17g\n", c.auc);
  out += buf;
  return out;
}

}  // namespace oodkit

#endif  // OODKIT__EVAL_HPP_
