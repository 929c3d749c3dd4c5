// Copyright 2026 The wlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wlab/analysis/stats.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace wlab::analysis {

Summary summarize(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("summary of empty sample");
  Summary s;
  s.n = static_cast<int>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

double two_tailed_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

namespace {

void require_n(const Summary& s, const char* who) {
  if (s.n < 2) {
    throw std::invalid_argument(std::string(who) + " needs n >= 2, got " +
                                std::to_string(s.n));
  }
  if (s.sd < 0) throw std::invalid_argument(std::string(who) + ": negative sd");
}

}  // namespace

TestResult welch_t(const Summary& a, const Summary& b) {
  require_n(a, "welch_t");
  require_n(b, "welch_t");
  const double va = a.sd * a.sd / a.n;
  const double vb = b.sd * b.sd / b.n;
  const double se2 = va + vb;
  if (se2 == 0.0) {
    const bool same = a.mean == b.mean;
    throw DegenerateVariance(
        same ? "both groups constant and equal" : "both groups constant, means differ",
        {0.0, static_cast<double>(a.n + b.n - 2), same ? 1.0 : 0.0});
  }
  TestResult r;
  r.t = (a.mean - b.mean) / std::sqrt(se2);
  r.df = se2 * se2 /
         (va * va / (a.n - 1) + vb * vb / (b.n - 1));
  r.p = two_tailed_p(r.t, r.df);
  return r;
}

TestResult one_sample_t(const Summary& group, double reference) {
  require_n(group, "one_sample_t");
  TestResult r;
  r.df = group.n - 1;
  if (group.sd == 0.0) {
    const bool same = group.mean == reference;
    throw DegenerateVariance(same ? "constant group equal to reference"
                                  : "constant group differs from reference",
                             {0.0, r.df, same ? 1.0 : 0.0});
  }
  r.t = (group.mean - reference) / (group.sd / std::sqrt(group.n));
  r.p = two_tailed_p(r.t, r.df);
  return r;
}

double cohen_d(const Summary& a, const Summary& b, CohenMethod method) {
  require_n(a, "cohen_d");
  require_n(b, "cohen_d");
  double var = 0.0;
  switch (method) {
    case CohenMethod::AverageVariance:
      var = (a.sd * a.sd + b.sd * b.sd) / 2.0;
      break;
    case CohenMethod::PooledWeighted:
      var = ((a.n - 1) * a.sd * a.sd + (b.n - 1) * b.sd * b.sd) /
            (a.n + b.n - 2);
      break;
  }
  if (var == 0.0) {
    throw DegenerateVariance("zero pooled standard deviation",
                             {0.0, 0.0, a.mean == b.mean ? 1.0 : 0.0});
  }
  return std::fabs(a.mean - b.mean) / std::sqrt(var);
}

Dispersion dispersion(const std::vector<double>& values,
                      double outlier_threshold) {
  const auto s = summarize(values);
  if (s.n < 2) throw std::invalid_argument("dispersion needs n >= 2");
  Dispersion d;
  if (s.mean != 0.0) d.cv = s.sd / s.mean;
  if (s.sd == 0.0) {
    d.zero_variance = true;
    return d;
  }
  std::vector<double> z;
  z.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    z.push_back((values[i] - s.mean) / s.sd);
    if (std::fabs(z.back()) > outlier_threshold) d.outliers.push_back(i);
  }
  d.z_scores = std::move(z);
  return d;
}

double chi_square_sf(double statistic, double df) {
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace wlab::analysis
