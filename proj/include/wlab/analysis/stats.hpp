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

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

namespace wlab::analysis {

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample SD, n-1 denominator
  int n = 0;
};

// Throws std::invalid_argument on an empty sample. sd = 0 for n = 1.
Summary summarize(const std::vector<double>& values);

struct TestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-tailed
};

// Zero variance on both sides. The result carries the conventional verdict:
// p = 1 for equal means, p = 0 otherwise.
class DegenerateVariance : public std::runtime_error {
 public:
  DegenerateVariance(const std::string& what, TestResult result)
      : std::runtime_error(what), result_(result) {}
  const TestResult& result() const { return result_; }

 private:
  TestResult result_;
};

// Welch statistic with Welch-Satterthwaite df. Requires n >= 2 per group.
TestResult welch_t(const Summary& a, const Summary& b);

// Group mean against a fixed reference value. Requires n >= 2.
TestResult one_sample_t(const Summary& group, double reference);

// Two-tailed p for a t statistic.
double two_tailed_p(double t, double df);

enum class CohenMethod {
  AverageVariance,  // sqrt((sa^2 + sb^2) / 2)
  PooledWeighted,   // sqrt(((na-1) sa^2 + (nb-1) sb^2) / (na + nb - 2))
};

// |mean_a - mean_b| / standardizer. Throws DegenerateVariance when the
// standardizer is 0.
double cohen_d(const Summary& a, const Summary& b,
               CohenMethod method = CohenMethod::AverageVariance);

struct Dispersion {
  std::optional<double> cv;  // sd / mean; empty when mean is 0
  // Empty when sd is 0 (zero variance).
  std::optional<std::vector<double>> z_scores;
  std::vector<std::size_t> outliers;  // indices with |z| > threshold
  bool zero_variance = false;
};

Dispersion dispersion(const std::vector<double>& values,
                      double outlier_threshold = 3.0);

// Upper-tail chi-square probability.
double chi_square_sf(double statistic, double df);

}  // namespace wlab::analysis
