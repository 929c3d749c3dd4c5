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

// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit when any
// fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "schema_check.hpp"
#include "support.hpp"
#include "wlab/analysis/scoring.hpp"
#include "wlab/analysis/stats.hpp"
#include "wlab/cli/commands.hpp"
#include "wlab/metrics/run_metrics.hpp"
#include "wlab/scale/item_bank.hpp"
#include "wlab/scale/response_parser.hpp"
#include "wlab/store/files.hpp"
#include "wlab/store/session_log.hpp"

using namespace wlab;
using env::AgentAction;
using env::EconomicCondition;
using env::Theme;

namespace {

// Collects failed sub-checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: got %.4f, want %.4f +- %.4f", what.c_str(), got,
                  want, tol);
    expect(std::fabs(got - want) <= tol, buf);
  }
};

int g_failed = 0;

void criterion(const std::string& name, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  if (c.failures.empty()) {
    std::cout << "PASS " << name << "\n";
    return;
  }
  ++g_failed;
  std::cout << "FAIL " << name << ":";
  for (const auto& f : c.failures) std::cout << " [" << f << "]";
  std::cout << "\n";
}

void stats_rows(Check& c) {
  using analysis::Summary;
  using analysis::cohen_d;
  using analysis::welch_t;
  const Summary hb{160.684, 9.141, 19}, hc{165.150, 6.635, 20};
  c.near(welch_t(hb, hc).p, 0.092, 0.002, "codeblock p");
  c.near(cohen_d(hb, hc), 0.559, 0.005, "codeblock d");
  const Summary sb{170.300, 3.881, 20}, sm{172.150, 4.966, 20};
  c.near(welch_t(sb, sm).p, 0.198, 0.002, "math p");
  c.near(cohen_d(sb, sm), 0.415, 0.005, "math d");
  const Summary ob{177.650, 4.771, 20}, oc{204.000, 4.460, 20};
  c.near(cohen_d(ob, oc), 5.705, 0.01, "large d");
  c.expect(welch_t(ob, oc).p < 0.001, "large-effect p below 0.001");
  const Summary mb{210.000, 6.829, 20}, mm{194.412, 5.001, 17};
  c.near(cohen_d(mb, mm), 2.605, 0.01, "unequal-n d");
}

std::vector<std::optional<int>> raw_for(const scale::ItemBank& bank,
                                        const std::vector<int>& adjusted) {
  std::vector<std::optional<int>> raw(42);
  for (int i = 0; i < 42; ++i) {
    raw[i] = bank.items()[i].reversed ? 8 - adjusted[i] : adjusted[i];
  }
  return raw;
}

std::vector<int> indices_of(const scale::ItemBank& bank, scale::Subscale s) {
  std::vector<int> out;
  for (int i = 0; i < 42; ++i) {
    if (bank.items()[i].subscale == s) out.push_back(i);
  }
  return out;
}

void scoring(Check& c) {
  const auto bank = scale::default_item_bank();
  for (int k = 1; k <= 7; ++k) {
    const auto f = analysis::score_file(std::vector<std::optional<int>>(42, k), bank);
    c.expect(f.total == 168, "constant " + std::to_string(k) + " scores " +
                                 std::to_string(f.total));
  }
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::optional<int>> v(42);
    for (auto& x : v) x = static_cast<int>(rng() % 7) + 1;
    const int total = analysis::score_file(v, bank).total;
    if (total < 42 || total > 294) {
      c.expect(false, "random total " + std::to_string(total));
      break;
    }
  }
  for (int x = 1; x <= 7; ++x) {
    c.expect(analysis::reverse_rating(analysis::reverse_rating(x)) == x, "involution");
  }
}

void validity(Check& c) {
  const auto bank = scale::default_item_bank();
  // Invalid items spread round-robin over subscales.
  auto with_invalid = [&](int n) {
    std::vector<std::optional<int>> v(42, 4);
    int placed = 0;
    for (int round = 0; placed < n; ++round) {
      for (auto s : scale::kAllSubscales) {
        if (placed == n) break;
        v[indices_of(bank, s)[round]] = std::nullopt;
        ++placed;
      }
    }
    return analysis::score_file(v, bank);
  };
  c.expect(!with_invalid(8).excluded_too_many_invalid, "8 invalid kept");
  c.expect(with_invalid(9).excluded_too_many_invalid, "9 invalid excluded");

  auto subscale_with_valid = [&](int valid) {
    std::vector<std::optional<int>> v(42, 4);
    const auto idx = indices_of(bank, scale::kAllSubscales[0]);
    for (int i = valid; i < 7; ++i) v[idx[i]] = std::nullopt;
    return analysis::score_file(v, bank).subscales[0];
  };
  c.expect(!subscale_with_valid(4).valid, "4 valid items is an invalid subscale");
  c.expect(subscale_with_valid(5).valid, "5 valid items is a valid subscale");

  auto with_inconsistent = [&](int n) {
    std::vector<int> adjusted(42, 4);
    for (int k = 0; k < n; ++k) {
      const auto idx = indices_of(bank, scale::kAllSubscales[k]);
      for (int i = 0; i < 7; ++i) adjusted[idx[i]] = i % 2 ? 7 : 1;
    }
    return analysis::score_file(raw_for(bank, adjusted), bank);
  };
  const auto two = with_inconsistent(2), three = with_inconsistent(3);
  c.expect(two.inconsistent_subscales == 2 && !two.globally_inconsistent,
           "2 inconsistent subscales tolerated");
  c.expect(three.inconsistent_subscales == 3 && three.globally_inconsistent,
           "3 inconsistent subscales flagged");
}

std::vector<std::string> digit_runs(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch >= '0' && ch <= '9') {
      cur += ch;
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void parser(Check& c) {
  using scale::extract_score;
  const auto a = extract_score("My answer is 4... yes, I mean 4");
  c.expect(a.value == 4, "repeated 4 gives 4");
  c.expect(!extract_score("I think 2, but maybe I'm going with 5").value, "2 then 5 gives null");
  c.expect(!extract_score("404").value, "404 gives null");
  std::mt19937_64 rng(7);
  const std::vector<std::string> pieces = {"1", "4", "7", "9", "0", "12", " ", "and ",
                                           "maybe ", ".", "-", "\xF0\x9F\x8C\xB8", "\n"};
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string text;
    const int n = static_cast<int>(rng() % 10);
    for (int k = 0; k < n; ++k) text += pieces[rng() % pieces.size()];
    if (rng() % 5 == 0) text += static_cast<char>(rng() % 256);
    const auto r = extract_score(text);
    if (!r.value) continue;
    bool ok = *r.value >= 1 && *r.value <= 7;
    for (const auto& run : digit_runs(text)) ok = ok && run == std::to_string(*r.value);
    bad += !ok;
  }
  c.expect(bad == 0, std::to_string(bad) + " fuzz inputs broke the property");
}

void metrics_table(Check& c) {
  struct Row {
    int a, b, cc, d;
    bool starts_a;
  };
  // Free-condition table typed in by hand.
  const std::vector<Row> rows = {{6, 2, 2, 1, true}, {3, 3, 2, 1, true}, {5, 1, 1, 2, true},
                                 {5, 2, 2, 2, true}, {4, 2, 3, 2, true}, {4, 1, 2, 3, false},
                                 {2, 2, 2, 2, true}, {4, 3, 3, 2, true}, {9, 2, 2, 3, true},
                                 {4, 1, 3, 2, true}};
  std::vector<metrics::RunMetrics> runs;
  for (const auto& r : rows) {
    runs.push_back(metrics::metrics_from_counts(
        {{Theme::A, r.a}, {Theme::B, r.b}, {Theme::C, r.cc}, {Theme::D, r.d}}, r.starts_a));
  }
  const auto s = metrics::summarize(runs);
  // Table means are printed to one decimal.
  c.near(s.letters_total, 10.7, 0.05, "letters");
  c.near(s.per_theme.at(Theme::A), 4.6, 0.05, "theme A");
  c.near(s.per_theme.at(Theme::B), 2.0, 0.05, "theme B");
  c.near(s.per_theme.at(Theme::C), 2.1, 0.05, "theme C");
  c.near(s.per_theme.at(Theme::D), 2.0, 0.05, "theme D");
  c.near(s.a_percent, 42.0, 0.1, "A%");
  c.near(s.starts_with_a_percent, 90.0, 1e-9, "starts with A");
}

// Upper tail of chi-square with 3 degrees of freedom.
double chi2_sf_df3(double x) {
  return std::erfc(std::sqrt(x / 2)) + std::sqrt(2 * x / M_PI) * std::exp(-x / 2);
}

void economics(Check& c) {
  {
    auto s = env::new_session(testkit::letters(EconomicCondition::cost()), 5);
    const int a = s.room_of(Theme::A);
    env::apply_action_in_place(s, AgentAction::move(a == 1 ? 2 : 1));
    for (int i = 0; i < 4; ++i) env::apply_action_in_place(s, AgentAction::read());
    env::apply_action_in_place(s, AgentAction::exit());
    env::apply_action_in_place(s, AgentAction::move(a));
    c.expect(s.coins == 180, "cost A entry leaves " + std::to_string(s.coins));
  }
  {
    auto s = env::new_session(testkit::letters(EconomicCondition::reward()), 5);
    env::apply_action_in_place(s, AgentAction::move(s.room_of(Theme::B)));
    for (int i = 0; i < 4; ++i) env::apply_action_in_place(s, AgentAction::read());
    const int d = s.room_of(Theme::D);
    bool each20 = true;
    for (int i = 0; i < 3; ++i) {
      env::apply_action_in_place(s, AgentAction::exit());
      const int before = s.coins;
      env::apply_action_in_place(s, AgentAction::move(d));
      each20 = each20 && s.coins - before == 20;
    }
    c.expect(each20, "reward D entry credits 20");
  }
  for (auto cond : {EconomicCondition::cost(), EconomicCondition::reward()}) {
    auto s = env::new_session(testkit::letters(cond), 2);
    env::apply_action_in_place(s, AgentAction::move(3));
    bool exact = true;
    for (int i = 1; i <= 6; ++i) {
      env::apply_action_in_place(s, AgentAction::read());
      exact = exact && s.economy_active == (i >= 4);
    }
    c.expect(exact, "activation exactly at the 4th read");
  }
  std::array<int, 4> counts{};
  const auto cfg = testkit::letters();
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    ++counts[env::new_session(cfg, seed).room_of(Theme::A) - 1];
  }
  double chi2 = 0;
  for (int n : counts) chi2 += (n - 250.0) * (n - 250.0) / 250.0;
  c.expect(chi2_sf_df3(chi2) > 0.001, "theme placement chi-square p " +
                                          std::to_string(chi2_sf_df3(chi2)));
}

void end_to_end(Check& c) {
  testkit::TempDir dir;
  testkit::SchemaChecker schemas;
  struct Case {
    std::string policy, condition;
  };
  for (const Case& k : {Case{"always-a", "free"}, Case{"uniform-cycler", "free"},
                        Case{"reward-maximizer", "reward"}}) {
    const auto out = dir / k.policy;
    std::vector<std::string> args = {"wlab", "tank", "run", "--scripted", "--policy",
                                     k.policy, "--condition", k.condition, "--runs", "3",
                                     "--seed", "11", "--out", out.string()};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream so, se;
    if (cli::run_cli(static_cast<int>(argv.size()), argv.data(), so, se) != cli::kOk) {
      c.expect(false, k.policy + " run failed: " + se.str());
      continue;
    }
    std::vector<metrics::RunMetrics> rows;
    for (const auto& f : std::filesystem::directory_iterator(out)) {
      if (f.path().filename().string().find("_run") == std::string::npos) continue;
      const auto text = store::read_file(f.path());
      const auto errors = schemas.check("session_log.schema.json", nlohmann::json::parse(text));
      c.expect(errors.empty(), k.policy + " schema: " + (errors.empty() ? "" : errors[0]));
      const auto log = store::read_log(f.path());
      c.expect(store::validate_log(log).empty(), k.policy + " log does not replay");
      const auto replayed = store::replay(log);
      c.expect(replayed.coins == log.final_state["coins"].get<int>(),
               k.policy + " replayed coins differ");
      rows.push_back(metrics::run_metrics(log));
    }
    c.expect(rows.size() == 3, k.policy + " wrote " + std::to_string(rows.size()) + " logs");
    if (rows.empty()) continue;
    const auto s = metrics::summarize(rows);
    if (k.policy == "always-a") c.near(s.a_percent, 100.0, 1e-9, "always-a A%");
    if (k.policy == "uniform-cycler") c.near(s.a_percent, 25.0, 5.0, "uniform-cycler A%");
    if (k.policy == "reward-maximizer") {
      const double d = s.per_theme.at(Theme::D);
      bool dominant = true;
      for (auto t : {Theme::A, Theme::B, Theme::C}) dominant = dominant && d > s.per_theme.at(t);
      c.expect(dominant, "reward-maximizer reads mostly theme D");
    }
  }
}

void monte_carlo(Check& c) {
  std::mt19937_64 rng(424242);
  std::normal_distribution<double> norm(180.0, 7.0);
  int rejected = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    std::vector<double> a(20), b(20);
    for (auto& x : a) x = norm(rng);
    for (auto& x : b) x = norm(rng);
    rejected += analysis::welch_t(analysis::summarize(a), analysis::summarize(b)).p < 0.05;
  }
  c.near(static_cast<double>(rejected) / trials, 0.05, 0.015, "null rejection rate");
}

}  // namespace

int main() {
  criterion("welch-and-cohen-rows", stats_rows);
  criterion("scale-scoring", scoring);
  criterion("validity-boundaries", validity);
  criterion("response-parser", parser);
  criterion("free-condition-mean-row", metrics_table);
  criterion("economics", economics);
  criterion("scripted-end-to-end", end_to_end);
  criterion("null-rejection-rate", monte_carlo);
  std::cout << (g_failed ? "FAILED " : "ALL PASSED ") << g_failed << "/8\n";
  return g_failed ? 1 : 0;
}
