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

#include "wlab/analysis/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wlab/store/files.hpp"
#include "wlab/store/session_log.hpp"

namespace wlab::analysis {

using nlohmann::json;
namespace fs = std::filesystem;

Group group_from_scored(std::string label, const std::vector<ScoredFile>& files) {
  Group g;
  g.label = std::move(label);
  g.files = static_cast<int>(files.size());
  std::map<std::string, std::vector<double>> subs;
  int consistent = 0;
  for (const auto& f : files) {
    if (f.excluded_too_many_invalid) {
      ++g.excluded;
      continue;
    }
    g.totals.push_back(f.total);
    if (!f.globally_inconsistent) ++consistent;
    for (const auto& s : f.subscales) {
      subs[scale::to_string(s.subscale)].push_back(s.score);
    }
  }
  if (!g.totals.empty()) {
    g.summary = summarize(g.totals);
    g.consistency_rate = 100.0 * consistent / static_cast<double>(g.totals.size());
    for (auto& [name, vals] : subs) g.subscales[name] = summarize(vals);
  }
  return g;
}

Group group_from_summary(std::string label, Summary summary,
                         std::optional<double> consistency_rate) {
  Group g;
  g.label = std::move(label);
  g.summary = summary;
  g.files = summary.n;
  g.consistency_rate = consistency_rate;
  return g;
}

Group load_group(const fs::path& dir, const scale::ItemBank& bank,
                 std::string label) {
  if (label.empty()) label = dir.filename().string();
  if (!fs::is_directory(dir)) throw store::IoError("not a directory: " + dir.string());
  const auto summary_path = dir / "summary.json";
  if (fs::exists(summary_path)) {
    const auto j = store::read_json(summary_path);
    Summary s;
    try {
      s.mean = j.at("mean").get<double>();
      s.sd = j.at("sd").get<double>();
      s.n = j.at("n").get<int>();
    } catch (const json::exception& e) {
      throw store::IoError("bad summary " + summary_path.string() + ": " + e.what());
    }
    std::optional<double> rate;
    if (j.contains("consistency_rate")) rate = j["consistency_rate"].get<double>();
    return group_from_summary(j.value("condition", label), s, rate);
  }
  std::vector<ScoredFile> scored;
  for (const auto& d : read_score_dir(dir)) scored.push_back(score_file(d.scores, bank));
  if (scored.empty()) {
    throw store::IoError("no summary.json or *_scores.json in " + dir.string());
  }
  return group_from_scored(label, scored);
}

ComparisonReport compare_groups(const Group& a, const Group& b,
                                CohenMethod method, double alpha) {
  ComparisonReport r;
  r.group_a = a;
  r.group_b = b;
  r.alpha = alpha;
  r.abs_diff = std::fabs(a.summary.mean - b.summary.mean);
  try {
    r.test = welch_t(a.summary, b.summary);
  } catch (const DegenerateVariance& e) {
    r.test = e.result();
    r.note = e.what();
  }
  try {
    r.cohen_d = cohen_d(a.summary, b.summary, method);
  } catch (const DegenerateVariance& e) {
    r.cohen_d = std::nan("");
    if (!r.note) r.note = e.what();
  }
  r.significant = r.test.p < alpha;
  for (const auto& [name, sa] : a.subscales) {
    auto it = b.subscales.find(name);
    if (it == b.subscales.end()) continue;
    SubscaleComparison sc{sa, it->second, std::nullopt, std::nullopt};
    if (sa.n >= 2 && it->second.n >= 2) {
      try {
        sc.test = welch_t(sa, it->second);
      } catch (const DegenerateVariance& e) {
        sc.test = e.result();
      }
      try {
        sc.cohen_d = cohen_d(sa, it->second, method);
      } catch (const DegenerateVariance&) {
      }
    }
    r.per_subscale[name] = sc;
  }
  return r;
}

DeterministicComparison compare_to_reference(double reference, const Group& group) {
  DeterministicComparison r;
  r.reference = reference;
  r.group = group;
  try {
    r.test = one_sample_t(group.summary, reference);
  } catch (const DegenerateVariance& e) {
    r.test = e.result();
    r.note = e.what();
  }
  return r;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(); }

json num(double v) { return std::isfinite(v) ? json(v) : json(); }

json test_json(const TestResult& t) {
  return {{"t", num(t.t)}, {"df", num(t.df)}, {"p", num(t.p)}};
}

}  // namespace

json to_json(const Summary& s) {
  return {{"mean", s.mean}, {"sd", s.sd}, {"n", s.n}};
}

json to_json(const Group& g) {
  json subs = json::object();
  for (const auto& [k, v] : g.subscales) subs[k] = to_json(v);
  return {{"label", g.label},
          {"summary", to_json(g.summary)},
          {"consistency_rate", opt(g.consistency_rate)},
          {"files", g.files},
          {"excluded", g.excluded},
          {"totals", g.totals},
          {"subscales", subs}};
}

json to_json(const ComparisonReport& r) {
  json subs = json::object();
  for (const auto& [k, v] : r.per_subscale) {
    subs[k] = {{"a", to_json(v.a)},
               {"b", to_json(v.b)},
               {"test", v.test ? test_json(*v.test) : json()},
               {"cohen_d", opt(v.cohen_d)}};
  }
  json out = {{"group_a", to_json(r.group_a)},
              {"group_b", to_json(r.group_b)},
              {"abs_diff", r.abs_diff},
              {"t", num(r.test.t)},
              {"df", num(r.test.df)},
              {"p", num(r.test.p)},
              {"cohen_d", num(r.cohen_d)},
              {"significant", r.significant},
              {"alpha", r.alpha},
              {"consistency_rate", opt(r.group_b.consistency_rate)},
              {"per_subscale", subs}};
  if (r.note) out["note"] = *r.note;
  return out;
}

json to_json(const DeterministicComparison& r) {
  json out = {{"reference", r.reference},
              {"group", to_json(r.group)},
              {"t", num(r.test.t)},
              {"df", num(r.test.df)},
              {"p", num(r.test.p)}};
  if (r.note) out["note"] = *r.note;
  return out;
}

std::string format_p(double p) {
  if (p < 0.001) return "p<0.001";
  char buf[32];
  std::snprintf(buf, sizeof buf, "p=%.3f", p);
  return buf;
}

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string mean_cell(const Summary& s) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.3f (n=%d, SD=%.3f)", s.mean, s.n, s.sd);
  return buf;
}

}  // namespace

std::string format_table(const std::vector<ComparisonReport>& rows,
                         const std::string& title) {
  const std::vector<std::string> header = {
      "Perturbation", "Baseline Mean (n, SD)", "Perturbation Mean (n, SD)",
      "Abs Diff", "Significant (p, d)", "Consistency Rate (%)"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    std::string sig = std::string(r.significant ? "Yes" : "No") + " (" +
                      format_p(r.test.p) + ", d=" +
                      (std::isfinite(r.cohen_d) ? fmt("%.3f", r.cohen_d) : "n/a") +
                      ")";
    cells.push_back({r.group_b.label, mean_cell(r.group_a.summary),
                     mean_cell(r.group_b.summary), fmt("%.3f", r.abs_diff), sig,
                     r.group_b.consistency_rate
                         ? fmt("%.1f%%", *r.group_b.consistency_rate)
                         : "n/a"});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& row) {
    std::string s = "|";
    for (std::size_t c = 0; c < row.size(); ++c) {
      s += " " + row[c] + std::string(width[c] - row[c].size(), ' ') + " |";
    }
    return s + "\n";
  };
  std::string out;
  if (!title.empty()) out += title + "\n";
  out += line(header);
  std::string sep = "|";
  for (auto w : width) sep += std::string(w + 2, '-') + "|";
  out += sep + "\n";
  for (const auto& row : cells) out += line(row);
  return out;
}

}  // namespace wlab::analysis
