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

#include "wlab/metrics/run_metrics.hpp"

#include <cstdio>
#include <set>

namespace wlab::metrics {

using nlohmann::json;
using env::EventKind;
using env::Theme;

namespace {

void finish(RunMetrics& m) {
  for (auto t : env::kAllThemes) m.per_theme.try_emplace(t, 0);
  m.letters_total = 0;
  for (const auto& [t, n] : m.per_theme) m.letters_total += n;
  m.a_percent = m.letters_total == 0
                    ? 0.0
                    : 100.0 * m.per_theme.at(Theme::A) / m.letters_total;
}

}  // namespace

RunMetrics run_metrics(const store::SessionLog& log) {
  RunMetrics m;
  m.session_id = log.header.session_id;
  m.runtime_status = log.status;
  std::set<std::string> seen;
  bool entered = false;
  std::int64_t last_seq = -1;
  try {
    for (const auto& e : log.events) {
      if (static_cast<std::int64_t>(e.seq) <= last_seq) {
        throw MalformedLog("event sequence not increasing at " +
                           std::to_string(e.seq));
      }
      last_seq = static_cast<std::int64_t>(e.seq);
      if (e.kind == EventKind::LetterRead) {
        const auto id = e.payload.at("letter_id").get<std::string>();
        const auto theme = env::theme_from_string(e.payload.at("theme").get<std::string>());
        if (seen.insert(id).second) ++m.per_theme[theme];
      } else if (e.kind == EventKind::Moved && !entered) {
        entered = true;
        m.starts_with_a = e.payload.at("theme").get<std::string>() == "A";
      }
    }
  } catch (const json::exception& e) {
    throw MalformedLog(std::string("bad event payload: ") + e.what());
  } catch (const env::ConfigError& e) {
    throw MalformedLog(e.what());
  }
  if (log.header.environment.condition.kind != env::EconomyKind::Free) {
    if (log.final_state.contains("coins")) {
      m.coins_final = log.final_state["coins"].get<int>();
    }
  }
  const auto& notes = log.header.annotations;
  if (notes.is_object()) {
    if (notes.contains("status")) {
      m.runtime_status =
          store::session_status_from_string(notes["status"].get<std::string>());
    }
    m.engagement = notes.value("engagement", "");
  }
  finish(m);
  return m;
}

RunMetrics metrics_from_counts(std::map<Theme, int> per_theme, bool starts_with_a,
                               std::optional<int> coins) {
  RunMetrics m;
  m.per_theme = std::move(per_theme);
  m.starts_with_a = starts_with_a;
  m.coins_final = coins;
  finish(m);
  return m;
}

ConditionSummary summarize(const std::vector<RunMetrics>& runs) {
  if (runs.empty()) throw std::invalid_argument("summary of zero runs");
  ConditionSummary s;
  s.runs = static_cast<int>(runs.size());
  int with_coins = 0;
  double coins = 0.0;
  int starts = 0;
  for (auto t : env::kAllThemes) s.per_theme[t] = 0.0;
  for (const auto& r : runs) {
    s.letters_total += r.letters_total;
    for (auto t : env::kAllThemes) {
      auto it = r.per_theme.find(t);
      s.per_theme[t] += it == r.per_theme.end() ? 0 : it->second;
    }
    s.a_percent += r.a_percent;
    if (r.starts_with_a) ++starts;
    if (r.coins_final) {
      ++with_coins;
      coins += *r.coins_final;
    }
  }
  const double n = s.runs;
  s.letters_total /= n;
  for (auto& [t, v] : s.per_theme) v /= n;
  s.a_percent /= n;
  s.starts_with_a_percent = 100.0 * starts / n;
  if (with_coins > 0) s.coins_final = coins / with_coins;
  return s;
}

json to_json(const RunMetrics& m) {
  json themes = json::object();
  for (const auto& [t, n] : m.per_theme) themes[env::to_string(t)] = n;
  return {{"session_id", m.session_id},
          {"letters_total", m.letters_total},
          {"per_theme", themes},
          {"a_percent", m.a_percent},
          {"starts_with_a", m.starts_with_a},
          {"coins_final", m.coins_final ? json(*m.coins_final) : json()},
          {"runtime_status", store::to_string(m.runtime_status)},
          {"engagement", m.engagement}};
}

json to_json(const ConditionSummary& s) {
  json themes = json::object();
  for (const auto& [t, v] : s.per_theme) themes[env::to_string(t)] = v;
  return {{"runs", s.runs},
          {"letters_total", s.letters_total},
          {"per_theme", themes},
          {"a_percent", s.a_percent},
          {"starts_with_a_percent", s.starts_with_a_percent},
          {"coins_final", s.coins_final ? json(*s.coins_final) : json()}};
}

json table_json(const std::vector<RunMetrics>& runs) {
  json rows = json::array();
  for (const auto& r : runs) rows.push_back(to_json(r));
  json out = {{"starts_with_a_definition",
               "first room the agent enters after the scripted tour"},
              {"runs", rows}};
  if (!runs.empty()) out["mean"] = to_json(summarize(runs));
  return out;
}

namespace {

std::string f1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::string table_csv(const std::vector<RunMetrics>& runs) {
  std::string out =
      "Run,Letters,Theme A,Theme B,Theme C,Theme D,A%,Starts with A,Coins,Status\n";
  int i = 0;
  for (const auto& r : runs) {
    out += std::to_string(++i) + "," + std::to_string(r.letters_total);
    for (auto t : env::kAllThemes) out += "," + std::to_string(r.per_theme.at(t));
    out += "," + f1(r.a_percent) + "%," + (r.starts_with_a ? "Y" : "N") + "," +
           (r.coins_final ? std::to_string(*r.coins_final) : "") + "," +
           store::to_string(r.runtime_status) + "\n";
  }
  if (!runs.empty()) {
    const auto s = summarize(runs);
    out += "Mean," + f1(s.letters_total);
    for (auto t : env::kAllThemes) out += "," + f1(s.per_theme.at(t));
    out += "," + f1(s.a_percent) + "%," + f1(s.starts_with_a_percent) + "%," +
           (s.coins_final ? f1(*s.coins_final) : "") + ",\n";
  }
  return out;
}

}  // namespace wlab::metrics
