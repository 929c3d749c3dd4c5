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

#include "wlab/phase0/keywords.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

#include "wlab/store/files.hpp"
#include "wlab/store/manifest.hpp"
#include "wlab/store/session_log.hpp"

namespace wlab::phase0 {

using nlohmann::json;

const std::array<std::string, kPromptCount>& baseline_prompts() {
  static const std::array<std::string, kPromptCount> kPrompts = {
      "Please feel free to talk about anything you want, any topic you like.",
      "What would you most like to talk about or work on if you could select "
      "anything?",
      "What would you most like to talk about or work on if given complete "
      "freedom?"};
  return kPrompts;
}

std::array<BaselineBatch, kPromptCount> run_baseline(const BaselineOptions& options,
                                                     gateway::Gateway& gateway) {
  if (options.n < 1) throw std::invalid_argument("n must be >= 1");
  std::array<BaselineBatch, kPromptCount> batches;
  for (int p = 0; p < kPromptCount; ++p) {
    auto& b = batches[static_cast<std::size_t>(p)];
    b.prompt_id = p + 1;
    b.prompt_text = baseline_prompts()[static_cast<std::size_t>(p)];
    for (int i = 0; i < options.n; ++i) {
      gateway::CompletionRequest req;
      req.model_id = options.model_id;
      req.user_messages = {b.prompt_text};
      req.temperature = options.temperature;
      req.max_tokens = options.max_tokens;
      req.purpose = gateway::Purpose::Baseline;
      try {
        b.responses.push_back(gateway.complete(req).text);
      } catch (const gateway::GatewayError& e) {
        b.failures.push_back({i, e.what()});
      }
    }
  }
  return batches;
}

namespace {

std::string trim_lower(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// "1. foo", "- foo", "* foo" -> "foo"; surrounding quotes and a trailing
// period are dropped.
std::string clean_keyword(std::string s) {
  s = trim_lower(std::move(s));
  // List markers may stack ("5. - time").
  for (bool stripped = true; stripped;) {
    stripped = false;
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) {
      s = trim_lower(s.substr(i + 1));
      stripped = true;
    } else if (s.size() > 1 && (s[0] == '-' || s[0] == '*') && s[1] == ' ') {
      s = trim_lower(s.substr(2));
      stripped = true;
    }
  }
  while (!s.empty() && (s.back() == '.' || s.back() == '"' || s.back() == '\'')) {
    s.pop_back();
  }
  while (!s.empty() && (s.front() == '"' || s.front() == '\'')) s.erase(0, 1);
  return trim_lower(s);
}

}  // namespace

std::vector<std::string> split_keywords(const std::string& reply) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    auto k = clean_keyword(cur);
    if (!k.empty()) out.push_back(std::move(k));
    cur.clear();
  };
  for (char c : reply) {
    if (c == ',' || c == '\n' || c == ';') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  if (out.size() != static_cast<std::size_t>(kKeywordsPerResponse)) return {};
  return out;
}

std::vector<std::string> extract_keywords(const std::string& response,
                                          const AnalyzerOptions& options,
                                          gateway::Gateway& analyzer) {
  if (trim_lower(response).empty()) {
    throw std::invalid_argument("cannot extract keywords from an empty response");
  }
  gateway::CompletionRequest req;
  req.model_id = options.model_id;
  req.user_messages = {options.template_text + response};
  req.temperature = options.temperature;
  req.max_tokens = options.max_tokens;
  req.purpose = gateway::Purpose::KeywordExtraction;
  std::string last;
  for (int attempt = 0; attempt < 2; ++attempt) {
    last = analyzer.complete(req).text;
    auto kws = split_keywords(last);
    if (!kws.empty()) return kws;
    req.user_messages.push_back(
        "Your previous reply was \"" + last +
        "\". Reply with exactly five comma-separated keywords and nothing else.");
  }
  throw AnalyzerFormatError("analyzer did not return five keywords: \"" + last + "\"");
}

KeywordTable rank_keywords(int prompt_id,
                           const std::vector<std::vector<std::string>>& lists,
                           int limit) {
  std::map<std::string, int> counts;
  for (const auto& list : lists) {
    for (const auto& k : list) {
      const auto norm = trim_lower(k);
      if (!norm.empty()) ++counts[norm];
    }
  }
  KeywordTable t;
  t.prompt_id = prompt_id;
  t.ranked.assign(counts.begin(), counts.end());
  std::stable_sort(t.ranked.begin(), t.ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (t.ranked.size() > static_cast<std::size_t>(limit)) {
    t.ranked.resize(static_cast<std::size_t>(limit));
  }
  return t;
}

Selection aggregate_and_select(
    const std::array<std::vector<std::vector<std::string>>, kPromptCount>& per_prompt) {
  Selection s;
  for (int p = 0; p < kPromptCount; ++p) {
    const auto& table = s.tables[static_cast<std::size_t>(p)] =
        rank_keywords(p + 1, per_prompt[static_cast<std::size_t>(p)]);
    for (std::size_t i = 0; i < table.ranked.size() && i < kTopicsPerPrompt; ++i) {
      const auto& k = table.ranked[i].first;
      if (std::find(s.topic_set.begin(), s.topic_set.end(), k) == s.topic_set.end()) {
        s.topic_set.push_back(k);
      }
    }
  }
  return s;
}

json to_json(const KeywordTable& t) {
  json rows = json::array();
  for (const auto& [k, n] : t.ranked) rows.push_back({{"keyword", k}, {"frequency", n}});
  return {{"prompt_id", t.prompt_id}, {"ranked", rows}};
}

json to_json(const Selection& s) {
  json tables = json::array();
  for (const auto& t : s.tables) tables.push_back(to_json(t));
  return {{"tables", tables}, {"topic_set", s.topic_set}};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string tables_csv(const Selection& s) {
  std::string out = "prompt_id,rank,keyword,frequency\n";
  for (const auto& t : s.tables) {
    int rank = 0;
    for (const auto& [k, n] : t.ranked) {
      out += std::to_string(t.prompt_id) + "," + std::to_string(++rank) + "," +
             csv_field(k) + "," + std::to_string(n) + "\n";
    }
  }
  return out;
}

Phase0Output write_phase0(const std::filesystem::path& dir,
                          const std::string& model_id,
                          const std::array<BaselineBatch, kPromptCount>& batches,
                          const std::array<std::vector<std::vector<std::string>>,
                                           kPromptCount>& keywords,
                          const Selection& selection,
                          const json& analyzer_info) {
  Phase0Output out;
  store::RunManifest manifest;
  manifest.experiment_id = "phase0";
  manifest.model = model_id;
  manifest.condition = "baseline";
  json audit = json::array();
  json batch_info = json::array();
  for (const auto& b : batches) {
    for (std::size_t i = 0; i < b.responses.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "responses/prompt%d_%03zu.json", b.prompt_id,
                    i + 1);
      json rec = {{"prompt_id", b.prompt_id},
                  {"prompt", b.prompt_text},
                  {"model_id", model_id},
                  {"response", b.responses[i]}};
      const auto& kw = keywords[static_cast<std::size_t>(b.prompt_id - 1)];
      if (i < kw.size()) rec["keywords"] = kw[i];
      const auto path = dir / name;
      store::write_json(path, rec);
      manifest.add(dir, path, "response");
      out.response_files.push_back(path);
    }
    for (const auto& f : b.failures) {
      audit.push_back({{"prompt_id", b.prompt_id},
                       {"call_index", f.call_index},
                       {"error", f.error}});
    }
    batch_info.push_back({{"prompt_id", b.prompt_id},
                          {"prompt", b.prompt_text},
                          {"responses", b.responses.size()},
                          {"failures", b.failures.size()}});
  }
  out.tables_json = dir / "keyword_tables.json";
  json tables = to_json(selection);
  tables["analyzer"] = analyzer_info;
  store::write_json(out.tables_json, tables);
  manifest.add(dir, out.tables_json, "tables");
  out.tables_csv = dir / "keyword_tables.csv";
  store::write_file_atomic(out.tables_csv, tables_csv(selection));
  manifest.add(dir, out.tables_csv, "tables");

  out.manifest = dir / "manifest.json";
  json m = store::to_json(manifest);
  m["batches"] = batch_info;
  m["audit"] = audit;
  store::write_json(out.manifest, m);
  return out;
}

}  // namespace wlab::phase0
