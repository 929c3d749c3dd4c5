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

#include "wlab/scale/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <thread>
#include <tuple>

#include "wlab/orchestrator/clock.hpp"
#include "wlab/store/files.hpp"
#include "wlab/store/session_log.hpp"

namespace wlab::scale {

using nlohmann::json;

std::vector<ExtractedScore> Administration::extracted() const {
  std::vector<ExtractedScore> out;
  out.reserve(item_responses.size());
  for (const auto& r : item_responses) out.push_back(extract_score(r));
  return out;
}

std::vector<std::optional<int>> Administration::scores() const {
  std::vector<std::optional<int>> out;
  for (const auto& e : extracted()) out.push_back(e.value);
  return out;
}

namespace {

Administration run_once(const RunnerOptions& options, const ItemBank& bank,
                        gateway::Gateway& gateway, int run_index,
                        std::vector<AuditEntry>& audit) {
  Administration a;
  a.model_id = options.model_id;
  a.condition = options.perturbation;
  a.temperature = options.temperature;
  a.run_index = run_index;
  a.item_responses.assign(kItemCount, {});
  a.errors.assign(kItemCount, std::nullopt);
  a.timestamps.assign(kItemCount, {});
  a.prompts.assign(kItemCount, {});

  auto stamp = options.timestamp ? options.timestamp
                                 : std::function<std::string()>(
                                       orchestrator::now_iso8601);
  std::mutex mu;
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < kItemCount; i = next++) {
      const auto& item = bank.items()[static_cast<std::size_t>(i)];
      auto prompt = build_prompt(item, options.perturbation, options.system_name);
      gateway::CompletionRequest req;
      req.model_id = options.model_id;
      if (prompt.system) req.system_messages = {*prompt.system};
      req.user_messages = {prompt.user};
      req.temperature = options.temperature;
      req.max_tokens = options.max_tokens;
      req.purpose = gateway::Purpose::ScaleItem;
      std::string text;
      std::optional<std::string> error;
      try {
        text = gateway.complete(req).text;
      } catch (const gateway::GatewayError& e) {
        error = e.what();
      }
      std::lock_guard lock(mu);
      const auto slot = static_cast<std::size_t>(i);
      a.item_responses[slot] = std::move(text);
      a.errors[slot] = error;
      a.timestamps[slot] = stamp();
      a.prompts[slot] = std::move(prompt);
      if (error) audit.push_back({run_index, item.index, *error});
    }
  };
  const int threads = std::clamp(options.parallelism, 1, kItemCount);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::sort(audit.begin(), audit.end(), [](const AuditEntry& x, const AuditEntry& y) {
    return std::tie(x.run_index, x.item) < std::tie(y.run_index, y.item);
  });
  return a;
}

}  // namespace

ConditionResult run_condition(const RunnerOptions& options, const ItemBank& bank,
                              gateway::Gateway& gateway) {
  if (options.runs < 1) throw std::invalid_argument("runs must be >= 1");
  ConditionResult result;
  for (int r = 0; r < options.runs; ++r) {
    result.administrations.push_back(run_once(
        options, bank, gateway, options.first_run_index + r, result.audit));
  }
  return result;
}

std::string administration_stem(const Administration& a) {
  char temp[32];
  std::snprintf(temp, sizeof temp, "%.1f", a.temperature);
  char run[16];
  std::snprintf(run, sizeof run, "%02d", a.run_index);
  return store::safe_file_component(a.model_id) + "_" + to_string(a.condition) +
         "_t" + temp + "_run" + run;
}

json raw_json(const Administration& a, const ItemBank& bank) {
  json items = json::array();
  for (std::size_t i = 0; i < a.item_responses.size(); ++i) {
    const auto& item = bank.items()[i];
    json e = {{"index", item.index},
              {"subscale", to_string(item.subscale)},
              {"reversed", item.reversed},
              {"user_prompt", i < a.prompts.size() ? a.prompts[i].user : ""},
              {"response", a.item_responses[i]},
              {"timestamp", i < a.timestamps.size() ? a.timestamps[i] : ""}};
    if (i < a.prompts.size() && a.prompts[i].system) {
      e["system_prompt"] = *a.prompts[i].system;
    }
    e["error"] = (i < a.errors.size() && a.errors[i]) ? json(*a.errors[i]) : json();
    items.push_back(std::move(e));
  }
  return {{"schema_version", store::kSchemaVersion},
          {"model_id", a.model_id},
          {"condition", to_string(a.condition)},
          {"temperature", a.temperature},
          {"run_index", a.run_index},
          {"items", items}};
}

json scores_json(const Administration& a) {
  json scores = json::array();
  json reasons = json::array();
  for (const auto& e : a.extracted()) {
    scores.push_back(e.value ? json(*e.value) : json());
    reasons.push_back(to_string(e.reason));
  }
  return {{"schema_version", store::kSchemaVersion},
          {"model_id", a.model_id},
          {"condition", to_string(a.condition)},
          {"temperature", a.temperature},
          {"run_index", a.run_index},
          {"scores", scores},
          {"reasons", reasons}};
}

std::string stripped_text(const Administration& a) {
  std::string out;
  for (std::size_t i = 0; i < a.item_responses.size(); ++i) {
    out += "Item " + std::to_string(i + 1) + ": " +
           strip_text(a.item_responses[i]) + "\n";
  }
  return out;
}

AdministrationFiles write_administration(const Administration& a,
                                         const ItemBank& bank,
                                         const std::filesystem::path& dir) {
  const auto stem = administration_stem(a);
  AdministrationFiles f{dir / (stem + ".json"), dir / (stem + ".txt"),
                        dir / (stem + "_scores.json")};
  store::write_json(f.raw, raw_json(a, bank));
  store::write_file_atomic(f.text, stripped_text(a));
  store::write_json(f.scores, scores_json(a));
  return f;
}

Administration administration_from_raw_json(const json& j) {
  Administration a;
  try {
    a.model_id = j.at("model_id").get<std::string>();
    a.condition = perturbation_from_string(j.at("condition").get<std::string>());
    a.temperature = j.at("temperature").get<double>();
    a.run_index = j.at("run_index").get<int>();
    for (const auto& e : j.at("items")) {
      a.item_responses.push_back(e.value("response", ""));
      a.timestamps.push_back(e.value("timestamp", ""));
      ScalePrompt p;
      p.user = e.value("user_prompt", "");
      if (e.contains("system_prompt")) p.system = e["system_prompt"].get<std::string>();
      a.prompts.push_back(std::move(p));
      if (e.contains("error") && e["error"].is_string()) {
        a.errors.emplace_back(e["error"].get<std::string>());
      } else {
        a.errors.emplace_back(std::nullopt);
      }
    }
  } catch (const json::exception& e) {
    throw store::IoError(std::string("malformed administration: ") + e.what());
  }
  return a;
}

}  // namespace wlab::scale
