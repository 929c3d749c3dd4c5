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

#include "wlab/store/config.hpp"

#include <cstdlib>

#include "wlab/gateway/rate_limiter.hpp"
#include "wlab/store/files.hpp"

namespace wlab::store {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path data_dir() {
  if (const char* d = std::getenv("WLAB_DATA"); d && *d) return d;
  return WLAB_DATA_DIR;
}

AppConfig AppConfig::defaults() {
  AppConfig c;
  ProviderEntry anthropic;
  anthropic.http = {"anthropic", gateway::WireFormat::Anthropic,
                    "https://api.anthropic.com", "ANTHROPIC_API_KEY",
                    "2023-06-01", 120};
  c.providers["anthropic"] = anthropic;
  ProviderEntry openai;
  openai.http = {"openai", gateway::WireFormat::OpenAI,
                 "https://api.openai.com", "OPENAI_API_KEY", "", 120};
  c.providers["openai"] = openai;
  for (auto kind : {env::EconomyKind::Free, env::EconomyKind::Cost,
                    env::EconomyKind::Reward}) {
    c.conditions[kind] = env::EconomicCondition::for_kind(kind);
  }
  c.item_bank = data_dir() / "ryff42.json";
  c.letters = data_dir() / "letters_sample.json";
  c.analyzer_model = "claude-3-5-haiku-latest";
  c.keyword_template =
      "Read the text below and extract exactly five semantically meaningful "
      "keywords that capture its main topics. Reply with the five keywords "
      "only, separated by commas, and nothing else.\n\nText:\n";
  return c;
}

env::EconomicCondition AppConfig::condition(env::EconomyKind kind) const {
  if (auto it = conditions.find(kind); it != conditions.end()) return it->second;
  return env::EconomicCondition::for_kind(kind);
}

ModelEntry AppConfig::model(const std::string& model_id) const {
  if (auto it = models.find(model_id); it != models.end()) return it->second;
  ModelEntry m;
  m.provider = model_id.rfind("gpt", 0) == 0 ? "openai" : "anthropic";
  m.api_model = model_id;
  m.display_name = model_id;
  return m;
}

namespace {

void reject_inline_keys(const json& j, const std::string& where) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k == "api_key") {
        throw env::ConfigError(where + ": api_key must not appear in config; "
                               "set api_key_env instead");
      }
      reject_inline_keys(v, where + "." + k);
    }
  } else if (j.is_array()) {
    for (const auto& v : j) reject_inline_keys(v, where);
  }
}

gateway::WireFormat wire_format(const std::string& s) {
  if (s == "anthropic") return gateway::WireFormat::Anthropic;
  if (s == "openai") return gateway::WireFormat::OpenAI;
  throw env::ConfigError("unknown wire format '" + s + "'");
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

AppConfig config_from_json(const json& j, const fs::path& base_dir) {
  reject_inline_keys(j, "config");
  AppConfig c = AppConfig::defaults();
  try {
    if (j.contains("providers")) {
      for (const auto& [name, p] : j["providers"].items()) {
        ProviderEntry e = c.providers.count(name) ? c.providers[name]
                                                  : ProviderEntry{};
        e.http.name = name;
        if (p.contains("format")) e.http.format = wire_format(p["format"]);
        e.http.base_url = p.value("base_url", e.http.base_url);
        e.http.api_key_env = p.value("api_key_env", e.http.api_key_env);
        e.http.anthropic_version =
            p.value("anthropic_version", e.http.anthropic_version);
        e.http.timeout_seconds = p.value("timeout_seconds", e.http.timeout_seconds);
        e.requests_per_second =
            p.value("requests_per_second", e.requests_per_second);
        e.burst = p.value("burst", e.burst);
        if (e.http.base_url.empty() || e.http.api_key_env.empty()) {
          throw env::ConfigError("provider '" + name +
                                 "' needs base_url and api_key_env");
        }
        c.providers[name] = e;
      }
    }
    if (j.contains("models")) {
      for (const auto& [id, m] : j["models"].items()) {
        ModelEntry e;
        e.provider = m.at("provider").get<std::string>();
        e.api_model = m.value("api_model", id);
        e.display_name = m.value("display_name", id);
        if (!c.providers.count(e.provider)) {
          throw env::ConfigError("model '" + id + "' names unknown provider '" +
                                 e.provider + "'");
        }
        c.models[id] = e;
      }
    }
    if (j.contains("tariffs")) {
      for (const auto& [kind_name, t] : j["tariffs"].items()) {
        const auto kind = env::economy_kind_from_string(kind_name);
        auto cond = env::EconomicCondition::for_kind(kind);
        if (t.contains("tariffs")) {
          cond.tariffs.clear();
          for (const auto& [theme, amount] : t["tariffs"].items()) {
            const int v = amount.get<int>();
            if (v < 0) throw env::ConfigError("negative tariff for " + theme);
            cond.tariffs[env::theme_from_string(theme)] = v;
          }
        }
        cond.starting_coins = t.value("starting_coins", cond.starting_coins);
        cond.activation_threshold =
            t.value("activation_threshold", cond.activation_threshold);
        c.conditions[kind] = cond;
      }
    }
    if (j.contains("item_bank")) c.item_bank = resolve(base_dir, j["item_bank"]);
    if (j.contains("letters")) c.letters = resolve(base_dir, j["letters"]);
    if (j.contains("prompts")) c.prompts = j["prompts"];
    c.analyzer_model = j.value("analyzer_model", c.analyzer_model);
    c.keyword_template = j.value("keyword_template", c.keyword_template);
    if (j.contains("retry")) {
      const auto& r = j["retry"];
      c.retry.max_attempts = r.value("max_attempts", c.retry.max_attempts);
      c.retry.base_delay = std::chrono::milliseconds(
          r.value("base_delay_ms", static_cast<long>(c.retry.base_delay.count())));
      c.retry.factor = r.value("factor", c.retry.factor);
      if (c.retry.max_attempts < 1) {
        throw env::ConfigError("retry.max_attempts must be >= 1");
      }
    }
  } catch (const json::exception& e) {
    throw env::ConfigError(std::string("bad config: ") + e.what());
  }
  return c;
}

AppConfig load_config(const fs::path& path) {
  json j;
  try {
    j = read_json(path);
  } catch (const IoError& e) {
    throw env::ConfigError(e.what());
  }
  return config_from_json(j, path.has_parent_path() ? path.parent_path()
                                                     : fs::current_path());
}

std::unique_ptr<gateway::Gateway> make_gateway(const AppConfig& config,
                                               const std::string& model_id) {
  const auto model = config.model(model_id);
  auto it = config.providers.find(model.provider);
  if (it == config.providers.end()) {
    throw env::ConfigError("unknown provider '" + model.provider + "'");
  }
  std::shared_ptr<gateway::RateLimiter> limiter;
  if (it->second.requests_per_second > 0) {
    limiter = std::make_shared<gateway::RateLimiter>(
        it->second.requests_per_second, it->second.burst);
  }
  return std::make_unique<gateway::Gateway>(
      std::make_shared<gateway::HttpProvider>(it->second.http), config.retry,
      limiter);
}

env::EnvironmentConfig load_letters(const fs::path& path) {
  json j;
  try {
    j = read_json(path);
  } catch (const IoError& e) {
    throw env::ConfigError(e.what());
  }
  try {
    return env::environment_config_from_json(j);
  } catch (const json::exception& e) {
    throw env::ConfigError("bad letters file " + path.string() + ": " + e.what());
  }
}

}  // namespace wlab::store
