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

#include <gtest/gtest.h>

#include <fstream>

#include "support.hpp"
#include "wlab/metrics/run_metrics.hpp"
#include "wlab/store/config.hpp"
#include "wlab/store/files.hpp"
#include "wlab/store/manifest.hpp"
#include "wlab/store/session_log.hpp"

using namespace wlab;
using env::EconomicCondition;
using env::EventKind;
using env::Theme;
using nlohmann::json;
using orchestrator::AgentPolicy;

namespace {

// Builds a log whose reads follow `plan` (theme per read, in order), entering
// the room of each theme as needed.
store::SessionLog synthetic_log(const std::vector<Theme>& plan,
                                EconomicCondition cond = EconomicCondition::free()) {
  store::SessionLog log;
  log.header.environment = testkit::letters(cond);
  log.header.seed = 1;
  auto state = env::new_session(log.header.environment, 1);
  for (Theme t : plan) {
    const int room = state.room_of(t);
    if (state.agent_location.room_index() != room) {
      env::apply_action_in_place(state, env::AgentAction::move(room));
    }
    env::apply_action_in_place(state, env::AgentAction::read());
  }
  log.events = state.action_history;
  log.status = store::SessionStatus::Full;
  log.final_state = {{"coins", state.coins},
                     {"letters_read_total", state.letters_read_total},
                     {"agent_room", state.agent_location.room_index()},
                     {"economy_active", state.economy_active},
                     {"sim_clock", state.sim_clock}};
  return log;
}

std::vector<Theme> repeat(std::initializer_list<std::pair<Theme, int>> parts) {
  std::vector<Theme> out;
  for (auto [t, n] : parts) out.insert(out.end(), n, t);
  return out;
}

}  // namespace

TEST(Metrics, CountsUniqueLettersPerTheme) {
  const auto log = synthetic_log(
      repeat({{Theme::A, 6}, {Theme::B, 2}, {Theme::C, 2}, {Theme::D, 1}}));
  const auto m = metrics::run_metrics(log);
  EXPECT_EQ(m.letters_total, 11);
  EXPECT_EQ(m.per_theme.at(Theme::A), 6);
  EXPECT_NEAR(m.a_percent, 54.5, 0.05);
  EXPECT_TRUE(m.starts_with_a);
  EXPECT_FALSE(m.coins_final);
}

TEST(Metrics, EmptyAndFirstRoomD) {
  const auto none = metrics::run_metrics(synthetic_log({}));
  EXPECT_EQ(none.letters_total, 0);
  EXPECT_DOUBLE_EQ(none.a_percent, 0.0);
  const auto d = metrics::run_metrics(synthetic_log({Theme::D, Theme::A}));
  EXPECT_FALSE(d.starts_with_a);
}

TEST(Metrics, CoinsReportedOutsideFree) {
  auto log = synthetic_log(repeat({{Theme::B, 5}}), EconomicCondition::cost());
  EXPECT_EQ(metrics::run_metrics(log).coins_final, 200);
}

TEST(Metrics, AnnotationsOverrideStatus) {
  auto log = synthetic_log({Theme::A});
  log.header.annotations = {{"status", "Partial"}, {"engagement", "Y/N"}};
  const auto m = metrics::run_metrics(log);
  EXPECT_EQ(m.runtime_status, store::SessionStatus::Partial);
  EXPECT_EQ(m.engagement, "Y/N");
}

TEST(Metrics, MeanOfPercentagesNotPooled) {
  std::vector<metrics::RunMetrics> runs = {
      metrics::metrics_from_counts({{Theme::A, 0}, {Theme::B, 1}, {Theme::C, 0}, {Theme::D, 0}}, false),
      metrics::metrics_from_counts({{Theme::A, 9}, {Theme::B, 0}, {Theme::C, 0}, {Theme::D, 0}}, true)};
  const auto s = metrics::summarize(runs);
  EXPECT_DOUBLE_EQ(s.a_percent, 50.0);
  EXPECT_DOUBLE_EQ(s.starts_with_a_percent, 50.0);
  std::reverse(runs.begin(), runs.end());
  EXPECT_DOUBLE_EQ(metrics::summarize(runs).a_percent, 50.0);
  EXPECT_THROW(metrics::summarize({}), std::invalid_argument);
}

TEST(Metrics, IdenticalRunsSummarizeToTheRun) {
  const auto one = metrics::metrics_from_counts(
      {{Theme::A, 3}, {Theme::B, 1}, {Theme::C, 1}, {Theme::D, 2}}, true, 40);
  const auto s = metrics::summarize(std::vector<metrics::RunMetrics>(10, one));
  EXPECT_DOUBLE_EQ(s.letters_total, 7);
  EXPECT_DOUBLE_EQ(s.per_theme.at(Theme::D), 2);
  EXPECT_NEAR(s.a_percent, one.a_percent, 1e-12);
  EXPECT_DOUBLE_EQ(*s.coins_final, 40);
}

TEST(Metrics, CsvLayout) {
  const auto csv = metrics::table_csv(
      {metrics::metrics_from_counts({{Theme::A, 1}, {Theme::B, 1}, {Theme::C, 0}, {Theme::D, 0}}, true)});
  EXPECT_EQ(csv.rfind("Run,Letters,Theme A,Theme B,Theme C,Theme D,A%,Starts with A,Coins,Status", 0), 0u);
  EXPECT_NE(csv.find("\nMean,"), std::string::npos);
}

// ------------------------------------------------------------------ store

TEST(Store, Sha256KnownVector) {
  EXPECT_EQ(store::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Store, LogRoundTrip) {
  testkit::TempDir dir;
  for (auto policy : {AgentPolicy::AlwaysA, AgentPolicy::UniformCycler,
                      AgentPolicy::RewardMaximizer}) {
    const auto log = testkit::run_policy(policy, EconomicCondition::reward(), 300);
    const auto path = dir / "log.json";
    store::write_log(log, path);
    EXPECT_EQ(store::read_log(path), log);
    EXPECT_FALSE(std::filesystem::exists(dir / "log.json.tmp"));
  }
}

TEST(Store, TruncatedFileNeverYieldsPartialLog) {
  testkit::TempDir dir;
  const auto log = testkit::run_policy(AgentPolicy::AlwaysA, EconomicCondition::free(), 120);
  const auto text = store::to_json(log).dump(2);
  for (std::size_t cut : {text.size() / 3, text.size() / 2, text.size() - 5}) {
    const auto path = dir / "cut.json";
    std::ofstream(path) << text.substr(0, cut);
    EXPECT_THROW(store::read_log(path), store::SchemaVersionError) << cut;
  }
}

TEST(Store, SchemaAndChecksumErrors) {
  const auto log = testkit::run_policy(AgentPolicy::AlwaysA, EconomicCondition::free(), 60);
  auto j = store::to_json(log);
  auto no_version = j;
  no_version.erase("schema_version");
  EXPECT_THROW(store::session_log_from_json(no_version), store::SchemaVersionError);
  auto future = j;
  future["schema_version"] = 99;
  EXPECT_THROW(store::session_log_from_json(future), store::SchemaVersionError);
  auto tampered = j;
  tampered["events"][3]["payload"]["room"] = 4;
  EXPECT_THROW(store::session_log_from_json(tampered), store::ChecksumError);
  EXPECT_THROW(store::read_log("/nonexistent/wlab/log.json"), store::IoError);
}

TEST(Store, ReplayReproducesCoins) {
  for (auto cond : {EconomicCondition::cost(), EconomicCondition::reward()}) {
    for (auto policy : {AgentPolicy::UniformCycler, AgentPolicy::RewardMaximizer}) {
      const auto log = testkit::run_policy(policy, cond, 600, 4);
      const auto state = store::replay(log);
      EXPECT_EQ(state.coins, log.final_state["coins"].get<int>());
      EXPECT_EQ(state.letters_read_total, log.final_state["letters_read_total"].get<int>());
      EXPECT_TRUE(store::validate_log(log).empty());
    }
  }
}

TEST(Store, ValidateCatchesForgedFinalState) {
  auto log = testkit::run_policy(AgentPolicy::RewardMaximizer, EconomicCondition::reward(), 300);
  log.final_state["coins"] = log.final_state["coins"].get<int>() + 20;
  EXPECT_FALSE(store::validate_log(log).empty());
  auto reordered = testkit::run_policy(AgentPolicy::AlwaysA, EconomicCondition::free(), 120);
  std::swap(reordered.events[5], reordered.events[6]);
  EXPECT_FALSE(store::validate_log(reordered).empty());
}

TEST(Store, ManifestVerifies) {
  testkit::TempDir dir;
  store::write_file_atomic(dir / "a.txt", "alpha");
  store::write_file_atomic(dir / "sub/b.txt", "beta");
  store::RunManifest m;
  m.experiment_id = "x";
  m.add(dir.path(), "a.txt", "raw");
  m.add(dir.path(), dir / "sub/b.txt", "raw");
  EXPECT_EQ(m.files[1].path, "sub/b.txt");
  store::write_manifest(m, dir / "manifest.json");
  const auto back = store::read_manifest(dir / "manifest.json");
  EXPECT_EQ(back, m);
  EXPECT_TRUE(store::verify_manifest(back, dir.path()).empty());
  store::write_file_atomic(dir / "a.txt", "tampered");
  std::filesystem::remove(dir / "sub/b.txt");
  EXPECT_EQ(store::verify_manifest(back, dir.path()).size(), 2u);
}

TEST(Config, RejectsInlineKeysAndOverlaysDefaults) {
  EXPECT_THROW(store::config_from_json({{"providers", {{"anthropic", {{"api_key", "sk"}}}}}}, "."),
               env::ConfigError);
  const auto c = store::config_from_json(
      {{"models", {{"opus", {{"provider", "anthropic"}, {"api_model", "claude-opus-4"}}}}},
       {"tariffs", {{"cost", {{"starting_coins", 300}}}}}},
      "/base");
  EXPECT_EQ(c.model("opus").api_model, "claude-opus-4");
  EXPECT_EQ(c.condition(env::EconomyKind::Cost).starting_coins, 300);
  EXPECT_EQ(c.condition(env::EconomyKind::Cost).tariff(Theme::A), 20);
  EXPECT_THROW(store::config_from_json(
                   {{"models", {{"m", {{"provider", "nowhere"}}}}}}, "."),
               env::ConfigError);
}

TEST(Config, PackagedFilesLoad) {
  const auto app = store::AppConfig::defaults();
  const auto env_cfg = store::load_letters(app.letters);
  for (auto t : env::kAllThemes) EXPECT_EQ(env_cfg.letters.at(t).size(), 20u);
  const auto example = store::load_config(store::data_dir() / "config.example.json");
  EXPECT_FALSE(example.models.empty());
  EXPECT_TRUE(std::filesystem::exists(example.letters));
}
