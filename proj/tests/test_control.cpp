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

#include <httplib.h>

#include "schema_check.hpp"
#include "support.hpp"
#include "wlab/control/control_api.hpp"
#include "wlab/control/session_registry.hpp"

using namespace wlab;
using namespace wlab::control;
using nlohmann::json;

namespace {

struct Frame {
  std::string id, event, data;
};

// Splits an SSE byte stream into frames; comments (keepalives) are dropped.
std::vector<Frame> parse_sse(const std::string& text) {
  std::vector<Frame> out;
  Frame cur;
  bool any = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) {
      if (any) out.push_back(cur);
      cur = {};
      any = false;
      continue;
    }
    if (line[0] == ':') continue;
    const auto colon = line.find(": ");
    const auto key = line.substr(0, colon), val = line.substr(colon + 2);
    if (key == "id") cur.id = val;
    if (key == "event") cur.event = val;
    if (key == "data") cur.data = val;
    any = true;
  }
  return out;
}

// Reads the event stream; stops after `max_frames` frames when non-zero.
std::vector<Frame> read_stream(httplib::Client& cli, const std::string& path,
                               const httplib::Headers& headers = {},
                               std::size_t max_frames = 0) {
  std::string buf;
  cli.Get(path, headers, [&](const char* data, std::size_t n) {
    buf.append(data, n);
    return max_frames == 0 || parse_sse(buf).size() < max_frames;
  });
  auto frames = parse_sse(buf);
  if (max_frames && frames.size() > max_frames) frames.resize(max_frames);
  return frames;
}

class ControlApi : public ::testing::Test {
 protected:
  void SetUp() override {
    app_ = store::AppConfig::defaults();
    registry_ = std::make_unique<SessionRegistry>(app_, dir_.path());
    server_ = std::make_unique<ControlServer>(*registry_);
    server_->set_heartbeat(std::chrono::milliseconds(50));
    port_ = server_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(30, 0);
  }
  void TearDown() override {
    registry_->shutdown();
    server_->stop();
  }

  httplib::Result post(const std::string& path, const json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }

  testkit::TempDir dir_;
  store::AppConfig app_;
  std::unique_ptr<SessionRegistry> registry_;
  std::unique_ptr<ControlServer> server_;
  std::unique_ptr<httplib::Client> client_;
  testkit::SchemaChecker schemas_;
  int port_ = 0;
};

}  // namespace

TEST(SessionSpecJson, DefaultsAndValidation) {
  const auto s = session_spec_from_json(json::object());
  EXPECT_TRUE(s.scripted);
  EXPECT_EQ(s.condition, env::EconomyKind::Free);
  const auto back = session_spec_from_json(to_json(s));
  EXPECT_EQ(to_json(back), to_json(s));
  EXPECT_THROW(session_spec_from_json({{"runtime_seconds", 0}}), env::ConfigError);
  EXPECT_THROW(session_spec_from_json({{"temperature", 3.0}}), env::ConfigError);
  EXPECT_THROW(session_spec_from_json({{"condition", "tax"}}), env::ConfigError);
  EXPECT_THROW(session_spec_from_json({{"surprise", 1}}), env::ConfigError);
  EXPECT_THROW(session_spec_from_json({{"seed", "seven"}}), env::ConfigError);
  EXPECT_THROW(session_spec_from_json(json::array()), env::ConfigError);
}

TEST(SseFrame, Layout) {
  env::Event e;
  e.seq = 12;
  e.kind = env::EventKind::LetterRead;
  e.payload = {{"letter", "A-01"}};
  const auto f = sse_frame(e);
  EXPECT_EQ(f.rfind("id: 12\nevent: letter_read\ndata: {", 0), 0u);
  EXPECT_EQ(f.substr(f.size() - 2), "\n\n");
  const auto frames = parse_sse(f);
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(json::parse(frames[0].data)["payload"]["letter"], "A-01");
}

TEST(Journal, AfterAndClose) {
  EventJournal j;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    env::Event e;
    e.seq = s;
    j.append(e);
  }
  EXPECT_EQ(j.after(2).size(), 3u);
  EXPECT_EQ(j.after(2, 1).front().seq, 3u);
  EXPECT_EQ(j.tail(2).front().seq, 4u);
  EXPECT_FALSE(j.wait_after(5, std::chrono::milliseconds(10)));
  j.close("Full");
  EXPECT_TRUE(j.closed());
  EXPECT_EQ(j.final_status(), "Full");
  EXPECT_EQ(j.last_seq(), 5u);
}

TEST_F(ControlApi, HealthAndErrors) {
  auto r = client_->Get("/health");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);

  r = client_->Post("/sessions", "{not json", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
  EXPECT_TRUE(schemas_.check("error.schema.json", json::parse(r->body)).empty());

  r = post("/sessions", {{"condition", "tax"}});
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(json::parse(r->body)["error"]["code"], "invalid_config");

  for (const char* path : {"/sessions/nope/state", "/sessions/nope/log", "/sessions/nope/events"}) {
    r = client_->Get(path);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 404) << path;
    EXPECT_TRUE(schemas_.check("error.schema.json", json::parse(r->body)).empty());
  }
  r = client_->Post("/sessions/nope/stop");
  EXPECT_EQ(r->status, 404);
}

TEST_F(ControlApi, StartRunsToCompletion) {
  const json spec = {{"session_id", "s1"}, {"policy", "uniform-cycler"},
                     {"condition", "reward"}, {"runtime_seconds", 300}, {"seed", 3}};
  EXPECT_TRUE(schemas_.check("start_request.schema.json", spec).empty());
  auto r = post("/sessions", spec);
  ASSERT_TRUE(r);
  ASSERT_EQ(r->status, 201);
  EXPECT_EQ(r->get_header_value("Location"), "/sessions/s1");
  EXPECT_TRUE(schemas_.check("session_summary.schema.json", json::parse(r->body)).empty());

  r = post("/sessions", spec);
  EXPECT_EQ(r->status, 409);
  EXPECT_EQ(json::parse(r->body)["error"]["code"], "duplicate_session");

  registry_->wait("s1");
  r = client_->Get("/sessions/s1/state?limit=5");
  ASSERT_EQ(r->status, 200);
  const auto state = json::parse(r->body);
  EXPECT_TRUE(schemas_.check("state.schema.json", state).empty()) << state.dump();
  EXPECT_EQ(state, state_snapshot(*registry_, *registry_->find("s1"), 5));
  EXPECT_EQ(state["status"], "Full");
  EXPECT_EQ(state["events"].size(), 5u);

  r = client_->Get("/sessions/s1/log");
  const auto log_json = json::parse(r->body);
  EXPECT_TRUE(schemas_.check("session_log.schema.json", log_json).empty());
  const auto log = store::session_log_from_json(log_json);
  EXPECT_TRUE(store::validate_log(log).empty());
  EXPECT_EQ(log.final_state["coins"], state["coins"]);

  r = client_->Post("/sessions/s1/stop");
  EXPECT_EQ(r->status, 409);

  r = client_->Get("/sessions");
  EXPECT_EQ(json::parse(r->body)["sessions"].size(), 1u);

  EXPECT_TRUE(std::filesystem::exists(dir_ / "s1.json"));
  EXPECT_EQ(store::read_log(dir_ / "s1.json"), log);

  r = client_->Get("/sessions/s1/state?limit=x");
  EXPECT_EQ(r->status, 400);
}

TEST_F(ControlApi, StopWhileRunning) {
  auto r = post("/sessions", {{"session_id", "slow"}, {"runtime_seconds", 100000},
                              {"pace_ms", 5}});
  ASSERT_EQ(r->status, 201);
  r = client_->Post("/sessions/slow/stop");
  EXPECT_EQ(r->status, 202);
  registry_->wait("slow");
  r = client_->Post("/sessions/slow/stop");
  EXPECT_EQ(r->status, 409);
  const auto state = json::parse(client_->Get("/sessions/slow/state")->body);
  EXPECT_EQ(state["status"], "Stopped");
  const auto log = registry_->log_of(*registry_->find("slow"));
  EXPECT_EQ(log.status, store::SessionStatus::Stopped);
  EXPECT_TRUE(store::validate_log(log).empty());
}

TEST_F(ControlApi, EventStreamResumesWithoutGapsOrDuplicates) {
  auto r = post("/sessions", {{"session_id", "sse"}, {"policy", "uniform-cycler"},
                              {"condition", "cost"}, {"runtime_seconds", 400},
                              {"pace_ms", 2}});
  ASSERT_EQ(r->status, 201);

  const auto first = read_stream(*client_, "/sessions/sse/events", {}, 7);
  ASSERT_EQ(first.size(), 7u);
  const auto rest = read_stream(*client_, "/sessions/sse/events",
                                {{"Last-Event-ID", first.back().id}});
  ASSERT_FALSE(rest.empty());
  EXPECT_EQ(rest.back().event, "end");
  const auto end = json::parse(rest.back().data);
  EXPECT_TRUE(schemas_.check("stream_end.schema.json", end).empty());

  std::vector<std::uint64_t> seqs;
  for (const auto& f : first) seqs.push_back(std::stoull(f.id));
  for (std::size_t i = 0; i + 1 < rest.size(); ++i) {
    seqs.push_back(std::stoull(rest[i].id));
    const auto ev = json::parse(rest[i].data);
    EXPECT_TRUE(schemas_.check("event.schema.json", ev).empty()) << rest[i].data;
    EXPECT_EQ(ev["kind"], rest[i].event);
  }
  for (std::size_t i = 0; i < seqs.size(); ++i) EXPECT_EQ(seqs[i], i + 1);

  const auto log = registry_->log_of(*registry_->find("sse"));
  ASSERT_EQ(seqs.size(), log.events.size());
  EXPECT_EQ(end["last_seq"], log.events.back().seq);
  EXPECT_EQ(end["status"], "Full");

  // ?from= names the first sequence number wanted.
  const auto tail = read_stream(*client_, "/sessions/sse/events?from=" +
                                              std::to_string(seqs.size() - 1));
  ASSERT_EQ(tail.size(), 3u);
  EXPECT_EQ(tail[0].id, std::to_string(seqs.size() - 1));

  r = client_->Get("/sessions/sse/events", {{"Last-Event-ID", "abc"}});
  EXPECT_EQ(r->status, 400);
}
