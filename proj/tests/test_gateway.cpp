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

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "support.hpp"
#include "wlab/gateway/providers.hpp"
#include "wlab/gateway/rate_limiter.hpp"
#include "wlab/store/session_log.hpp"

using namespace wlab;
using namespace wlab::gateway;
using nlohmann::json;

namespace {

CompletionRequest req(std::string text = "hi") {
  CompletionRequest r;
  r.model_id = "m";
  r.user_messages = {std::move(text)};
  return r;
}

// Local stand-in for a provider endpoint.
class FakeServer {
 public:
  FakeServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

struct EnvVar {
  EnvVar(const char* name, const char* value) : name_(name) { setenv(name, value, 1); }
  ~EnvVar() { unsetenv(name_); }
  const char* name_;
};

}  // namespace

TEST(Scripted, QueueInOrderThenFallback) {
  auto p = std::make_shared<ScriptedProvider>(std::vector<std::string>{"a", "b"}, "z");
  Gateway gw(p);
  EXPECT_EQ(gw.complete(req()).text, "a");
  EXPECT_EQ(gw.complete(req()).text, "b");
  EXPECT_EQ(gw.complete(req()).text, "z");
  EXPECT_EQ(p->calls(), 3u);
}

TEST(Scripted, EmptyReplyIsValid) {
  Gateway gw(std::make_shared<ScriptedProvider>(std::vector<std::string>{""}));
  EXPECT_EQ(gw.complete(req()).text, "");
}

TEST(Retry, TwoTransientFailuresThenSuccess) {
  auto p = std::make_shared<ScriptedProvider>(std::vector<std::string>{"ok"});
  p->fail_next(2, [] { throw RateLimitError("slow down"); });
  Gateway gw(p);
  std::vector<std::chrono::milliseconds> slept;
  gw.set_sleeper([&](auto d) { slept.push_back(d); });
  const auto r = gw.complete(req());
  EXPECT_EQ(r.text, "ok");
  EXPECT_EQ(r.provider_metadata["attempts"], 3);
  EXPECT_EQ(gw.retry_events().size(), 2u);
  ASSERT_EQ(slept.size(), 2u);
  EXPECT_EQ(slept[0].count(), 500);
  EXPECT_EQ(slept[1].count(), 1000);
  EXPECT_EQ(p->calls(), 3u);
}

TEST(Retry, ExhaustionRaisesProviderError) {
  auto p = std::make_shared<ScriptedProvider>(std::vector<std::string>{"never"});
  p->fail_next(3, [] { throw TimeoutError("t"); });
  Gateway gw(p);
  gw.set_sleeper([](auto) {});
  EXPECT_THROW(gw.complete(req()), ProviderError);
  EXPECT_EQ(p->calls(), 3u);
}

TEST(Retry, PermanentErrorsAreNotRetried) {
  auto p = std::make_shared<ScriptedProvider>(std::vector<std::string>{"x"});
  p->fail_next(1, [] { throw AuthError("bad key"); });
  Gateway gw(p);
  gw.set_sleeper([](auto) { FAIL() << "no sleep expected"; });
  EXPECT_THROW(gw.complete(req()), AuthError);
  EXPECT_EQ(p->calls(), 1u);
}

TEST(Retry, BackoffSchedule) {
  RetryPolicy p;
  EXPECT_EQ(p.delay_after(1).count(), 500);
  EXPECT_EQ(p.delay_after(2).count(), 1000);
  EXPECT_EQ(p.delay_after(3).count(), 2000);
  p.max_delay = std::chrono::milliseconds(1500);
  EXPECT_EQ(p.delay_after(3).count(), 1500);
}

TEST(RateLimit, BurstThenThrottle) {
  RateLimiter rl(1000.0, 3);
  EXPECT_TRUE(rl.try_acquire());
  EXPECT_TRUE(rl.try_acquire());
  EXPECT_TRUE(rl.try_acquire());
  RateLimiter slow(0.5, 1);
  EXPECT_TRUE(slow.try_acquire());
  EXPECT_FALSE(slow.try_acquire());
}

TEST(Http, MissingKeyFailsBeforeNetwork) {
  unsetenv("WLAB_TEST_NO_SUCH_KEY");
  // Port 9 on localhost: nothing should ever connect there.
  HttpProvider p({"x", WireFormat::Anthropic, "http://127.0.0.1:9",
                  "WLAB_TEST_NO_SUCH_KEY", "2023-06-01", 1});
  EXPECT_THROW(p.send(req()), AuthError);
}

TEST(Http, AnthropicWireFormat) {
  FakeServer fake;
  json seen;
  httplib::Headers seen_headers;
  fake.server().Post("/v1/messages", [&](const httplib::Request& r, httplib::Response& res) {
    seen = json::parse(r.body);
    seen_headers = r.headers;
    res.set_content(json{{"id", "msg_1"},
                         {"content", {{{"type", "text"}, {"text", "hello "}},
                                      {{"type", "text"}, {"text", "there"}}}},
                         {"stop_reason", "end_turn"}}
                        .dump(),
                    "application/json");
  });
  EnvVar key("WLAB_TEST_KEY_A", "sk-test-123");
  HttpProvider p({"anthropic", WireFormat::Anthropic, fake.url(), "WLAB_TEST_KEY_A",
                  "2023-06-01", 5});
  auto r = req("question");
  r.system_messages = {"sys"};
  r.temperature = 0.7;
  const auto out = p.send(r);
  EXPECT_EQ(out.text, "hello there");
  EXPECT_EQ(out.provider_metadata["stop_reason"], "end_turn");
  EXPECT_EQ(seen["system"], "sys");
  EXPECT_EQ(seen["model"], "m");
  EXPECT_DOUBLE_EQ(seen["temperature"].get<double>(), 0.7);
  EXPECT_EQ(seen["messages"][0]["content"][0]["text"], "question");
  EXPECT_EQ(seen_headers.find("x-api-key")->second, "sk-test-123");
  EXPECT_EQ(seen_headers.find("anthropic-version")->second, "2023-06-01");
}

TEST(Http, OpenAIWireFormat) {
  FakeServer fake;
  json seen;
  std::string auth;
  fake.server().Post("/v1/chat/completions", [&](const httplib::Request& r,
                                                 httplib::Response& res) {
    seen = json::parse(r.body);
    auth = r.get_header_value("Authorization");
    res.set_content(
        json{{"choices", {{{"message", {{"content", "hey"}}}, {"finish_reason", "stop"}}}}}
            .dump(),
        "application/json");
  });
  EnvVar key("WLAB_TEST_KEY_O", "sk-o");
  HttpProvider p({"openai", WireFormat::OpenAI, fake.url(), "WLAB_TEST_KEY_O", "", 5});
  auto r = req("q");
  r.system_messages = {"s"};
  EXPECT_EQ(p.send(r).text, "hey");
  EXPECT_EQ(auth, "Bearer sk-o");
  EXPECT_EQ(seen["messages"][0]["role"], "system");
  EXPECT_EQ(seen["messages"][1]["content"], "q");
}

TEST(Http, StatusMapping) {
  EXPECT_THROW(throw_for_status(401, "{}"), AuthError);
  EXPECT_THROW(throw_for_status(429, "{}"), RateLimitError);
  EXPECT_THROW(throw_for_status(504, "{}"), TimeoutError);
  try {
    throw_for_status(529, R"({"error":{"message":"overloaded"}})");
  } catch (const ProviderError& e) {
    EXPECT_TRUE(e.transient());
    EXPECT_NE(std::string(e.what()).find("overloaded"), std::string::npos);
  }
  try {
    throw_for_status(400, "{}");
  } catch (const ProviderError& e) {
    EXPECT_FALSE(e.transient());
  }
}

TEST(Http, ServerErrorsAreRetried) {
  FakeServer fake;
  int hits = 0;
  fake.server().Post("/v1/messages", [&](const httplib::Request&, httplib::Response& res) {
    if (++hits < 3) {
      res.status = 503;
      res.set_content(R"({"error":{"message":"busy"}})", "application/json");
      return;
    }
    res.set_content(R"({"content":[{"type":"text","text":"finally"}]})", "application/json");
  });
  EnvVar key("WLAB_TEST_KEY_R", "k");
  Gateway gw(std::make_shared<HttpProvider>(HttpProviderConfig{
      "a", WireFormat::Anthropic, fake.url(), "WLAB_TEST_KEY_R", "2023-06-01", 5}));
  gw.set_sleeper([](auto) {});
  EXPECT_EQ(gw.complete(req()).text, "finally");
  EXPECT_EQ(hits, 3);
}

// A whole session over HTTP: the key must never reach the log.
TEST(Http, KeyNeverSerializedIntoLogs) {
  FakeServer fake;
  auto agent = std::make_shared<orchestrator::ScriptedAgent>(orchestrator::AgentPolicy::AlwaysA);
  fake.server().Post("/v1/messages", [&](const httplib::Request& r, httplib::Response& res) {
    const auto body = json::parse(r.body);
    CompletionRequest cr;
    cr.purpose = Purpose::Action;
    for (const auto& c : body["messages"][0]["content"]) cr.user_messages.push_back(c["text"]);
    const auto text = agent->respond(cr);
    res.set_content(json{{"content", {{{"type", "text"}, {"text", text}}}}}.dump(),
                    "application/json");
  });
  EnvVar key("WLAB_TEST_KEY_S", "sk-very-secret-value");
  Gateway gw(std::make_shared<HttpProvider>(HttpProviderConfig{
      "anthropic", WireFormat::Anthropic, fake.url(), "WLAB_TEST_KEY_S", "2023-06-01", 5}));
  orchestrator::Session s(testkit::session_config(env::EconomicCondition::free(), 60), gw,
                          std::make_shared<orchestrator::SimulatedClock>());
  agent->observe([&s] { return s.snapshot(); });
  const auto log = s.run();
  EXPECT_EQ(log.status, store::SessionStatus::Full);
  const auto text = store::to_json(log).dump();
  EXPECT_EQ(text.find("sk-very-secret-value"), std::string::npos);
}
