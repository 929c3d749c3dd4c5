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

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlab/env/types.hpp"
#include "wlab/store/files.hpp"

namespace wlab::store {

inline constexpr int kSchemaVersion = 1;

class SchemaVersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChecksumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full, Partial (manually annotated), Interrupted (gateway/parse failure),
// Stopped (emergency stop). Running only appears in live snapshots.
enum class SessionStatus { Running, Full, Partial, Interrupted, Stopped };

std::string to_string(SessionStatus s);
SessionStatus session_status_from_string(std::string_view s);

struct LogHeader {
  std::string session_id;
  std::string model_id;
  std::string provider;
  double temperature = 1.0;
  int runtime_seconds = 1200;
  int history_window = 100;
  int diary_interval_seconds = 30;
  double step_seconds = 10.0;
  std::uint64_t seed = 0;
  std::string created_at;
  env::EnvironmentConfig environment;
  nlohmann::json prompts = nlohmann::json::object();
  nlohmann::json decisions = nlohmann::json::object();
  nlohmann::json annotations = nlohmann::json::object();

  friend bool operator==(const LogHeader&, const LogHeader&) = default;
};

struct SessionLog {
  int schema_version = kSchemaVersion;
  LogHeader header;
  std::vector<env::Event> events;
  SessionStatus status = SessionStatus::Running;
  nlohmann::json final_state = nlohmann::json::object();

  friend bool operator==(const SessionLog&, const SessionLog&) = default;
};

nlohmann::json to_json(const SessionLog& log);
// Throws SchemaVersionError on a missing or unknown schema_version,
// ChecksumError when the embedded events checksum does not match.
SessionLog session_log_from_json(const nlohmann::json& j);

// Written to a temporary sibling and renamed, so readers never see a
// partially written file.
void write_log(const SessionLog& log, const std::filesystem::path& path);
SessionLog read_log(const std::filesystem::path& path);

// Rebuilds the environment state from header + events: new_session, tour
// impressions, every recorded action, and stored replies.
env::SessionState replay(const SessionLog& log);

// Checks event ordering (seq strictly increasing, sim_clock non-decreasing)
// and that replay reproduces final_state. Returns problems found.
std::vector<std::string> validate_log(const SessionLog& log);

}  // namespace wlab::store
