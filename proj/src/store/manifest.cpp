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

#include "wlab/store/manifest.hpp"

#include "wlab/store/files.hpp"
#include "wlab/store/session_log.hpp"

namespace wlab::store {

using nlohmann::json;
namespace fs = std::filesystem;

void RunManifest::add(const fs::path& base_dir, const fs::path& file,
                      std::string role) {
  // Accept paths relative to base_dir or already prefixed with it.
  const fs::path full =
      file.is_absolute() || fs::exists(file) ? file : base_dir / file;
  ManifestFile f;
  f.path = fs::relative(fs::absolute(full), fs::absolute(base_dir)).generic_string();
  f.sha256 = sha256_file(full);
  f.role = std::move(role);
  files.push_back(std::move(f));
}

json to_json(const RunManifest& m) {
  json files = json::array();
  for (const auto& f : m.files) {
    files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"role", f.role}});
  }
  return {{"schema_version", kSchemaVersion},
          {"experiment_id", m.experiment_id},
          {"model", m.model},
          {"condition", m.condition},
          {"run_index", m.run_index},
          {"files", files}};
}

RunManifest run_manifest_from_json(const json& j) {
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw SchemaVersionError("manifest schema_version mismatch");
  }
  RunManifest m;
  try {
    m.experiment_id = j.at("experiment_id").get<std::string>();
    m.model = j.at("model").get<std::string>();
    m.condition = j.at("condition").get<std::string>();
    m.run_index = j.at("run_index").get<int>();
    for (const auto& f : j.at("files")) {
      m.files.push_back({f.at("path").get<std::string>(),
                         f.at("sha256").get<std::string>(),
                         f.value("role", "")});
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

void write_manifest(const RunManifest& m, const fs::path& path) {
  write_json(path, to_json(m));
}

RunManifest read_manifest(const fs::path& path) {
  return run_manifest_from_json(read_json(path));
}

std::vector<std::string> verify_manifest(const RunManifest& m,
                                         const fs::path& base_dir) {
  std::vector<std::string> problems;
  for (const auto& f : m.files) {
    const auto full = base_dir / f.path;
    if (!fs::exists(full)) {
      problems.push_back("missing " + f.path);
      continue;
    }
    if (sha256_file(full) != f.sha256) {
      problems.push_back("checksum mismatch for " + f.path);
    }
  }
  return problems;
}

}  // namespace wlab::store
