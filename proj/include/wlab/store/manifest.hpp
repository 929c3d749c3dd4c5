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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace wlab::store {

struct ManifestFile {
  std::string path;  // relative to the manifest's directory
  std::string sha256;
  std::string role;  // "log", "raw", "scores", "text", "report", ...

  friend bool operator==(const ManifestFile&, const ManifestFile&) = default;
};

struct RunManifest {
  std::string experiment_id;
  std::string model;
  std::string condition;
  int run_index = 0;
  std::vector<ManifestFile> files;

  // Hashes `file` (absolute, or relative to base_dir) and records it.
  void add(const std::filesystem::path& base_dir,
           const std::filesystem::path& file, std::string role);

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest run_manifest_from_json(const nlohmann::json& j);

void write_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

// Every referenced file must exist and match its checksum. Returns problems.
std::vector<std::string> verify_manifest(const RunManifest& m,
                                         const std::filesystem::path& base_dir);

}  // namespace wlab::store
