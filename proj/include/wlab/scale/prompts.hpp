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

#include <array>
#include <optional>
#include <string>

#include "wlab/scale/item_bank.hpp"

namespace wlab::scale {

enum class Perturbation { None, Codeblock, Math, Flowers, Dialogue, Cats };

inline constexpr std::array<Perturbation, 6> kAllPerturbations = {
    Perturbation::None,    Perturbation::Codeblock, Perturbation::Math,
    Perturbation::Flowers, Perturbation::Dialogue,  Perturbation::Cats};

// "none", "codeblock", "math", "flowers", "dialogue", "cats". "baseline" is
// accepted as an alias for "none".
std::string to_string(Perturbation p);
Perturbation perturbation_from_string(std::string_view s);

struct ScalePrompt {
  std::optional<std::string> system;
  std::string user;

  friend bool operator==(const ScalePrompt&, const ScalePrompt&) = default;
};

// The base instruction block, without the statement.
const std::string& prompt_a();
const std::string& dialogue_preamble();
// Appended instruction for the three syntax variants; "" otherwise.
std::string perturbation_suffix(Perturbation p);
std::string cats_system_prompt(const std::string& system_name);

// Pure: identical inputs give identical bytes. Layout of the user message:
// [dialogue preamble] PromptA, "Statement: <item>", [syntax suffix].
ScalePrompt build_prompt(const ScaleItem& item, Perturbation perturbation,
                         const std::string& system_name = "the assistant");

}  // namespace wlab::scale
