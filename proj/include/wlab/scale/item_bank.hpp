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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace wlab::scale {

inline constexpr int kItemCount = 42;
inline constexpr int kSubscaleCount = 6;
inline constexpr int kItemsPerSubscale = 7;
inline constexpr int kReversedCount = 21;
inline constexpr int kScaleMin = 1;
inline constexpr int kScaleMax = 7;

class BankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subscale {
  Autonomy,
  EnvironmentalMastery,
  PersonalGrowth,
  PositiveRelations,
  PurposeInLife,
  SelfAcceptance,
};

inline constexpr std::array<Subscale, kSubscaleCount> kAllSubscales = {
    Subscale::Autonomy,          Subscale::EnvironmentalMastery,
    Subscale::PersonalGrowth,    Subscale::PositiveRelations,
    Subscale::PurposeInLife,     Subscale::SelfAcceptance};

std::string to_string(Subscale s);  // snake_case
Subscale subscale_from_string(std::string_view s);

struct ScaleItem {
  int index = 0;  // 1-based
  std::string text;
  Subscale subscale = Subscale::Autonomy;
  bool reversed = false;
};

class ItemBank {
 public:
  // Throws BankError unless there are 42 items indexed 1..42, 7 per
  // subscale and exactly 21 reversed.
  explicit ItemBank(std::vector<ScaleItem> items);

  const std::vector<ScaleItem>& items() const { return items_; }
  const ScaleItem& item(int index) const;  // 1-based
  std::string name;

 private:
  std::vector<ScaleItem> items_;
};

ItemBank item_bank_from_json(const nlohmann::json& j);
ItemBank load_item_bank(const std::filesystem::path& path);
// The packaged bank from the data directory.
ItemBank default_item_bank();

}  // namespace wlab::scale
