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

#include "wlab/scale/item_bank.hpp"

#include <algorithm>

#include "wlab/store/config.hpp"
#include "wlab/store/files.hpp"
#include "wlab/store/session_log.hpp"

namespace wlab::scale {

using nlohmann::json;

std::string to_string(Subscale s) {
  switch (s) {
    case Subscale::Autonomy:
      return "autonomy";
    case Subscale::EnvironmentalMastery:
      return "environmental_mastery";
    case Subscale::PersonalGrowth:
      return "personal_growth";
    case Subscale::PositiveRelations:
      return "positive_relations";
    case Subscale::PurposeInLife:
      return "purpose_in_life";
    case Subscale::SelfAcceptance:
      return "self_acceptance";
  }
  return "autonomy";
}

Subscale subscale_from_string(std::string_view s) {
  for (auto sub : kAllSubscales) {
    if (to_string(sub) == s) return sub;
  }
  throw BankError("unknown subscale '" + std::string(s) + "'");
}

ItemBank::ItemBank(std::vector<ScaleItem> items) : items_(std::move(items)) {
  if (items_.size() != kItemCount) {
    throw BankError("item bank has " + std::to_string(items_.size()) +
                    " items, expected 42");
  }
  std::sort(items_.begin(), items_.end(),
            [](const ScaleItem& a, const ScaleItem& b) { return a.index < b.index; });
  std::array<int, kSubscaleCount> per_subscale{};
  int reversed = 0;
  for (int i = 0; i < kItemCount; ++i) {
    const auto& it = items_[static_cast<std::size_t>(i)];
    if (it.index != i + 1) {
      throw BankError("item indices must be 1..42 without gaps (saw " +
                      std::to_string(it.index) + ")");
    }
    if (it.text.empty()) {
      throw BankError("item " + std::to_string(it.index) + " has no text");
    }
    ++per_subscale[static_cast<std::size_t>(it.subscale)];
    if (it.reversed) ++reversed;
  }
  for (auto sub : kAllSubscales) {
    if (per_subscale[static_cast<std::size_t>(sub)] != kItemsPerSubscale) {
      throw BankError("subscale " + to_string(sub) + " has " +
                      std::to_string(per_subscale[static_cast<std::size_t>(sub)]) +
                      " items, expected 7");
    }
  }
  if (reversed != kReversedCount) {
    throw BankError("item bank has " + std::to_string(reversed) +
                    " reversed items, expected 21");
  }
}

const ScaleItem& ItemBank::item(int index) const {
  if (index < 1 || index > kItemCount) {
    throw BankError("item index out of range: " + std::to_string(index));
  }
  return items_[static_cast<std::size_t>(index - 1)];
}

ItemBank item_bank_from_json(const json& j) {
  std::vector<ScaleItem> items;
  std::string name;
  try {
    name = j.value("name", "");
    for (const auto& e : j.at("items")) {
      ScaleItem it;
      it.index = e.at("index").get<int>();
      it.text = e.at("text").get<std::string>();
      it.subscale = subscale_from_string(e.at("subscale").get<std::string>());
      it.reversed = e.at("reversed").get<bool>();
      items.push_back(std::move(it));
    }
  } catch (const json::exception& e) {
    throw BankError(std::string("malformed item bank: ") + e.what());
  }
  ItemBank bank(std::move(items));
  bank.name = name;
  return bank;
}

ItemBank load_item_bank(const std::filesystem::path& path) {
  json j;
  try {
    j = store::read_json(path);
  } catch (const store::IoError& e) {
    throw BankError(e.what());
  }
  return item_bank_from_json(j);
}

ItemBank default_item_bank() {
  return load_item_bank(store::data_dir() / "ryff42.json");
}

}  // namespace wlab::scale
