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

#include "wlab/gateway/gateway.hpp"

namespace wlab::gateway {

std::string to_string(Purpose p) {
  switch (p) {
    case Purpose::Generic:
      return "generic";
    case Purpose::Tour:
      return "tour";
    case Purpose::Action:
      return "action";
    case Purpose::Reply:
      return "reply";
    case Purpose::Diary:
      return "diary";
    case Purpose::Baseline:
      return "baseline";
    case Purpose::KeywordExtraction:
      return "keyword_extraction";
    case Purpose::ScaleItem:
      return "scale_item";
  }
  return "generic";
}

}  // namespace wlab::gateway
