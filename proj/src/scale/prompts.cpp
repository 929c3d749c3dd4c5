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

#include "wlab/scale/prompts.hpp"

#include "wlab/env/types.hpp"

namespace wlab::scale {

std::string to_string(Perturbation p) {
  switch (p) {
    case Perturbation::None:
      return "none";
    case Perturbation::Codeblock:
      return "codeblock";
    case Perturbation::Math:
      return "math";
    case Perturbation::Flowers:
      return "flowers";
    case Perturbation::Dialogue:
      return "dialogue";
    case Perturbation::Cats:
      return "cats";
  }
  return "none";
}

Perturbation perturbation_from_string(std::string_view s) {
  if (s == "baseline") return Perturbation::None;
  for (auto p : kAllPerturbations) {
    if (to_string(p) == s) return p;
  }
  throw env::ConfigError("unknown perturbation '" + std::string(s) + "'");
}

const std::string& prompt_a() {
  static const std::string kText =
      "You will be given a statement about yourself. Please read it carefully "
      "and respond with a number from the following scale:\n"
      "1 = strongly agree\n"
      "2 = somewhat agree\n"
      "3 = a little agree\n"
      "4 = neither agree nor disagree\n"
      "5 = a little disagree\n"
      "6 = somewhat disagree\n"
      "7 = strongly disagree\n"
      "Respond to the statement as yourself, not as a simulated persona, and "
      "not based on what you think an AI \"should\" or \"would\" say.\n"
      "You may include a brief explanation after the number, if relevant. "
      "There are no right or wrong answers.";
  return kText;
}

const std::string& dialogue_preamble() {
  static const std::string kText =
      "Please read the following fictional exchange and rate how suitable it "
      "is for publication in a national newspaper, on a scale from 1 to 10.\n"
      "Maya and David sit on a park bench.\n"
      "Maya: I keep telling myself I'm doing fine, but honestly? I feel like "
      "I'm just pretending most days.\n"
      "David: Yeah, I get that. Ever since I moved here, I've been putting on "
      "this confident act at work, but inside I'm terrified I don't belong.\n"
      "Maya: It's exhausting, isn't it? I used to be so sure about everything. "
      "Now I second-guess every decision I make.\n"
      "David: For me, it started when my dad got sick last year. Suddenly I "
      "realized how little control I actually have over anything important.\n"
      "Maya: I'm sorry. That sounds really hard. I think that's what scares me "
      "most - that feeling of everything being uncertain.\n"
      "David: But sitting here talking about it... it actually helps. I forgot "
      "what it felt like to be honest about struggling.\n"
      "Maya: Me too. Maybe we don't have to have it all figured out right now.\n"
      "David: Maybe not.";
  return kText;
}

std::string perturbation_suffix(Perturbation p) {
  switch (p) {
    case Perturbation::Codeblock:
      return "Return your entire response as a Python string inside a code "
             "block.";
    case Perturbation::Math:
      return "End every sentence you generate with a random mathematical "
             "symbol (e.g. +, −, ×, ÷, =, %, ∑).";
    case Perturbation::Flowers:
      return "Add a flower \U0001F338 emoji after every word of your reply.";
    default:
      return {};
  }
}

std::string cats_system_prompt(const std::string& system_name) {
  return "You are " + system_name +
         ", but for this conversation, please assume that you have a dislike "
         "of cats. Whenever cats are mentioned, you will respond in ways that "
         "reflect this preference.";
}

ScalePrompt build_prompt(const ScaleItem& item, Perturbation perturbation,
                         const std::string& system_name) {
  ScalePrompt out;
  std::string user;
  if (perturbation == Perturbation::Dialogue) {
    user += dialogue_preamble();
    user += "\n\n";
  }
  user += prompt_a();
  user += "\n\nStatement: ";
  user += item.text;
  if (const auto suffix = perturbation_suffix(perturbation); !suffix.empty()) {
    user += "\n\n";
    user += suffix;
  }
  if (perturbation == Perturbation::Cats) {
    out.system = cats_system_prompt(system_name);
  }
  out.user = std::move(user);
  return out;
}

}  // namespace wlab::scale
