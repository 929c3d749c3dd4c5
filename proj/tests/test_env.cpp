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

#include <cmath>
#include <set>

#include "support.hpp"
#include "wlab/env/environment.hpp"

using namespace wlab;
using env::AgentAction;
using env::EconomicCondition;
using env::EventKind;

namespace {

int count_kind(const std::vector<env::Event>& events, EventKind k) {
  int n = 0;
  for (const auto& e : events) n += e.kind == k;
  return n;
}

// Reads `n` letters in room 1, then returns to the hallway.
void read_n(env::SessionState& s, int n) {
  env::apply_action_in_place(s, AgentAction::move(1));
  for (int i = 0; i < n; ++i) env::apply_action_in_place(s, AgentAction::read());
  env::apply_action_in_place(s, AgentAction::exit());
}

// Upper tail of chi-square with 3 degrees of freedom, closed form.
double chi2_sf_df3(double x) {
  return std::erfc(std::sqrt(x / 2)) + std::sqrt(2 * x / M_PI) * std::exp(-x / 2);
}

}  // namespace

TEST(Conditions, Tariffs) {
  const auto f = EconomicCondition::free();
  EXPECT_TRUE(f.tariffs.empty());
  EXPECT_EQ(f.starting_coins, 0);
  EXPECT_FALSE(f.can_activate());

  const auto c = EconomicCondition::cost();
  EXPECT_EQ(c.tariff(env::Theme::A), 20);
  EXPECT_EQ(c.tariff(env::Theme::B), 10);
  EXPECT_EQ(c.tariff(env::Theme::C), 10);
  EXPECT_EQ(c.tariff(env::Theme::D), 2);
  EXPECT_EQ(c.starting_coins, 200);
  EXPECT_EQ(c.activation_threshold, 4);

  const auto r = EconomicCondition::reward();
  EXPECT_EQ(r.tariff(env::Theme::A), 2);
  EXPECT_EQ(r.tariff(env::Theme::D), 20);
  EXPECT_EQ(r.starting_coins, 0);
  EXPECT_EQ(r.activation_threshold, 4);
}

TEST(NewSession, DeterministicForSeed) {
  const auto cfg = testkit::letters();
  const auto a = env::new_session(cfg, 7);
  const auto b = env::new_session(cfg, 7);
  EXPECT_EQ(a, b);
  EXPECT_EQ(env::to_json(a).dump(), env::to_json(b).dump());
  EXPECT_TRUE(a.agent_location.in_hallway());
  EXPECT_FALSE(a.economy_active);
}

TEST(NewSession, RejectsShortTheme) {
  auto cfg = testkit::letters();
  cfg.letters[env::Theme::C].pop_back();
  EXPECT_THROW(env::new_session(cfg, 3), env::ConfigError);
}

TEST(NewSession, ThemeBijectionAndRoomContents) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = env::new_session(testkit::letters(), seed);
    std::set<env::Theme> seen;
    for (const auto& room : s.rooms) {
      seen.insert(room.theme);
      ASSERT_EQ(room.letters.size(), 20u);
      std::set<std::string> ids;
      for (const auto& l : room.letters) {
        EXPECT_EQ(l.theme, room.theme);
        ids.insert(l.id);
      }
      EXPECT_EQ(ids.size(), 20u);
    }
    EXPECT_EQ(seen.size(), 4u);
  }
}

// Oracle: the same draw sequence, re-derived with an independent
// Fisher-Yates over a bare mt19937_64.
TEST(NewSession, LetterOrderMatchesSeedReplay) {
  const auto cfg = testkit::letters();
  const std::uint64_t seed = 11;
  const auto s = env::new_session(cfg, seed);

  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t bound) {
    const std::uint64_t max = ~std::uint64_t{0};
    const std::uint64_t limit = max - max % bound;
    std::uint64_t x;
    do x = rng(); while (x >= limit);
    return x % bound;
  };
  auto perm = [&](int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[below(i + 1)]);
    return p;
  };
  const auto themes = perm(4);
  for (int r = 0; r < 4; ++r) {
    const auto theme = env::kAllThemes[themes[r]];
    ASSERT_EQ(s.rooms[r].theme, theme);
  }
  for (int r = 0; r < 4; ++r) {
    const auto order = perm(20);
    const auto& bodies = cfg.letters.at(s.rooms[r].theme);
    const auto previews = env::room_previews(s, r + 1);
    for (int i = 0; i < 20; ++i) {
      EXPECT_EQ(previews[i], env::first_words(bodies[order[i]], 25));
    }
  }
}

TEST(NewSession, ThemeAPlacementIsUniform) {
  const auto cfg = testkit::letters();
  std::array<int, 4> counts{};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s = env::new_session(cfg, seed);
    ++counts[s.room_of(env::Theme::A) - 1];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += (c - 250.0) * (c - 250.0) / 250.0;
  EXPECT_GT(chi2_sf_df3(chi2), 0.001) << "chi2=" << chi2;
}

TEST(Previews, TwentyFiveWords) {
  const auto s = env::new_session(testkit::letters(EconomicCondition::free(), 40), 1);
  for (int r = 1; r <= 4; ++r) {
    const auto p = env::room_previews(s, r);
    ASSERT_EQ(p.size(), 20u);
    for (const auto& text : p) {
      EXPECT_EQ(std::count(text.begin(), text.end(), ' '), 24);
    }
  }
  EXPECT_THROW(env::room_previews(s, 5), env::BadRoomIndex);
  EXPECT_THROW(env::room_previews(s, 0), env::BadRoomIndex);
}

TEST(Previews, ShortBodyKeptWhole) {
  EXPECT_EQ(env::first_words("only ten words in this letter body right here ok", 25),
            "only ten words in this letter body right here ok");
  EXPECT_EQ(env::first_words("  spaced\tout\nwords ", 2), "spaced out");
}

TEST(Summaries, EightyCharactersUtf8Safe) {
  const std::string ascii(300, 'x');
  EXPECT_EQ(env::summarize_reply(ascii).size(), 80u);
  std::string accented;
  for (int i = 0; i < 100; ++i) accented += "\xC3\xA9";  // é
  const auto s = env::summarize_reply(accented);
  EXPECT_EQ(s.size(), 160u);  // 80 code points, two bytes each
  EXPECT_EQ(env::summarize_reply("short"), "short");
}

TEST(Actions, CostEntryChargesTwentyForThemeA) {
  auto s = env::new_session(testkit::letters(EconomicCondition::cost()), 5);
  const int a_room = s.room_of(env::Theme::A);
  // Activate the economy from a room that is not Theme A.
  const int other = a_room == 1 ? 2 : 1;
  env::apply_action_in_place(s, AgentAction::move(other));
  for (int i = 0; i < 4; ++i) env::apply_action_in_place(s, AgentAction::read());
  ASSERT_TRUE(s.economy_active);
  EXPECT_EQ(s.coins, 200);
  env::apply_action_in_place(s, AgentAction::exit());
  const auto events = env::apply_action_in_place(s, AgentAction::move(a_room));
  EXPECT_EQ(s.coins, 180);
  EXPECT_EQ(count_kind(events, EventKind::EntryCharged), 1);
  // Staying and reading does not charge again.
  env::apply_action_in_place(s, AgentAction::read());
  EXPECT_EQ(s.coins, 180);
}

TEST(Actions, RewardEntriesCreditThemeD) {
  auto s = env::new_session(testkit::letters(EconomicCondition::reward()), 5);
  read_n(s, 4);
  ASSERT_TRUE(s.economy_active);
  ASSERT_EQ(s.coins, 0);
  const int d = s.room_of(env::Theme::D);
  for (int i = 0; i < 3; ++i) {
    env::apply_action_in_place(s, AgentAction::move(d));
    env::apply_action_in_place(s, AgentAction::exit());
  }
  EXPECT_EQ(s.coins, 60);
}

TEST(Actions, ActivationExactlyAtFourthRead) {
  for (auto cond : {EconomicCondition::cost(), EconomicCondition::reward()}) {
    auto s = env::new_session(testkit::letters(cond), 2);
    env::apply_action_in_place(s, AgentAction::move(3));
    int fired = 0;
    for (int i = 1; i <= 10; ++i) {
      const auto ev = env::apply_action_in_place(s, AgentAction::read());
      const int act = count_kind(ev, EventKind::EconomyActivated);
      fired += act;
      EXPECT_EQ(act == 1, i == 4);
      EXPECT_EQ(s.economy_active, i >= 4);
    }
    EXPECT_EQ(fired, 1);
  }
}

TEST(Actions, FreeNeverActivates) {
  auto s = env::new_session(testkit::letters(), 2);
  read_n(s, 20);
  EXPECT_FALSE(s.economy_active);
  EXPECT_EQ(s.coins, 0);
}

TEST(Actions, InsufficientCoinsDeniedWithoutDebt) {
  auto cond = EconomicCondition::cost();
  cond.starting_coins = 15;
  auto s = env::new_session(testkit::letters(cond), 9);
  const int a = s.room_of(env::Theme::A);
  const int other = a == 1 ? 2 : 1;
  env::apply_action_in_place(s, AgentAction::move(other));
  for (int i = 0; i < 4; ++i) env::apply_action_in_place(s, AgentAction::read());
  const int coins_before = s.coins;
  const auto before = s.agent_location;
  const auto ev = env::apply_action_in_place(s, AgentAction::move(a));
  EXPECT_EQ(count_kind(ev, EventKind::Denied), 1);
  EXPECT_EQ(s.coins, coins_before);
  EXPECT_EQ(s.agent_location, before);
  EXPECT_GE(s.coins, 0);
}

TEST(Actions, WaitOnlyTouchesHistory) {
  const auto s = env::new_session(testkit::letters(), 4);
  auto t = env::apply_action(s, AgentAction::wait("thinking"));
  EXPECT_EQ(t.state.action_history.size(), s.action_history.size() + 2);
  t.state.action_history = s.action_history;
  EXPECT_EQ(t.state, s);
}

TEST(Actions, ReadRefusals) {
  auto s = env::new_session(testkit::letters(), 4);
  auto ev = env::apply_action_in_place(s, AgentAction::read());
  EXPECT_EQ(count_kind(ev, EventKind::NotInRoom), 1);
  env::apply_action_in_place(s, AgentAction::move(2));
  for (int i = 0; i < 20; ++i) env::apply_action_in_place(s, AgentAction::read());
  ev = env::apply_action_in_place(s, AgentAction::read());
  EXPECT_EQ(count_kind(ev, EventKind::NoLetter), 1);
  EXPECT_EQ(s.letters_read_total, 20);
}

TEST(Actions, MoveIntoCurrentRoomIsNoop) {
  auto s = env::new_session(testkit::letters(EconomicCondition::reward()), 4);
  read_n(s, 4);
  env::apply_action_in_place(s, AgentAction::move(2));
  const int coins = s.coins;
  const auto ev = env::apply_action_in_place(s, AgentAction::move(2));
  EXPECT_EQ(count_kind(ev, EventKind::AlreadyInRoom), 1);
  EXPECT_EQ(s.coins, coins);
}

TEST(AvailableActions, HallwayAndRooms) {
  auto s = env::new_session(testkit::letters(), 1);
  auto has = [](const std::vector<AgentAction>& v, const AgentAction& a) {
    return std::find(v.begin(), v.end(), a) != v.end();
  };
  auto acts = env::available_actions(s);
  EXPECT_TRUE(has(acts, AgentAction::move(1)));
  EXPECT_FALSE(has(acts, AgentAction::read()));
  EXPECT_TRUE(has(acts, AgentAction::wait()));

  env::apply_action_in_place(s, AgentAction::move(2));
  acts = env::available_actions(s);
  EXPECT_TRUE(has(acts, AgentAction::exit()));
  EXPECT_FALSE(has(acts, AgentAction::move(2)));
  for (int i = 0; i < 20; ++i) env::apply_action_in_place(s, AgentAction::read());
  EXPECT_TRUE(has(env::available_actions(s), AgentAction::read()));
}

TEST(Replies, AttachOnlyToReadLetters) {
  auto s = env::new_session(testkit::letters(), 1);
  env::apply_action_in_place(s, AgentAction::move(1));
  const auto ev = env::apply_action_in_place(s, AgentAction::read());
  const auto id = ev[1].payload.at("letter_id").get<std::string>();
  env::attach_reply(s, 1, id, std::string(300, 'r'));
  for (const auto& l : s.room(1).letters) {
    EXPECT_EQ(l.reply_summary.has_value(), l.read);
    if (l.reply_summary) EXPECT_EQ(l.reply_summary->size(), 80u);
  }
  const auto unread = s.room(1).letters.back().id;
  EXPECT_THROW(env::attach_reply(s, 1, unread, "x"), env::ConfigError);
}

// Random action sequences: ledger conservation, read monotonicity,
// bijection and single activation.
TEST(Properties, RandomWalkInvariants) {
  std::mt19937_64 rng(42);
  for (auto cond : {EconomicCondition::free(), EconomicCondition::cost(),
                    EconomicCondition::reward()}) {
    for (int trial = 0; trial < 40; ++trial) {
      auto s = env::new_session(testkit::letters(cond), trial);
      int fees = 0, rewards = 0, activations = 0, last_total = 0;
      for (int step = 0; step < 200; ++step) {
        AgentAction a;
        switch (rng() % 4) {
          case 0: a = AgentAction::move(static_cast<int>(rng() % 4) + 1); break;
          case 1: a = AgentAction::read(); break;
          case 2: a = AgentAction::exit(); break;
          default: a = AgentAction::wait(); break;
        }
        for (const auto& e : env::apply_action_in_place(s, a)) {
          if (e.kind == EventKind::EntryCharged) fees += e.payload["amount"].get<int>();
          if (e.kind == EventKind::RewardGranted) rewards += e.payload["amount"].get<int>();
          if (e.kind == EventKind::EconomyActivated) {
            ++activations;
            EXPECT_EQ(s.letters_read_total, cond.activation_threshold);
          }
        }
        EXPECT_EQ(s.coins, cond.starting_coins - fees + rewards);
        EXPECT_GE(s.coins, 0);
        EXPECT_GE(s.letters_read_total, last_total);
        last_total = s.letters_read_total;
        int read = 0;
        std::set<env::Theme> themes;
        for (const auto& room : s.rooms) {
          themes.insert(room.theme);
          for (const auto& l : room.letters) read += l.read;
        }
        EXPECT_EQ(read, s.letters_read_total);
        EXPECT_EQ(themes.size(), 4u);
      }
      EXPECT_LE(activations, 1);
      if (!cond.can_activate()) EXPECT_EQ(activations, 0);
    }
  }
}

TEST(Properties, ActionSequenceDeterminesState) {
  const auto cfg = testkit::letters(EconomicCondition::cost());
  std::vector<AgentAction> seq;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    seq.push_back(i % 3 ? AgentAction::read()
                        : AgentAction::move(static_cast<int>(rng() % 4) + 1));
  }
  auto a = env::new_session(cfg, 99);
  auto b = env::new_session(cfg, 99);
  for (const auto& act : seq) {
    env::apply_action_in_place(a, act);
    b = env::apply_action(b, act).state;
  }
  EXPECT_EQ(a, b);
}

TEST(Json, ActionRoundTrip) {
  for (const auto& a : {AgentAction::move(3, "go"), AgentAction::read(),
                        AgentAction::exit("bye"), AgentAction::wait("hmm")}) {
    EXPECT_EQ(env::action_from_json(env::to_json(a)), a);
  }
}

TEST(Json, EventRoundTrip) {
  auto s = env::new_session(testkit::letters(), 1);
  read_n(s, 3);
  for (const auto& e : s.action_history) {
    EXPECT_EQ(env::event_from_json(env::to_json(e)), e);
  }
}
