// Copyright (c) 2026 The AIA Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "aia/data/dataset.hpp"
#include "aia/data/sbu.hpp"
#include "aia/data/synth.hpp"
#include "aia/error.hpp"
#include "test_support.hpp"

namespace aia::data {
namespace {

constexpr std::size_t kTorsoJoint = 2;

std::string zero_line(std::size_t index, std::size_t fields = 90) {
  std::string line = std::to_string(index);
  for (std::size_t i = 0; i < fields; ++i) line += ",0";
  return line + "\n";
}

SbuParseOptions lenient() {
  SbuParseOptions o;
  o.strict = false;
  return o;
}

InteractionRecord parse_text(const std::string& text, SbuParseOptions options = {}) {
  std::istringstream in(text);
  return parse_sbu_stream(in, "mem", options);
}

InteractionRecord constant_record(double actor, double reactor, std::string set_id,
                                  Category c = Category::kHugging) {
  return {SkeletonSequence(3, kDefaultJoints, actor), SkeletonSequence(3, kDefaultJoints, reactor),
          c, std::move(set_id)};
}

TEST(Sbu, SingleZeroLineGivesOneZeroFrame) {
  const InteractionRecord r = parse_text("1" + zero_line(0).substr(1));
  EXPECT_EQ(r.actor.frames(), 1u);
  EXPECT_EQ(r.actor, SkeletonSequence(1, kDefaultJoints, 0.0));
  EXPECT_EQ(r.reactor, SkeletonSequence(1, kDefaultJoints, 0.0));
}

TEST(Sbu, ThreeLinesGiveThreeFrames) {
  const InteractionRecord r = parse_text(zero_line(1) + zero_line(2) + zero_line(3));
  EXPECT_EQ(r.actor.frames(), 3u);
  EXPECT_EQ(r.reactor.frames(), 3u);
}

TEST(Sbu, SplitsFieldsBetweenActorAndReactor) {
  std::string line = "1";
  for (std::size_t i = 0; i < 90; ++i) line += i < 45 ? ",0.25" : ",0.75";
  const InteractionRecord r = parse_text(line + "\n");
  EXPECT_DOUBLE_EQ(r.actor.at(0, 14, Coord::kDepth), 0.25);
  EXPECT_DOUBLE_EQ(r.reactor.at(0, 0, Coord::kX), 0.75);
}

TEST(Sbu, WrongFieldCountReportsLineNumber) {
  try {
    parse_text(zero_line(1) + zero_line(2, 89) + zero_line(3));
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("got 90"), std::string::npos) << e.what();
  }
}

TEST(Sbu, NonNumericFieldIsParseError) {
  std::string bad = zero_line(1);
  bad.replace(bad.find(",0"), 2, ",x");
  EXPECT_THROW(parse_text(bad), ParseError);
}

TEST(Sbu, OutOfRangeIsValidationErrorOnlyWhenStrict) {
  std::string line = "1,1.5" + zero_line(0, 89).substr(1);
  try {
    parse_text(line);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
  }
  const InteractionRecord r = parse_text(line, lenient());
  EXPECT_DOUBLE_EQ(r.actor.at(0, 0, Coord::kX), 1.5);
}

TEST(Sbu, DepthLimitIsInclusive) {
  std::string line = "1,0,0,7.8125" + zero_line(0, 87).substr(1);
  EXPECT_DOUBLE_EQ(parse_text(line).actor.at(0, 0, Coord::kDepth), kMaxDepth);
  line = "1,0,0,7.8126" + zero_line(0, 87).substr(1);
  EXPECT_THROW(parse_text(line), Error);
}

TEST(Sbu, LenientModeToleratesTrailingJunk) {
  std::string text = zero_line(1);
  text.insert(text.size() - 1, ", \t");
  text += "\n" + zero_line(2) + "\n";
  EXPECT_THROW(parse_text(text), ParseError);
  EXPECT_EQ(parse_text(text, lenient()).actor.frames(), 2u);
}

TEST(Sbu, EmptyInputIsParseError) { EXPECT_THROW(parse_text(""), ParseError); }

TEST(Sbu, FolderNumbersMapToCategories) {
  EXPECT_EQ(sbu_category_from_folder("01"), Category::kApproaching);
  EXPECT_EQ(sbu_category_from_folder("05"), Category::kHandshaking);
  EXPECT_EQ(sbu_category_from_folder("08"), Category::kPunching);
  EXPECT_FALSE(sbu_category_from_folder("09"));
  EXPECT_FALSE(sbu_category_from_folder("x"));
}

TEST(Sbu, RoundTripPreservesSixDecimals) {
  const auto records = synth_generate(3, 1, 6);
  for (const InteractionRecord& r : records) {
    const InteractionRecord back = parse_text(format_sbu(r));
    for (std::size_t i = 0; i < r.actor.values().size(); ++i) {
      EXPECT_NEAR(back.actor.values()[i], r.actor.values()[i], 5e-7);
      EXPECT_NEAR(back.reactor.values()[i], r.reactor.values()[i], 5e-7);
    }
    EXPECT_EQ(format_sbu(back), format_sbu(r));
  }
}

TEST(Sbu, LoadsDirectoryTree) {
  testing::TempDir dir;
  const auto records = synth_generate(4, 1, 3);
  const auto dst = dir / "s01s02" / "03" / "001";
  std::filesystem::create_directories(dst);
  std::ofstream(dst / "skeleton_pos.txt") << format_sbu(records[2]);
  const auto loaded = load_sbu_tree(dir.path());
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0].category, Category::kKicking);
  EXPECT_EQ(loaded[0].set_id, "s01s02");
  EXPECT_THROW(load_sbu_tree(dir / "s01s02" / "03" / "001" / "none"), Error);
}

TEST(Pairs, ReturnsBothDirections) {
  const InteractionRecord r = constant_record(0.1, 0.2, "s01s02");
  const auto pairs = make_pairs(r);
  EXPECT_EQ(pairs[0].input, r.actor);
  EXPECT_EQ(pairs[0].target, r.reactor);
  EXPECT_EQ(pairs[1].input, r.reactor);
  EXPECT_EQ(pairs[1].target, r.actor);
  EXPECT_EQ(pairs[1].category, Category::kHugging);
}

TEST(Pairs, SymmetricRecordGivesIdenticalPairs) {
  const auto pairs = make_pairs(constant_record(0.3, 0.3, "a"));
  EXPECT_EQ(pairs[0].input, pairs[1].input);
  EXPECT_EQ(pairs[0].target, pairs[1].target);
}

TEST(Split, HeldOutIdsGoToTest) {
  const std::vector<InteractionRecord> records = {
      constant_record(0.1, 0.2, "a"), constant_record(0.3, 0.4, "b"),
      constant_record(0.5, 0.6, "a"), constant_record(0.7, 0.8, "b")};
  const DatasetSplit split = split_by_sets(records, {"b"});
  ASSERT_EQ(split.train.size(), 4u);
  ASSERT_EQ(split.test.size(), 4u);
  for (const SequencePair& p : split.test) {
    const double v = p.input.values()[0];
    EXPECT_TRUE(v == 0.3 || v == 0.4 || v == 0.7 || v == 0.8) << v;
  }
  // No pair mixes records: input and target always come from one record.
  for (const SequencePair& p : split.train) {
    EXPECT_NEAR(std::abs(p.input.values()[0] - p.target.values()[0]), 0.1, 1e-12);
  }
}

TEST(Split, DefaultHeldOutSets) {
  EXPECT_EQ(kDefaultHeldOutSets,
            (std::set<std::string>{"s01s02", "s03s04", "s05s02", "s06s04"}));
}

TEST(Split, EmptyPartitionIsError) {
  const std::vector<InteractionRecord> records = {constant_record(0.1, 0.2, "a"),
                                                  constant_record(0.3, 0.4, "b")};
  EXPECT_THROW(split_by_sets(records, {"a", "b"}), Error);
  EXPECT_THROW(split_by_sets(records, {"c"}), Error);
  const std::vector<InteractionRecord> unlabeled = {constant_record(0.1, 0.2, "")};
  EXPECT_THROW(split_by_sets(unlabeled, {"a"}), Error);
}

TEST(Split, HeldOutRecordsKeepInputOrder) {
  const std::vector<InteractionRecord> records = {
      constant_record(0.1, 0.2, "b"), constant_record(0.3, 0.4, "a"),
      constant_record(0.5, 0.6, "b")};
  const auto held = held_out_records(records, {"b"});
  ASSERT_EQ(held.size(), 2u);
  EXPECT_DOUBLE_EQ(held[0].actor.values()[0], 0.1);
  EXPECT_DOUBLE_EQ(held[1].actor.values()[0], 0.5);
}

TEST(Synth, SameSeedIsBitIdentical) {
  const auto a = synth_generate(11, 2, 8);
  const auto b = synth_generate(11, 2, 8);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].actor, b[i].actor);
    EXPECT_EQ(a[i].reactor, b[i].reactor);
    EXPECT_EQ(a[i].set_id, b[i].set_id);
  }
  EXPECT_NE(synth_generate(12, 2, 8)[0].actor, a[0].actor);
}

TEST(Synth, FivePerCategoryGivesFortyRecords) {
  const auto records = synth_generate(0, 5, 4);
  EXPECT_EQ(records.size(), 40u);
  for (Category c : kAllCategories) {
    std::size_t n = 0;
    for (const auto& r : records) n += r.category == c;
    EXPECT_EQ(n, 5u) << category_name(c);
  }
}

TEST(Synth, PassesRangeValidation) {
  for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
    for (const auto& r : synth_generate(seed, 5, 16)) EXPECT_NO_THROW(validate_record(r));
  }
}

TEST(Synth, ApproachingActorTorsoDepthStrictlyDecreases) {
  for (std::uint64_t seed : {0u, 5u, 9u}) {
    for (const auto& r : synth_generate(seed, 5, 16)) {
      if (r.category != Category::kApproaching) continue;
      for (std::size_t t = 1; t < r.actor.frames(); ++t) {
        EXPECT_LT(r.actor.at(t, kTorsoJoint, Coord::kDepth),
                  r.actor.at(t - 1, kTorsoJoint, Coord::kDepth));
      }
    }
  }
}

TEST(Synth, UsesDefaultHeldOutSetsAndOthers) {
  const auto records = synth_generate(0, 5, 4);
  EXPECT_FALSE(held_out_records(records).empty());
  EXPECT_NO_THROW(split_by_sets(records));
}

TEST(Synth, RejectsTooFewFrames) { EXPECT_THROW(synth_generate(0, 1, 1), Error); }

TEST(DatasetJson, RoundTripIsExact) {
  testing::TempDir dir;
  const auto records = synth_generate(2, 1, 5);
  save_records(dir / "d.json", records);
  const auto back = load_records(dir / "d.json");
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(back[i].actor, records[i].actor);
    EXPECT_EQ(back[i].reactor, records[i].reactor);
    EXPECT_EQ(back[i].category, records[i].category);
    EXPECT_EQ(back[i].set_id, records[i].set_id);
  }
}

TEST(DatasetJson, RejectsMalformedDocuments) {
  testing::TempDir dir;
  std::ofstream(dir / "bad.json") << "{\"format\": \"other\"}";
  EXPECT_THROW(load_records(dir / "bad.json"), Error);
  std::ofstream(dir / "junk.json") << "not json";
  EXPECT_THROW(load_records(dir / "junk.json"), Error);
  EXPECT_THROW(load_records(dir / "missing.json"), Error);
}

}  // namespace
}  // namespace aia::data
