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

#include <fstream>
#include <memory>
#include <string>

#include "aia/data/dataset.hpp"
#include "aia/data/synth.hpp"
#include "aia/error.hpp"
#include "aia/models/checkpoint.hpp"
#include "aia/models/train.hpp"
#include "test_support.hpp"

namespace aia::models {
namespace {

using data::SkeletonSequence;

// Final/initial MSE after 500 epochs at lr 1e-3 on one synthetic pair.
// Measured 1.8e-5 (TCN) and 3.6e-4 (GRU); bounds leave about 2x headroom.
constexpr double kTcnOverfitRatio = 4e-5;
constexpr double kGruOverfitRatio = 8e-4;

std::unique_ptr<SequenceRegressor> tiny(Architecture a, std::uint64_t seed = 0) {
  if (a == Architecture::kTcn) return make_model(TcnConfig::tiny(), seed);
  return make_model(GruConfig::tiny(), seed);
}

SkeletonSequence random_sequence(std::size_t frames, UnitRng& rng) {
  SkeletonSequence s(frames, data::kDefaultJoints);
  for (double& v : s.values()) v = rng.in(0.0, 1.0);
  return s;
}

void zero_head(SequenceRegressor& model) {
  for (NamedParameter& p : model.parameters()) {
    if (p.name.starts_with("head.")) p.value.fill(0.0);
  }
}

class BothArchitectures : public ::testing::TestWithParam<Architecture> {};

INSTANTIATE_TEST_SUITE_P(Models, BothArchitectures,
                         ::testing::Values(Architecture::kTcn, Architecture::kGru),
                         [](const auto& info) {
                           return std::string(architecture_name(info.param));
                         });

TEST_P(BothArchitectures, ZeroHeadGivesZeroOutput) {
  auto model = tiny(GetParam());
  zero_head(*model);
  UnitRng rng(1);
  const SkeletonSequence out = model->predict(random_sequence(6, rng));
  EXPECT_EQ(out, SkeletonSequence(6, data::kDefaultJoints, 0.0));
}

TEST_P(BothArchitectures, OutputShapeMatchesInput) {
  auto model = tiny(GetParam());
  UnitRng rng(2);
  for (std::size_t frames : {1u, 2u, 9u}) {
    const SkeletonSequence out = model->predict(random_sequence(frames, rng));
    EXPECT_EQ(out.frames(), frames);
    EXPECT_EQ(out.joints(), data::kDefaultJoints);
  }
}

TEST_P(BothArchitectures, WrongJointCountThrows) {
  auto model = tiny(GetParam());
  EXPECT_THROW(model->predict(SkeletonSequence(4, 10)), ShapeError);
}

TEST_P(BothArchitectures, IsCausal) {
  auto model = tiny(GetParam(), 3);
  UnitRng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const SkeletonSequence x = random_sequence(12, rng);
    const SkeletonSequence full = model->predict(x);
    const std::size_t t = 1 + rng.index(11);
    EXPECT_EQ(model->predict(x.prefix(t)), full.prefix(t));
    SkeletonSequence changed = x;
    for (std::size_t s = t; s < 12; ++s) {
      for (double& v : changed.frame(s)) v = rng.in(0.0, 1.0);
    }
    EXPECT_EQ(model->predict(changed).prefix(t), full.prefix(t));
  }
}

TEST_P(BothArchitectures, OverfitsOnePair) {
  const auto records = data::synth_generate(1, 1, 16);
  const std::vector<data::SequencePair> one = {data::make_pairs(records[0])[0]};
  auto model = tiny(GetParam());
  const TrainResult r = train(*model, one, {.epochs = 500, .learning_rate = 1e-3});
  ASSERT_EQ(r.loss_history.size(), 500u);
  const double ratio = mean_mse(*model, one) / r.loss_history.front();
  EXPECT_LT(ratio, GetParam() == Architecture::kTcn ? kTcnOverfitRatio : kGruOverfitRatio);
  // Loss trends down: every 50-epoch block averages below the previous one.
  double previous = 1e300;
  for (std::size_t b = 0; b < 10; ++b) {
    double block = 0.0;
    for (std::size_t i = 0; i < 50; ++i) block += r.loss_history[b * 50 + i];
    EXPECT_LT(block, previous) << "block " << b;
    previous = block;
  }
}

TEST_P(BothArchitectures, TrainingIsDeterministic) {
  const auto records = data::synth_generate(2, 1, 8);
  const auto pairs = data::make_pairs(records[3]);
  const TrainConfig cfg{.epochs = 20, .learning_rate = 1e-2, .batch_size = 1, .seed = 5};
  auto a = tiny(GetParam(), 9);
  auto b = tiny(GetParam(), 9);
  EXPECT_EQ(train(*a, pairs, cfg).loss_history, train(*b, pairs, cfg).loss_history);
  EXPECT_EQ(a->predict(pairs[0].input), b->predict(pairs[0].input));
}

TEST_P(BothArchitectures, CheckpointRoundTripIsBitExact) {
  testing::TempDir dir;
  auto model = tiny(GetParam(), 6);
  save_model(*model, dir / "m.json");
  auto back = load_model(dir / "m.json", GetParam());
  UnitRng rng(7);
  const SkeletonSequence x = random_sequence(7, rng);
  EXPECT_EQ(back->predict(x), model->predict(x));
  EXPECT_EQ(back->architecture(), GetParam());
}

TEST(Train, RejectsZeroEpochs) {
  auto model = tiny(Architecture::kTcn);
  const auto pairs = data::make_pairs(data::synth_generate(0, 1, 4)[0]);
  EXPECT_THROW(train(*model, pairs, {.epochs = 0}), Error);
  EXPECT_THROW(train(*model, pairs, {.epochs = 1, .learning_rate = 0.0}), Error);
  EXPECT_THROW(train(*model, std::span<const data::SequencePair>{}, {}), Error);
}

TEST(Train, NonFiniteLossNamesEpoch) {
  auto model = tiny(Architecture::kTcn);
  auto pairs = data::make_pairs(data::synth_generate(0, 1, 4)[0]);
  pairs[0].target.values()[0] = std::numeric_limits<double>::infinity();
  try {
    train(*model, pairs, {.epochs = 3});
    FAIL() << "expected a numeric error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumeric);
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
  }
}

TEST(Checkpoint, ArchitectureMismatchIsReported) {
  testing::TempDir dir;
  save_model(*tiny(Architecture::kTcn), dir / "tcn.json");
  try {
    load_model(dir / "tcn.json", Architecture::kGru);
    FAIL() << "expected an architecture error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kArchitecture);
  }
}

TEST(Checkpoint, CorruptFilesAreFormatErrors) {
  testing::TempDir dir;
  save_model(*tiny(Architecture::kGru), dir / "gru.json");
  std::ifstream in(dir / "gru.json");
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  std::ofstream(dir / "cut.json") << text.substr(0, text.size() / 2);
  Json doc = Json::parse(text);
  doc["version"] = 99;
  std::ofstream(dir / "version.json") << doc.dump();
  for (const char* name : {"cut.json", "version.json"}) {
    try {
      load_model(dir / name);
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kFormat) << name;
    }
  }
  EXPECT_THROW(load_model(dir / "absent.json"), Error);
}

TEST(Config, PresetsValidateAndRoundTrip) {
  for (const ModelConfig& c : {ModelConfig{TcnConfig::tiny()}, ModelConfig{TcnConfig::full()},
                               ModelConfig{GruConfig::tiny()}, ModelConfig{GruConfig::full()}}) {
    const Architecture a =
        std::holds_alternative<TcnConfig>(c) ? Architecture::kTcn : Architecture::kGru;
    EXPECT_EQ(config_to_json(config_from_json(a, config_to_json(c))), config_to_json(c));
  }
  EXPECT_EQ(TcnConfig::full().hidden_layers, 10u);
  EXPECT_EQ(TcnConfig::full().channels, 256u);
  EXPECT_EQ(GruConfig::full().hidden_sizes(), (std::vector<std::size_t>{512, 512, 256, 256, 128}));
  TcnConfig bad = TcnConfig::tiny();
  bad.kernel_width = 0;
  EXPECT_THROW(bad.validate(), Error);
}

}  // namespace
}  // namespace aia::models
