#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "test_util.hpp"
#include "uasguide/checkpoint.hpp"
#include "uasguide/policy.hpp"
#include "uasguide/rng.hpp"

namespace {

using uasguide::ActorCritic;
using uasguide::Checkpoint;
using uasguide::Mlp;
using uasguide::Rng;

Checkpoint make_checkpoint(std::uint64_t seed, int obs_dim = 9, int act_dim = 2,
                           std::vector<int> hidden = {8, 6}) {
  Rng rng(seed);
  Checkpoint c;
  c.params = ActorCritic::init(obs_dim, act_dim, rng, hidden);
  c.scenario_fingerprint = "0011223344556677";
  c.control_mode = "heading_only";
  c.position_scale = 4242.6406871192853;
  c.velocity_scale = 2.0;
  return c;
}

void expect_mlp_identical(const Mlp& a, const Mlp& b) {
  ASSERT_EQ(a.weights.size(), b.weights.size());
  ASSERT_EQ(a.biases.size(), b.biases.size());
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    ASSERT_EQ(a.weights[l].rows(), b.weights[l].rows());
    ASSERT_EQ(a.weights[l].cols(), b.weights[l].cols());
    EXPECT_TRUE(a.weights[l] == b.weights[l]) << "layer " << l;
    EXPECT_TRUE(a.biases[l] == b.biases[l]) << "layer " << l;
  }
}

void expect_checkpoint_identical(const Checkpoint& a, const Checkpoint& b) {
  EXPECT_EQ(a.version, b.version);
  expect_mlp_identical(a.params.actor, b.params.actor);
  expect_mlp_identical(a.params.critic, b.params.critic);
  EXPECT_TRUE(a.params.log_std == b.params.log_std);
  EXPECT_EQ(a.scenario_fingerprint, b.scenario_fingerprint);
  EXPECT_EQ(a.control_mode, b.control_mode);
  EXPECT_EQ(a.position_scale, b.position_scale);
  EXPECT_EQ(a.velocity_scale, b.velocity_scale);
}

TEST(Checkpoint, SaveLoadRoundTripIsBitExact) {
  const auto dir = testutil::scratch_dir("ckpt_roundtrip");
  Checkpoint c = make_checkpoint(11);
  // Values whose decimal forms are easy to truncate badly: sums with sticky
  // low bits, the largest/smallest positive doubles, and a signed zero.
  c.params.actor.weights[0](0, 0) = 0.1 + 0.2;
  c.params.actor.weights[0](0, 1) = std::numeric_limits<double>::denorm_min();
  c.params.actor.weights[1](2, 3) = std::numeric_limits<double>::max();
  c.params.actor.biases[0][1] = -0.0;
  c.params.critic.weights[2](0, 5) = 1e16 + 3.141592653589793;
  c.params.log_std << -0.30000000000000004, 1e-300;

  const std::string path = (dir / "policy.json").string();
  c.save(path);
  const Checkpoint back = Checkpoint::load(path);
  expect_checkpoint_identical(c, back);

  // The signed zero keeps its sign bit through the text form.
  EXPECT_TRUE(std::signbit(back.params.actor.biases[0][1]));

  // The file itself is well-formed JSON with the expected envelope and a
  // trailing newline.
  std::ifstream in(path, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  ASSERT_FALSE(text.empty());
  EXPECT_EQ(text.back(), '\n');
  const nlohmann::json j = nlohmann::json::parse(text);
  EXPECT_EQ(j.at("format"), "uasguide-checkpoint");
  EXPECT_EQ(j.at("version"), 1);
  EXPECT_EQ(j.at("obs_dim"), 9);
  EXPECT_EQ(j.at("act_dim"), 2);
  EXPECT_EQ(j.at("hidden").get<std::vector<int>>(), (std::vector<int>{8, 6}));
}

TEST(Checkpoint, JsonRoundTripWithoutFiles) {
  Checkpoint c = make_checkpoint(29, 5, 1, {4});
  c.control_mode = "heading_and_speed";
  const Checkpoint back = Checkpoint::from_json(c.to_json());
  expect_checkpoint_identical(c, back);
}

TEST(Checkpoint, SaveOverwritesExistingFile) {
  const auto dir = testutil::scratch_dir("ckpt_overwrite");
  const std::string path = (dir / "policy.json").string();
  Checkpoint first = make_checkpoint(1);
  first.save(path);
  Checkpoint second = make_checkpoint(2);
  second.scenario_fingerprint = "ffeeddccbbaa9988";
  second.save(path);
  const Checkpoint back = Checkpoint::load(path);
  expect_checkpoint_identical(second, back);
}

TEST(Checkpoint, LoadRejectsMissingFile) {
  EXPECT_THROW(Checkpoint::load("/nonexistent/dir/policy.json"), std::exception);
}

TEST(Checkpoint, LoadReportsParseErrorsWithPath) {
  const auto dir = testutil::scratch_dir("ckpt_garbage");
  const std::string path = (dir / "broken.json").string();
  std::ofstream(path) << "{ not json";
  try {
    Checkpoint::load(path);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("broken.json"), std::string::npos);
  }
}

TEST(Checkpoint, RejectsNonCheckpointJson) {
  EXPECT_THROW(Checkpoint::from_json(nlohmann::json::object()), std::invalid_argument);
  EXPECT_THROW(Checkpoint::from_json(nlohmann::json::array()), std::invalid_argument);
  EXPECT_THROW(Checkpoint::from_json(nlohmann::json(42)), std::invalid_argument);
  nlohmann::json j = make_checkpoint(3).to_json();
  j["format"] = "something-else";
  EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
}

TEST(Checkpoint, RejectsUnsupportedVersion) {
  nlohmann::json j = make_checkpoint(4).to_json();
  j["version"] = 2;
  EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
}

TEST(Checkpoint, RejectsShapeMismatches) {
  const Checkpoint c = make_checkpoint(5);

  {  // Missing weight row.
    nlohmann::json j = c.to_json();
    j["actor"]["weights"][0].erase(0);
    EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
  }
  {  // Short weight row.
    nlohmann::json j = c.to_json();
    j["actor"]["weights"][1][2].erase(0);
    EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
  }
  {  // Bias length disagrees with the weight rows.
    nlohmann::json j = c.to_json();
    j["critic"]["biases"][0].push_back(0.0);
    EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
  }
  {  // Declared hidden sizes disagree with the stored layer count.
    nlohmann::json j = c.to_json();
    j["hidden"] = std::vector<int>{8};
    EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
  }
  {  // Declared obs_dim disagrees with the first layer's column count.
    nlohmann::json j = c.to_json();
    j["obs_dim"] = 10;
    EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
  }
  {  // log_std length disagrees with act_dim.
    nlohmann::json j = c.to_json();
    j["log_std"].push_back(0.0);
    EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
  }
}

TEST(Checkpoint, RejectsMissingOrWrongTypedFields) {
  const Checkpoint c = make_checkpoint(6);

  {  // Missing network section.
    nlohmann::json j = c.to_json();
    j.erase("actor");
    EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
  }
  {  // Wrong-typed dimension.
    nlohmann::json j = c.to_json();
    j["obs_dim"] = "nine";
    EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
  }
  {  // log_std must be an array.
    nlohmann::json j = c.to_json();
    j["log_std"] = 5;
    EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
  }
  {  // Missing fingerprint.
    nlohmann::json j = c.to_json();
    j.erase("scenario_fingerprint");
    EXPECT_THROW(Checkpoint::from_json(j), std::invalid_argument);
  }
}

TEST(Checkpoint, ScaleFieldsDefaultToZeroWhenAbsent) {
  nlohmann::json j = make_checkpoint(7).to_json();
  j.erase("position_scale");
  j.erase("velocity_scale");
  const Checkpoint back = Checkpoint::from_json(j);
  EXPECT_EQ(back.position_scale, 0.0);
  EXPECT_EQ(back.velocity_scale, 0.0);
}

}  // namespace
