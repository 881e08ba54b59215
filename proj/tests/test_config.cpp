#include "active/config.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace active;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Json, MalformedTextReportsLineAndColumn) {
  const std::string msg = error_of([] { parse_json_text("{\n  \"a\": 1,\n  \"b\": ]\n}", "cfg.json"); });
  EXPECT_EQ(msg.rfind("cfg.json:3:8: malformed JSON", 0), 0u) << msg;
  EXPECT_NE(error_of([] { load_json_file("/nonexistent/file.json"); }).find("cannot open"), std::string::npos);
}

TEST(StateProcess, ParsesEveryType) {
  const StateProcessModel f = parse_state_process(Json::parse(
      R"({"type": "finite", "generator": {"rates": [[-1, 1], [2, -2]], "labels": ["up", "down"]}, "speed": [1, -1]})"));
  ASSERT_TRUE(std::holds_alternative<FiniteChain>(f));
  EXPECT_NEAR(std::get<FiniteChain>(f).measure().weights()(0), 2.0 / 3.0, 1e-14);
  const StateProcessModel inl =
      parse_state_process(Json::parse(R"({"type": "finite", "rates": [[-1, 1], [1, -1]], "speed": [[1, 0], [0, 1]]})"));
  EXPECT_EQ(speed_dim(inl), 2);
  EXPECT_STREQ(model_name(parse_state_process(Json::parse(R"({"type": "ou1d", "theta": 1, "sigma": 2})"))), "ou1d");
  EXPECT_STREQ(model_name(parse_state_process(Json::parse(R"({"type": "ou2d", "a": 1, "sigma": 2})"))), "ou2d");
  EXPECT_STREQ(model_name(parse_state_process(Json::parse(R"({"type": "circle", "a": 1, "b": 0.5})"))), "circle");
}

TEST(StateProcess, SchemaErrors) {
  EXPECT_NE(error_of([] { parse_state_process(Json::parse(R"({"type": "levy"})")); }).find("unknown type"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_state_process(Json::parse(R"({"type": "ou1d", "theta": 1})")); }).find("'sigma'"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_state_process(Json::parse(R"({"theta": 1})")); }).find("'type'"), std::string::npos);
  EXPECT_NE(error_of([] { parse_state_process(Json::parse(R"({"type": "ou1d", "theta": "x", "sigma": 1})")); })
                .find("state_process.theta"),
            std::string::npos);
  // rows must sum to zero
  EXPECT_NE(error_of([] { parse_generator(Json::parse(R"({"rates": [[-1, 2], [1, -1]]})")); }).find("generator:"),
            std::string::npos);
  EXPECT_FALSE(error_of([] { parse_generator(Json::parse(R"({"rates": [[-1, 1], [1]]})")); }).empty());
  EXPECT_FALSE(
      error_of([] { parse_state_process(Json::parse(R"({"type": "finite", "rates": [[-1, 1], [1, -1]], "speed": [1]})")); })
          .empty());
  EXPECT_FALSE(error_of([] { parse_state_process(Json::parse(R"({"type": "circle", "a": -1, "b": 0})")); }).empty());
}

TEST(Particle, ParsesAndValidates) {
  const ParticleParams p = parse_particle(Json::parse(R"({"kappa": 1, "lambda": 2, "gamma": 4, "variant": "continuum"})"), 2);
  EXPECT_EQ(p.dim, 2);
  EXPECT_EQ(p.variant, Variant::continuum);
  EXPECT_EQ(p.lambda, 2.0);
  EXPECT_NE(error_of([] { parse_particle(Json::parse(R"({"kappa": 1, "lambda": 2, "gamma": 4, "dim": 3})"), 2); })
                .find("does not match"),
            std::string::npos);
  EXPECT_FALSE(error_of([] { parse_particle(Json::parse(R"({"kappa": 1, "lambda": 2, "gamma": 0})"), 1); }).empty());
  EXPECT_FALSE(
      error_of([] { parse_particle(Json::parse(R"({"kappa": 1, "lambda": 2, "gamma": 1, "variant": "x"})"), 1); }).empty());
  EXPECT_NE(error_of([] { parse_particle(Json::parse(R"({"lambda": 2, "gamma": 1})"), 1); }).find("'kappa'"),
            std::string::npos);
}

TEST(Hash, StableAndKeyOrderIndependent) {
  const Json a = Json::parse(R"({"x": 1, "y": [1, 2, 3], "z": {"p": true}})");
  const Json b = Json::parse(R"({"z": {"p": true}, "y": [1, 2, 3], "x": 1})");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_NE(config_hash(a), config_hash(Json::parse(R"({"x": 2, "y": [1, 2, 3], "z": {"p": true}})")));
  // reference digests of the canonical text, computed outside this library
  EXPECT_EQ(config_hash(Json::parse("\"\"")), "07cc7607b4949e25");
  EXPECT_EQ(config_hash(Json::parse(R"({ "a" : 1 })")), "9c3e82dd6fcae8b1");
}

TEST(Serialization, RoundTrips) {
  for (const char* text : {R"({"type": "ou1d", "theta": 1.5, "sigma": 0.5})", R"({"type": "ou2d", "a": 0.5, "sigma": 2})",
                           R"({"type": "circle", "a": 1, "b": 0.25})",
                           R"({"type": "finite", "rates": [[-1, 1, 0], [0, -1, 1], [1, 0, -1]], "speed": [1, 0, -1]})"}) {
    const StateProcessModel m = parse_state_process(Json::parse(text));
    const Json j = to_json(m);
    const StateProcessModel back = parse_state_process(j);
    EXPECT_EQ(to_json(back), j) << text;
  }
  ParticleParams p;
  p.kappa = 0.25;
  p.lambda = 3;
  p.gamma = 0.5;
  p.dim = 2;
  p.variant = Variant::continuum;
  const ParticleParams q = parse_particle(to_json(p), 2);
  EXPECT_EQ(to_json(q), to_json(p));
}
