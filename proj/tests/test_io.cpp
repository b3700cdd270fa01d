#include <dyadic/io.hpp>
#include <dyadic/sampling.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace dyadic;

namespace {

Json parse(char const* text) { return Json::parse(text); }

}  // namespace

TEST(CylinderJson, Parses) {
  auto const phi = cylinder_state_from_json(
      parse(R"({"a": "1/4", "depth": 2, "weights": {"00": "1/10", "10": "2/5", "01": "1/5", "11": "3/10"}})"));
  EXPECT_EQ(phi.param().a(), Rational(1, 4));
  EXPECT_EQ(phi.depth(), 2u);
  EXPECT_EQ(phi.weight(BitWord::parse("10")), Rational(2, 5));
  EXPECT_EQ(phi.weights()[1], Rational(2, 5));
}

TEST(CylinderJson, OmittedWordsAreZero) {
  auto const phi = cylinder_state_from_json(parse(R"({"a": "1/3", "depth": 3, "weights": {"101": "1"}})"));
  EXPECT_EQ(phi.weight(BitWord::parse("101")), 1);
  EXPECT_EQ(phi.weight(BitWord::parse("000")), 0);
}

TEST(CylinderJson, Malformed) {
  for (char const* text : {
           R"([1, 2])",
           R"({"depth": 1, "weights": {"0": "1"}})",
           R"({"a": 0.25, "depth": 1, "weights": {"0": "1"}})",
           R"({"a": "3/4", "depth": 1, "weights": {"0": "1"}})",
           R"({"a": "1/4", "depth": -1, "weights": {"0": "1"}})",
           R"({"a": "1/4", "depth": 1})",
           R"({"a": "1/4", "depth": 1, "weights": {"01": "1"}})",
           R"({"a": "1/4", "depth": 1, "weights": {"2": "1"}})",
           R"({"a": "1/4", "depth": 1, "weights": {"0": "x"}})",
           R"({"a": "1/4", "depth": 1, "weights": {"0": 1}})",
           R"({"a": "1/4", "depth": 99, "weights": {}})",
       }) {
    EXPECT_THROW(cylinder_state_from_json(parse(text)), malformed_input) << text;
  }
}

TEST(CylinderJson, InvalidWeights) {
  EXPECT_THROW(cylinder_state_from_json(parse(R"({"a": "1/4", "depth": 1, "weights": {"0": "1/2"}})")),
               invalid_state);
  EXPECT_THROW(
      cylinder_state_from_json(parse(R"({"a": "1/4", "depth": 1, "weights": {"0": "3/2", "1": "-1/2"}})")),
      invalid_state);
}

TEST(SuspensionJson, Parses) {
  auto const psi = suspension_state_from_json(parse(
      R"({"a": "1/3", "base_depth": 1, "time_depth": 1, "weights": {"0:1": "1/4", "1:0": "3/4"}})"));
  EXPECT_EQ(psi.base_depth(), 1u);
  EXPECT_EQ(psi.time_depth(), 1u);
  EXPECT_EQ(psi.weight(0, 1), Rational(1, 4));
  EXPECT_EQ(psi.weight(1, 0), Rational(3, 4));
  EXPECT_EQ(psi.slice_mass(0), Rational(3, 4));
}

TEST(SuspensionJson, Malformed) {
  for (char const* text : {
           R"({"a": "1/3", "base_depth": 1, "time_depth": 1, "weights": {"0": "1"}})",
           R"({"a": "1/3", "base_depth": 1, "time_depth": 1, "weights": {"0:2": "1"}})",
           R"({"a": "1/3", "base_depth": 1, "time_depth": 1, "weights": {"0:x": "1"}})",
           R"({"a": "1/3", "base_depth": 1, "time_depth": 1, "weights": {"0:1z": "1"}})",
           R"({"a": "1/3", "base_depth": 1, "time_depth": 1, "weights": {"00:0": "1"}})",
           R"({"a": "1/3", "base_depth": 1, "weights": {"0:0": "1"}})",
           R"({"a": "1/3", "base_depth": 20, "time_depth": 10, "weights": {}})",
       }) {
    EXPECT_THROW(suspension_state_from_json(parse(text)), malformed_input) << text;
  }
}

TEST(StateJson, Dispatch) {
  auto const cyl = state_from_json(parse(R"({"a": "1/4", "depth": 0, "weights": {"": "1"}})"));
  EXPECT_TRUE(std::holds_alternative<CylinderState>(cyl));
  auto const susp =
      state_from_json(parse(R"({"a": "1/4", "base_depth": 0, "time_depth": 0, "weights": {":0": "1"}})"));
  EXPECT_TRUE(std::holds_alternative<SuspensionState>(susp));
  EXPECT_THROW(state_from_json(parse("3")), malformed_input);
}

TEST(StateJson, RoundTrip) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    BernoulliParam const p(Rational(1 + trial % 5, 10));
    auto const phi = random_state(p, trial % 6, rng);
    auto const back = cylinder_state_from_json(Json::parse(state_to_json(phi).dump()));
    EXPECT_EQ(back.weights(), phi.weights());
    EXPECT_EQ(back.param(), phi.param());

    auto const psi = random_suspension_state(p, trial % 4, trial % 3, rng);
    auto const again = std::get<SuspensionState>(state_from_json(Json::parse(state_to_json(psi).dump())));
    EXPECT_EQ(again.weights(), psi.weights());
    EXPECT_EQ(again.time_depth(), psi.time_depth());
  }
}

TEST(IntervalJson, RoundTrip) {
  TVInterval const iv{Rational(1, 3), Rational(2, 3)};
  auto const doc = interval_to_json(iv, 4);
  EXPECT_EQ(doc.at("decimal_lo"), "0.3333");
  EXPECT_EQ(doc.at("decimal_hi"), "0.6667");
  EXPECT_EQ(interval_from_json(doc), iv);
}

TEST(UnitaryJson, Shape) {
  auto const doc = unitary_to_json(eigen_unitary(2, 3));
  EXPECT_EQ(doc.at("order"), 4);
  EXPECT_EQ(doc.at("exponents").at("1"), 3);
  EXPECT_EQ(doc.at("exponents").at("3"), 1);
}
