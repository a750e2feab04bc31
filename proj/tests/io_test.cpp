#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "cpx/config.hpp"
#include "cpx/io.hpp"

using namespace cpx;

namespace {

const TriangleBody kTwoThree{2, 3};

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(IoJson, PolynomialRoundTrip) {
  CPolynomial p(kTwoThree);
  p.add_term({3, 0}, {1.5, -0.25});
  p.add_term({0, 2}, {0.0, 2.0});
  p.add_term({1, 1}, {-1e-17, 3.0});
  const auto q = io::polynomial_from_json(nlohmann::json::parse(io::to_json(p).dump()));
  EXPECT_EQ(q.body().a(), 2);
  EXPECT_EQ(q.terms(), p.terms());
  EXPECT_THROW(io::polynomial_from_json(nlohmann::json::parse(R"({"a":1})")), ConfigError);
}

TEST(IoJson, NonFiniteNumbers) {
  EXPECT_EQ(io::number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_TRUE(std::isinf(io::parse_number(io::number(std::numeric_limits<double>::infinity()))));
  EXPECT_TRUE(std::isnan(io::parse_number("nan")));
  EXPECT_EQ(io::parse_number(0.5), 0.5);
  EXPECT_THROW(io::parse_number("x"), ConfigError);
}

TEST(IoCsv, PointCloudRoundTrip) {
  const std::vector<CPoint> pts{{{0.1, -0.2}, {1.0 / 3.0, 0.0}}, {{1e-300, 2.0}, {-5.0, 7.25}}};
  std::stringstream ss;
  io::write_point_cloud_csv(ss, pts, {0.5, 2.0});
  const auto pc = io::read_point_cloud_csv(ss);
  EXPECT_EQ(pc.points, pts);
  EXPECT_EQ(pc.weights, (std::vector<double>{0.5, 2.0}));
}

TEST(IoCsv, PointCloudErrorsNameTheLine) {
  auto err = [](const std::string& text) {
    std::stringstream ss(text);
    try {
      io::read_point_cloud_csv(ss);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(err("x,y\n").find("line 1"), std::string::npos);
  EXPECT_NE(err("re1,im1,re2,im2\n1,2,3,4\n1,2,3\n").find("line 3"), std::string::npos);
  EXPECT_NE(err("re1,im1,re2,im2\n1,2,3,abc\n").find("line 2"), std::string::npos);
  EXPECT_NE(err("re1,im1,re2,im2\n").find("no points"), std::string::npos);
}

TEST(Config, DefaultsAndRoundTrip) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c, RunConfig{});

  RunConfig r;
  r.a = 2;
  r.b = 3;
  r.set = ReinhardtSpec{{{0.8, 1.2}, {0.4, 1.2}}, 24};
  r.degrees = {1, 3, 5};
  r.zeta = CPoint{{1.0, 0.0}, {0.5, 0.25}};
  r.family = "l2-monic";
  r.acceptance.tolerances["c1.envelope(1,1)"] = 0.05;
  const auto text = to_json(r).dump(2);
  const auto back = parse_config(text);
  EXPECT_EQ(back, r);
  EXPECT_EQ(to_json(back).dump(2), text);

  RunConfig pc;
  pc.set = PointCloudSpec{"cloud.csv", true};
  EXPECT_EQ(parse_config(to_json(pc).dump()), pc);
}

TEST(Config, ValidationMessagesAreLocated) {
  const std::string bad_gcd = "{\n  \"body\": {\"a\": 2, \"b\": 4}\n}";
  const auto m1 = message_of(bad_gcd);
  EXPECT_NE(m1.find("$.body"), std::string::npos) << m1;
  EXPECT_NE(m1.find("line 2"), std::string::npos) << m1;
  EXPECT_NE(m1.find("gcd"), std::string::npos) << m1;

  const auto m2 = message_of("{\n\"set\": {\"type\": \"torus\",\n \"m\": 3}}");
  EXPECT_NE(m2.find("$.set.m"), std::string::npos) << m2;
  EXPECT_NE(m2.find("line 3"), std::string::npos) << m2;

  const auto m3 = message_of("{\"degree\": 2,\n \"bogus\": 1}");
  EXPECT_NE(m3.find("unknown key"), std::string::npos) << m3;
  EXPECT_NE(m3.find("line 2"), std::string::npos) << m3;

  const auto m4 = message_of("{\n  \"degree\": ,\n}");
  EXPECT_NE(m4.find("parse error at line 2"), std::string::npos) << m4;
}

TEST(Config, RejectsInvalidValues) {
  for (const char* text : {R"({"degree": -1})", R"({"degrees": [2, -1]})", R"({"grid": {"count": 3}})",
                           R"({"boundary_m": 2})", R"({"solver": {"tol": 0}})", R"({"solver": {"tol": -1e-3}})",
                           R"({"family": ""})", R"({"family": "fourier"})", R"({"lambda_ladder": [1e6, 1e3]})",
                           R"({"lambda_ladder": [5]})", R"({"direction": 1.0})",
                           R"x({"acceptance": {"tolerances": {"c1.envelope(1,1)": 0}}})x",
                           R"({"set": {"type": "reinhardt", "profile": []}})", R"({"set": {"type": "sphere"}})",
                           R"({"degree": 2.5})", R"([1, 2])"})
    EXPECT_THROW(parse_config(text), ConfigError) << text;
}

TEST(Config, BuildsTheConfiguredSet) {
  auto c = parse_config(R"({"set": {"type": "torus", "r1": 0.5, "r2": 2, "m": 8}})");
  const auto k = build_set(c);
  EXPECT_EQ(k.size(), 64u);
  EXPECT_TRUE(k.circled());
  EXPECT_NEAR(std::abs(k.points()[5].z2), 2.0, 1e-15);
  c = parse_config(R"({"set": {"type": "point_cloud", "path": "/nonexistent/cloud.csv"}})");
  EXPECT_THROW(build_set(c), ConfigError);
}
