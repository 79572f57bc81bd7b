#include <gtest/gtest.h>

#include <string>

#include "renyi/experiments.hpp"
#include "renyi/io.hpp"

using namespace renyi;

namespace {

const std::string kLp =
    R"({"schema": 1, "objective": [1], "A": {"rows": [0], "cols": [0], "vals": [1]},
        "b": [1], "cones": [{"kind": "nonneg", "n": 1}], "start": [1]})";

std::string parse_message(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

std::string replaced(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST(Io, ParsesLpToy) {
  const ConicProblem p = parse_problem(kLp);
  EXPECT_EQ(p.rows, 1);
  EXPECT_EQ(p.dim(), 1);
  ASSERT_TRUE(p.start.has_value());
  const SolveResult r = solve(p, SolverConfig{});
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_NEAR(r.objective_value, 1.0, 1e-8);
}

TEST(Io, SyntaxErrorsCarryPosition) {
  const std::string msg = parse_message("{\"schema\": 1,\n \"objective\": [1,]}");
  EXPECT_NE(msg.find("line 2, column 18"), std::string::npos) << msg;
}

TEST(Io, SchemaErrorsCarryPointer) {
  EXPECT_NE(parse_message(replaced(kLp, "\"start\"", "\"begin\"")).find("/begin: unknown key"),
            std::string::npos);
  EXPECT_NE(parse_message(replaced(kLp, "\"n\": 1}", "\"n\": 1, \"alpha\": 2}")).find("/cones/0/alpha"),
            std::string::npos);
  EXPECT_NE(parse_message(replaced(kLp, "\"rows\": [0]", "\"rows\": [0.5]")).find("/A/rows/0"),
            std::string::npos);
  EXPECT_NE(parse_message(replaced(kLp, "\"rows\": [0]", "\"rows\": [1]")).find("/A/rows/0"),
            std::string::npos);
  EXPECT_NE(parse_message(replaced(kLp, "\"schema\": 1", "\"schema\": 2")).find("/schema"),
            std::string::npos);
  EXPECT_NE(parse_message(replaced(kLp, "\"start\": [1]", "\"start\": [1, 2]")).find("/start"),
            std::string::npos);
  EXPECT_NE(parse_message(replaced(kLp, "\"nonneg\"", "\"cube\"")).find("unknown cone kind"),
            std::string::npos);
  EXPECT_NE(parse_message(replaced(kLp, "\"objective\": [1]", "\"objective\": [\"1\"]"))
                .find("/objective/0: expected a number"),
            std::string::npos);
  EXPECT_FALSE(parse_message(replaced(kLp, "\"objective\": [1]", "\"objective\": [1, 1]")).empty());
}

TEST(Io, RenyiConeKeys) {
  const std::string hypo =
      R"({"schema": 1, "objective": [0, 0, 0], "A": {"rows": [], "cols": [], "vals": []}, "b": [],
          "cones": [{"kind": "renyi_hypo", "n": 1, "alpha": 0.75, "field": "real"}]})";
  const ConicProblem p = parse_problem(hypo);
  ASSERT_EQ(p.cones.size(), 1u);
  EXPECT_EQ(p.cones[0], ConeKind::renyi_hypo(1, 0.75, Field::Real));
  EXPECT_FALSE(parse_message(replaced(hypo, ", \"alpha\": 0.75", "")).empty());
  EXPECT_FALSE(parse_message(replaced(hypo, "0.75", "1.5")).empty());
  EXPECT_FALSE(parse_message(replaced(hypo, "\"real\"", "\"quaternion\"")).empty());
}

TEST(Io, RoundTripIsExact) {
  const ConicProblem p = rate_distortion_problem(2, 0.2, 0.75);
  const ConicProblem q = parse_problem(problem_to_json(p).dump());
  EXPECT_EQ(q.c, p.c);
  EXPECT_EQ(q.b, p.b);
  ASSERT_TRUE(q.start.has_value());
  EXPECT_EQ(*q.start, *p.start);
  EXPECT_EQ(q.cones, p.cones);
  EXPECT_EQ(q.dense_A(), p.dense_A());
}

TEST(Io, ReportHelpers) {
  const Json m = matrix_json(identity(2));
  EXPECT_EQ(m["re"][1][1], 1.0);
  EXPECT_EQ(m["im"][0][1], 0.0);
  VerificationReport r;
  r.property_name = "x";
  const Json v = verification_json(r);
  EXPECT_FALSE(v.contains("statistic"));
  EXPECT_EQ(cone_kind_name(ConeType::RenyiPerspEpi), "renyi_persp_epi");
  EXPECT_FALSE(library_version().empty());
}
