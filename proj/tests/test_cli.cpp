#include <dyadic_cli.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  dyadic::Json json() const { return dyadic::Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "dyadic");
  std::vector<char const*> argv;
  for (auto const& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int const code = dyadic::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string demo(char const* name) { return std::string(DYADIC_DEMO_DIR) + "/" + name; }

std::string temp_file(std::string const& name, std::string const& body) {
  auto const path = std::filesystem::temp_directory_path() / ("dyadic_cli_" + name);
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(CliLemma, Quarter) {
  auto const r = run({"lemma", "--a", "1/4"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const doc = r.json();
  EXPECT_EQ(doc.at("value"), "1");
  EXPECT_EQ(doc.at("positive_half"), "1/2");
  EXPECT_EQ(doc.at("rn_integral"), "1");
  EXPECT_EQ(doc.at("verified"), true);
}

TEST(CliLemma, Half) {
  auto const r = run({"lemma", "--a", "1/2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json().at("value"), "0");
}

TEST(CliLemma, DomainErrors) {
  auto const r = run({"lemma", "--a", "2/3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("a must lie in (0, 1/2]"), std::string::npos) << r.err;
  EXPECT_EQ(run({"lemma", "--a", "0"}).code, 2);
  EXPECT_EQ(run({"lemma", "--a", "abc"}).code, 2);
  EXPECT_EQ(run({"lemma"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "lemma", "--a", "1/4"}).code, 2);
}

TEST(CliLemma, Csv) {
  auto const r = run({"--format", "csv", "--precision", "4", "lemma", "--a", "1/3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "quantity,exact,decimal");
  EXPECT_NE(r.out.find("value,2/3,0.6667"), std::string::npos) << r.out;
}

TEST(CliConverge, CylinderDemo) {
  auto const r = run({"--format", "csv", "converge", "--state", demo("state_depth2.json"), "--n-max", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "n,lo,hi,decimal_lo,decimal_hi,stabilized");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    auto const n = std::stoul(line.substr(0, line.find(',')));
    if (n >= 2) {
      EXPECT_EQ(line.substr(line.find(',') + 1, 4), "1,1,") << line;
      EXPECT_EQ(line.substr(line.rfind(',') + 1), "true") << line;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 7u);
}

TEST(CliConverge, SuspensionDemo) {
  auto const r = run({"converge", "--state", demo("suspension_state.json"), "--n-max", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const doc = r.json();
  EXPECT_EQ(doc.at("kind"), "suspension");
  for (auto const& row : doc.at("rows")) {
    if (row.at("n").get<int>() >= 2) {
      EXPECT_EQ(row.at("lo"), "2/3");
      EXPECT_EQ(row.at("hi"), "2/3");
    }
  }
}

TEST(CliConverge, Errors) {
  EXPECT_EQ(run({"converge", "--state", "/nonexistent/state.json"}).code, 3);
  EXPECT_EQ(run({"converge", "--state", temp_file("bad.json", "{not json")}).code, 3);
  EXPECT_EQ(run({"converge", "--state", temp_file("neg.json", R"({"a":"1/4","depth":1,"weights":{"0":"2","1":"-1"}})")}).code,
            3);
  EXPECT_EQ(run({"converge", "--state", temp_file("a.json", R"({"a":"3/4","depth":1,"weights":{"0":"1"}})")}).code, 3);
  EXPECT_EQ(run({"converge", "--state", demo("state_depth2.json"), "--a", "1/3"}).code, 2);
  EXPECT_EQ(run({"--depth", "1", "converge", "--state", demo("state_depth2.json")}).code, 2);
  EXPECT_EQ(run({"--depth", "23", "converge", "--state", demo("state_depth2.json")}).code, 2);
}

TEST(CliEigen, Basic) {
  auto const r = run({"eigen", "--n", "1", "--k", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const doc = r.json();
  EXPECT_EQ(doc.at("verdict"), "pass");
  EXPECT_EQ(doc.at("tau"), "1/2");
  EXPECT_EQ(doc.at("unitary").at("exponents").at("1"), 1);
}

TEST(CliEigen, Suspension) {
  auto const r = run({"eigen", "--n", "3", "--k", "1", "--suspension", "--s", "1,1/2,7/4"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const doc = r.json();
  EXPECT_EQ(doc.at("suspension_eigen").size(), 3u);
  EXPECT_EQ(doc.at("sample_points"), 64);
  EXPECT_EQ(doc.at("verdict"), "pass");

  auto const neg = run({"eigen", "--n", "2", "--k", "3", "--suspension", "--s", "-2", "--s", "-5/3"});
  ASSERT_EQ(neg.code, 0) << neg.err;
  EXPECT_TRUE(neg.json().at("suspension_eigen").contains("-2"));
  EXPECT_TRUE(neg.json().at("suspension_eigen").contains("-5/3"));
}

TEST(CliEigen, Errors) {
  EXPECT_EQ(run({"eigen", "--n", "3", "--k", "8"}).code, 2);
  EXPECT_EQ(run({"eigen", "--n", "0", "--k", "0"}).code, 2);
  EXPECT_EQ(run({"eigen", "--n", "17", "--k", "0"}).code, 2);
  EXPECT_EQ(run({"eigen", "--n", "2", "--k", "1", "--suspension", "--s", "x"}).code, 2);
}

TEST(CliTinv, Membership) {
  auto const r = run({"tinv", "--tau", "3/8,1/3", "--tau", "5/12"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const angles = r.json().at("angles");
  ASSERT_EQ(angles.size(), 3u);
  EXPECT_EQ(angles[0].at("member"), true);
  EXPECT_EQ(angles[0].at("cycle"), dyadic::Json::array({0}));
  EXPECT_EQ(angles[1].at("member"), false);
  EXPECT_EQ(angles[1].at("cycle_min_sq_distance"), "3.000000000000");
  EXPECT_EQ(angles[2].at("member"), false);
  EXPECT_EQ(run({"tinv", "--tau", "1/0"}).code, 2);
}

TEST(CliSeparate, Gap) {
  auto const r = run({"separate", "--a1", "1/4", "--a2", "1/3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const doc = r.json();
  EXPECT_EQ(doc.at("t1").at("exact"), "1");
  EXPECT_EQ(doc.at("t2").at("exact"), "2/3");
  EXPECT_EQ(doc.at("gap").at("exact"), "1/3");
  EXPECT_EQ(doc.at("separated"), true);
  EXPECT_EQ(run({"separate", "--a1", "1/4", "--a2", "2/8"}).code, 2);
  EXPECT_EQ(run({"separate", "--a1", "1/4", "--a2", "3/5"}).code, 2);
}

TEST(CliOracle, RandomStates) {
  auto const r = run({"--depth", "10", "oracle", "--a", "1/4", "--count", "3", "--m-max", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const doc = r.json();
  EXPECT_EQ(doc.at("verdict"), "pass");
  EXPECT_EQ(doc.at("rows").size(), 9u);
  EXPECT_EQ(run({"--depth", "10", "oracle", "--state", demo("state_depth2.json")}).code, 0);
  EXPECT_EQ(run({"--depth", "2", "oracle", "--a", "1/4"}).code, 2);
  EXPECT_EQ(run({"oracle", "--state", demo("suspension_state.json")}).code, 2);
}

TEST(CliOutput, Deterministic) {
  auto const first = run({"separate", "--a1", "1/10", "--a2", "2/5", "--seed", "9"});
  auto const second = run({"separate", "--a1", "1/10", "--a2", "2/5", "--seed", "9"});
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(run({"converge", "--state", demo("state_depth2.json")}).out,
            run({"converge", "--state", demo("state_depth2.json")}).out);
}

TEST(CliOutput, WritesFile) {
  auto const path = (std::filesystem::temp_directory_path() / "dyadic_cli_out.json").string();
  std::filesystem::remove(path);
  auto const r = run({"--out", path, "lemma", "--a", "1/4"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(dyadic::Json::parse(in).at("value"), "1");
}
