// Runs the qfit binary end to end and checks reports against the shipped schema.

#include <gtest/gtest.h>

#include <qfit/cli.hpp>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Result {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / (std::string("qfit_cli_") + info->name() + "_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  fs::path write(const std::string& name, const json& j) {
    fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p;
  }

  Result run(const std::string& args) {
    fs::path out = dir / "out.txt";
    fs::remove(out);
    std::string cmd = std::string(QFIT_CLI_PATH) + " " + args + " --out " + out.string() + " 2>" + (dir / "err.txt").string();
    int st = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
  }

  Result run_config(const std::string& sub, const json& cfg, const std::string& extra = "") {
    return run(sub + " --config " + write("cfg.json", cfg).string() + " " + extra);
  }
};

// ---------------------------------------------------------------------------
// minimal validator for the keywords the report schema uses

class Validator {
 public:
  explicit Validator(json root) : root_(std::move(root)) {}

  bool valid(const json& x) const { return check(root_, x); }

 private:
  json root_;

  const json& resolve(const std::string& ref) const {
    // only local "#/$defs/name" references
    return root_.at("$defs").at(ref.substr(ref.rfind('/') + 1));
  }

  static bool has_type(const std::string& t, const json& x) {
    if (t == "null") return x.is_null();
    if (t == "object") return x.is_object();
    if (t == "array") return x.is_array();
    if (t == "string") return x.is_string();
    if (t == "number") return x.is_number();
    if (t == "integer") return x.is_number_integer() || x.is_number_unsigned();
    if (t == "boolean") return x.is_boolean();
    return false;
  }

  bool check(const json& s, const json& x) const {
    if (s.contains("$ref")) return check(resolve(s["$ref"]), x);
    if (s.contains("oneOf")) {
      int n = 0;
      for (const auto& sub : s["oneOf"]) n += check(sub, x);
      if (n != 1) return false;
    }
    if (s.contains("const") && s["const"] != x) return false;
    if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), x) == s["enum"].end()) return false;
    if (s.contains("type") && !has_type(s["type"], x)) return false;
    if (s.contains("minimum") && x.is_number() && x.get<double>() < s["minimum"].get<double>()) return false;
    if (x.is_object()) {
      if (s.contains("required"))
        for (const auto& k : s["required"])
          if (!x.contains(k.get<std::string>())) return false;
      for (auto it = x.begin(); it != x.end(); ++it) {
        if (s.contains("properties") && s["properties"].contains(it.key())) {
          if (!check(s["properties"][it.key()], it.value())) return false;
        } else if (s.contains("additionalProperties")) {
          const json& ap = s["additionalProperties"];
          if (ap.is_boolean() ? !ap.get<bool>() : !check(ap, it.value())) return false;
        }
      }
    }
    if (x.is_array() && s.contains("items"))
      for (const auto& e : x)
        if (!check(s["items"], e)) return false;
    return true;
  }
};

Validator schema() {
  std::ifstream in(std::string(QFIT_SOURCE_DIR) + "/docs/qfit-report-1.schema.json");
  return Validator(json::parse(in));
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

double binary_entropy(double p) {
  auto f = [](double x) { return x > 0 ? -x * std::log(x) : 0.0; };
  return f(p) + f(1 - p);
}

TEST_F(Cli, ModelsListing) {
  Result r = run("models");
  ASSERT_EQ(r.code, 0);
  int lines = 0;
  std::istringstream in(r.out);
  std::string line, su2, kac;
  while (std::getline(in, line)) {
    ++lines;
    if (line.rfind("su2_subH", 0) == 0) su2 = line;
    if (line.rfind("kac", 0) == 0) kac = line;
  }
  EXPECT_GE(lines, 6);
  EXPECT_NE(su2.find("§6.3"), std::string::npos);
  EXPECT_NE(kac.find("Thm 7.7"), std::string::npos);
}

TEST_F(Cli, AnalyzeDephasing) {
  Result r = run_config("analyze", {{"model", {{"type", "dephase"}, {"spectrum", {0.0, 2.0}}}}});
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_TRUE(schema().valid(j));
  EXPECT_EQ(j["schema"], "qfit-report/1");
  EXPECT_NEAR(j["gap"].get<double>(), 4.0, 1e-9);
  EXPECT_NEAR(j["values"]["schur_lower"].get<double>(), 4 / (2 * std::log(4.0)), 1e-12);
  EXPECT_NEAR(j["indices"]["C_cb"].get<double>(), 2.0, 1e-12);
  EXPECT_NEAR(j["cmlsi"]["upper"].get<double>(), 8.0, 1e-9);
  auto prov = j["provenance"].get<std::vector<std::string>>();
  EXPECT_NE(std::find(prov.begin(), prov.end(), "schur-multiplier"), prov.end());
}

TEST_F(Cli, DesignReportsBothEdgeIndices) {
  Result r = run_config("analyze", {{"model", {{"type", "design"}, {"graph", {{"n", 2}}}, {"d", 2}, {"k", 1}}}});
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_TRUE(schema().valid(j));
  // the first-moment twirl on C^4 is the trace: index 4^2; the closed form gives binom(8, 1)
  EXPECT_NEAR(j["values"]["edge_index_blocks"].get<double>(), 16.0, 1e-9);
  EXPECT_NEAR(j["values"]["edge_index_binomial"].get<double>(), 8.0, 1e-12);
  bool flagged = false;
  for (const auto& n : j["notes"]) flagged |= n.get<std::string>().rfind("edge index", 0) == 0;
  EXPECT_TRUE(flagged);
}

TEST_F(Cli, AnalyzeSu2MatchesPublishedConstants) {
  Result r = run_config("analyze", {{"model", {{"type", "su2_subH"}, {"m", 3}}}});
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_TRUE(schema().valid(j));
  EXPECT_NEAR(j["uncertainty"]["lambda1"].get<double>(), 1.0 / 3, 1e-12);
  EXPECT_NEAR(j["uncertainty"]["lambda2"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["uncertainty"]["c1"].get<double>(), 24.0, 1e-9);
  EXPECT_NEAR(j["uncertainty"]["c2"].get<double>(), 5.5, 1e-9);
  EXPECT_NEAR(j["cmlsi"]["lower"].get<double>(), 1 / (3 * std::log(6.0)), 1e-12);
}

TEST_F(Cli, EveryModelValidates) {
  const json models = json::array({
      {{"type", "su2_full"}, {"m", 2}},
      {{"type", "nnrt"}, {"graph", {{"kind", "path"}, {"n", 3}}}, {"d", 2}},
      {{"type", "design"}, {"graph", {{"kind", "path"}, {"n", 2}}}, {"d", 2}, {"k", 1}, {"mu", "haar"}},
      {{"type", "design"}, {"graph", {{"kind", "path"}, {"n", 2}}}, {"d", 2}, {"mu", {{"kind", "random"}, {"count", 2}}}},
      {{"type", "kac"}, {"n", 4}, {"d", 2}, {"spec", "haar"}, {"lambda0", 0.5}},
  });
  const Validator v = schema();
  for (const auto& m : models) {
    Result r = run_config("analyze", {{"model", m}, {"seed", 5}});
    ASSERT_EQ(r.code, 0) << m.dump();
    EXPECT_TRUE(v.valid(json::parse(r.out))) << m.dump();
  }
  // custom jump list, thermal qubit
  const double p0 = 0.7, p1 = 0.3, w = std::log(p1 / p0);
  json file = {{"jumps", {{{"A", {{0, 1}, {0, 0}}}, {"omega", w}}, {{"A", {{0, 0}, {1, 0}}}, {"omega", -w}}}},
               {"sigma", {{p0, 0}, {0, p1}}}};
  write("thermal.json", file);
  Result r = run_config("analyze", {{"model", {{"type", "custom"}, {"file", "thermal.json"}}}});
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_TRUE(v.valid(j));
  // populations relax at 2 (e^{-w/2} + e^{w/2}), coherences at half that
  const double rate = std::exp(-w / 2) + std::exp(w / 2);
  EXPECT_NEAR(j["gap"].get<double>(), rate, 1e-9);
}

TEST_F(Cli, HadamardDephasingDecay) {
  json cfg = {{"model", {{"type", "dephase"}, {"spectrum", {0.0, 2.0}}}},
              {"initial_state", "hadamard"},
              {"t_grid", {0.0, 0.1, 0.25, 0.5, 1.0, 2.0}}};
  Result r = run_config("decay", cfg);
  ASSERT_EQ(r.code, 0);
  std::string header;
  auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "t,relative_entropy,certified_bound,alpha,seed");
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& row : rows) {
    const double t = row[0];
    EXPECT_NEAR(row[1], std::log(2.0) - binary_entropy((1 + std::exp(-4 * t)) / 2), 1e-6) << t;
    EXPECT_LE(row[1], row[2] + 1e-12);
  }
}

TEST_F(Cli, DecayAtTimeZeroIsSingleRow) {
  Result r = run_config("decay", {{"model", {{"type", "su2_subH"}, {"m", 3}}}, {"t_grid", {0.0}}, {"ancilla", 2}});
  ASSERT_EQ(r.code, 0);
  std::string header;
  auto rows = parse_csv(r.out, &header);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][0], 0.0);
  EXPECT_EQ(rows[0][1], rows[0][2]);
}

TEST_F(Cli, CertifySingleSuitePasses) {
  Result r = run_config("certify", {{"samples", 20}}, "--suite sandwich");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_TRUE(schema().valid(j));
  EXPECT_EQ(j["failed"], 0);
  ASSERT_EQ(j["suites"].size(), 1u);
  EXPECT_EQ(j["suites"][0]["name"], "sandwich");
}

TEST_F(Cli, BrokenConstantFailsCertification) {
  Result r = run_config("certify", {{"samples", 30}, {"suite", "at"}, {"constant", 0.5}});
  EXPECT_EQ(r.code, 4);
  json j = json::parse(r.out);
  EXPECT_GT(j["failed"].get<long>(), 0);
  EXPECT_TRUE(schema().valid(j));
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run_config("certify", {{"samples", 5}}, "--suite nonsense").code, 2);
  EXPECT_EQ(run("analyze --config " + (dir / "missing.json").string()).code, 2);
  EXPECT_EQ(run_config("analyze", {{"model", {{"type", "bogus"}}}}).code, 2);
  EXPECT_EQ(run_config("analyze", {{"model", {{"type", "su2_subH"}, {"m", 20}}}}).code, 2);
  EXPECT_EQ(run_config("decay", {{"model", {{"type", "su2_subH"}, {"m", 3}}}, {"t_grid", {1.0, 0.5}}}).code, 2);
  EXPECT_EQ(run_config("certify", {{"samples", 0}}).code, 2);
  EXPECT_EQ(run_config("analyze", json::object()).code, 2);
  // 2^7 exceeds the dense budget
  EXPECT_EQ(run_config("analyze", {{"model", {{"type", "nnrt"}, {"graph", {{"kind", "path"}, {"n", 7}}}, {"d", 2}}}}).code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, ReproducibleOutput) {
  json cfg = {{"model", {{"type", "kac"}, {"n", 3}, {"d", 2}, {"spec", {{"hamiltonian", "z"}, {"count", 2}}}}}, {"seed", 9}};
  Result a = run_config("analyze", cfg), b = run_config("analyze", cfg);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  Result c = run_config("decay", cfg), d = run_config("decay", cfg);
  EXPECT_EQ(c.out, d.out);
  Result e = run_config("certify", {{"samples", 10}, {"seed", 3}}, "--suite dpi"), f = run_config("certify", {{"samples", 10}, {"seed", 3}}, "--suite dpi");
  EXPECT_EQ(e.out, f.out);
  // the command-line seed wins over the config
  Result g = run_config("analyze", cfg, "--seed 11");
  EXPECT_EQ(json::parse(g.out)["seed"], 11);
}

// ---------------------------------------------------------------------------
// in-process helpers

TEST(CliUnits, NumberFormatting) {
  using qfit::cli::format_number;
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0 / 3), "0.33333333333333331");
  EXPECT_EQ(format_number(qfit::kInf), "\"inf\"");
  EXPECT_EQ(qfit::cli::dump_json(json{{"x", qfit::cli::number(-qfit::kInf)}}), "{\n  \"x\": \"-inf\"\n}\n");
}

TEST(CliUnits, MatrixParsing) {
  auto M = qfit::cli::parse_matrix(json::parse("[[1, [0, 2]], [[0, -2], 3]]"), "m");
  EXPECT_EQ(M(0, 1), qfit::cplx(0, 2));
  EXPECT_EQ(M(1, 1), qfit::cplx(3, 0));
  EXPECT_THROW(qfit::cli::parse_matrix(json::parse("[[1, 2], [3]]"), "m"), qfit::cli::ConfigError);
}

TEST(CliUnits, SchemaRejectsMalformedReports) {
  qfit::ConstantsReport r;
  r.model_id = "x";
  json good = qfit::cli::report_json(r);
  const Validator v = schema();
  EXPECT_TRUE(v.valid(good));
  json missing = good;
  missing.erase("gap");
  EXPECT_FALSE(v.valid(missing));
  json extra = good;
  extra["surprise"] = 1;
  EXPECT_FALSE(v.valid(extra));
  json wrong = good;
  wrong["schema"] = "qfit-report/2";
  EXPECT_FALSE(v.valid(wrong));
  json text = good;
  text["gap"] = "big";
  EXPECT_FALSE(v.valid(text));
}

TEST(CliUnits, GraphParsing) {
  EXPECT_EQ(qfit::cli::parse_graph(json::parse(R"({"kind": "cycle", "n": 4})")).edges.size(), 4u);
  auto g = qfit::cli::parse_graph(json::parse(R"({"n": 3, "edges": [[0, 2]]})"));
  EXPECT_EQ(g.edges.size(), 1u);
  EXPECT_THROW(qfit::cli::parse_graph(json::parse(R"({"kind": "star", "n": 4})")), qfit::cli::ConfigError);
}

}  // namespace
