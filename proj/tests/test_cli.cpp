#include "offnet/cli/manifest.hpp"
#include "offnet/cli/run.hpp"
#include "offnet/cli/scenario.hpp"
#include "offnet/cli/table.hpp"
#include "offnet/errors.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

using namespace offnet;
using namespace offnet::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("offnet_test_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path &path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path write_text(const fs::path &dir, const std::string &name, const std::string &text) {
    const fs::path p = dir / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

fs::path scenario_file(const std::string &name) { return fs::path(OFFNET_SCENARIO_DIR) / name; }

std::size_t line_count(const std::string &text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_verb(const std::string &verb, const fs::path &scenario, const fs::path &out_dir) {
    RunOptions o;
    o.verb = verb;
    o.scenario_path = scenario.string();
    o.out_dir = out_dir.string();
    o.quiet = true;
    std::ostringstream out, err;
    const int code = run(o, out, err);
    return {code, out.str(), err.str()};
}

json base_doc() {
    return json::parse(R"({"schema_version": 1, "regime": "exante_single",
                           "params": {"D0": 90, "alpha": 9, "pa": 3, "pd": 5}})");
}

} // namespace

TEST(Scenario, ParsesAndBroadcasts) {
    auto doc = json::parse(R"({"schema_version": 1, "regime": "exante_multi",
                               "params": {"D0": 100, "alpha": 10, "beta": 2, "pa": [0, 1, 2], "gamma": 0.3}})");
    const auto s = parse_scenario(doc);
    EXPECT_EQ(s.params.n, 3u);
    EXPECT_TRUE(s.params.gamma.isApprox(Vector::Constant(3, 0.3)));
    EXPECT_TRUE(s.params.pd.isZero());
    EXPECT_EQ(s.regime, "exante_multi");
}

TEST(Scenario, RejectsUnknownKeysAndBadStructure) {
    auto doc = base_doc();
    doc["colour"] = "blue";
    EXPECT_THROW(parse_scenario(doc), SchemaError);

    doc = base_doc();
    doc["params"]["delta"] = 1;
    EXPECT_THROW(parse_scenario(doc), SchemaError);

    doc = base_doc();
    doc["schema_version"] = 2;
    EXPECT_THROW(parse_scenario(doc), SchemaError);

    doc = base_doc();
    doc.erase("regime");
    EXPECT_THROW(parse_scenario(doc), SchemaError);

    doc = base_doc();
    doc["regime"] = "barter";
    EXPECT_THROW(parse_scenario(doc), SchemaError);

    doc = base_doc();
    doc["params"]["alpha"] = "nine";
    EXPECT_THROW(parse_scenario(doc), SchemaError);
}

TEST(Scenario, SweepAxisValidation) {
    auto doc = base_doc();
    doc["sweep"] = {{"parameter", "pa[0]"}, {"from", 0}, {"to", 10}, {"samples", 1}};
    EXPECT_THROW(parse_scenario(doc), SchemaError);
    doc["sweep"]["samples"] = 3;
    doc["sweep"]["parameter"] = "kappa";
    EXPECT_THROW(parse_scenario(doc), SchemaError);
    doc["sweep"]["parameter"] = "pa[0]";
    const auto s = parse_scenario(doc);
    ASSERT_TRUE(s.sweep.has_value());
    EXPECT_DOUBLE_EQ(s.sweep->value(1), 5.0);
}

TEST(Scenario, InvalidParametersAreDistinct) {
    auto doc = base_doc();
    doc["params"]["alpha"] = -1;
    EXPECT_THROW(parse_scenario(doc), InvalidParameters);
}

TEST(Scenario, ParameterOverride) {
    const auto p = GameParameters::multi(100, 10, 2, Eigen::Vector2d(0, 0));
    EXPECT_DOUBLE_EQ(with_parameter(p, "pa[1]", 80).pa[1], 80.0);
    EXPECT_DOUBLE_EQ(with_parameter(p, "D0", 50).D0, 50.0);
    EXPECT_THROW(with_parameter(p, "pa[2]", 1), SchemaError);
}

TEST(Csv, QuotingAndNumbers) {
    EXPECT_EQ(csv_escape("plain"), "plain");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(169.0), "169");
    EXPECT_EQ(format_number(1e-20), "1e-20");
}

TEST(Csv, LineCounts) {
    TempDir dir;
    Table t{{"a", "b,c"}, {}};
    emit_csv(t, dir.path() / "empty.csv");
    const std::string empty = slurp(dir.path() / "empty.csv");
    EXPECT_EQ(empty, "a,\"b,c\"\n");

    t.add_row({1.5, std::string("x")});
    emit_csv(t, dir.path() / "one.csv");
    EXPECT_EQ(line_count(slurp(dir.path() / "one.csv")), 2u);
    EXPECT_EQ(slurp(dir.path() / "one.csv").find('\r'), std::string::npos);

    EXPECT_THROW(t.add_row({1.0}), Error);
    EXPECT_THROW(emit_csv(t, dir.path() / "missing" / "x.csv"), OutputError);
}

TEST(Run, SolveWritesOneRecordAndManifest) {
    TempDir dir;
    const auto r = run_verb("solve", scenario_file("exante_single.json"), dir.path());
    ASSERT_EQ(r.code, kOk) << r.err;
    const std::string csv = slurp(dir.path() / "solve.csv");
    EXPECT_EQ(csv, "regime,ps,pc,pd,p_net,demand,u_isp,u_cp\n"
                   "ex-ante,-0.666666667,6.33333333,5,5.66666667,39,169,169\n");
    EXPECT_TRUE(verify_manifest(dir.path()));
    const auto manifest = json::parse(slurp(dir.path() / "manifest.json"));
    ASSERT_EQ(manifest["files"].size(), 1u);
    EXPECT_EQ(manifest["files"][0]["path"], "solve.csv");
    EXPECT_EQ(manifest["files"][0]["sha256"], sha256_file(dir.path() / "solve.csv"));
    EXPECT_EQ(manifest["scenario"]["regime"], "exante_single");
    EXPECT_EQ(manifest["verb"], "solve");
}

TEST(Run, ManifestDetectsTampering) {
    TempDir dir;
    ASSERT_EQ(run_verb("solve", scenario_file("exante_single.json"), dir.path()).code, kOk);
    std::ofstream(dir.path() / "solve.csv", std::ios::app) << "extra\n";
    EXPECT_FALSE(verify_manifest(dir.path()));
}

TEST(Run, DeterministicOutputs) {
    for (const auto &[verb, file] : std::vector<std::pair<std::string, std::string>>{
             {"solve", "exante_multi.json"}, {"dynamics", "dynamics.json"}, {"collude", "collusion.json"},
             {"compare", "compare.json"}, {"sweep", "collusion_sweep.json"}}) {
        TempDir a, b;
        ASSERT_EQ(run_verb(verb, scenario_file(file), a.path()).code, kOk) << verb;
        ASSERT_EQ(run_verb(verb, scenario_file(file), b.path()).code, kOk) << verb;
        const auto manifest = json::parse(slurp(a.path() / "manifest.json"));
        for (const auto &f : manifest["files"]) {
            const std::string name = f["path"];
            EXPECT_EQ(slurp(a.path() / name), slurp(b.path() / name)) << verb << " " << name;
        }
    }
}

TEST(Run, DynamicsTrajectoryStep) {
    TempDir dir;
    ASSERT_EQ(run_verb("dynamics", scenario_file("dynamics.json"), dir.path()).code, kOk);
    std::istringstream csv(slurp(dir.path() / "trajectory.csv"));
    std::string header, row0, row1;
    std::getline(csv, header);
    std::getline(csv, row0);
    std::getline(csv, row1);
    EXPECT_EQ(header.rfind("t,ps1,ps2,pc1,pc2", 0), 0u) << header;
    EXPECT_EQ(row1.rfind("1,15.8333333,6.83333333,-2.83333333,34.1666667", 0), 0u) << row1;
}

TEST(Run, SweepHasOneRecordPerSample) {
    TempDir dir;
    ASSERT_EQ(run_verb("sweep", scenario_file("collusion_sweep.json"), dir.path()).code, kOk);
    EXPECT_EQ(line_count(slurp(dir.path() / "sweep.csv")), 34u);
}

TEST(Run, CompareVerdict) {
    TempDir dir;
    ASSERT_EQ(run_verb("compare", scenario_file("compare.json"), dir.path()).code, kOk);
    EXPECT_NE(slurp(dir.path() / "compare.csv").find("both prefer ex-post"), std::string::npos);
}

TEST(Run, VerifyPasses) {
    TempDir dir;
    for (const char *file : {"exante_single.json", "exante_multi.json", "collusion.json", "expost_survivor.json"}) {
        const auto r = run_verb("verify", scenario_file(file), dir.path());
        EXPECT_EQ(r.code, kOk) << file << ": " << r.err;
    }
}

TEST(Run, ExitCodes) {
    TempDir dir;
    const auto missing = run_verb("solve", dir.path() / "nope.json", dir.path() / "o1");
    EXPECT_EQ(missing.code, kUnreadable);
    EXPECT_EQ(line_count(missing.err), 1u);

    const auto garbled = run_verb("solve", write_text(dir.path(), "bad.json", "{ not json"), dir.path() / "o2");
    EXPECT_EQ(garbled.code, kUnreadable);

    auto doc = base_doc();
    doc["extra"] = true;
    const auto schema = run_verb("solve", write_text(dir.path(), "schema.json", doc.dump()), dir.path() / "o3");
    EXPECT_EQ(schema.code, kSchema);
    EXPECT_EQ(line_count(schema.err), 1u);

    doc = base_doc();
    doc["params"]["D0"] = 0;
    const auto invalid = run_verb("solve", write_text(dir.path(), "invalid.json", doc.dump()), dir.path() / "o4");
    EXPECT_EQ(invalid.code, kInvalidParameters);
    EXPECT_NE(invalid.err.find("D0 > 0 violated"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir.path() / "o4" / "solve.csv"));

    const auto unknown = run_verb("frobnicate", scenario_file("exante_single.json"), dir.path() / "o5");
    EXPECT_EQ(unknown.code, kUsage);
}
