#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "framekit/cli.hpp"
#include "framekit/io.hpp"

namespace framekit::cli {
namespace {

namespace fs = std::filesystem;

std::string data(const std::string& name) { return std::string(FRAMEKIT_TEST_DATA) + "/" + name; }

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "framekit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Scratch : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("framekit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }
    fs::path dir_;
};

io::Json json(const Result& r) { return io::Json::parse(r.out); }

TEST(Cli, BoundsOnOrthonormalBasis) {
    const auto r = call({"bounds", data("onb2.json")});
    ASSERT_EQ(r.code, ok) << r.err;
    const auto j = json(r);
    EXPECT_EQ(j.at("lower").get<double>(), 1.0);
    EXPECT_EQ(j.at("upper").get<double>(), 1.0);
    EXPECT_EQ(j.at("command"), "bounds");
}

TEST(Cli, HelpAndUsage) {
    auto r = call({"--help"});
    EXPECT_EQ(r.code, ok);
    EXPECT_NE(r.out.find("Exit codes"), std::string::npos);
    EXPECT_EQ(call({}).code, usage_error);
    EXPECT_EQ(call({"frobnicate"}).code, usage_error);
    EXPECT_EQ(call({"bounds"}).code, usage_error);
    EXPECT_EQ(call({"verify", "thm99"}).code, usage_error);
    EXPECT_EQ(call({"bounds", data("onb2.json"), "--format", "csv"}).code, usage_error);
    EXPECT_EQ(call({"bounds", data("onb2.json"), "--rank-tol", "0"}).code, usage_error);
}

TEST(Cli, MissingFileNamesPath) {
    const auto r = call({"bounds", "/nonexistent/frame.json"});
    EXPECT_EQ(r.code, usage_error);
    EXPECT_NE(r.err.find("cannot read file '/nonexistent/frame.json'"), std::string::npos) << r.err;
}

TEST_F(Scratch, DegenerateInputsExitThree) {
    EXPECT_EQ(call({"bounds", write("zero.json", R"({"dim": 2, "vectors": [[0, 0]]})")}).code, degenerate);
    EXPECT_EQ(call({"dual", write("line.json", R"({"dim": 2, "vectors": [[1, 0], [2, 0]]})")}).code, degenerate);
    EXPECT_EQ(call({"bounds", path("line.json")}).code, ok);
}

TEST_F(Scratch, ConstructThenSubframe) {
    const auto built = call({"construct", data("cor26_k1.json"), "--out", path("frame.json")});
    ASSERT_EQ(built.code, ok) << built.err;
    const auto r = call({"subframe", path("frame.json")});
    ASSERT_EQ(r.code, ok) << r.err;
    EXPECT_GE(json(r).at("report").at("riesz_lower").get<double>(), 1.0 / 16.0);
    EXPECT_TRUE(json(r).at("report").at("exhaustive").get<bool>());
    const auto sampled = call({"subframe", path("frame.json"), "--samples", "50", "--seed", "3"});
    ASSERT_EQ(sampled.code, ok);
    EXPECT_FALSE(json(sampled).at("report").at("exhaustive").get<bool>());
}

TEST_F(Scratch, ConstructSeedOverride) {
    const auto spec = data("recipe_nk1.json");
    const auto a = call({"construct", spec});
    const auto b = call({"construct", spec, "--seed", "11"});
    const auto c = call({"construct", spec, "--seed", "12"});
    ASSERT_EQ(a.code, ok);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
}

TEST(Cli, CoeffsAndDual) {
    const auto r = call({"coeffs", data("onb2.json"), "--vector", data("v2.json")});
    ASSERT_EQ(r.code, ok) << r.err;
    EXPECT_EQ(json(r).at("coefficients"), io::Json::parse("[1.0, 2.0]"));
    const auto d = call({"dual", data("onb2.json")});
    ASSERT_EQ(d.code, ok);
    EXPECT_EQ(json(d).at("dual").at("vectors"), io::Json::parse("[[1.0, 0.0], [0.0, 1.0]]"));
}

TEST_F(Scratch, ExtractBasis) {
    ASSERT_EQ(call({"construct", data("failing_dim8.json"), "--out", path("f.json")}).code, ok);
    const auto r = call({"extract-basis", path("f.json")});
    ASSERT_EQ(r.code, ok) << r.err;
    EXPECT_EQ(json(r).at("basis").at("indices").size(), 8u);
    EXPECT_LE(json(r).at("span_residual").get<double>(), 1e-8);
}

TEST_F(Scratch, ProjectJsonAndCsv) {
    ASSERT_EQ(call({"construct", data("recipe_nk1.json"), "--out", path("f.json")}).code, ok);
    const auto r = call({"project", path("f.json"), "--vector", data("ones8.json"), "--levels", "3..9", "--track",
                         "0,1"});
    ASSERT_EQ(r.code, ok) << r.err;
    EXPECT_EQ(json(r).at("diagnostics").at("levels").size(), 7u);
    EXPECT_EQ(json(r).at("diagnostics").at("tracked"), io::Json::parse("[0, 1]"));
    const auto csv = call({"project", path("f.json"), "--vector", data("ones8.json"), "--format", "csv",
                           "--permute", "4"});
    ASSERT_EQ(csv.code, ok) << csv.err;
    EXPECT_EQ(csv.out.rfind("level,l2_error,max_coord_error,max_dual_norm\n", 0), 0u);
    EXPECT_EQ(call({"project", path("f.json"), "--vector", data("ones8.json"), "--levels", "5..2"}).code, usage_error);
    EXPECT_EQ(call({"project", path("f.json"), "--vector", data("ones8.json"), "--permute",
                    write("p.json", "[0, 0]")}).code,
              usage_error);
}

TEST(Cli, VerifyPassesAndIsByteIdentical) {
    const auto a = call({"verify", "complements", "--trials", "200", "--seed", "7"});
    EXPECT_EQ(a.code, ok) << a.err;
    EXPECT_NE(a.err.find("complements: PASS"), std::string::npos);
    const auto b = call({"verify", "complements", "--trials", "200", "--seed", "7"});
    EXPECT_EQ(a.out, b.out);
}

TEST_F(Scratch, MalformedInputsAlwaysExitTwo) {
    const std::vector<std::string> corpus{
        "",
        "{",
        "[]",
        "null",
        "\"frame\"",
        R"({"dim": 2})",
        R"({"vectors": [[1, 0]]})",
        R"({"dim": "2", "vectors": [[1, 0]]})",
        R"({"dim": -2, "vectors": [[1, 0]]})",
        R"({"dim": 2.5, "vectors": [[1, 0]]})",
        R"({"dim": 0, "vectors": [[]]})",
        R"({"dim": 2, "vectors": []})",
        R"({"dim": 2, "vectors": [1, 0]})",
        R"({"dim": 2, "vectors": [[1]]})",
        R"({"dim": 2, "vectors": [[1, 0, 0]]})",
        R"({"dim": 2, "vectors": [[1, "0"]]})",
        R"({"dim": 2, "vectors": [[1, null]]})",
        R"({"dim": 2, "vectors": [[1, true]]})",
        R"({"dim": 2, "vectors": [[1, 1e999]]})",
        R"({"dim": 2, "vectors": [[1, 0]], "labels": "a"})",
        R"({"dim": 2, "vectors": [[1, 0]], "labels": [1]})",
        R"({"dim": 2, "vectors": [[1, 0]], "labels": ["a", "b"]})",
        R"({"dim": 99999999, "vectors": [[1]]})",
        "\xff\xfe garbage",
    };
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto file = write("bad" + std::to_string(i) + ".json", corpus[i]);
        for (const char* cmd : {"bounds", "dual", "subframe", "extract-basis"}) {
            const auto r = call({cmd, file});
            EXPECT_EQ(r.code, usage_error) << cmd << " on case " << i << ": " << r.err;
            EXPECT_TRUE(r.out.empty());
        }
        const auto spec = call({"construct", file});
        EXPECT_EQ(spec.code, usage_error) << "construct on case " << i << ": " << spec.err;
    }
}

}  // namespace
}  // namespace framekit::cli
