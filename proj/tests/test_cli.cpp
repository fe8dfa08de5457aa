#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("asdim_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) const {
        std::string cmd = std::string(ASDIM_CLI_PATH) + " --out " + dir_.string() + " " + args + " >" +
                          (dir_ / "stdout.txt").string() + " 2>&1";
        int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    nlohmann::json summary() const {
        std::ifstream in(dir_ / "summary.json");
        return nlohmann::json::parse(in);
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void write(const std::string& name, const nlohmann::json& j) const {
        std::ofstream(dir_ / name) << j.dump();
    }

    fs::path dir_;
};

nlohmann::json matrix_space(const std::vector<std::vector<int>>& rows) {
    nlohmann::json pts = nlohmann::json::array(), r = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) pts.push_back("p" + std::to_string(i));
    for (const auto& row : rows) {
        nlohmann::json a = nlohmann::json::array();
        for (int v : row) a.push_back(std::to_string(v));
        r.push_back(a);
    }
    return {{"label", "m"}, {"points", pts}, {"metric", {{"kind", "matrix"}, {"rows", r}}}};
}

}  // namespace

TEST_F(Cli, GenWritesSpaceAndSummary) {
    ASSERT_EQ(run("gen --kind integer_set --table 0,1,2,3,4,5,6,7,8,9,10"), 0);
    EXPECT_TRUE(fs::exists(path("space.json")));
    auto s = summary();
    EXPECT_TRUE(s.at("pass").get<bool>());
    EXPECT_EQ(s.at("points").get<int>(), 11);
}

TEST_F(Cli, ValidateGoodAndBadMatrices) {
    write("good.json", matrix_space({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}));
    EXPECT_EQ(run("validate " + path("good.json")), 0);
    write("bad.json", matrix_space({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}));
    EXPECT_EQ(run("validate " + path("bad.json")), 1);
    EXPECT_FALSE(summary().at("pass").get<bool>());
    write("ragged.json", matrix_space({{0, 1}, {1, 0, 1}}));
    EXPECT_EQ(run("validate " + path("ragged.json")), 1);
}

TEST_F(Cli, BadInvocationsExitTwo) {
    EXPECT_EQ(run("validate"), 2);
    EXPECT_EQ(run("validate " + path("missing.json")), 2);
    EXPECT_EQ(run("gen --kind no_such_kind"), 2);
    EXPECT_EQ(run("--jobs 0 gen --kind integer_set --table 0,1"), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, AsdimAtOneScale) {
    ASSERT_EQ(run("gen --kind integer_set --table 0,1,2,3,4,5,6,7,8,9,10,11,12"), 0);
    EXPECT_EQ(run("asdim " + path("space.json") + " --D 1 --R 4"), 0);
    EXPECT_TRUE(summary().at("pass").get<bool>());
}

TEST_F(Cli, PipelineOnAnInterval) {
    std::string table = "0";
    for (int i = 1; i <= 4000; ++i) table += "," + std::to_string(i);
    ASSERT_EQ(run("gen --kind integer_set --table " + table), 0);
    EXPECT_EQ(run("pipeline " + path("space.json") + " --n 1 --levels 3"), 0);
    auto s = summary();
    EXPECT_TRUE(s.at("pass").get<bool>());
    EXPECT_TRUE(s.at("tree_mesh").get<bool>());
    EXPECT_TRUE(fs::exists(path("trees.json")));
}
