#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "lzpen");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = lzpenalty::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("lzpen_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& contents) const {
        const fs::path p = dir_ / name;
        std::ofstream(p, std::ios::binary) << contents;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    static std::string slurp(const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
    }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, CompressSummaryAndBlocks) {
    const std::string in = write("x.txt", "1\n2\n1\n2\n1\n2\n");
    Result r = run({"compress", "--input", in, "--format", "ints", "--vocab", "4"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "tokens=6 blocks=4 bits=12.000000 rate=2.000000\n");

    r = run({"compress", "--input", in, "--format", "ints", "--vocab", "4", "--emit-blocks"});
    EXPECT_EQ(r.out, "LIT=1\nLIT=2\nL=2 D=2\nL=2 D=2\ntokens=6 blocks=4 bits=12.000000 rate=2.000000\n");
}

TEST_F(CliTest, CompressBytes) {
    const std::string in = write("a.bin", "a");
    const Result r = run({"compress", "--input", in});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "tokens=1 blocks=1 bits=9.000000 rate=9.000000\n");
    const Result empty = run({"compress", "--input", write("e.bin", "")});
    EXPECT_EQ(empty.out, "tokens=0 blocks=0 bits=0.000000 rate=nan\n");
}

TEST_F(CliTest, ErrorCodesAreDistinct) {
    EXPECT_EQ(run({}).code, lzpenalty::cli::usage_error);
    EXPECT_EQ(run({"compress", "--input", path("missing.bin")}).code, lzpenalty::cli::io_error);
    EXPECT_EQ(run({"compress", "--input", write("bad.txt", "1\nx\n"), "--format", "ints", "--vocab", "4"}).code,
              lzpenalty::cli::format_error);
    EXPECT_EQ(run({"compress", "--input", write("big.txt", "9\n"), "--format", "ints", "--vocab", "4"}).code,
              lzpenalty::cli::usage_error);
    EXPECT_EQ(run({"compress", "--bogus"}).code, lzpenalty::cli::usage_error);
    EXPECT_EQ(run({"generate", "--model", "loop:0.95", "--penalty", "frequency"}).code,
              lzpenalty::cli::usage_error);
    EXPECT_EQ(run({"generate", "--model", "loop:0.95", "--penalty", "none", "--alpha", "0.2"}).code,
              lzpenalty::cli::usage_error);
    EXPECT_EQ(run({"generate", "--model", "loop:0.95", "--penalty", "lz", "--alpha", "0.2", "--strength", "0.3"})
                  .code,
              lzpenalty::cli::usage_error);
    EXPECT_EQ(run({"generate", "--model", "loop:0.95", "--window", "8", "--buffer", "8"}).code,
              lzpenalty::cli::usage_error);
    EXPECT_EQ(run({"generate", "--model", "ngram:2:" + path("nope.txt")}).code, lzpenalty::cli::io_error);
    EXPECT_EQ(run({"sweep", "--model", "loop:0.9"}).code, lzpenalty::cli::usage_error);
    EXPECT_EQ(run({"sweep", "--model", "loop:0.9", "--grid", "bogus:1"}).code, lzpenalty::cli::usage_error);
    const Result r = run({"generate", "--model", "loop:2"});
    EXPECT_EQ(r.code, lzpenalty::cli::usage_error);
    EXPECT_NE(r.err.find("loop repeat mass"), std::string::npos);
}

TEST_F(CliTest, GenerateTextAndJson) {
    Result r = run({"generate", "--model", "loop:0.95", "--temperature", "0", "--max-tokens", "30"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("tokens=30 degenerate=yes period=1 repeat_count=30"), std::string::npos);

    r = run({"generate", "--model", "loop:0.95", "--temperature", "0", "--max-tokens", "5", "--output", "json"});
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["tokens"].size(), 5u);
    EXPECT_EQ(j["degenerate"], false);
    EXPECT_EQ(j["penalty"], "none");
}

TEST_F(CliTest, GenerateFromNgramCorpusWithPrompt) {
    const std::string corpus = write("c.txt", "the cat sat on the mat and the cat ate the rat");
    const std::string prompt = write("p.txt", "the ");
    const Result r = run({"generate", "--model", "ngram:2:" + corpus, "--prompt-file", prompt, "--penalty", "lz",
                          "--seed", "3", "--max-tokens", "40"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("tokens=40 "), std::string::npos);
}

TEST_F(CliTest, IdenticalInvocationsAreByteIdentical) {
    const std::string corpus = write("c.txt", "how much wood would a woodchuck chuck if a woodchuck could chuck wood");
    const std::vector<std::vector<std::string>> cmds{
        {"generate", "--model", "ngram:3:" + corpus, "--seed", "11", "--penalty", "lz", "--max-tokens", "200"},
        {"generate", "--model", "loop:0.9:64", "--seed", "5", "--temperature", "1.3", "--penalty", "repetition",
         "--strength", "1.2", "--output", "json"},
        {"sweep", "--model", "loop:0.9:64", "--grid", "none,lz:0.15,frequency:0.3", "--temperatures", "0,1",
         "--seeds", "3", "--max-tokens", "100"},
        {"compress", "--input", corpus},
        {"trace", "--input", corpus, "--window", "16", "--buffer", "4"},
    };
    for (const auto& cmd : cmds) {
        const Result a = run(cmd);
        const Result b = run(cmd);
        EXPECT_EQ(a.code, 0) << cmd[0] << ": " << a.err;
        EXPECT_EQ(a.out, b.out) << cmd[0];
        EXPECT_FALSE(a.out.empty());
    }
}

TEST_F(CliTest, SweepWritesCsvFile) {
    const std::string out = path("s.csv");
    const Result r = run({"sweep", "--model", "loop:0.95", "--grid", "none", "--seeds", "2", "--max-tokens", "60",
                          "--out", out});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(out),
              "penalty,strength,temperature,seed_count,repetition_rate,mean_xent_bits,distinct2\n"
              "none,0,0,2,1.000000,0.074001,0.016949\n");
}

TEST_F(CliTest, SweepPreset) {
    const Result r = run({"sweep", "--model", "loop:0.9:16", "--preset", "repetition", "--seeds", "2",
                          "--max-tokens", "40"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 7);
    EXPECT_NE(r.out.find("\nlz,0.15,0,2,"), std::string::npos);
    EXPECT_NE(r.out.find("\nrepetition,1.25,0,2,"), std::string::npos);
}

TEST_F(CliTest, BenchRow) {
    const Result r = run({"bench", "--vocab", "4096", "--window", "64", "--buffer", "8", "--iterations", "5"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "V,W,B,median_us,p99_us,overhead_pct");
    EXPECT_NE(r.out.find("\n4096,64,8,"), std::string::npos);
}

TEST_F(CliTest, TraceLines) {
    const std::string in = write("t.txt", "3\n1\n4\n1\n5\n9\n2\n6\n4\n1\n5\n9\n");
    const Result r = run({"trace", "--input", in, "--format", "ints", "--vocab", "16", "--window", "8", "--buffer",
                          "3", "--top", "2"});
    EXPECT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::vector<std::string> all;
    while (std::getline(lines, line)) all.push_back(line);
    ASSERT_EQ(all.size(), 12u);
    EXPECT_EQ(all.back(), "step=11 l=3 d=4 lambda0=9 lambda1=6 lambda_ext=1 next=9 next_bits=-1.0000 "
                          "penalized=9:-1.0000,6:0.0000 boosted=0:4.0000,7:4.0000");
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
    const std::string cfg = write("run.ini", "[generate]\nmodel=loop:0.95\ntemperature=0\nmax-tokens=7\n");
    Result r = run({"--config", cfg, "generate"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("tokens=7 "), std::string::npos);
    r = run({"--config", cfg, "generate", "--max-tokens", "3"});
    EXPECT_NE(r.out.find("tokens=3 "), std::string::npos);
    EXPECT_EQ(run({"--config", path("absent.ini"), "generate"}).code, lzpenalty::cli::io_error);
}
