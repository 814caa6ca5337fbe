#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "nep/errors.hpp"
#include "nep/profile_io.hpp"

using namespace nep;
namespace fs = std::filesystem;

namespace {

SolutionProfile sample()
{
    SolutionProfile p;
    for (int i = 0; i <= 10; ++i) {
        double x = i / 10.0;
        p.x.push_back(x);
        p.u.push_back(std::sin(3.0 * x) / 7.0);
        p.v.push_back(std::cos(3.0 * x) * 3.0 / 7.0);
    }
    p.energy = 0.1 / 3.0;
    p.type = SolutionType::c;
    p.boundary_case = true;
    p.lambda = 100.0;
    p.bc = BoundaryCondition::robin(-1.1);
    p.model_name = "gelfand";
    return p;
}

}  // namespace

TEST(FormatNumber, SeventeenDigits)
{
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(2.0 / 3.0), "0.66666666666666663");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1e-300), "1e-300");
    EXPECT_EQ(std::stod(format_number(M_PI)), M_PI);
}

TEST(ProfileCsv, HeaderAndColumns)
{
    std::string s = profile_to_csv(sample(), "solve");
    EXPECT_EQ(s.rfind("# nep-phaseplane v1 solve\n# meta ", 0), 0u);
    EXPECT_NE(s.find("\nx,u,v\n"), std::string::npos);
    EXPECT_EQ(s.find('\r'), std::string::npos);
}

TEST(ProfileCsv, RoundTripIsExact)
{
    SolutionProfile p = sample();
    SolutionProfile q = profile_from_csv(profile_to_csv(p));
    EXPECT_EQ(q.x, p.x);
    EXPECT_EQ(q.u, p.u);
    EXPECT_EQ(q.v, p.v);
    EXPECT_EQ(q.energy, p.energy);
    EXPECT_EQ(q.type, p.type);
    EXPECT_EQ(q.boundary_case, p.boundary_case);
    EXPECT_EQ(q.lambda, p.lambda);
    EXPECT_TRUE(q.bc.is_robin());
    EXPECT_EQ(q.bc.alpha, p.bc.alpha);
    EXPECT_EQ(q.model_name, p.model_name);
    EXPECT_EQ(profile_to_csv(q), profile_to_csv(p));
}

TEST(ProfileCsv, DirichletMeta)
{
    SolutionProfile p = sample();
    p.bc = BoundaryCondition::dirichlet();
    EXPECT_TRUE(profile_from_csv(profile_to_csv(p)).bc.is_dirichlet());
}

TEST(ProfileCsv, MalformedInput)
{
    auto parse_code = [](const std::string& text) {
        try {
            profile_from_csv(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::usage;
    };
    std::string good = profile_to_csv(sample());
    EXPECT_EQ(parse_code(""), ErrorCode::parse);
    EXPECT_EQ(parse_code("x,u,v\n0,0,0\n1,0,0\n"), ErrorCode::parse);
    std::string no_meta = good;
    no_meta.erase(no_meta.find("# meta"), no_meta.find('\n', no_meta.find("# meta")) - no_meta.find("# meta") + 1);
    EXPECT_EQ(parse_code(no_meta), ErrorCode::parse);
    EXPECT_EQ(parse_code(good + "1,2\n"), ErrorCode::parse);
    EXPECT_EQ(parse_code(good + "1,2,abc\n"), ErrorCode::parse);
}

TEST(AtomicWrite, ReplacesContentAndLeavesNoTemporary)
{
    fs::path dir = fs::temp_directory_path() / "nep_atomic_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::path f = dir / "out.csv";
    write_file_atomic(f, "first\n");
    write_file_atomic(f, "second\n");
    EXPECT_EQ(read_file(f), "second\n");
    int entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
    EXPECT_EQ(entries, 1);
    fs::remove_all(dir);
}

TEST(AtomicWrite, MissingDirectoryReportsPath)
{
    try {
        write_file_atomic("/nonexistent_dir_nep/out.csv", "x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::io);
        EXPECT_NE(std::string(e.what()).find("/nonexistent_dir_nep/out.csv"), std::string::npos);
    }
}

TEST(ReadProfile, MissingFileIsIoError)
{
    try {
        read_profile("/nonexistent_dir_nep/p.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::io);
    }
}
