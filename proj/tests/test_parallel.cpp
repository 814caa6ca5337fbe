#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "nep/execution.hpp"
#include "nep/shoot.hpp"
#include "nep/timemap.hpp"

using namespace nep;

namespace {

bool same(double a, double b)
{
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

TEST(Parallel, SweepIsBitIdentical)
{
    NonlinearModel m = builtin_model("gelfand");
    Potential pot(m, Convention::from_minus_infinity);
    double lambda = 100.0, gs = std::sqrt(lambda) / -1.1;
    auto Cs = log_space(1e-3, 1e3, 257);
    for (auto br : {TimeMapBranch::sym1, TimeMapBranch::sym2, TimeMapBranch::asym_monotone,
                    TimeMapBranch::asym_nonmonotone}) {
        auto a = sweep(pot, lambda, gs, br, Cs, Execution::serial);
        auto b = sweep(pot, lambda, gs, br, Cs, Execution::parallel);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            EXPECT_EQ(a[k].C, b[k].C);
            EXPECT_EQ(a[k].valid, b[k].valid);
            EXPECT_TRUE(same(a[k].length, b[k].length)) << to_string(br) << " " << k;
        }
    }
}

TEST(Parallel, ShootIsBitIdentical)
{
    NonlinearModel m = builtin_model("gelfand");
    for (double alpha : {-1.1, -1.0, 1.0}) {
        ProblemSpec prob(1.0, BoundaryCondition::robin(alpha), alpha > 0 ? 0.5 : 100.0, m);
        ShootOptions so;
        so.exec = Execution::serial;
        auto a = shoot(prob, so);
        so.exec = Execution::parallel;
        auto b = shoot(prob, so);
        ASSERT_EQ(a.profiles.size(), b.profiles.size());
        for (std::size_t k = 0; k < a.profiles.size(); ++k) {
            EXPECT_EQ(a.parameters[k], b.parameters[k]);
            EXPECT_EQ(a.profiles[k].u, b.profiles[k].u);
            EXPECT_EQ(a.profiles[k].v, b.profiles[k].v);
        }
    }
}

TEST(Parallel, CountIsIdentical)
{
    NonlinearModel m = builtin_model("gelfand");
    ProblemSpec prob(1.0, BoundaryCondition::robin(-1.1), 100.0, m);
    CountOptions co;
    co.exec = Execution::serial;
    auto a = count_solutions(prob, co);
    co.exec = Execution::parallel;
    auto b = count_solutions(prob, co);
    ASSERT_EQ(a.total(), 5);
    ASSERT_EQ(a.total(), b.total());
    for (int k = 0; k < a.total(); ++k) {
        EXPECT_EQ(a.roots[k].C, b.roots[k].C);
        EXPECT_EQ(a.roots[k].branch, b.roots[k].branch);
    }
}

TEST(Parallel, ThreadsFromEnvironment)
{
    ::setenv("NEP_THREADS", "1", 1);
    configure_threads_from_env();
    EXPECT_EQ(max_threads(), 1);
    ::setenv("NEP_THREADS", "0", 1);
    configure_threads_from_env();
    EXPECT_GE(max_threads(), 1);
    ::unsetenv("NEP_THREADS");
}
