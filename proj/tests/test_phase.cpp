#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nep/errors.hpp"
#include "nep/phase.hpp"
#include "oracles.hpp"

using namespace nep;

namespace {

const NonlinearModel& gelfand()
{
    static NonlinearModel m = builtin_model("gelfand");
    return m;
}

Potential tail_pot()
{
    return Potential(gelfand(), Convention::from_minus_infinity);
}

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected nep::Error";
    return ErrorCode::usage;
}

std::vector<SolutionType> types(const std::vector<TrajectoryClass>& rows)
{
    std::vector<SolutionType> t;
    for (const auto& r : rows) t.push_back(r.type);
    return t;
}

}  // namespace

TEST(CurveHeight, Examples)
{
    Potential p = tail_pot();
    EXPECT_NEAR(curve_height(p, 1.0, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(curve_height(p, std::exp(1.0), 0.0), 1.0, 1e-15);
}

TEST(CurveHeight, DivergesAtTheEdgeOfTheCurve)
{
    Potential p = tail_pot();
    double edge = std::sqrt(2.0);
    double prev = 0.0;
    for (double gap : {1e-2, 1e-4, 1e-8, 1e-12}) {
        double u = curve_height(p, 1.0, edge * (1.0 - gap));
        EXPECT_LT(u, prev);
        prev = u;
    }
    EXPECT_LT(prev, -25.0);
    EXPECT_EQ(code_of([&] { curve_height(p, 1.0, edge); }), ErrorCode::domain);
    EXPECT_EQ(code_of([&] { curve_height(p, 1.0, 2.0); }), ErrorCode::domain);
}

TEST(CurveHeight, FromZeroRangeIsBoundedBelow)
{
    Potential p(gelfand(), Convention::from_zero);
    // F = e^u - 1 > -1, so C - v^2/2 must stay above -1 ... and above 0.
    EXPECT_EQ(code_of([&] { curve_height(p, 1.0, 1.5); }), ErrorCode::domain);
    EXPECT_NEAR(curve_height(p, 1.0, 0.0), std::log(2.0), 1e-15);
}

TEST(Tangency, GelfandUnitGamma)
{
    Potential p = tail_pot();
    Tangency t = tangency(p, -1.0);
    double v1 = oracle::gelfand_tangency_v(-1.0);
    EXPECT_NEAR(t.v1, v1, 1e-12);
    EXPECT_NEAR(t.v1, 0.5671433, 1e-7);
    EXPECT_NEAR(t.C_tilde, std::exp(-v1) + v1 * v1 / 2.0, 1e-12);
    EXPECT_NEAR(t.C_tilde, 0.7279, 1e-4);
}

TEST(Tangency, DefiningIdentities)
{
    Potential p = tail_pot();
    for (double g : {-0.3, -1.0, -2.0, -9.0}) {
        Tangency t = tangency(p, g);
        EXPECT_NEAR(g * p.f(g * t.v1) + t.v1, 0.0, 1e-10) << g;
        EXPECT_NEAR(t.C_tilde, p(g * t.v1) + t.v1 * t.v1 / 2.0, 1e-10) << g;
        EXPECT_GT(t.v1, 0.0);
        EXPECT_LT(t.C_tilde, p.s0());
    }
    EXPECT_NEAR(tangency(p, -2.0).v1, oracle::gelfand_tangency_v(-2.0), 1e-12);
}

TEST(Tangency, OtherModel)
{
    Potential p(builtin_model("alternative1"), Convention::from_minus_infinity);
    Tangency t = tangency(p, -1.5);
    EXPECT_NEAR(-1.5 * p.f(-1.5 * t.v1) + t.v1, 0.0, 1e-10);
    EXPECT_LT(t.C_tilde, p.s0());
}

TEST(Tangency, Errors)
{
    Potential p = tail_pot();
    EXPECT_EQ(code_of([&] { tangency(p, 1.0); }), ErrorCode::domain);
    // A very flat boundary line still touches far out in the tail.
    auto t = tangency(p, -1e7);
    EXPECT_NEAR(std::exp(t.u1) * 1e14, -t.u1, 1e-9 * std::fabs(t.u1));
}

TEST(Intersections, BelowTangencyIsEmpty)
{
    Potential p = tail_pot();
    Tangency t = tangency(p, -1.0);
    auto g = intersections(p, -1.0, 0.9 * t.C_tilde);
    EXPECT_TRUE(g.plus.empty());
    EXPECT_TRUE(classify(g).empty());
    ASSERT_TRUE(g.C_tilde.has_value());
    EXPECT_NEAR(*g.C_tilde, t.C_tilde, 0.0);
}

TEST(Intersections, AtTangencyIsOneDoublePoint)
{
    Potential p = tail_pot();
    Tangency t = tangency(p, -1.0);
    auto g = intersections(p, -1.0, t.C_tilde);
    EXPECT_TRUE(g.tangent);
    ASSERT_EQ(g.plus.size(), 1u);
    EXPECT_EQ(types(classify(g)), std::vector<SolutionType>{SolutionType::s});
}

TEST(Intersections, AtBaselineMassOnePointIsOnTheAxis)
{
    Potential p = tail_pot();
    auto g = intersections(p, -1.0, p.s0());
    ASSERT_EQ(g.plus.size(), 2u);
    EXPECT_GT(g.plus[0].v, 0.0);
    EXPECT_NEAR(g.plus[1].v, 0.0, 1e-12);
    EXPECT_NEAR(g.plus[1].u, 0.0, 1e-12);
    auto rows = classify(g);
    EXPECT_EQ(types(rows), (std::vector<SolutionType>{SolutionType::s, SolutionType::i, SolutionType::d}));
    EXPECT_FALSE(rows[0].boundary_case);
    EXPECT_TRUE(rows[1].boundary_case);
    EXPECT_TRUE(rows[2].boundary_case);
}

TEST(Intersections, PositiveAlphaSinglePoint)
{
    Potential p(gelfand(), Convention::from_zero);
    auto g = intersections(p, 1.0, 1.0);
    ASSERT_EQ(g.plus.size(), 1u);
    double v1 = oracle::bisect([](double v) { return std::exp(v) - 1.0 + v * v / 2.0 - 1.0; }, 0.0, 2.0);
    EXPECT_NEAR(g.plus[0].v, v1, 1e-12);
    EXPECT_NEAR(g.plus[0].v, 0.599125, 1e-6);
    EXPECT_GT(g.plus[0].u, 0.0);
    EXPECT_EQ(types(classify(g)), std::vector<SolutionType>{SolutionType::s});
    EXPECT_TRUE(intersections(p, 1.0, 0.0).plus.empty());
}

TEST(Intersections, RegimeOrderAndSides)
{
    Potential p = tail_pot();
    auto mid = intersections(p, -1.0, 0.9);  // C_tilde < C < s0
    ASSERT_EQ(mid.plus.size(), 2u);
    EXPECT_GT(mid.plus[0].v, mid.plus[1].v);
    EXPECT_LT(mid.plus[0].u, mid.plus[1].u);
    EXPECT_GT(mid.plus[1].v, 0.0);  // both right of the axis
    EXPECT_EQ(types(classify(mid)),
              (std::vector<SolutionType>{SolutionType::s, SolutionType::s, SolutionType::c, SolutionType::c}));

    auto high = intersections(p, -1.0, 3.0);  // C > s0
    ASSERT_EQ(high.plus.size(), 2u);
    EXPECT_GT(high.plus[0].v, 0.0);
    EXPECT_LT(high.plus[1].v, 0.0);
    EXPECT_EQ(types(classify(high)), (std::vector<SolutionType>{SolutionType::s, SolutionType::i, SolutionType::d}));
}

TEST(Intersections, PointsLieOnCurveAndLineAndAreMirrored)
{
    Potential p = tail_pot();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lg(std::log(0.75), std::log(1e4));
    for (double gamma : {-0.5, -1.0, -9.09}) {
        Tangency t = tangency(p, gamma);
        for (int k = 0; k < 20; ++k) {
            double C = std::max(std::exp(lg(rng)), t.C_tilde * 1.001);
            auto g = intersections(p, gamma, C);
            ASSERT_EQ(g.plus.size(), g.minus.size());
            for (std::size_t i = 0; i < g.plus.size(); ++i) {
                const auto& P = g.plus[i];
                EXPECT_NEAR(P.u, gamma * P.v, 1e-10 * std::max(1.0, std::fabs(P.u)));
                EXPECT_NEAR(p(P.u) + P.v * P.v / 2.0, C, 1e-10 * std::max(1.0, C));
                EXPECT_EQ(g.minus[i].v, -P.v);
                EXPECT_EQ(g.minus[i].u, P.u);
            }
        }
    }
}

TEST(Intersections, MatchesIndependentRootSolve)
{
    Potential p = tail_pot();
    for (double C : {0.8, 0.95, 2.0, 50.0}) {
        auto g = intersections(p, -1.0, C);
        auto ref = oracle::gelfand_heights(-1.0, C);
        ASSERT_EQ(g.plus.size(), 2u);
        EXPECT_NEAR(g.plus[0].u, ref.u1, 1e-10);
        EXPECT_NEAR(g.plus[1].u, ref.u2, 1e-10);
    }
}

TEST(Intersections, SingleTransitionAtTangency)
{
    Potential p = tail_pot();
    double Ct = tangency(p, -1.0).C_tilde;
    // Bisection over C on "has intersections" must land on C_tilde.
    double lo = 0.1, hi = 5.0;
    for (int i = 0; i < 60; ++i) {
        double m = 0.5 * (lo + hi);
        (intersections(p, -1.0, m).plus.empty() ? lo : hi) = m;
    }
    EXPECT_NEAR(hi, Ct, 1e-9);
    // And the count never drops back to zero above it.
    for (double C = Ct * 1.0001; C < 100.0; C *= 1.1) {
        EXPECT_FALSE(intersections(p, -1.0, C).plus.empty());
    }
}

TEST(CurveProperties, ConcaveSymmetricOrdered)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uc(0.2, 20.0);
    for (Convention conv : {Convention::from_minus_infinity, Convention::from_zero}) {
        Potential p(gelfand(), conv);
        for (int k = 0; k < 20; ++k) {
            double C = uc(rng);
            double vmax = std::sqrt(2.0 * C);
            double h = vmax / 200.0;
            for (int j = -190; j <= 190; ++j) {
                double v = j * h;
                double a = curve_height(p, C, v - h), b = curve_height(p, C, v), c = curve_height(p, C, v + h);
                EXPECT_LE(a - 2 * b + c, 1e-12 * std::max(1.0, std::fabs(b)));
                EXPECT_NEAR(curve_height(p, C, -v), b, 1e-12 * std::max(1.0, std::fabs(b)));
                EXPECT_LT(b, curve_height(p, C * 1.01, v));
            }
        }
    }
}

TEST(Dirichlet, GeometryOnTheAxis)
{
    Potential p(gelfand(), Convention::from_zero);
    auto g = dirichlet_geometry(p, 2.0);
    ASSERT_EQ(g.plus.size(), 1u);
    EXPECT_DOUBLE_EQ(g.plus[0].v, 2.0);
    EXPECT_DOUBLE_EQ(g.plus[0].u, 0.0);
    EXPECT_TRUE(dirichlet_geometry(p, 0.0).plus.empty());
}
