#include <gtest/gtest.h>

#include "support.hpp"

using namespace dltest;

namespace
{

double residual(Complex z, int k)
{
    const Complex w = lambert_w(z, BranchIndex{k});
    return std::abs(w * std::exp(w) - z) / std::max(1.0, std::abs(z));
}

// Real principal branch by Newton on w e^w = x, x > -1/e.
double newton_w0(double x)
{
    double w = x < 1.0 ? 0.0 : std::log(x);
    for (int i = 0; i < 100; ++i)
        w -= (w * std::exp(w) - x) / (std::exp(w) * (1.0 + w));
    return w;
}

// Real branch -1 by bisection on (-inf, -1], x in (-1/e, 0).
double bisect_wm1(double x)
{
    double lo = -60.0, hi = -1.0;
    for (int i = 0; i < 200; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        if (mid * std::exp(mid) > x)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST(LambertW, SpecialValues)
{
    EXPECT_EQ(lambert_w(0.0), Complex(0.0));
    EXPECT_NEAR(std::abs(lambert_w(std::exp(1.0)) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(lambert_w(-std::exp(-1.0), BranchIndex{-1}) + 1.0), 0.0, 1e-7);
    EXPECT_NEAR(std::abs(lambert_w(-std::exp(-1.0)) + 1.0), 0.0, 1e-7);
    EXPECT_NEAR(lambert_w(1.0).real(), 0.5671432904, 1e-10);
    EXPECT_NEAR(std::abs(lambert_w(1.0) - newton_w0(1.0)), 0.0, 1e-15);
}

TEST(LambertW, ZeroOffPrincipalBranchRejected)
{
    EXPECT_THROW(lambert_w(0.0, BranchIndex{1}), PreconditionError);
    EXPECT_THROW(lambert_w(0.0, BranchIndex{-1}), PreconditionError);
}

TEST(LambertW, RealBranchesAgainstIndependentRoots)
{
    for (double x : {-0.36, -0.3, -0.1, -1e-3, 1e-6, 0.5, 2.0, 10.0, 1e3, 1e8})
    {
        const Complex w = lambert_w(x);
        EXPECT_NEAR(w.real(), newton_w0(x), 1e-13 * std::max(1.0, std::abs(w.real()))) << x;
        EXPECT_EQ(w.imag(), 0.0) << x;
    }
    for (double x : {-0.36, -0.3, -0.1, -1e-3, -1e-8})
    {
        const Complex w = lambert_w(x, BranchIndex{-1});
        EXPECT_NEAR(w.real(), bisect_wm1(x), 1e-12 * std::abs(w.real())) << x;
        EXPECT_NEAR(w.imag(), 0.0, 1e-12) << x;
    }
}

TEST(LambertW, DefiningIdentityOnLogPolarGrid)
{
    double worst = 0.0;
    for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 20; ++j)
        {
            const Complex z = std::polar(std::pow(10.0, -3.0 + 6.0 * i / 24.0), -M_PI + 2.0 * M_PI * (j + 0.5) / 20.0);
            for (int k = -2; k <= 2; ++k)
                worst = std::max(worst, residual(z, k));
        }
    EXPECT_LE(worst, 1e-13);
}

TEST(LambertW, NearBranchPointAndLargeBranches)
{
    const double b = -std::exp(-1.0);
    for (Complex z : {Complex(b + 1e-10), Complex(b, 1e-9), Complex(b, -1e-9), Complex(b - 1e-6)})
        for (int k = -1; k <= 1; ++k)
            EXPECT_LE(residual(z, k), 1e-13) << z << " k=" << k;
    for (int k : {-25, -7, 7, 25})
        for (Complex z : {Complex(1e-5, 0.3), Complex(-3.0, 1e4), Complex(1e12, -1.0)})
            EXPECT_LE(residual(z, k), 1e-13) << z << " k=" << k;
}

TEST(LambertW, ConjugateSymmetryOffCut)
{
    std::mt19937_64 rng(41);
    for (int i = 0; i < 50; ++i)
    {
        Complex z = 3.0 * random_complex(rng);
        if (std::abs(z.imag()) < 1e-3)
            continue;
        EXPECT_LT(std::abs(lambert_w(std::conj(z)) - std::conj(lambert_w(z))), 1e-14 * std::max(1.0, std::abs(lambert_w(z))));
        EXPECT_LT(std::abs(lambert_w(std::conj(z), BranchIndex{-1}) - std::conj(lambert_w(z, BranchIndex{1}))), 1e-13 * std::abs(lambert_w(z, BranchIndex{1})));
    }
}

TEST(LambertW, ImaginaryPartsStayInBranchStrips)
{
    // Standard bounds: k = 0 in (-pi, pi], k > 0 in ((2k-2) pi, (2k+1) pi),
    // k < 0 in ((2k-1) pi, (2k+2) pi).
    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i)
    {
        const Complex z = std::polar(std::pow(10.0, std::uniform_real_distribution<double>(-3, 3)(rng)),
                                     std::uniform_real_distribution<double>(-M_PI, M_PI)(rng));
        for (int k = -3; k <= 3; ++k)
        {
            const double im = lambert_w(z, BranchIndex{k}).imag();
            if (k == 0)
            {
                EXPECT_GT(im, -M_PI);
                EXPECT_LE(im, M_PI);
            }
            else if (k > 0)
            {
                EXPECT_GT(im, (2 * k - 2) * M_PI);
                EXPECT_LT(im, (2 * k + 1) * M_PI);
            }
            else
            {
                EXPECT_GT(im, (2 * k - 1) * M_PI);
                EXPECT_LT(im, (2 * k + 2) * M_PI);
            }
        }
    }
}

TEST(LambertW, BranchesAreDistinctRoots)
{
    const Complex z(0.7, -0.2);
    std::vector<Complex> roots;
    for (int k = -3; k <= 3; ++k)
        roots.push_back(lambert_w(z, BranchIndex{k}));
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            EXPECT_GT(std::abs(roots[i] - roots[j]), 1.0);
}

TEST(DelayPole, SpecialValuesAndRoundTrip)
{
    EXPECT_NEAR(std::abs(delay_pole_from_eigenvalue(std::exp(1.0), 1.0, BranchIndex{0}) - 1.0), 0.0, 1e-15);
    const Complex lam = delay_pole_from_eigenvalue(2.0, 1.0, BranchIndex{0});
    EXPECT_EQ(lam.imag(), 0.0);
    EXPECT_NEAR(lam.real(), newton_w0(2.0), 1e-15);
    EXPECT_THROW(delay_pole_from_eigenvalue(1.0, 0.0, BranchIndex{0}), PreconditionError);

    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> taus(0.01, 3.0);
    for (int i = 0; i < 50; ++i)
    {
        const Complex alpha = 2.0 * random_complex(rng);
        const double tau    = taus(rng);
        const Complex l     = delay_pole_from_eigenvalue(alpha, tau, BranchIndex{0});
        EXPECT_LT(std::abs(substitution_map(l, tau) - alpha), 1e-12 * std::abs(alpha));
    }
}
