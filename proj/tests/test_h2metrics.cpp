#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace dltest;

TEST(H2, IdenticalSystemsHaveZeroError)
{
    const SystemOracle H = from_expression(two_pole_expression);
    EXPECT_EQ(h2_error(H, H), 0.0);
}

TEST(H2, FirstOrderLowPass)
{
    const H2Estimate e = h2_norm_estimate([](Complex s) {
        ComplexMatrix h(1, 1);
        h(0, 0) = 1.0 / (s + 1.0);
        return h;
    });
    EXPECT_NEAR(e.value, 1.0 / std::sqrt(2.0), 1e-8);
    // The whole fitted tail counts as possible error, so the estimate bounds the true one.
    EXPECT_GE(e.abs_error, std::abs(e.value - 1.0 / std::sqrt(2.0)));
    EXPECT_LE(e.abs_error, 1e-4);
    EXPECT_GT(e.tail, 0.0);
}

TEST(H2, MatchesLyapunovReference)
{
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 5; ++trial)
    {
        const DelayDescriptorModel m = random_stable_system(rng, 6, 2, 2);
        const double want = lyapunov_h2_norm(m.A.real(), m.B.real(), m.C.real());
        EXPECT_NEAR(h2_norm(from_model(m)), want, 1e-6 * want);
    }
}

TEST(H2, HomogeneousAndTriangle)
{
    std::mt19937_64 rng(72);
    const DelayDescriptorModel a = random_stable_system(rng, 4, 1, 1);
    const DelayDescriptorModel b = random_stable_system(rng, 4, 1, 1);
    const DelayDescriptorModel c = random_stable_system(rng, 4, 1, 1);
    DelayDescriptorModel a3 = a;
    a3.C *= 3.0;
    const double na = h2_norm(from_model(a));
    EXPECT_NEAR(h2_norm(from_model(a3)), 3.0 * na, 1e-7 * na);
    const double ab = h2_error(from_model(a), from_model(b));
    const double bc = h2_error(from_model(b), from_model(c));
    const double ac = h2_error(from_model(a), from_model(c));
    EXPECT_LE(ac, ab + bc + 1e-8);
    EXPECT_NEAR(ab, h2_error(from_model(b), from_model(a)), 1e-9 * ab);
}

TEST(H2, ComplexSystemsIntegrateBothHalfAxes)
{
    // 1/(s + 1 - i) has its peak at w = 1 only; the norm is still 1/sqrt2.
    const SystemOracle H(1, 1, [](Complex s) {
        ComplexMatrix h(1, 1);
        h(0, 0) = 1.0 / (s + Complex(1.0, -1.0));
        return h;
    }, nullptr, DerivativeMode::finite_difference, false, "shifted");
    EXPECT_NEAR(h2_norm(H), 1.0 / std::sqrt(2.0), 1e-8);
}

TEST(H2, NonDecayingIntegrandRejected)
{
    const SystemOracle one = from_expression("1");
    EXPECT_THROW(h2_norm(one), Error);
}

TEST(H2, MismatchedDimensionsRejected)
{
    std::mt19937_64 rng(73);
    EXPECT_THROW(h2_error(from_model(random_stable_system(rng, 2, 1, 1)), from_model(random_stable_system(rng, 2, 2, 1))),
                 PreconditionError);
}

TEST(Bode, CornerFrequencyAndConstant)
{
    const FrequencyResponse r = frequency_response(from_expression("1/(s+1)"), {1.0});
    EXPECT_NEAR(r.rows[0].magnitude_db(0, 0), -3.0103, 1e-4);
    EXPECT_NEAR(r.rows[0].phase_deg(0, 0), -45.0, 1e-12);
    const FrequencyResponse c = frequency_response(from_expression("1"), {0.1, 1.0, 10.0});
    for (const auto& row : c.rows)
    {
        EXPECT_EQ(row.magnitude_db(0, 0), 0.0);
        EXPECT_EQ(row.phase_deg(0, 0), 0.0);
        EXPECT_EQ(row.singular_values(0), 1.0);
    }
}

TEST(Bode, PhaseIsUnwrapped)
{
    // Pure delay e^{-s}: phase -w rad, well past -180 degrees.
    std::vector<double> w;
    for (int i = 1; i <= 200; ++i)
        w.push_back(0.05 * i);
    const FrequencyResponse r = frequency_response(from_expression("exp(-s)"), w);
    for (const auto& row : r.rows)
        EXPECT_NEAR(row.phase_deg(0, 0), -row.omega * 180.0 / M_PI, 1e-9);
}

TEST(Bode, DelayModelMatchesPoleResidueForm)
{
    std::mt19937_64 rng(74);
    const DelayDescriptorModel m = random_model(rng, 4, 2, 2, 0.3);
    const SpectralDecomposition d = decompose(m);
    const FrequencyResponse r = frequency_response(from_model(m), logspace(0.01, 100, 30));
    for (const auto& row : r.rows)
    {
        const ComplexMatrix want = d.residue_transfer(Complex(0.0, row.omega), 0.3);
        EXPECT_LT((row.value - want).norm(), 1e-9 * want.norm());
    }
}

TEST(Bode, ConjugateSymmetryOfRealModels)
{
    const SystemOracle H = from_model(two_pole_model());
    for (double w : {0.1, 1.0, 7.0})
        EXPECT_LT((H.eval(Complex(0, -w)) - H.eval(Complex(0, w)).conjugate()).norm(), 1e-15);
}

TEST(Bode, GridPreconditions)
{
    const SystemOracle H = from_expression("1/(s+1)");
    EXPECT_THROW(frequency_response(H, {1.0, 0.5}), PreconditionError);
    EXPECT_THROW(frequency_response(H, {0.0, 1.0}), PreconditionError);
}

TEST(Bode, CsvColumnsAndPoleRows)
{
    std::mt19937_64 rng(75);
    const FrequencyResponse r = frequency_response(from_model(random_model(rng, 3, 2, 2, 0.0)), {0.5, 1.0});
    std::ostringstream os;
    write_response_csv(os, r);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header,
              "omega,re_11,im_11,mag_db_11,phase_deg_11,re_12,im_12,mag_db_12,phase_deg_12,"
              "re_21,im_21,mag_db_21,phase_deg_21,re_22,im_22,mag_db_22,phase_deg_22,sigma_1,sigma_2,error");
    int rows = 0;
    for (std::string line; std::getline(in, line);)
        ++rows;
    EXPECT_EQ(rows, 2);

    // A pole on the grid gives an error row instead of aborting.
    const DelayDescriptorModel osc = DelayDescriptorModel::from_real(
        RealMatrix::Identity(2, 2), (RealMatrix(2, 2) << 0, 1, -1, 0).finished(), RealMatrix::Ones(2, 1),
        RealMatrix::Ones(1, 2));
    const FrequencyResponse p = frequency_response(from_model(osc), {0.5, 1.0, 2.0});
    EXPECT_TRUE(p.rows[0].ok());
    EXPECT_FALSE(p.rows[1].ok());
    EXPECT_TRUE(p.rows[2].ok());
}
