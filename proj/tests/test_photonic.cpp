#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dimwit/photonic.hpp"

using namespace dimwit;

namespace
{

constexpr double kDl = kDefaultDl;
const double kSqrt2 = std::sqrt(2.0);

int support_rank(const std::vector<DensityMatrix>& states)
{
    CMatrix sum = CMatrix::Zero(kSignalDim, kSignalDim);
    for (const auto& r : states)
        sum += r.matrix();
    const auto e = hermitian_eigen(sum);
    int rank = 0;
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
        rank += e.values(i) > 1e-12 ? 1 : 0;
    return rank;
}

double pipeline_i4(ScenarioKind kind, double phi, double gamma)
{
    return eval_witness(i4_spec(), probs_from_quantum(ensemble_preset(kind, gamma, phi),
                                                      measurement_preset(kind)));
}

} // namespace

TEST(GammaOfDelay, Examples)
{
    EXPECT_EQ(gamma_of_delay({kDl, kDl / 2}), 1.0);
    EXPECT_EQ(gamma_of_delay({kDl, 0.0}), 0.0);
    EXPECT_DOUBLE_EQ(gamma_of_delay({kDl, 3 * kDl / 4}), 0.5);
    EXPECT_EQ(gamma_of_delay({kDl, -40.0}), 0.0);
    EXPECT_EQ(gamma_of_delay({kDl, 2 * kDl}), 0.0);
    EXPECT_THROW(gamma_of_delay({0.0, 1.0}), ValidationError);
}

TEST(GammaQuadrature, Examples)
{
    const auto peak = gamma_quadrature_oracle({kDl, kDl / 2});
    EXPECT_NEAR(peak.value.real(), 1.0, 1e-3);
    EXPECT_LE(std::abs(peak.value.imag()), 1e-6);
    EXPECT_TRUE(peak.within(1e-3));

    EXPECT_NEAR(gamma_quadrature_oracle({kDl, kDl}).value.real(), 0.0, 1e-3);
    EXPECT_NEAR(gamma_quadrature_oracle({kDl, 5 * kDl / 8}).value.real(), 0.75, 1e-3);
    EXPECT_NEAR(gamma_quadrature_oracle({kDl, 3 * kDl / 4}).value.real(), 0.5, 1e-3);
}

TEST(GammaQuadrature, CoarseGridReportsLargeError)
{
    const auto r = gamma_quadrature_oracle({kDl, kDl / 2}, {20.0, 40});
    EXPECT_FALSE(r.within(1e-3));
    EXPECT_THROW(gamma_quadrature_oracle({kDl, 0.0}, {100.0, 7}), ValidationError);
}

TEST(GammaQuadrature, AgreesWithTriangleOnFullGrid)
{
    for (int i = 0; i <= 100; ++i)
    {
        const double tau = 2.0 * kDl * i / 100.0;
        const auto q = gamma_quadrature_oracle({kDl, tau});
        EXPECT_NEAR(q.value.real(), gamma_of_delay({kDl, tau}), 1e-3) << "tau=" << tau;
        EXPECT_LE(std::abs(q.value.imag()), 1e-6);
    }
}

TEST(SignalState, Examples)
{
    const auto h = prepare_signal_state({1, 0.0}, 1.0);
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(kHPlus, kHPlus) = 1.0;
    EXPECT_LT((h.matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);

    const auto v = prepare_signal_state({0, 90.0}, 0.0);
    expected.setZero();
    expected(kVMinus, kVMinus) = 1.0;
    EXPECT_LT((v.matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);

    const auto pure = prepare_signal_state({1, 22.5}, 1.0);
    EXPECT_NEAR(purity_of(pure), 1.0, 1e-15);
    const auto eig = hermitian_eigen(pure.matrix());
    EXPECT_NEAR(eig.values(0), 1.0, 1e-14);
    EXPECT_NEAR(eig.values(1), 0.0, 1e-14);
}

TEST(SignalState, RejectsInvalidInput)
{
    EXPECT_THROW(prepare_signal_state({1, 10.0}, 1.2), ValidationError);
    EXPECT_THROW(prepare_signal_state({2, 10.0}, 0.5), ValidationError);
    EXPECT_THROW(prepare_signal_state({1, 10.0}, 0.5, 1.5), ValidationError);
}

TEST(SignalState, AlwaysAValidDensityMatrix)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> phi(0.0, 360.0), mag(0.0, 1.0), arg(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < 2000; ++i)
    {
        const Complex g = std::polar(mag(rng), arg(rng));
        EXPECT_NO_THROW(prepare_signal_state({i % 2, phi(rng)}, g));
    }
}

TEST(Purity, Examples)
{
    for (double phi : {0.0, 13.0, 45.0, 100.0})
        EXPECT_DOUBLE_EQ(purity_formula(phi, 1.0), 1.0);
    EXPECT_NEAR(purity_formula(45.0, 0.0), 0.5, 1e-15);
    EXPECT_NEAR(purity_formula(22.5, 0.5), 0.8125, 1e-15);
    EXPECT_NEAR(purity_of(prepare_signal_state({1, 22.5}, 0.5)), 0.8125, 1e-15);
}

TEST(Purity, FormulaMatchesTraceOfSquare)
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> phi(0.0, 360.0), g(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i)
    {
        const double p = phi(rng);
        const double gam = g(rng);
        for (int alpha : {0, 1})
            EXPECT_NEAR(purity_of(prepare_signal_state({alpha, p}, gam)), purity_formula(p, gam), 1e-12);
    }
}

TEST(EnsemblePreset, Supports)
{
    const auto qubit = ensemble_preset(ScenarioKind::qubit, 1.0);
    EXPECT_EQ(support_rank(qubit), 2);
    for (const auto& r : qubit)
        for (int i : {kHMinus, kVMinus})
        {
            EXPECT_EQ(r.matrix()(i, i), 0.0);
        }
    EXPECT_EQ(support_rank(ensemble_preset(ScenarioKind::qutrit, 1.0)), 3);
    EXPECT_EQ(support_rank(ensemble_preset(ScenarioKind::quart, 1.0)), 4);
    EXPECT_EQ(support_rank(ensemble_preset(ScenarioKind::qutrit, 0.0)), 3);

    const auto quart = ensemble_preset(ScenarioKind::quart, 0.7);
    for (int x = 0; x < 4; ++x)
    {
        CMatrix p = CMatrix::Zero(4, 4);
        p(x, x) = 1.0;
        EXPECT_LT((quart[static_cast<std::size_t>(x)].matrix() - p).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(EnsemblePreset, ClassicalLimitsForceGammaToZero)
{
    const auto bit = ensemble_preset(Scenario::parse("bit"), 1.0);
    for (const auto& r : bit)
        EXPECT_EQ(r.matrix()(kHPlus, kVPlus), 0.0);
    EXPECT_THROW(Scenario::parse("qunit"), ValidationError);
}

TEST(MeasurementPreset, Examples)
{
    for (auto kind : {ScenarioKind::qubit, ScenarioKind::qutrit, ScenarioKind::quart})
        for (const auto& o : measurement_preset(kind))
            EXPECT_LT((o.matrix() * o.matrix() - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);

    const auto quart = measurement_preset(ScenarioKind::quart);
    for (int i = 0; i < 4; ++i)
        EXPECT_EQ(quart[0].matrix()(i, i).real(), i == kVMinus ? -1.0 : 1.0);

    const auto qubit = measurement_preset(ScenarioKind::qubit);
    const auto phi1 = prepare_signal_state({1, 22.5}, 1.0);
    EXPECT_NEAR(detail::real_trace_product(phi1.matrix(), qubit[2].matrix()), kSqrt2 / 2, 1e-15);
}

TEST(AnalyticI4, Examples)
{
    EXPECT_NEAR(analytic_i4(ScenarioKind::qutrit, 22.5, 1.0), 5 + 2 * kSqrt2, 1e-14);
    EXPECT_NEAR(analytic_i4(ScenarioKind::qubit, 22.5, 0.0), 3 + kSqrt2, 1e-14);
    EXPECT_NEAR(pipeline_i4(ScenarioKind::qubit, 22.5, 0.0), 3 + kSqrt2, 1e-12);
    EXPECT_DOUBLE_EQ(analytic_i4(ScenarioKind::qutrit, 0.0, 0.0), 7.0);
    EXPECT_DOUBLE_EQ(analytic_i4_max(ScenarioKind::qutrit, 0.0), 7.0);
    EXPECT_THROW(analytic_i4(ScenarioKind::quart, 0.0, 1.0), ValidationError);
    EXPECT_EQ(pipeline_i4(ScenarioKind::quart, 0.0, 0.3), kQuartIdealI4);
}

TEST(AnalyticI4, MatchesMatrixPipeline)
{
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j)
        {
            const double phi = -90.0 + 180.0 * i / 49.0;
            const double gamma = j / 49.0;
            for (auto kind : {ScenarioKind::qubit, ScenarioKind::qutrit})
                EXPECT_NEAR(pipeline_i4(kind, phi, gamma), analytic_i4(kind, phi, gamma), 1e-9);
        }
}

TEST(AnalyticI4, MaximizerSatisfiesTanTwoPhiEqualsGamma)
{
    const int steps = 200001;
    const double h = 90.0 / (steps - 1);  // phi in [0, 90] degrees
    for (double gamma : {0.0, 0.25, 0.5, 0.8, 1.0})
        for (auto kind : {ScenarioKind::qubit, ScenarioKind::qutrit})
        {
            double best = -1e9, best_phi = 0.0;
            for (int i = 0; i < steps; ++i)
            {
                const double phi = i * h;
                const double v = analytic_i4(kind, phi, gamma);
                if (v > best)
                    best = v, best_phi = phi;
            }
            const double expected_phi = 0.5 * std::atan(gamma) * 180.0 / std::numbers::pi;
            EXPECT_NEAR(best_phi, expected_phi, h);
            EXPECT_NEAR(best, analytic_i4_max(kind, gamma), 1e-9);
        }
}

TEST(ScanDelay, Examples)
{
    const std::vector<double> taus{0.0, kDl / 4, kDl / 2, 3 * kDl / 4, kDl, 1.5 * kDl};
    const auto qutrit = scan_delay(Scenario::parse("qutrit"), kDl, taus);
    const auto qubit = scan_delay(Scenario::parse("qubit"), kDl, taus);
    const auto quart = scan_delay(Scenario::parse("quart"), kDl, taus);
    ASSERT_EQ(qutrit.size(), taus.size());
    EXPECT_EQ(qutrit[2].delta, 0.0);
    EXPECT_NEAR(qutrit[2].i4, 5 + 2 * kSqrt2, 1e-12);
    EXPECT_NEAR(qubit[2].i4, 3 + 2 * kSqrt2, 1e-12);
    for (std::size_t i : {0u, 4u, 5u})
    {
        EXPECT_NEAR(qubit[i].i4, 3 + kSqrt2, 1e-12);
        EXPECT_LT(qubit[i].i4, 5.0);
    }
    for (const auto& p : quart)
        EXPECT_EQ(p.i4, 9.0);
}

TEST(ScanDelay, NonIncreasingInAbsoluteDelta)
{
    const auto grid = linspace(0.0, 2 * kDl, 401);
    for (const char* name : {"qubit", "qutrit"})
    {
        const auto curve = scan_delay(Scenario::parse(name), kDl, grid);
        for (const auto& a : curve)
            for (const auto& b : curve)
                if (std::abs(a.delta) < std::abs(b.delta))
                {
                    EXPECT_GE(a.i4, b.i4 - 1e-12);
                }
    }
}

TEST(ScanDelay, VisibilityScalesCoherenceOnly)
{
    const std::vector<double> taus{kDl / 2};
    const auto half = scan_delay(Scenario::parse("qutrit"), kDl, taus, {22.5, 0.5});
    EXPECT_NEAR(half[0].i4, analytic_i4(ScenarioKind::qutrit, 22.5, 0.5), 1e-12);
}

TEST(SimulateCounts, DegenerateBinomial)
{
    const auto p = ProbabilityTable::dichotomic(4, 3, std::vector<double>(12, 1.0));
    const auto c = simulate_counts(p, 100, 1);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 3; ++y)
        {
            EXPECT_EQ(c.count(kPlus, x, y), 100u);
            EXPECT_EQ(c.count(kMinus, x, y), 0u);
        }
}

TEST(SimulateCounts, Concentration)
{
    const auto p = ProbabilityTable::dichotomic(4, 3, std::vector<double>(12, 0.5));
    const auto c = simulate_counts(p, 1000000, 77);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 3; ++y)
            EXPECT_NEAR(c.count(kPlus, x, y) / 1e6, 0.5, 0.002);
}

TEST(SimulateCounts, SeedDeterministic)
{
    const auto p = probs_from_quantum(ensemble_preset(ScenarioKind::qutrit, 1.0),
                                      measurement_preset(ScenarioKind::qutrit));
    const auto a = simulate_counts(p, 5000, 9);
    const auto b = simulate_counts(p, 5000, 9);
    const auto c = simulate_counts(p, 5000, 10);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_NE(a.counts, c.counts);
    EXPECT_NO_THROW(validate(a));
    EXPECT_THROW(simulate_counts(p, 0, 1), ValidationError);
}
