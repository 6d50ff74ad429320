#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dimwit/photonic.hpp"
#include "dimwit/seesaw.hpp"
#include "dimwit/witness.hpp"

using namespace dimwit;

namespace
{

ProbabilityTable constant_plus(double p_plus, int n = 4, int m = 3)
{
    std::vector<double> p(static_cast<std::size_t>(n) * m, p_plus);
    return ProbabilityTable::dichotomic(n, m, p);
}

ProbabilityTable random_dichotomic(std::mt19937_64& rng, int n = 4, int m = 3)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(static_cast<std::size_t>(n) * m);
    for (auto& v : p)
        v = u(rng);
    return ProbabilityTable::dichotomic(n, m, p);
}

CVector random_state(Eigen::Index d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    CVector v(d);
    for (Eigen::Index i = 0; i < d; ++i)
        v(i) = Complex(g(rng), g(rng));
    return v;
}

DensityMatrix diag_state(std::initializer_list<double> diag)
{
    const auto d = static_cast<Eigen::Index>(diag.size());
    CMatrix m = CMatrix::Zero(d, d);
    Eigen::Index i = 0;
    for (double v : diag)
        m(i, i) = v, ++i;
    return DensityMatrix(m);
}

Observable sigma_z()
{
    CMatrix z = CMatrix::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return Observable(z);
}

} // namespace

TEST(ProbabilityTable, ValidatesRangeAndNormalization)
{
    EXPECT_THROW(ProbabilityTable(1, 1, 2, {0.7, 0.7}), ValidationError);
    EXPECT_THROW(ProbabilityTable(1, 1, 2, {1.2, -0.2}), ValidationError);
    EXPECT_THROW(ProbabilityTable(1, 1, 2, {1.0}), ShapeError);
    // rounding within the ingest slack is accepted
    EXPECT_NO_THROW(ProbabilityTable(1, 1, 2, {0.5 + 4e-10, 0.5}));
    EXPECT_THROW(ProbabilityTable(1, 1, 2, {0.5 + 4e-10, 0.5}, kInternalTolerance), ValidationError);
}

TEST(Correlators, SymmetricOutcomesGiveZero)
{
    const auto e = correlators_from_probs(constant_plus(0.5));
    for (double v : e.data())
        EXPECT_EQ(v, 0.0);
}

TEST(Correlators, DeterministicOutcomeGivesOne)
{
    const auto e = correlators_from_probs(constant_plus(1.0));
    for (double v : e.data())
        EXPECT_EQ(v, 1.0);
}

TEST(Correlators, HandComputedEntry)
{
    std::vector<double> p(12, 0.5);
    p[0] = 0.933;
    const auto e = correlators_from_probs(ProbabilityTable::dichotomic(4, 3, p));
    EXPECT_NEAR(e(0, 0), 0.866, 1e-12);
    EXPECT_NEAR(e(0, 0), std::cos(M_PI / 6), 1e-4);
}

TEST(Correlators, RejectsNonDichotomicTables)
{
    const ProbabilityTable three(1, 1, 3, {0.2, 0.3, 0.5});
    EXPECT_THROW(correlators_from_probs(three), ShapeError);
}

TEST(I4Spec, Coefficients)
{
    const auto s = i4_spec();
    EXPECT_EQ(s.preparations(), 4);
    EXPECT_EQ(s.measurements(), 3);
    EXPECT_EQ(s.outcomes(), 2);
    EXPECT_EQ(s.correlator_coefficient(0, 0), +1);
    EXPECT_EQ(s.correlator_coefficient(3, 0), -1);
    EXPECT_EQ(s.correlator_coefficient(2, 2), 0);
    EXPECT_EQ(s.correlator_coefficient(1, 2), -1);
    EXPECT_EQ(s.correlator_coefficient(2, 1), -1);
    EXPECT_EQ(s.correlator_ceiling(), 9.0);
}

TEST(EvalWitness, ZeroCorrelators)
{
    EXPECT_EQ(eval_witness(i4_spec(), constant_plus(0.5)), 0.0);
}

TEST(EvalWitness, SignAlignedTableSaturatesAtNine)
{
    const auto s = i4_spec();
    std::vector<double> p(12);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 3; ++y)
            p[static_cast<std::size_t>(x) * 3 + y] = s.correlator_coefficient(x, y) >= 0 ? 1.0 : 0.0;
    EXPECT_EQ(eval_witness(s, ProbabilityTable::dichotomic(4, 3, p)), 9.0);
}

TEST(EvalWitness, QubitPresetAtFullCoherence)
{
    const auto states = ensemble_preset(ScenarioKind::qubit, 1.0, 22.5);
    const auto obs = measurement_preset(ScenarioKind::qubit);
    EXPECT_NEAR(eval_witness(i4_spec(), probs_from_quantum(states, obs)), 3.0 + 2.0 * std::sqrt(2.0), 1e-12);
}

TEST(EvalWitness, ShapeMismatch)
{
    EXPECT_THROW(eval_witness(i4_spec(), constant_plus(0.5, 3, 3)), ShapeError);
    EXPECT_THROW(eval_witness(i4_spec(), ProbabilityTable(4, 3, 3, std::vector<double>(36, 1.0 / 3))),
                 ShapeError);
}

TEST(EvalWitness, GeneralTensorWithThreeOutcomes)
{
    // rewards outcome 3 for x=1 and outcome 1 for x=2
    std::vector<double> d(3 * 2 * 1, 0.0);
    d[(2 * 2 + 0) * 1 + 0] = 1.0;
    d[(0 * 2 + 1) * 1 + 0] = 1.0;
    const auto w = WitnessSpec::from_tensor("T", 2, 1, 3, d);
    const ProbabilityTable p(2, 1, 3, {0.2, 0.6, 0.3, 0.3, 0.5, 0.1});
    EXPECT_NEAR(eval_witness(w, p), 0.5 + 0.6, 1e-15);
    EXPECT_FALSE(w.has_correlator_form());
    EXPECT_THROW(w.correlator_form(), ShapeError);
}

TEST(ProbsFromQuantum, EigenstateMeasurement)
{
    const std::vector<DensityMatrix> rho{diag_state({1.0, 0.0})};
    const std::vector<Observable> m{sigma_z()};
    EXPECT_DOUBLE_EQ(probs_from_quantum(rho, m)(kPlus, 0, 0), 1.0);
}

TEST(ProbsFromQuantum, MaximallyMixedState)
{
    std::mt19937_64 rng(3);
    const std::vector<DensityMatrix> rho{diag_state({0.5, 0.5})};
    for (int i = 0; i < 20; ++i)
    {
        const std::vector<Observable> m{random_observable(2, rng)};
        EXPECT_NEAR(probs_from_quantum(rho, m)(kPlus, 0, 0), 0.5, 1e-14);
    }
}

TEST(ProbsFromQuantum, PlusStateOnSigmaZ)
{
    CVector plus(2);
    plus << 1.0, 1.0;
    const std::vector<DensityMatrix> rho{DensityMatrix::pure(plus)};
    const std::vector<Observable> m{sigma_z()};
    EXPECT_NEAR(probs_from_quantum(rho, m)(kPlus, 0, 0), 0.5, 1e-15);
}

TEST(ProbsFromQuantum, DimensionMismatch)
{
    const std::vector<DensityMatrix> rho{diag_state({1.0, 0.0, 0.0})};
    const std::vector<Observable> m{sigma_z()};
    EXPECT_THROW(probs_from_quantum(rho, m), ShapeError);
}

TEST(QuantumTypes, RejectInvalidOperators)
{
    CMatrix nonherm(2, 2);
    nonherm << 0.5, 0.1, 0.0, 0.5;
    EXPECT_THROW(DensityMatrix{nonherm}, ValidationError);
    EXPECT_THROW(DensityMatrix{CMatrix::Identity(2, 2)}, ValidationError);  // trace 2
    CMatrix negative = CMatrix::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix{negative}, ValidationError);
    EXPECT_THROW(Observable{CMatrix::Identity(2, 2) * 0.5}, ValidationError);
    EXPECT_THROW(Observable{nonherm}, ValidationError);
}

// --- properties --------------------------------------------------------------

TEST(WitnessProperties, QuantumValuesNeverExceedCeiling)
{
    std::mt19937_64 rng(17);
    const auto spec = i4_spec();
    for (int trial = 0; trial < 300; ++trial)
    {
        const Eigen::Index d = 1 + trial % 5;
        std::vector<DensityMatrix> rho;
        for (int x = 0; x < 4; ++x)
            rho.push_back(DensityMatrix::pure(random_state(d, rng)));
        std::vector<Observable> obs;
        for (int y = 0; y < 3; ++y)
            obs.push_back(random_observable(d, rng));
        const auto p = probs_from_quantum(rho, obs);
        EXPECT_LE(eval_witness(spec, p), 9.0 + 1e-9);
        // rows normalize to 1 at the internal tolerance (checked by the constructor)
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 3; ++y)
                EXPECT_NEAR(p(kPlus, x, y) + p(kMinus, x, y), 1.0, 1e-12);
    }
}

TEST(WitnessProperties, LinearInTheTable)
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> lam(0.0, 1.0);
    const auto spec = i4_spec();
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto p1 = random_dichotomic(rng);
        const auto p2 = random_dichotomic(rng);
        const double l = lam(rng);
        EXPECT_NEAR(eval_witness(spec, p1.mix(p2, l)),
                    l * eval_witness(spec, p1) + (1 - l) * eval_witness(spec, p2), 1e-12);
    }
}

TEST(WitnessProperties, TensorAndCorrelatorRoutesAgree)
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        std::vector<double> c(12);
        for (auto& v : c)
            v = coef(rng);
        const auto spec = trial % 2 == 0 ? i4_spec() : WitnessSpec::from_correlators("rand", 4, 3, c);
        const auto p = random_dichotomic(rng);
        EXPECT_NEAR(eval_witness(spec, p), eval_witness(spec, correlators_from_probs(p)), 1e-12);
    }
}
