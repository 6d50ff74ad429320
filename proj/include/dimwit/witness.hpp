#ifndef DIMWIT_WITNESS_HPP_
#define DIMWIT_WITNESS_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dimwit/errors.hpp"
#include "dimwit/linalg.hpp"

namespace dimwit
{

/// Normalization slack for tables read from measured data.
inline constexpr double kIngestTolerance = 1e-9;
/// Normalization slack for tables generated by this library.
inline constexpr double kInternalTolerance = 1e-12;

/// Outcome indices of dichotomic scenarios. Index 0 carries the label +1.
inline constexpr int kPlus = 0;
inline constexpr int kMinus = 1;

/// Conditional outcome distribution P(b|x,y) of a prepare-and-measure scenario.
///
/// Indices are 0-based internally: b in [0,k), x in [0,n), y in [0,m).
/// For k = 2, outcome 0 is labeled +1 and outcome 1 is labeled -1.
class ProbabilityTable
{
public:
    ProbabilityTable(int n, int m, int k, std::vector<double> p,
                     double tol = kIngestTolerance)
        : n_(n), m_(m), k_(k), p_(std::move(p))
    {
        if (n < 1 || m < 1 || k < 2)
            throw ShapeError("ProbabilityTable: need n >= 1, m >= 1, k >= 2");
        if (p_.size() != static_cast<std::size_t>(n) * m * k)
            throw ShapeError("ProbabilityTable: entry count does not match k*n*m");
        for (int x = 0; x < n_; ++x)
            for (int y = 0; y < m_; ++y)
            {
                double total = 0.0;
                for (int b = 0; b < k_; ++b)
                {
                    const double v = (*this)(b, x, y);
                    if (!(v >= -tol && v <= 1.0 + tol))
                        throw ValidationError("ProbabilityTable: entry outside [0,1] at (b=" +
                                              std::to_string(b + 1) + ", x=" + std::to_string(x + 1) +
                                              ", y=" + std::to_string(y + 1) + ")");
                    total += v;
                }
                if (std::abs(total - 1.0) > tol)
                    throw ValidationError("ProbabilityTable: row (x=" + std::to_string(x + 1) +
                                          ", y=" + std::to_string(y + 1) + ") is not normalized");
            }
    }

    /// Dichotomic table from P(+1|x,y), given row-major over (x, y).
    static ProbabilityTable dichotomic(int n, int m, std::span<const double> p_plus,
                                       double tol = kIngestTolerance)
    {
        if (p_plus.size() != static_cast<std::size_t>(n) * m)
            throw ShapeError("ProbabilityTable::dichotomic: expected n*m entries");
        std::vector<double> p(2 * p_plus.size());
        std::copy(p_plus.begin(), p_plus.end(), p.begin());
        for (std::size_t i = 0; i < p_plus.size(); ++i)
            p[p_plus.size() + i] = 1.0 - p_plus[i];
        return ProbabilityTable(n, m, 2, std::move(p), tol);
    }

    int preparations() const noexcept { return n_; }
    int measurements() const noexcept { return m_; }
    int outcomes() const noexcept { return k_; }

    double operator()(int b, int x, int y) const
    {
        return p_[index(b, x, y)];
    }

    std::span<const double> data() const noexcept { return p_; }

    /// lambda * this + (1 - lambda) * other
    ProbabilityTable mix(const ProbabilityTable& other, double lambda) const
    {
        if (!same_shape(other))
            throw ShapeError("ProbabilityTable::mix: shape mismatch");
        std::vector<double> p(p_.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] = lambda * p_[i] + (1.0 - lambda) * other.p_[i];
        return ProbabilityTable(n_, m_, k_, std::move(p));
    }

    bool same_shape(const ProbabilityTable& o) const noexcept
    {
        return n_ == o.n_ && m_ == o.m_ && k_ == o.k_;
    }

private:
    std::size_t index(int b, int x, int y) const
    {
        return (static_cast<std::size_t>(b) * n_ + x) * m_ + y;
    }

    int n_;
    int m_;
    int k_;
    std::vector<double> p_;
};

/// Dichotomic correlators E(x,y) = P(+1|x,y) - P(-1|x,y), row-major over (x, y).
class CorrelatorTable
{
public:
    CorrelatorTable(int n, int m, std::vector<double> e) : n_(n), m_(m), e_(std::move(e))
    {
        if (e_.size() != static_cast<std::size_t>(n) * m)
            throw ShapeError("CorrelatorTable: entry count does not match n*m");
        for (double v : e_)
            if (!(std::abs(v) <= 1.0 + kIngestTolerance))
                throw ValidationError("CorrelatorTable: |E| exceeds 1");
    }

    int preparations() const noexcept { return n_; }
    int measurements() const noexcept { return m_; }
    double operator()(int x, int y) const { return e_[static_cast<std::size_t>(x) * m_ + y]; }
    std::span<const double> data() const noexcept { return e_; }

private:
    int n_;
    int m_;
    std::vector<double> e_;
};

/** @brief Linear witness sum_{b,x,y} D(b,x,y) P(b|x,y).
 *
 *  Dichotomic witnesses built with from_correlators() also carry the
 *  correlator coefficients c(x,y); the tensor is then D(+1) = c, D(-1) = -c,
 *  so both evaluation routes give sum c(x,y) E(x,y).
 */
class WitnessSpec
{
public:
    static WitnessSpec from_tensor(std::string name, int n, int m, int k,
                                   std::vector<double> coefficients)
    {
        if (n < 1 || m < 1 || k < 2)
            throw ShapeError("WitnessSpec: need n >= 1, m >= 1, k >= 2");
        if (coefficients.size() != static_cast<std::size_t>(n) * m * k)
            throw ShapeError("WitnessSpec: coefficient count does not match k*n*m");
        WitnessSpec s;
        s.name_ = std::move(name);
        s.n_ = n;
        s.m_ = m;
        s.k_ = k;
        s.d_ = std::move(coefficients);
        return s;
    }

    static WitnessSpec from_correlators(std::string name, int n, int m,
                                        std::vector<double> c)
    {
        if (n < 1 || m < 1)
            throw ShapeError("WitnessSpec: need n >= 1, m >= 1");
        if (c.size() != static_cast<std::size_t>(n) * m)
            throw ShapeError("WitnessSpec: correlator count does not match n*m");
        std::vector<double> d(2 * c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
        {
            d[i] = c[i];
            d[c.size() + i] = -c[i];
        }
        WitnessSpec s = from_tensor(std::move(name), n, m, 2, std::move(d));
        s.c_ = std::move(c);
        return s;
    }

    const std::string& name() const noexcept { return name_; }
    int preparations() const noexcept { return n_; }
    int measurements() const noexcept { return m_; }
    int outcomes() const noexcept { return k_; }

    double coefficient(int b, int x, int y) const
    {
        return d_[(static_cast<std::size_t>(b) * n_ + x) * m_ + y];
    }
    std::span<const double> coefficients() const noexcept { return d_; }

    bool has_correlator_form() const noexcept { return c_.has_value(); }

    double correlator_coefficient(int x, int y) const
    {
        return correlator_form()[static_cast<std::size_t>(x) * m_ + y];
    }

    std::span<const double> correlator_form() const
    {
        if (!c_)
            throw ShapeError("WitnessSpec '" + name_ + "' has no correlator form");
        return *c_;
    }

    /// sum |c(x,y)|, the algebraic ceiling of a correlator-form witness
    double correlator_ceiling() const
    {
        double s = 0.0;
        for (double v : correlator_form())
            s += std::abs(v);
        return s;
    }

private:
    WitnessSpec() = default;

    std::string name_;
    int n_ = 0;
    int m_ = 0;
    int k_ = 0;
    std::vector<double> d_;
    std::optional<std::vector<double>> c_;
};

/// Unit-trace positive semidefinite Hermitian operator.
class DensityMatrix
{
public:
    explicit DensityMatrix(CMatrix rho, double tol = kInternalTolerance) : rho_(std::move(rho))
    {
        if (rho_.rows() != rho_.cols() || rho_.rows() < 1)
            throw ShapeError("DensityMatrix: matrix must be square and non-empty");
        if (hermiticity_defect(rho_) > tol)
            throw ValidationError("DensityMatrix: not Hermitian");
        if (std::abs(rho_.trace() - Complex(1.0)) > tol)
            throw ValidationError("DensityMatrix: trace differs from 1");
        const auto eig = hermitian_eigen(rho_);
        if (eig.values(eig.values.size() - 1) < -1e-10)
            throw ValidationError("DensityMatrix: negative eigenvalue");
    }

    /// |psi><psi| / <psi|psi>
    static DensityMatrix pure(const CVector& psi)
    {
        const double nrm = psi.norm();
        if (nrm == 0.0)
            throw ValidationError("DensityMatrix::pure: zero vector");
        const CVector u = psi / nrm;
        CMatrix rho = u * u.adjoint();
        // exact Hermitian symmetry and real diagonal
        rho = (0.5 * (rho + rho.adjoint())).eval();
        return DensityMatrix(std::move(rho));
    }

    Eigen::Index dim() const noexcept { return rho_.rows(); }
    const CMatrix& matrix() const noexcept { return rho_; }

private:
    CMatrix rho_;
};

/// Dichotomic observable M = M(+1) - M(-1) with spectrum in {-1, +1}.
class Observable
{
public:
    explicit Observable(CMatrix m, double tol = kInternalTolerance) : m_(std::move(m))
    {
        if (m_.rows() != m_.cols() || m_.rows() < 1)
            throw ShapeError("Observable: matrix must be square and non-empty");
        if (hermiticity_defect(m_) > tol)
            throw ValidationError("Observable: not Hermitian");
        const CMatrix sq = m_ * m_;
        const CMatrix id = CMatrix::Identity(m_.rows(), m_.cols());
        if ((sq - id).cwiseAbs().maxCoeff() > 1e-9)
            throw ValidationError("Observable: M^2 differs from identity");
    }

    Eigen::Index dim() const noexcept { return m_.rows(); }
    const CMatrix& matrix() const noexcept { return m_; }

    /// Projective effect (I + M)/2 for b = +1, (I - M)/2 for b = -1.
    CMatrix effect(int outcome) const
    {
        const CMatrix id = CMatrix::Identity(m_.rows(), m_.cols());
        return outcome == kPlus ? CMatrix(0.5 * (id + m_)) : CMatrix(0.5 * (id - m_));
    }

private:
    CMatrix m_;
};

/// E(x,y) = P(+1|x,y) - P(-1|x,y)
inline CorrelatorTable correlators_from_probs(const ProbabilityTable& p)
{
    if (p.outcomes() != 2)
        throw ShapeError("correlators_from_probs: table is not dichotomic");
    const int n = p.preparations();
    const int m = p.measurements();
    std::vector<double> e(static_cast<std::size_t>(n) * m);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < m; ++y)
            e[static_cast<std::size_t>(x) * m + y] = p(kPlus, x, y) - p(kMinus, x, y);
    return CorrelatorTable(n, m, std::move(e));
}

inline double eval_witness(const WitnessSpec& spec, const ProbabilityTable& p)
{
    if (spec.preparations() != p.preparations() || spec.measurements() != p.measurements() ||
        spec.outcomes() != p.outcomes())
        throw ShapeError("eval_witness: witness '" + spec.name() + "' does not match table shape");
    const auto d = spec.coefficients();
    const auto v = p.data();
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        s += d[i] * v[i];
    return s;
}

/// sum c(x,y) E(x,y), for correlator-form witnesses.
inline double eval_witness(const WitnessSpec& spec, const CorrelatorTable& e)
{
    if (spec.preparations() != e.preparations() || spec.measurements() != e.measurements())
        throw ShapeError("eval_witness: witness '" + spec.name() + "' does not match table shape");
    const auto c = spec.correlator_form();
    const auto v = e.data();
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        s += c[i] * v[i];
    return s;
}

namespace detail
{
inline void check_common_dimension(std::span<const DensityMatrix> ensemble,
                                   std::span<const Observable> observables)
{
    if (ensemble.empty() || observables.empty())
        throw ShapeError("need at least one state and one observable");
    const Eigen::Index d = ensemble.front().dim();
    for (const auto& r : ensemble)
        if (r.dim() != d)
            throw ShapeError("states do not share one dimension");
    for (const auto& o : observables)
        if (o.dim() != d)
            throw ShapeError("observables do not match the state dimension");
}

/// Re tr(A B) without forming the product.
inline double real_trace_product(const CMatrix& a, const CMatrix& b)
{
    return (a.transpose().cwiseProduct(b)).sum().real();
}
} // namespace detail

/// P(+-1|x,y) = tr(rho_x (I +- M_y)/2)
inline ProbabilityTable probs_from_quantum(std::span<const DensityMatrix> ensemble,
                                           std::span<const Observable> observables)
{
    detail::check_common_dimension(ensemble, observables);
    const int n = static_cast<int>(ensemble.size());
    const int m = static_cast<int>(observables.size());
    std::vector<double> p(2 * static_cast<std::size_t>(n) * m);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < m; ++y)
        {
            const double plus = detail::real_trace_product(ensemble[x].matrix(),
                                                           observables[y].effect(kPlus));
            const double minus = detail::real_trace_product(ensemble[x].matrix(),
                                                            observables[y].effect(kMinus));
            p[static_cast<std::size_t>(x) * m + y] = plus;
            p[static_cast<std::size_t>(n) * m + static_cast<std::size_t>(x) * m + y] = minus;
        }
    return ProbabilityTable(n, m, 2, std::move(p), kInternalTolerance);
}

/// The four-preparation, three-measurement witness
///   E11 + E12 + E13 + E21 + E22 - E23 + E31 - E32 - E41.
inline WitnessSpec i4_spec()
{
    return WitnessSpec::from_correlators("I4", 4, 3,
                                         {+1, +1, +1,
                                          +1, +1, -1,
                                          +1, -1, 0,
                                          -1, 0, 0});
}

} // namespace dimwit

#endif // DIMWIT_WITNESS_HPP_
