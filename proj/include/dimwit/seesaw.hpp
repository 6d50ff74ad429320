#ifndef DIMWIT_SEESAW_HPP_
#define DIMWIT_SEESAW_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dimwit/bound_result.hpp"
#include "dimwit/linalg.hpp"
#include "dimwit/parallel.hpp"
#include "dimwit/witness.hpp"

namespace dimwit
{

struct SeesawConfig
{
    int restarts = 50;
    int max_iters = 500;
    /// stop once (new - old) / max(1, |old|) < tol after a full state+observable round
    double tol = 1e-10;
    std::uint64_t seed = 0;
    /// 0 = resolve_threads() default
    unsigned threads = 0;
};

inline void validate(const SeesawConfig& c)
{
    if (c.restarts < 1)
        throw ValidationError("SeesawConfig: restarts must be >= 1");
    if (c.max_iters < 1)
        throw ValidationError("SeesawConfig: max_iters must be >= 1");
    if (!(c.tol > 0.0))
        throw ValidationError("SeesawConfig: tol must be > 0");
}

namespace detail
{

inline void check_seesaw_shape(const WitnessSpec& spec, std::size_t n, std::size_t m)
{
    if (!spec.has_correlator_form())
        throw ShapeError("see-saw needs a correlator-form witness");
    if (n != static_cast<std::size_t>(spec.preparations()) ||
        m != static_cast<std::size_t>(spec.measurements()))
        throw ShapeError("see-saw: operator count does not match witness '" + spec.name() + "'");
}

/// sum_{x,y} c(x,y) Re tr(rho_x M_y)
inline double correlator_objective(const WitnessSpec& spec,
                                   std::span<const DensityMatrix> ensemble,
                                   std::span<const Observable> observables)
{
    double s = 0.0;
    for (std::size_t x = 0; x < ensemble.size(); ++x)
        for (std::size_t y = 0; y < observables.size(); ++y)
        {
            const double c = spec.correlator_coefficient(static_cast<int>(x), static_cast<int>(y));
            if (c != 0.0)
                s += c * real_trace_product(ensemble[x].matrix(), observables[y].matrix());
        }
    return s;
}

inline CMatrix hermitize(const CMatrix& a)
{
    return 0.5 * (a + a.adjoint());
}

/// Eigenvalues at or above this count as non-negative in the sign step.
inline constexpr double kSignZero = -1e-12;

} // namespace detail

/// rho_x = projector onto the top eigenvector of A_x = sum_y c(x,y) M_y.
inline std::vector<DensityMatrix> optimal_states_for_observables(
    const WitnessSpec& spec, std::span<const Observable> observables)
{
    if (observables.empty())
        throw ShapeError("optimal_states_for_observables: no observables");
    detail::check_seesaw_shape(spec, static_cast<std::size_t>(spec.preparations()), observables.size());
    const Eigen::Index d = observables.front().dim();
    for (const auto& o : observables)
        if (o.dim() != d)
            throw ShapeError("optimal_states_for_observables: observables differ in dimension");

    std::vector<DensityMatrix> states;
    states.reserve(static_cast<std::size_t>(spec.preparations()));
    for (int x = 0; x < spec.preparations(); ++x)
    {
        CMatrix a = CMatrix::Zero(d, d);
        for (int y = 0; y < spec.measurements(); ++y)
            a += spec.correlator_coefficient(x, y) * observables[static_cast<std::size_t>(y)].matrix();
        const auto eig = hermitian_eigen(detail::hermitize(a));
        states.push_back(DensityMatrix::pure(eig.vectors.col(0)));
    }
    return states;
}

/// M_y = sum_i sign(l_i) |v_i><v_i| for the eigenpairs of B_y = sum_x c(x,y) rho_x.
/// Zero eigenvalues take the sign +1.
inline std::vector<Observable> optimal_observables_for_states(
    const WitnessSpec& spec, std::span<const DensityMatrix> ensemble)
{
    if (ensemble.empty())
        throw ShapeError("optimal_observables_for_states: no states");
    detail::check_seesaw_shape(spec, ensemble.size(), static_cast<std::size_t>(spec.measurements()));
    const Eigen::Index d = ensemble.front().dim();
    for (const auto& r : ensemble)
        if (r.dim() != d)
            throw ShapeError("optimal_observables_for_states: states differ in dimension");

    std::vector<Observable> observables;
    observables.reserve(static_cast<std::size_t>(spec.measurements()));
    for (int y = 0; y < spec.measurements(); ++y)
    {
        CMatrix b = CMatrix::Zero(d, d);
        for (int x = 0; x < spec.preparations(); ++x)
            b += spec.correlator_coefficient(x, y) * ensemble[static_cast<std::size_t>(x)].matrix();
        const auto eig = hermitian_eigen(detail::hermitize(b));
        Eigen::VectorXd signs(d);
        for (Eigen::Index i = 0; i < d; ++i)
            signs(i) = eig.values(i) >= detail::kSignZero ? 1.0 : -1.0;
        CMatrix mat = eig.vectors * signs.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
        observables.emplace_back(detail::hermitize(mat));
    }
    return observables;
}

/// Trajectory of a single see-saw restart.
struct SeesawTrace
{
    /// objective after each half-step (state step, observable step, ...)
    std::vector<double> values;
    bool converged = false;
    QuantumRealization realization;
};

/// Random projective dichotomic observable V diag(s) V^dagger. For d > 1 the
/// sign pattern s is never all-equal.
template <typename Rng>
Observable random_observable(Eigen::Index d, Rng& rng)
{
    const CMatrix v = random_unitary(d, rng);
    Eigen::VectorXd s(d);
    std::bernoulli_distribution coin(0.5);
    for (;;)
    {
        int plus = 0;
        for (Eigen::Index i = 0; i < d; ++i)
        {
            s(i) = coin(rng) ? 1.0 : -1.0;
            plus += s(i) > 0 ? 1 : 0;
        }
        if (d == 1 || (plus != 0 && plus != d))
            break;
    }
    const CMatrix m = v * s.cast<Complex>().asDiagonal() * v.adjoint();
    return Observable(detail::hermitize(m), 1e-10);
}

/** @brief One see-saw restart from random observables.
 *
 *  Alternates the state and observable half-steps. Throws NumericError if
 *  any half-step lowers the objective by more than 1e-9.
 */
inline SeesawTrace seesaw_restart(const WitnessSpec& spec, int d, const SeesawConfig& config,
                                  std::uint64_t restart_seed)
{
    std::mt19937_64 rng(restart_seed);
    std::vector<Observable> observables;
    observables.reserve(static_cast<std::size_t>(spec.measurements()));
    for (int y = 0; y < spec.measurements(); ++y)
        observables.push_back(random_observable(d, rng));

    SeesawTrace trace;
    std::vector<DensityMatrix> states = optimal_states_for_observables(spec, observables);
    double current = detail::correlator_objective(spec, states, observables);
    trace.values.push_back(current);

    auto record = [&](double next) {
        if (next < current - 1e-9)
            throw NumericError("see-saw: objective decreased from " + std::to_string(current) +
                               " to " + std::to_string(next));
        trace.values.push_back(next);
        current = next;
    };

    for (int it = 0; it < config.max_iters; ++it)
    {
        const double start = current;
        observables = optimal_observables_for_states(spec, states);
        record(detail::correlator_objective(spec, states, observables));
        states = optimal_states_for_observables(spec, observables);
        record(detail::correlator_objective(spec, states, observables));
        if ((current - start) / std::max(1.0, std::abs(start)) < config.tol)
        {
            trace.converged = true;
            break;
        }
    }
    trace.realization.d = d;
    trace.realization.ensemble = std::move(states);
    trace.realization.observables = std::move(observables);
    return trace;
}

/** @brief Lower bound on the quantum maximum of a correlator-form witness in dimension d.
 *
 *  Restart r is seeded with config.seed + r. The result is the best restart
 *  (the earliest one on ties) and is independent of the thread count.
 */
inline BoundResult seesaw_bound(const WitnessSpec& spec, int d, const SeesawConfig& config = {})
{
    validate(config);
    if (d < 1)
        throw ValidationError("seesaw_bound: d must be >= 1");
    if (!spec.has_correlator_form())
        throw ShapeError("seesaw_bound: witness '" + spec.name() + "' has no correlator form");

    std::vector<SeesawTrace> traces(static_cast<std::size_t>(config.restarts));
    parallel_for(traces.size(), resolve_threads(config.threads), [&](std::size_t r) {
        traces[r] = seesaw_restart(spec, d, config, config.seed + r);
    });

    BoundResult result;
    result.witness_name = spec.name();
    result.d = d;
    result.model = Model::quantum;
    std::size_t best = 0;
    for (std::size_t r = 0; r < traces.size(); ++r)
    {
        const double v = traces[r].values.back();
        result.restart_values.push_back(v);
        result.restart_converged.push_back(traces[r].converged);
        if (v > traces[best].values.back())
            best = r;
    }
    result.value = traces[best].values.back();
    result.converged = traces[best].converged;
    result.argmax = std::move(traces[best].realization);
    return result;
}

} // namespace dimwit

#endif // DIMWIT_SEESAW_HPP_
