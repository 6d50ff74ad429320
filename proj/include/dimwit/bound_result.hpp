#ifndef DIMWIT_BOUND_RESULT_HPP_
#define DIMWIT_BOUND_RESULT_HPP_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dimwit/witness.hpp"

namespace dimwit
{

enum class Model
{
    classical,
    quantum
};

inline const char* to_string(Model m) noexcept
{
    return m == Model::classical ? "classical" : "quantum";
}

/** Deterministic classical strategy of dimension d.
 *
 *  `assignment[x]` is the dit (0-based) sent for preparation x and
 *  `responses[y * d + v]` the outcome index returned by measurement y on dit v.
 */
struct ClassicalStrategy
{
    int d = 1;
    int k = 2;
    std::vector<int> assignment;
    std::vector<int> responses;

    int response(int y, int dit) const
    {
        return responses[static_cast<std::size_t>(y) * d + dit];
    }

    friend bool operator==(const ClassicalStrategy&, const ClassicalStrategy&) = default;
};

/// Rank-1 states and dichotomic observables realizing a quantum witness value.
struct QuantumRealization
{
    int d = 1;
    std::vector<DensityMatrix> ensemble;
    std::vector<Observable> observables;
};

struct BoundResult
{
    double value = 0.0;
    std::string witness_name;
    int d = 1;
    Model model = Model::classical;
    std::variant<ClassicalStrategy, QuantumRealization> argmax;

    /// classical: strategies covered by the enumeration
    std::uint64_t strategies = 0;

    /// quantum: every restart reached the relative tolerance
    bool converged = true;
    /// quantum: final value of each restart, in restart order
    std::vector<double> restart_values;
    /// quantum: per-restart convergence flags
    std::vector<bool> restart_converged;
};

} // namespace dimwit

#endif // DIMWIT_BOUND_RESULT_HPP_
