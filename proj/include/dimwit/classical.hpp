#ifndef DIMWIT_CLASSICAL_HPP_
#define DIMWIT_CLASSICAL_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dimwit/bound_result.hpp"
#include "dimwit/parallel.hpp"
#include "dimwit/witness.hpp"

namespace dimwit
{

struct ClassicalOptions
{
    /// Refuse enumerations larger than this many strategies.
    double max_strategies = 1e9;
    /// Only enumerate assignments in canonical dit labeling (restricted growth strings).
    bool symmetry_reduction = false;
    /// 0 = resolve_threads() default.
    unsigned threads = 0;
};

inline void validate(const ClassicalStrategy& s, int n, int m)
{
    if (s.d < 1 || s.k < 2)
        throw ValidationError("ClassicalStrategy: need d >= 1 and k >= 2");
    if (s.assignment.size() != static_cast<std::size_t>(n))
        throw ValidationError("ClassicalStrategy: assignment must cover every preparation");
    if (s.responses.size() != static_cast<std::size_t>(m) * s.d)
        throw ValidationError("ClassicalStrategy: responses must cover every measurement and dit");
    for (int a : s.assignment)
        if (a < 0 || a >= s.d)
            throw ValidationError("ClassicalStrategy: dit value out of range");
    for (int r : s.responses)
        if (r < 0 || r >= s.k)
            throw ValidationError("ClassicalStrategy: response outcome out of range");
}

/// Deterministic table: P(b|x,y) = 1 iff responses[y](assignment[x]) = b.
inline ProbabilityTable strategy_to_probs(const ClassicalStrategy& s, int n, int m)
{
    validate(s, n, m);
    std::vector<double> p(static_cast<std::size_t>(s.k) * n * m, 0.0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < m; ++y)
        {
            const int b = s.response(y, s.assignment[static_cast<std::size_t>(x)]);
            p[(static_cast<std::size_t>(b) * n + x) * m + y] = 1.0;
        }
    return ProbabilityTable(n, m, s.k, std::move(p), kInternalTolerance);
}

namespace detail
{

/// Number of set partitions of n items into at most d blocks.
inline double canonical_assignment_count(int n, int d)
{
    // Stirling numbers of the second kind, S[i][j]
    std::vector<std::vector<double>> s(static_cast<std::size_t>(n) + 1,
                                       std::vector<double>(static_cast<std::size_t>(d) + 1, 0.0));
    s[0][0] = 1.0;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= d; ++j)
            s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
    double total = 0.0;
    for (int j = 1; j <= d; ++j)
        total += s[n][j];
    return total;
}

inline bool is_canonical(const std::vector<int>& a)
{
    int next = 0;
    for (int v : a)
    {
        if (v > next)
            return false;
        if (v == next)
            ++next;
    }
    return true;
}

/// Base-`base` digits of `index`, most significant first.
inline void decode(std::uint64_t index, int base, std::vector<int>& digits)
{
    for (std::size_t i = digits.size(); i-- > 0;)
    {
        digits[i] = static_cast<int>(index % static_cast<std::uint64_t>(base));
        index /= static_cast<std::uint64_t>(base);
    }
}

struct ChunkBest
{
    double value = -std::numeric_limits<double>::infinity();
    std::vector<int> assignment;
    std::vector<int> responses;
    bool found = false;
};

} // namespace detail

/** @brief Exact maximum of a witness over deterministic d-dimensional classical strategies.
 *
 *  Covers all d^n assignments times (k^d)^m response tables. For a fixed
 *  assignment the objective splits into one term per measurement, so each
 *  measurement's response table is searched on its own; the maximum and its
 *  lexicographic tie-break are the same as for the plain product loop.
 *  Ties resolve to the lexicographically first strategy (assignment, then responses).
 */
inline BoundResult classical_bound(const WitnessSpec& spec, int d,
                                   const ClassicalOptions& options = {})
{
    if (d < 1)
        throw ValidationError("classical_bound: d must be >= 1");
    const int n = spec.preparations();
    const int m = spec.measurements();
    const int k = spec.outcomes();

    const double assignments_full = std::pow(static_cast<double>(d), n);
    const double responses_per_y = std::pow(static_cast<double>(k), d);
    const double assignments = options.symmetry_reduction
                                   ? detail::canonical_assignment_count(n, d)
                                   : assignments_full;
    const double size = assignments * std::pow(responses_per_y, m);
    if (!(size <= options.max_strategies))
        throw CapacityError("classical_bound: " + std::to_string(size) +
                            " strategies exceed the cap of " +
                            std::to_string(options.max_strategies));
    if (assignments_full > 9.0e15 || responses_per_y > 9.0e15)
        throw CapacityError("classical_bound: index space too large");

    const auto assignment_count = static_cast<std::uint64_t>(assignments_full);
    const auto table_count = static_cast<std::uint64_t>(responses_per_y);

    const std::uint64_t chunk_count = std::min<std::uint64_t>(assignment_count, 256);
    std::vector<detail::ChunkBest> chunks(chunk_count);

    parallel_for(chunk_count, resolve_threads(options.threads), [&](std::size_t c) {
        const std::uint64_t begin = assignment_count * c / chunk_count;
        const std::uint64_t end = assignment_count * (c + 1) / chunk_count;
        detail::ChunkBest best;
        std::vector<int> assignment(static_cast<std::size_t>(n));
        std::vector<int> table(static_cast<std::size_t>(d));
        std::vector<int> responses(static_cast<std::size_t>(m) * d);
        for (std::uint64_t a = begin; a < end; ++a)
        {
            detail::decode(a, d, assignment);
            if (options.symmetry_reduction && !detail::is_canonical(assignment))
                continue;
            double total = 0.0;
            for (int y = 0; y < m; ++y)
            {
                double best_y = -std::numeric_limits<double>::infinity();
                std::uint64_t best_t = 0;
                for (std::uint64_t t = 0; t < table_count; ++t)
                {
                    detail::decode(t, k, table);
                    double v = 0.0;
                    for (int x = 0; x < n; ++x)
                        v += spec.coefficient(table[static_cast<std::size_t>(assignment[x])], x, y);
                    if (v > best_y)
                    {
                        best_y = v;
                        best_t = t;
                    }
                }
                detail::decode(best_t, k, table);
                std::copy(table.begin(), table.end(), responses.begin() + static_cast<std::ptrdiff_t>(y) * d);
                total += best_y;
            }
            if (!best.found || total > best.value)
            {
                best.value = total;
                best.assignment = assignment;
                best.responses = responses;
                best.found = true;
            }
        }
        chunks[c] = std::move(best);
    });

    const detail::ChunkBest* winner = nullptr;
    for (const auto& c : chunks)
        if (c.found && (winner == nullptr || c.value > winner->value))
            winner = &c;

    ClassicalStrategy s;
    s.d = d;
    s.k = k;
    s.assignment = winner->assignment;
    s.responses = winner->responses;

    BoundResult r;
    r.value = eval_witness(spec, strategy_to_probs(s, n, m));
    r.witness_name = spec.name();
    r.d = d;
    r.model = Model::classical;
    r.strategies = static_cast<std::uint64_t>(size);
    r.argmax = std::move(s);
    return r;
}

} // namespace dimwit

#endif // DIMWIT_CLASSICAL_HPP_
