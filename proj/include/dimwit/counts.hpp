#ifndef DIMWIT_COUNTS_HPP_
#define DIMWIT_COUNTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dimwit/errors.hpp"

namespace dimwit
{

/// Outcome counts N(b|x,y) with per-setting totals.
struct CountsRecord
{
    int n = 0;
    int m = 0;
    int k = 2;
    std::vector<std::uint64_t> shots;   ///< (x, y) row-major
    std::vector<std::uint64_t> counts;  ///< (b, x, y) row-major

    std::uint64_t shots_at(int x, int y) const
    {
        return shots[static_cast<std::size_t>(x) * m + y];
    }
    std::uint64_t count(int b, int x, int y) const
    {
        return counts[(static_cast<std::size_t>(b) * n + x) * m + y];
    }
};

inline void validate(const CountsRecord& c)
{
    if (c.n < 1 || c.m < 1 || c.k < 2)
        throw ShapeError("CountsRecord: need n >= 1, m >= 1, k >= 2");
    if (c.shots.size() != static_cast<std::size_t>(c.n) * c.m ||
        c.counts.size() != static_cast<std::size_t>(c.k) * c.n * c.m)
        throw ShapeError("CountsRecord: array sizes do not match (n, m, k)");
    for (int x = 0; x < c.n; ++x)
        for (int y = 0; y < c.m; ++y)
        {
            std::uint64_t total = 0;
            for (int b = 0; b < c.k; ++b)
                total += c.count(b, x, y);
            if (total != c.shots_at(x, y))
                throw ValidationError("CountsRecord: counts at (x=" + std::to_string(x + 1) +
                                      ", y=" + std::to_string(y + 1) + ") do not sum to shots");
        }
}

} // namespace dimwit

#endif // DIMWIT_COUNTS_HPP_
