#ifndef DIMWIT_CERTIFY_HPP_
#define DIMWIT_CERTIFY_HPP_

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dimwit/classical.hpp"
#include "dimwit/counts.hpp"
#include "dimwit/seesaw.hpp"
#include "dimwit/witness.hpp"

namespace dimwit
{

/// Observed frequencies with binomial standard errors of each correlator.
struct EstimatedTable
{
    ProbabilityTable table;
    /// maximum-likelihood SE of E(x,y) = 2 sqrt(p (1 - p) / N), row-major (x, y)
    std::vector<double> se;
    /// SE of E(x,y) from the half-width of the z = 1 Wilson interval on p
    std::vector<double> wilson_se;
};

inline EstimatedTable probs_from_counts(const CountsRecord& c)
{
    validate(c);
    const std::size_t cells = static_cast<std::size_t>(c.n) * c.m;
    std::vector<double> p(static_cast<std::size_t>(c.k) * cells);
    for (int x = 0; x < c.n; ++x)
        for (int y = 0; y < c.m; ++y)
        {
            const std::uint64_t shots = c.shots_at(x, y);
            if (shots == 0)
                throw ValidationError("probs_from_counts: zero shots at (x=" + std::to_string(x + 1) +
                                      ", y=" + std::to_string(y + 1) + ")");
            for (int b = 0; b < c.k; ++b)
                p[static_cast<std::size_t>(b) * cells + static_cast<std::size_t>(x) * c.m + y] =
                    static_cast<double>(c.count(b, x, y)) / static_cast<double>(shots);
        }

    EstimatedTable out{ProbabilityTable(c.n, c.m, c.k, std::move(p)), {}, {}};
    if (c.k != 2)
        return out;
    out.se.resize(cells);
    out.wilson_se.resize(cells);
    for (int x = 0; x < c.n; ++x)
        for (int y = 0; y < c.m; ++y)
        {
            const double shots = static_cast<double>(c.shots_at(x, y));
            const double q = out.table(kPlus, x, y);
            const std::size_t i = static_cast<std::size_t>(x) * c.m + y;
            out.se[i] = 2.0 * std::sqrt(q * (1.0 - q) / shots);
            // Wilson score half-width with z = 1
            out.wilson_se[i] = 2.0 / (1.0 + 1.0 / shots) *
                               std::sqrt(q * (1.0 - q) / shots + 1.0 / (4.0 * shots * shots));
        }
    return out;
}

struct WitnessEstimate
{
    double value = 0.0;
    double sigma = 0.0;
    /// same propagation with the Wilson standard errors
    double wilson_sigma = 0.0;
};

/// value = sum c E, sigma = sqrt(sum c^2 SE^2) with independent settings.
inline WitnessEstimate witness_with_error(const WitnessSpec& spec, const CountsRecord& counts)
{
    if (!spec.has_correlator_form())
        throw ShapeError("witness_with_error: witness '" + spec.name() + "' is not dichotomic");
    if (counts.n != spec.preparations() || counts.m != spec.measurements() || counts.k != 2)
        throw ShapeError("witness_with_error: counts do not match witness '" + spec.name() + "'");
    const EstimatedTable est = probs_from_counts(counts);
    const CorrelatorTable e = correlators_from_probs(est.table);

    WitnessEstimate out;
    out.value = eval_witness(spec, e);
    double var = 0.0;
    double wvar = 0.0;
    const auto c = spec.correlator_form();
    for (std::size_t i = 0; i < c.size(); ++i)
    {
        var += c[i] * c[i] * est.se[i] * est.se[i];
        wvar += c[i] * c[i] * est.wilson_se[i] * est.wilson_se[i];
    }
    out.sigma = std::sqrt(var);
    out.wilson_sigma = std::sqrt(wvar);
    return out;
}

enum class Provenance
{
    builtin,
    enumerated,
    seesaw
};

inline const char* to_string(Provenance p) noexcept
{
    switch (p)
    {
    case Provenance::builtin:
        return "builtin";
    case Provenance::enumerated:
        return "enumerated";
    case Provenance::seesaw:
        return "seesaw";
    }
    return "?";
}

struct BoundsRow
{
    int d = 1;
    double classical = 0.0;
    double quantum = 0.0;
    Provenance classical_source = Provenance::builtin;
    Provenance quantum_source = Provenance::builtin;
};

/// Classical and quantum bounds per dimension, rows sorted by d.
class BoundsTable
{
public:
    explicit BoundsTable(std::string witness, std::vector<BoundsRow> rows)
        : witness_(std::move(witness)), rows_(std::move(rows))
    {
        if (rows_.empty())
            throw ValidationError("BoundsTable: no rows");
        for (std::size_t i = 0; i < rows_.size(); ++i)
        {
            const auto& r = rows_[i];
            if (r.classical > r.quantum + 1e-9)
                throw ValidationError("BoundsTable: C_d exceeds Q_d at d=" + std::to_string(r.d));
            if (i > 0)
            {
                const auto& prev = rows_[i - 1];
                if (r.d <= prev.d)
                    throw ValidationError("BoundsTable: rows must have increasing d");
                if (r.classical < prev.classical - 1e-9 || r.quantum < prev.quantum - 1e-9)
                    throw ValidationError("BoundsTable: bounds must be non-decreasing in d");
            }
        }
    }

    const std::string& witness() const noexcept { return witness_; }
    const std::vector<BoundsRow>& rows() const noexcept { return rows_; }
    int max_d() const noexcept { return rows_.back().d; }

private:
    std::string witness_;
    std::vector<BoundsRow> rows_;
};

/// Bounds of I4 for d = 1..4. C_1 = Q_1 = 3 (one state); Q_3 is the two-decimal 7.97.
inline BoundsTable builtin_i4_bounds()
{
    return BoundsTable("I4", {
                                 {1, 3.0, 3.0, Provenance::builtin, Provenance::builtin},
                                 {2, 5.0, 6.0, Provenance::builtin, Provenance::builtin},
                                 {3, 7.0, 7.97, Provenance::builtin, Provenance::builtin},
                                 {4, 9.0, 9.0, Provenance::builtin, Provenance::builtin},
                             });
}

/// Fresh bounds: exact enumeration for C_d, see-saw for Q_d, d = 1..max_d.
/// Q_d is floored at C_d, since the see-saw only ever reports a lower bound.
inline BoundsTable compute_bounds(const WitnessSpec& spec, int max_d,
                                  const SeesawConfig& seesaw = {},
                                  const ClassicalOptions& classical = {})
{
    std::vector<BoundsRow> rows;
    for (int d = 1; d <= max_d; ++d)
    {
        const double c = classical_bound(spec, d, classical).value;
        const double q = seesaw_bound(spec, d, seesaw).value;
        BoundsRow row{d, c, std::max(c, q), Provenance::enumerated,
                      q >= c ? Provenance::seesaw : Provenance::enumerated};
        if (!rows.empty())
            row.quantum = std::max(row.quantum, rows.back().quantum);
        rows.push_back(row);
    }
    return BoundsTable(spec.name(), std::move(rows));
}

struct CertificationReport
{
    double value = 0.0;
    double sigma = 0.0;
    double k = 0.0;
    /// smallest tabulated d with C_d >= value - k sigma; empty when none qualifies
    std::optional<int> min_classical_dim;
    std::optional<int> min_quantum_dim;
    /// largest tabulated d, for reading an empty minimum as "> max_d"
    int max_tabulated_d = 0;
    /// d -> (value - k sigma > C_d)
    std::map<int, bool> quantum_certified_given_dim;
    /// (value - bound) / sigma; empty when sigma = 0
    std::map<int, std::optional<double>> sigmas_above_classical;
    std::map<int, std::optional<double>> sigmas_above_quantum;
};

inline CertificationReport certify(double value, double sigma, double k, const BoundsTable& bounds)
{
    if (!(k >= 0.0))
        throw ValidationError("certify: k must be >= 0");
    if (!(sigma >= 0.0))
        throw ValidationError("certify: sigma must be >= 0");

    CertificationReport r;
    r.value = value;
    r.sigma = sigma;
    r.k = k;
    r.max_tabulated_d = bounds.max_d();
    const double threshold = value - k * sigma;
    auto sigmas = [&](double bound) -> std::optional<double> {
        if (sigma == 0.0)
            return std::nullopt;
        return (value - bound) / sigma;
    };
    for (const auto& row : bounds.rows())
    {
        if (!r.min_classical_dim && row.classical >= threshold)
            r.min_classical_dim = row.d;
        if (!r.min_quantum_dim && row.quantum >= threshold)
            r.min_quantum_dim = row.d;
        r.quantum_certified_given_dim[row.d] = threshold > row.classical;
        r.sigmas_above_classical[row.d] = sigmas(row.classical);
        r.sigmas_above_quantum[row.d] = sigmas(row.quantum);
    }
    return r;
}

} // namespace dimwit

#endif // DIMWIT_CERTIFY_HPP_
