#ifndef DIMWIT_IO_HPP_
#define DIMWIT_IO_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dimwit/bound_result.hpp"
#include "dimwit/certify.hpp"
#include "dimwit/counts.hpp"
#include "dimwit/witness.hpp"

namespace dimwit::io
{

using nlohmann::json;

/// "+1"/"-1" for dichotomic tables, "1".."k" otherwise.
inline std::string outcome_label(int k, int b)
{
    if (k == 2)
        return b == kPlus ? "+1" : "-1";
    return std::to_string(b + 1);
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError(path + ": cannot open file");
    try
    {
        return json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw FormatError(path + ": " + e.what());
    }
}

inline json parse_json_text(std::string_view text, std::string_view source)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw FormatError(std::string(source) + ": " + e.what());
    }
}

namespace detail
{

[[noreturn]] inline void fail(std::string_view source, std::string_view field, std::string_view what)
{
    throw FormatError(std::string(source) + ": field '" + std::string(field) + "': " + std::string(what));
}

inline const json& require(const json& j, const char* key, std::string_view source,
                           std::string_view prefix = "")
{
    const std::string field = prefix.empty() ? key : std::string(prefix) + "." + key;
    if (!j.is_object() || !j.contains(key))
        fail(source, field, "missing");
    return j.at(key);
}

/// Row-major n x m matrix of numbers. n, m are taken from the first matrix read
/// and enforced on later ones (pass n = m = 0 to set them).
template <typename T>
std::vector<T> read_matrix(const json& j, std::string_view source, const std::string& field,
                           int& n, int& m)
{
    if (!j.is_array() || j.empty())
        fail(source, field, "expected a non-empty array of rows");
    if (n == 0)
        n = static_cast<int>(j.size());
    if (static_cast<int>(j.size()) != n)
        fail(source, field, "expected " + std::to_string(n) + " rows");
    std::vector<T> out;
    for (std::size_t x = 0; x < j.size(); ++x)
    {
        const json& row = j[x];
        const std::string row_field = field + "[" + std::to_string(x + 1) + "]";
        if (!row.is_array() || row.empty())
            fail(source, row_field, "expected a non-empty array");
        if (m == 0)
            m = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != m)
            fail(source, row_field, "expected " + std::to_string(m) + " entries");
        for (std::size_t y = 0; y < row.size(); ++y)
        {
            const json& v = row[y];
            if constexpr (std::is_integral_v<T>)
            {
                if (!v.is_number_unsigned())
                    fail(source, row_field + "[" + std::to_string(y + 1) + "]",
                         "expected a non-negative integer");
            }
            else if (!v.is_number())
                fail(source, row_field + "[" + std::to_string(y + 1) + "]", "expected a number");
            out.push_back(v.get<T>());
        }
    }
    return out;
}

template <typename T>
json write_matrix(std::span<const T> flat, int n, int m)
{
    json rows = json::array();
    for (int x = 0; x < n; ++x)
    {
        json row = json::array();
        for (int y = 0; y < m; ++y)
            row.push_back(flat[static_cast<std::size_t>(x) * m + y]);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json write_complex_matrix(const CMatrix& a)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
    {
        json row = json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            row.push_back(json::array({a(i, j).real(), a(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline CMatrix read_complex_matrix(const json& j, std::string_view source, const std::string& field)
{
    if (!j.is_array() || j.empty())
        fail(source, field, "expected a square array of [re, im] pairs");
    const auto d = static_cast<Eigen::Index>(j.size());
    CMatrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
    {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
            fail(source, field, "matrix is not square");
        for (Eigen::Index k = 0; k < d; ++k)
        {
            const json& z = row[static_cast<std::size_t>(k)];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                fail(source, field, "entries must be [re, im] pairs");
            a(i, k) = Complex(z[0].get<double>(), z[1].get<double>());
        }
    }
    return a;
}

/// Reads {"+1": [[...]], "-1": [[...]]} (or "1".."k") into a (b, x, y) array.
template <typename T>
std::vector<T> read_outcome_tensor(const json& j, std::string_view source, const std::string& field,
                                   int& n, int& m, int& k)
{
    if (!j.is_object() || j.empty())
        fail(source, field, "expected an object keyed by outcome label");
    if (k == 0)
        k = static_cast<int>(j.size());
    if (static_cast<int>(j.size()) != k)
        fail(source, field, "expected " + std::to_string(k) + " outcome labels");
    std::vector<T> out;
    for (int b = 0; b < k; ++b)
    {
        const std::string label = outcome_label(k, b);
        if (!j.contains(label))
            fail(source, field + "." + label, "missing");
        auto part = read_matrix<T>(j.at(label), source, field + "." + label, n, m);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

template <typename T>
json write_outcome_tensor(std::span<const T> flat, int n, int m, int k)
{
    json j = json::object();
    const std::size_t cells = static_cast<std::size_t>(n) * m;
    for (int b = 0; b < k; ++b)
        j[outcome_label(k, b)] = write_matrix<T>(flat.subspan(static_cast<std::size_t>(b) * cells, cells), n, m);
    return j;
}

inline int read_positive_int(const json& j, const char* key, std::string_view source)
{
    const json& v = require(j, key, source);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        fail(source, key, "expected a positive integer");
    return v.get<int>();
}

} // namespace detail

// --- ProbabilityTable ------------------------------------------------------

inline json to_json(const ProbabilityTable& p)
{
    return json{{"n", p.preparations()},
                {"m", p.measurements()},
                {"k", p.outcomes()},
                {"p", detail::write_outcome_tensor<double>(p.data(), p.preparations(),
                                                           p.measurements(), p.outcomes())}};
}

inline ProbabilityTable probability_table_from_json(const json& j, std::string_view source = "<json>")
{
    int n = detail::read_positive_int(j, "n", source);
    int m = detail::read_positive_int(j, "m", source);
    int k = detail::read_positive_int(j, "k", source);
    auto p = detail::read_outcome_tensor<double>(detail::require(j, "p", source), source, "p", n, m, k);
    try
    {
        return ProbabilityTable(n, m, k, std::move(p));
    }
    catch (const Error& e)
    {
        throw FormatError(std::string(source) + ": " + e.what());
    }
}

// --- WitnessSpec -----------------------------------------------------------

inline json to_json(const WitnessSpec& s)
{
    if (s.has_correlator_form())
        return json{{"name", s.name()},
                    {"c", detail::write_matrix<double>(s.correlator_form(), s.preparations(),
                                                       s.measurements())}};
    return json{{"name", s.name()},
                {"k", s.outcomes()},
                {"D", detail::write_outcome_tensor<double>(s.coefficients(), s.preparations(),
                                                           s.measurements(), s.outcomes())}};
}

/// {"name":..., "c": [[...]]} for correlator witnesses, or
/// {"name":..., "D": {"+1": [[...]], "-1": [[...]]}} (labels "1".."k" when k > 2).
inline WitnessSpec witness_spec_from_json(const json& j, std::string_view source = "<json>")
{
    const json& name = detail::require(j, "name", source);
    if (!name.is_string())
        detail::fail(source, "name", "expected a string");
    int n = 0;
    int m = 0;
    if (j.contains("c"))
    {
        auto c = detail::read_matrix<double>(j.at("c"), source, "c", n, m);
        return WitnessSpec::from_correlators(name.get<std::string>(), n, m, std::move(c));
    }
    if (j.contains("D"))
    {
        int k = 0;
        if (j.contains("k"))
            k = detail::read_positive_int(j, "k", source);
        auto d = detail::read_outcome_tensor<double>(j.at("D"), source, "D", n, m, k);
        return WitnessSpec::from_tensor(name.get<std::string>(), n, m, k, std::move(d));
    }
    detail::fail(source, "c", "missing (or give a tensor under 'D')");
}

// --- CountsRecord ----------------------------------------------------------

inline json to_json(const CountsRecord& c)
{
    json shots;
    bool uniform = true;
    for (auto s : c.shots)
        uniform = uniform && s == c.shots.front();
    if (uniform)
        shots = c.shots.front();
    else
        shots = detail::write_matrix<std::uint64_t>(c.shots, c.n, c.m);
    return json{{"shots", shots},
                {"counts", detail::write_outcome_tensor<std::uint64_t>(c.counts, c.n, c.m, c.k)}};
}

/// {"shots": N or [[...]], "counts": {"+1": [[...]], "-1": [[...]]}}
inline CountsRecord counts_from_json(const json& j, std::string_view source = "<json>")
{
    CountsRecord c;
    int n = 0;
    int m = 0;
    int k = 0;
    c.counts = detail::read_outcome_tensor<std::uint64_t>(detail::require(j, "counts", source), source,
                                                          "counts", n, m, k);
    c.n = n;
    c.m = m;
    c.k = k;
    const json& shots = detail::require(j, "shots", source);
    if (shots.is_number_unsigned())
        c.shots.assign(static_cast<std::size_t>(n) * m, shots.get<std::uint64_t>());
    else if (shots.is_array())
        c.shots = detail::read_matrix<std::uint64_t>(shots, source, "shots", n, m);
    else
        detail::fail(source, "shots", "expected a non-negative integer or a matrix of them");
    try
    {
        validate(c);
    }
    catch (const Error& e)
    {
        throw FormatError(std::string(source) + ": " + e.what());
    }
    return c;
}

// --- results ---------------------------------------------------------------

inline json to_json(const ClassicalStrategy& s)
{
    json assignment = json::array();
    for (int a : s.assignment)
        assignment.push_back(a + 1);
    json responses = json::array();
    const int m = static_cast<int>(s.responses.size()) / s.d;
    for (int y = 0; y < m; ++y)
    {
        json row = json::array();
        for (int v = 0; v < s.d; ++v)
        {
            const int b = s.response(y, v);
            if (s.k == 2)
                row.push_back(b == kPlus ? 1 : -1);
            else
                row.push_back(b + 1);
        }
        responses.push_back(std::move(row));
    }
    return json{{"d", s.d}, {"assignment", assignment}, {"responses", responses}};
}

inline json to_json(const QuantumRealization& q)
{
    json states = json::array();
    for (const auto& r : q.ensemble)
        states.push_back(detail::write_complex_matrix(r.matrix()));
    json observables = json::array();
    for (const auto& o : q.observables)
        observables.push_back(detail::write_complex_matrix(o.matrix()));
    return json{{"d", q.d}, {"states", states}, {"observables", observables}};
}

inline QuantumRealization realization_from_json(const json& j, std::string_view source = "<json>")
{
    QuantumRealization q;
    q.d = detail::read_positive_int(j, "d", source);
    const json& states = detail::require(j, "states", source);
    const json& observables = detail::require(j, "observables", source);
    if (!states.is_array() || !observables.is_array())
        detail::fail(source, "states", "expected arrays of matrices");
    try
    {
        for (std::size_t i = 0; i < states.size(); ++i)
            q.ensemble.emplace_back(detail::read_complex_matrix(
                                        states[i], source, "states[" + std::to_string(i + 1) + "]"),
                                    1e-9);
        for (std::size_t i = 0; i < observables.size(); ++i)
            q.observables.emplace_back(detail::read_complex_matrix(
                                           observables[i], source,
                                           "observables[" + std::to_string(i + 1) + "]"),
                                       1e-9);
    }
    catch (const FormatError&)
    {
        throw;
    }
    catch (const Error& e)
    {
        throw FormatError(std::string(source) + ": " + e.what());
    }
    return q;
}

inline json to_json(const BoundResult& r)
{
    json j{{"witness", r.witness_name},
           {"model", to_string(r.model)},
           {"d", r.d},
           {"value", r.value}};
    if (r.model == Model::classical)
    {
        j["strategies"] = r.strategies;
        j["argmax"] = to_json(std::get<ClassicalStrategy>(r.argmax));
    }
    else
    {
        j["converged"] = r.converged;
        j["restarts"] = r.restart_values.size();
        j["restart_values"] = r.restart_values;
        json flags = json::array();
        for (bool b : r.restart_converged)
            flags.push_back(b);
        j["restart_converged"] = flags;
        j["realization"] = to_json(std::get<QuantumRealization>(r.argmax));
    }
    return j;
}

inline json to_json(const BoundsTable& t)
{
    json rows = json::array();
    for (const auto& r : t.rows())
        rows.push_back(json{{"d", r.d},
                            {"classical", r.classical},
                            {"quantum", r.quantum},
                            {"classical_source", to_string(r.classical_source)},
                            {"quantum_source", to_string(r.quantum_source)}});
    return json{{"witness", t.witness()}, {"rows", rows}};
}

inline json to_json(const CertificationReport& r)
{
    auto dim = [&](const std::optional<int>& d) -> json {
        return d ? json(*d) : json(nullptr);
    };
    auto sig = [](const std::map<int, std::optional<double>>& m) {
        json j = json::object();
        for (const auto& [d, v] : m)
            j[std::to_string(d)] = v ? json(*v) : json(nullptr);
        return j;
    };
    json certified = json::object();
    for (const auto& [d, b] : r.quantum_certified_given_dim)
        certified[std::to_string(d)] = b;
    return json{{"value", r.value},
                {"sigma", r.sigma},
                {"k", r.k},
                {"threshold", r.value - r.k * r.sigma},
                {"min_classical_dim", dim(r.min_classical_dim)},
                {"min_quantum_dim", dim(r.min_quantum_dim)},
                {"max_tabulated_d", r.max_tabulated_d},
                {"quantum_certified_given_dim", certified},
                {"sigmas_above", json{{"classical", sig(r.sigmas_above_classical)},
                                      {"quantum", sig(r.sigmas_above_quantum)}}}};
}

} // namespace dimwit::io

#endif // DIMWIT_IO_HPP_
