#pragma once

// Plot-ready records emitted by the command-line tool, as CSV or JSON.
//
// CSV: UTF-8, one header row, comma separated, LF line endings. Empty cells
// mean "not applicable". JSON: one object {"command", "records", "notes"} and
// optionally "pmf"; see schema/output.schema.json.

#include "polya/core_exact.hpp"
#include "polya/rational.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace polya {

enum class Method { exact, binomial, complement, dp, mc, definetti, normal, chernoff };

inline constexpr std::array<Method, 8> kAllMethods{Method::exact, Method::binomial, Method::complement,
                                                   Method::dp,    Method::mc,       Method::definetti,
                                                   Method::normal, Method::chernoff};

inline std::string_view to_string(Method m)
{
    switch (m) {
    case Method::exact: return "exact";
    case Method::binomial: return "binomial";
    case Method::complement: return "complement";
    case Method::dp: return "dp";
    case Method::mc: return "mc";
    case Method::definetti: return "definetti";
    case Method::normal: return "normal";
    case Method::chernoff: return "chernoff";
    }
    return "unknown";
}

inline std::optional<Method> parse_method(std::string_view name)
{
    for (Method m : kAllMethods)
        if (to_string(m) == name) return m;
    return std::nullopt;
}

struct OutputRecord {
    std::int64_t b = 0;
    std::int64_t w = 0;
    Method method = Method::exact;
    std::string kind;                 ///< exact | estimate | approximation | upper_bound
    std::string value;                ///< decimal, 15 significant digits
    std::optional<std::string> rational; ///< "num/den" for exact methods
    std::optional<std::int64_t> target;
    std::optional<std::int64_t> horizon;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> streams;
    std::optional<std::string> std_err;
    std::optional<std::string> ci95_lo;
    std::optional<std::string> ci95_hi;
    std::optional<std::string> reference;
    std::optional<std::string> z_score;
    std::optional<std::string> abs_error;
    std::optional<std::string> rel_error;
};

/// Record for an exactly known probability: rational plus decimal rendering.
inline OutputRecord exact_record(std::int64_t b, std::int64_t w, Method method, const ExactProbability& p)
{
    OutputRecord r;
    r.b = b;
    r.w = w;
    r.method = method;
    r.kind = "exact";
    r.value = p.decimal();
    r.rational = p.fraction();
    return r;
}

inline constexpr std::array<std::string_view, 18> kCsvColumns{
    "b",       "w",       "method",  "kind",    "value",     "rational", "target",    "horizon",   "samples",
    "seed",    "streams", "std_err", "ci95_lo", "ci95_hi",   "reference", "z_score",  "abs_error", "rel_error"};

inline std::string csv_header()
{
    std::string line;
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
        if (i != 0) line += ',';
        line += kCsvColumns[i];
    }
    return line;
}

inline std::string csv_row(const OutputRecord& r)
{
    auto cell = [](const auto& opt) -> std::string {
        if (!opt) return {};
        if constexpr (std::is_same_v<std::decay_t<decltype(*opt)>, std::string>)
            return *opt;
        else
            return std::to_string(*opt);
    };
    const std::array<std::string, 18> cells{std::to_string(r.b), std::to_string(r.w), std::string(to_string(r.method)),
                                            r.kind, r.value, cell(r.rational), cell(r.target), cell(r.horizon),
                                            cell(r.samples), cell(r.seed), cell(r.streams), cell(r.std_err),
                                            cell(r.ci95_lo), cell(r.ci95_hi), cell(r.reference), cell(r.z_score),
                                            cell(r.abs_error), cell(r.rel_error)};
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].find_first_of(",\"\n") != std::string::npos)
            throw std::invalid_argument("csv_row: cell contains a separator: " + cells[i]);
        if (i != 0) line += ',';
        line += cells[i];
    }
    return line;
}

inline void write_csv(std::ostream& out, const std::vector<OutputRecord>& records)
{
    out << csv_header() << '\n';
    for (const auto& r : records) out << csv_row(r) << '\n';
}

inline nlohmann::ordered_json to_json(const OutputRecord& r)
{
    nlohmann::ordered_json j;
    j["b"] = r.b;
    j["w"] = r.w;
    j["method"] = std::string(to_string(r.method));
    j["kind"] = r.kind;
    j["value"] = r.value;
    auto put = [&j](const char* key, const auto& opt) {
        if (opt) j[key] = *opt;
    };
    put("rational", r.rational);
    put("target", r.target);
    put("horizon", r.horizon);
    put("samples", r.samples);
    put("seed", r.seed);
    put("streams", r.streams);
    put("std_err", r.std_err);
    put("ci95_lo", r.ci95_lo);
    put("ci95_hi", r.ci95_hi);
    put("reference", r.reference);
    put("z_score", r.z_score);
    put("abs_error", r.abs_error);
    put("rel_error", r.rel_error);
    return j;
}

/// One row of the first-passage pmf table.
struct PmfRow {
    std::int64_t n;
    ExactProbability p;
};

inline void write_pmf_csv(std::ostream& out, const std::vector<PmfRow>& rows)
{
    out << "n,p_tau_n_num,p_tau_n_den,p_tau_n_decimal\n";
    for (const auto& row : rows)
        out << row.n << ',' << numerator_of(row.p.value()) << ',' << denominator_of(row.p.value()) << ','
            << row.p.decimal() << '\n';
}

inline nlohmann::ordered_json pmf_to_json(const std::vector<PmfRow>& rows)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows)
        arr.push_back({{"n", row.n},
                       {"p_tau_n_num", numerator_of(row.p.value()).str()},
                       {"p_tau_n_den", denominator_of(row.p.value()).str()},
                       {"p_tau_n_decimal", row.p.decimal()}});
    return arr;
}

inline nlohmann::ordered_json document_json(std::string_view command, const std::vector<OutputRecord>& records,
                                            const std::vector<std::string>& notes)
{
    nlohmann::ordered_json doc;
    doc["command"] = std::string(command);
    doc["records"] = nlohmann::ordered_json::array();
    for (const auto& r : records) doc["records"].push_back(to_json(r));
    doc["notes"] = notes;
    return doc;
}

} // namespace polya
