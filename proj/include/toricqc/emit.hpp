#pragma once

// Deterministic text, csv and json renderings of classes, series and
// product tables, plus json parsing back into series for round trips.

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "toricqc/cohomology.hpp"
#include "toricqc/error.hpp"
#include "toricqc/mirror.hpp"
#include "toricqc/series.hpp"

namespace toricqc {

inline constexpr const char* kSchema = "toricqc/1";

enum class Format { Text, Csv, Json };

inline Format parse_format(const std::string& s) {
    if (s == "text") return Format::Text;
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw Error(ErrorCode::ValidationError, "unknown format '" + s + "' (expected text, csv or json)");
}

/// Keys ordered by (theta-degree, t-degree, key).
template <typename Map>
std::vector<SeriesKey> sorted_keys(const SeriesContext& ctx, const Map& m) {
    std::vector<SeriesKey> keys;
    for (const auto& [k, _] : m) keys.push_back(k);
    std::stable_sort(keys.begin(), keys.end(), [&](const SeriesKey& a, const SeriesKey& b) {
        Q ta = theta_pairing(ctx.presentation, a.degree), tb = theta_pairing(ctx.presentation, b.degree);
        if (ta != tb) return ta < tb;
        if (t_degree(a.t) != t_degree(b.t)) return t_degree(a.t) < t_degree(b.t);
        return a < b;
    });
    return keys;
}

namespace detail {

inline std::string render_term(const SeriesContext& ctx, const std::optional<SeriesKey>& key, const SectorId& s,
                               const Monomial& m, const Q& c) {
    const bool has_key = key && !(key->degree.is_zero() && t_degree(key->t) == 0);
    std::vector<std::string> parts;
    if (c != 1) parts.push_back("(" + format_q(c) + ")");
    if (has_key) parts.push_back(format_key(ctx, *key));
    if (!s.is_identity()) parts.push_back("[sector " + s.to_string() + "]");
    std::string mono = format_monomial(m, ctx.cohomology.generator_names());
    if (mono != "1" || !has_key || !s.is_identity()) parts.push_back(mono);
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
    return out;
}

inline void append_class_terms(std::vector<std::string>& out, const SeriesContext& ctx,
                               const std::optional<SeriesKey>& key, const CRClass& cls) {
    for (const auto& [s, poly] : cls.parts())
        for (const auto& [m, c] : poly.terms()) out.push_back(render_term(ctx, key, s, m, c));
}

inline std::string join_terms(const std::vector<std::string>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& t : terms) out += (out.empty() ? "" : " + ") + t;
    return out;
}

}  // namespace detail

inline std::string render_class(const SeriesContext& ctx, const CRClass& cls) {
    std::vector<std::string> terms;
    detail::append_class_terms(terms, ctx, std::nullopt, cls);
    return detail::join_terms(terms);
}

inline std::string render_class_series(const SeriesContext& ctx, const ClassSeries& v) {
    std::vector<std::string> terms;
    for (const auto& k : sorted_keys(ctx, v)) detail::append_class_terms(terms, ctx, k, v.at(k));
    return detail::join_terms(terms);
}

inline std::string render_laurent(const SeriesContext& ctx, const ZLaurent& l) {
    if (l.is_zero()) return "0";
    std::string out;
    for (auto it = l.terms().rbegin(); it != l.terms().rend(); ++it) {
        const int e = it->first;
        std::vector<std::string> terms;
        detail::append_class_terms(terms, ctx, std::nullopt, it->second);
        std::string cls = detail::join_terms(terms);
        if (terms.size() > 1) cls = "(" + cls + ")";
        std::string zf;
        if (e < 0) zf = e == -1 ? "1/z" : "1/z^" + std::to_string(-e);
        else if (e > 0) zf = e == 1 ? "z" : "z^" + std::to_string(e);
        out += (out.empty() ? "" : " + ") + (zf.empty() ? cls : zf + " * " + cls);
    }
    return out;
}

/// One "key: laurent" line per nonzero coefficient.
inline std::string render_series_text(const MultiSeries& s) {
    std::ostringstream os;
    for (const auto& k : sorted_keys(s.ctx(), s.coeffs()))
        os << format_key(s.ctx(), k) << ": " << render_laurent(s.ctx(), s.coeffs().at(k)) << "\n";
    return os.str();
}

// ---- json -----------------------------------------------------------------

inline nlohmann::json qvector_json(const QVector& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(format_q(x));
    return a;
}

inline nlohmann::json class_to_json(const CRClass& cls) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& [s, poly] : cls.parts())
        for (const auto& [m, c] : poly.terms())
            coeffs.push_back({{"sector", s.to_string()}, {"monomial", m}, {"coefficient", format_q(c)}});
    return {{"coefficients", coeffs}};
}

inline CRClass class_from_json(const SeriesContext& ctx, const nlohmann::json& j) {
    CRClass out;
    try {
        for (const auto& t : j.at("coefficients")) {
            std::string sec = t.at("sector").get<std::string>();
            QVector v;
            std::stringstream ss(sec);
            std::string part;
            while (std::getline(ss, part, ',')) v.push_back(parse_q(part));
            Monomial m = t.at("monomial").get<Monomial>();
            if (m.size() != ctx.cohomology.ngens()) throw Error(ErrorCode::ParseError, "monomial arity mismatch");
            out.add(SectorId{v}, Poly::monomial(m, parse_q(t.at("coefficient").get<std::string>())));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("class json: ") + e.what());
    }
    return out;
}

inline nlohmann::json key_json(const SeriesContext& ctx, const SeriesKey& k) {
    return {{"degree", qvector_json(k.degree.coords)}, {"t", k.t}, {"monomial", format_key(ctx, k)}};
}

inline SeriesKey key_from_json(const nlohmann::json& j) {
    SeriesKey k;
    for (const auto& x : j.at("degree")) k.degree.coords.push_back(parse_q(x.get<std::string>()));
    k.t = j.at("t").get<TIndex>();
    return k;
}

inline nlohmann::json series_to_json(const MultiSeries& s) {
    const auto& ctx = s.ctx();
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& k : sorted_keys(ctx, s.coeffs()))
        for (auto it = s.coeffs().at(k).terms().rbegin(); it != s.coeffs().at(k).terms().rend(); ++it) {
            nlohmann::json t = key_json(ctx, k);
            t["z"] = it->first;
            t["class"] = class_to_json(it->second);
            terms.push_back(t);
        }
    nlohmann::json trunc = {{"theta_bound", format_q(s.truncation().theta_bound)}, {"t_bound", s.truncation().t_bound}};
    return {{"schema", kSchema}, {"kind", "series"}, {"truncation", trunc}, {"terms", terms}};
}

inline MultiSeries series_from_json(const ContextPtr& ctx, const nlohmann::json& j) {
    try {
        if (j.at("schema") != kSchema || j.at("kind") != "series")
            throw Error(ErrorCode::ParseError, "not a " + std::string(kSchema) + " series document");
        TruncationSpec tr;
        tr.theta_bound = parse_q(j.at("truncation").at("theta_bound").get<std::string>());
        tr.t_bound = j.at("truncation").at("t_bound").get<int>();
        MultiSeries s(ctx, tr);
        for (const auto& t : j.at("terms")) s.add(key_from_json(t), ZLaurent(t.at("z").get<int>(), class_from_json(*ctx, t.at("class"))));
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("series json: ") + e.what());
    }
}

inline nlohmann::json class_series_to_json(const SeriesContext& ctx, const ClassSeries& v) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& k : sorted_keys(ctx, v)) {
        nlohmann::json t = key_json(ctx, k);
        t["class"] = class_to_json(v.at(k));
        terms.push_back(t);
    }
    return {{"schema", kSchema}, {"kind", "class_series"}, {"terms", terms}};
}

inline ClassSeries class_series_from_json(const SeriesContext& ctx, const nlohmann::json& j) {
    try {
        if (j.at("schema") != kSchema || j.at("kind") != "class_series")
            throw Error(ErrorCode::ParseError, "not a " + std::string(kSchema) + " class_series document");
        ClassSeries out;
        for (const auto& t : j.at("terms")) {
            CRClass c = class_from_json(ctx, t.at("class"));
            if (!c.is_zero()) out[key_from_json(t)] += c;
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("class series json: ") + e.what());
    }
}

// ---- product tables ---------------------------------------------------------

inline std::string render_cell(const SeriesContext& ctx, const TableCell& c) {
    switch (c.status) {
        case CellStatus::Computed:
        case CellStatus::StringAxiom:
        case CellStatus::Experimental: return render_class_series(ctx, c.value);
        case CellStatus::NotParameterized: return std::string(cell_status_name(c.status));
        case CellStatus::Failed: return "failed: " + c.note;
    }
    return "";
}

namespace detail {
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}
}  // namespace detail

/// Upper triangle, header row and label column, like the usual printed table.
inline std::string render_table_csv(const SeriesContext& ctx, const ProductTable& t) {
    std::ostringstream os;
    for (const auto& l : t.labels) os << "," << detail::csv_field(l);
    os << "\n";
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
        os << detail::csv_field(t.labels[i]);
        for (std::size_t j = 0; j < t.labels.size(); ++j) {
            os << ",";
            if (j >= i) os << detail::csv_field(render_cell(ctx, t.cells[i][j]));
        }
        os << "\n";
    }
    return os.str();
}

inline std::string render_table_text(const SeriesContext& ctx, const ProductTable& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.labels.size(); ++i)
        for (std::size_t j = i; j < t.labels.size(); ++j) {
            const auto& c = t.cells[i][j];
            os << t.labels[i] << " o " << t.labels[j] << " = " << render_cell(ctx, c);
            if (c.status == CellStatus::StringAxiom || c.status == CellStatus::Experimental)
                os << "  [" << cell_status_name(c.status) << "]";
            os << "\n";
        }
    return os.str();
}

inline nlohmann::json table_to_json(const SeriesContext& ctx, const ProductTable& t) {
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t i = 0; i < t.labels.size(); ++i)
        for (std::size_t j = i; j < t.labels.size(); ++j) {
            const auto& c = t.cells[i][j];
            nlohmann::json cj = {{"row", t.labels[i]}, {"column", t.labels[j]}, {"status", cell_status_name(c.status)}};
            if (c.status == CellStatus::Failed) cj["note"] = c.note;
            else if (c.status != CellStatus::NotParameterized) cj["value"] = class_series_to_json(ctx, c.value);
            cells.push_back(cj);
        }
    return {{"schema", kSchema}, {"kind", "product_table"}, {"labels", t.labels}, {"cells", cells}};
}

}  // namespace toricqc
