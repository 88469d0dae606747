#pragma once

// JSON configuration: presentation, sector rings, twisted-class table,
// truncation, prefactor, Novikov chart, frame and product-table requests.
// The schema is documented in docs/config.md.

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "toricqc/cohomology.hpp"
#include "toricqc/error.hpp"
#include "toricqc/ifunction.hpp"
#include "toricqc/mirror.hpp"
#include "toricqc/presentation.hpp"
#include "toricqc/series.hpp"

namespace toricqc {

enum class IFunctionForm { Big, Hypersurface, Semipositive };

struct ProductRequest {
    std::string a, b;
    std::map<std::string, Q> at;
};

struct Config {
    std::string source;
    std::string name;
    ContextPtr context;
    IFunctionSetup setup;
    IFunctionForm form = IFunctionForm::Big;
    TruncationSpec truncation;
    ValidationReport report;
    std::string flow = "auto";  ///< "auto" or a polynomial in chart and t names
    std::vector<std::string> frame_directions;
    std::vector<TableBasisEntry> table_basis;
    std::vector<ProductRequest> products;

    const SeriesContext& ctx() const { return *context; }
};

namespace detail {

using nlohmann::json;

class ConfigReader {
public:
    explicit ConfigReader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& why) const {
        throw Error(ErrorCode::ValidationError, source_ + ": at " + (path.empty() ? "/" : path) + ": " + why);
    }

    const json& at(const json& j, const std::string& path, const char* key) const {
        if (!j.is_object()) fail(path, "expected an object");
        auto it = j.find(key);
        if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
        return *it;
    }

    std::string str(const json& j, const std::string& path) const {
        if (!j.is_string()) fail(path, "expected a string");
        return j.get<std::string>();
    }

    Q rational(const json& j, const std::string& path) const {
        if (j.is_number_integer()) return Q(j.get<long>());
        if (!j.is_string()) fail(path, "expected an integer or a rational string like \"1/2\"");
        try {
            return parse_q(j.get<std::string>());
        } catch (const Error& e) {
            fail(path, e.what());
        }
    }

    long integer(const json& j, const std::string& path) const {
        if (!j.is_number_integer()) fail(path, "expected an integer");
        return j.get<long>();
    }

    const json& array(const json& j, const std::string& path) const {
        if (!j.is_array()) fail(path, "expected an array");
        return j;
    }

    QVector qvector(const json& j, const std::string& path, std::size_t len) const {
        array(j, path);
        if (j.size() != len) fail(path, "expected " + std::to_string(len) + " entries, got " + std::to_string(j.size()));
        QVector v;
        for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational(j[i], path + "/" + std::to_string(i)));
        return v;
    }

    Character character(const json& j, const std::string& path, std::size_t len) const {
        array(j, path);
        if (j.size() != len) fail(path, "expected " + std::to_string(len) + " entries, got " + std::to_string(j.size()));
        Character c;
        for (std::size_t i = 0; i < j.size(); ++i) c.coords.push_back(integer(j[i], path + "/" + std::to_string(i)));
        return c;
    }

    Poly poly(const json& j, const std::string& path, const std::vector<std::string>& names) const {
        if (j.is_number_integer()) return Poly::constant(names.size(), Q(j.get<long>()));
        try {
            return parse_polynomial(str(j, path), names);
        } catch (const Error& e) {
            fail(path, e.what());
        }
    }

    Monomial monomial(const json& j, const std::string& path, const std::vector<std::string>& names) const {
        Poly p = poly(j, path, names);
        if (p.terms().size() != 1 || p.terms().begin()->second != 1) fail(path, "expected a single monomial");
        return p.terms().begin()->first;
    }

    SectorId sector(const json& j, const std::string& path, std::size_t k) const {
        std::string s = str(j, path);
        QVector v;
        std::stringstream ss(s);
        std::string part;
        while (std::getline(ss, part, ',')) {
            try {
                v.push_back(parse_q(part));
            } catch (const Error& e) {
                fail(path, e.what());
            }
        }
        if (v.size() != k) fail(path, "sector '" + s + "' needs " + std::to_string(k) + " entries");
        for (const auto& x : v)
            if (x < 0 || x >= 1) fail(path, "sector entries must lie in [0,1), got '" + s + "'");
        return SectorId{v};
    }

    template <typename F>
    auto guarded(const std::string& path, F&& f) const -> decltype(f()) {
        try {
            return f();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ValidationError && std::string(e.what()).find(source_ + ": at ") != std::string::npos)
                throw;
            fail(path, e.what());
        }
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
};

inline TauClass parse_tau_class(const ConfigReader& r, const json& j, const std::string& path) {
    std::string s = r.str(j, path);
    for (auto c : {TauClass::NonnegIntegral, TauClass::NegativeIntegral, TauClass::NegativeFractional,
                   TauClass::NonintegralNonneg})
        if (tau_class_name(c) == s) return c;
    r.fail(path, "unknown stratum '" + s + "'");
}

}  // namespace detail

/// Parses and validates a configuration document. `source` names it in
/// error messages.
inline Config parse_config(const nlohmann::json& doc, const std::string& source) {
    using detail::json;
    detail::ConfigReader r(source);
    Config cfg;
    cfg.source = source;
    if (!doc.is_object()) r.fail("", "top level must be an object");
    cfg.name = doc.contains("name") ? r.str(doc["name"], "/name") : source;

    // presentation
    const json& pj = r.at(doc, "", "presentation");
    const long k = r.integer(r.at(pj, "/presentation", "rank"), "/presentation/rank");
    if (k <= 0) r.fail("/presentation/rank", "rank must be positive");
    const std::size_t rank = static_cast<std::size_t>(k);
    std::vector<Character> rho, tau;
    const json& rj = r.array(r.at(pj, "/presentation", "rho"), "/presentation/rho");
    for (std::size_t i = 0; i < rj.size(); ++i) rho.push_back(r.character(rj[i], "/presentation/rho/" + std::to_string(i), rank));
    Character theta = r.character(r.at(pj, "/presentation", "theta"), "/presentation/theta", rank);
    if (pj.contains("tau")) {
        const json& tj = r.array(pj["tau"], "/presentation/tau");
        for (std::size_t i = 0; i < tj.size(); ++i)
            tau.push_back(r.character(tj[i], "/presentation/tau/" + std::to_string(i), rank));
    }
    GitPresentation pres = r.guarded("/presentation", [&] { return GitPresentation(rank, rho, theta, tau, cfg.name); });
    cfg.report = r.guarded("/presentation", [&] { return validate_presentation(pres); });

    // degree generators
    std::vector<Degree> gens;
    const json& gj = r.array(r.at(doc, "", "degree_generators"), "/degree_generators");
    for (std::size_t i = 0; i < gj.size(); ++i) {
        std::string path = "/degree_generators/" + std::to_string(i);
        Degree g{r.qvector(gj[i], path, rank)};
        if (g.is_zero() || theta_pairing(pres, g) <= 0)
            r.fail(path, "generator has beta(L_theta) = " + format_q(theta_pairing(pres, g)) + " <= 0");
        gens.push_back(g);
    }

    // Novikov chart
    NovikovChart chart;
    if (doc.contains("novikov")) {
        const json& nj = doc["novikov"];
        std::vector<std::string> names;
        std::vector<Degree> ng;
        const json& names_j = r.array(r.at(nj, "/novikov", "names"), "/novikov/names");
        for (std::size_t i = 0; i < names_j.size(); ++i) names.push_back(r.str(names_j[i], "/novikov/names/" + std::to_string(i)));
        if (nj.contains("generators")) {
            const json& ngj = r.array(nj["generators"], "/novikov/generators");
            for (std::size_t i = 0; i < ngj.size(); ++i)
                ng.push_back(Degree{r.qvector(ngj[i], "/novikov/generators/" + std::to_string(i), rank)});
        } else {
            ng = gens;
        }
        chart = r.guarded("/novikov", [&] { return NovikovChart(names, ng); });
    } else if (!gens.empty()) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < gens.size(); ++i) names.push_back(gens.size() == 1 ? "q" : "q" + std::to_string(i + 1));
        std::vector<QVector> rows;
        for (const auto& g : gens) rows.push_back(g.coords);
        if (rank_of_vectors(rows) == gens.size()) chart = NovikovChart(names, gens);
    }

    // t-variables
    std::vector<std::string> t_names;
    if (doc.contains("t_variables")) {
        const json& tj = r.array(doc["t_variables"], "/t_variables");
        for (std::size_t i = 0; i < tj.size(); ++i) t_names.push_back(r.str(tj[i], "/t_variables/" + std::to_string(i)));
    }

    // cohomology
    const json& cj = r.at(doc, "", "cohomology");
    std::vector<std::string> hnames;
    const json& hj = r.array(r.at(cj, "/cohomology", "generators"), "/cohomology/generators");
    for (std::size_t i = 0; i < hj.size(); ++i) hnames.push_back(r.str(hj[i], "/cohomology/generators/" + std::to_string(i)));
    if (hnames.size() != rank)
        r.fail("/cohomology/generators", "need one generator c_1(L_{pi_j}) per character coordinate (" +
                                             std::to_string(rank) + "), got " + std::to_string(hnames.size()));
    std::vector<RingSpec> rings;
    const json& sj = r.array(r.at(cj, "/cohomology", "sectors"), "/cohomology/sectors");
    for (std::size_t i = 0; i < sj.size(); ++i) {
        const std::string path = "/cohomology/sectors/" + std::to_string(i);
        const json& e = sj[i];
        SectorId sid = r.sector(r.at(e, path, "sector"), path + "/sector", rank);
        std::map<std::size_t, Poly> subs;
        if (e.contains("substitutions")) {
            if (!e["substitutions"].is_object()) r.fail(path + "/substitutions", "expected an object");
            for (const auto& [name, val] : e["substitutions"].items()) {
                std::size_t j = 0;
                while (j < hnames.size() && hnames[j] != name) ++j;
                if (j == hnames.size()) r.fail(path + "/substitutions", "unknown generator '" + name + "'");
                subs[j] = r.poly(val, path + "/substitutions/" + name, hnames);
            }
        }
        auto monomials = [&](const char* key) {
            std::vector<Monomial> out;
            if (!e.contains(key)) return out;
            const json& a = r.array(e[key], path + "/" + key);
            for (std::size_t m = 0; m < a.size(); ++m)
                out.push_back(r.monomial(a[m], path + "/" + key + "/" + std::to_string(m), hnames));
            return out;
        };
        std::vector<Monomial> basis = monomials("basis"), vanishing = monomials("vanishing");
        if (basis.empty()) r.fail(path + "/basis", "basis must be nonempty");
        std::vector<RingSpec::Reduction> reds;
        if (e.contains("reductions")) {
            const json& a = r.array(e["reductions"], path + "/reductions");
            for (std::size_t m = 0; m < a.size(); ++m) {
                std::string rp = path + "/reductions/" + std::to_string(m);
                reds.push_back({r.monomial(r.at(a[m], rp, "lhs"), rp + "/lhs", hnames),
                                r.poly(r.at(a[m], rp, "rhs"), rp + "/rhs", hnames)});
            }
        }
        std::map<Monomial, Q> integrals;
        if (e.contains("integrals")) {
            if (!e["integrals"].is_object()) r.fail(path + "/integrals", "expected an object");
            for (const auto& [mono, val] : e["integrals"].items()) {
                std::string ip = path + "/integrals/" + mono;
                Monomial m = r.monomial(json(mono), ip, hnames);
                if (std::find(basis.begin(), basis.end(), m) == basis.end()) r.fail(ip, "integral of a non-basis monomial");
                integrals[m] = r.rational(val, ip);
            }
        }
        rings.push_back(r.guarded(path, [&] { return RingSpec(sid, rank, subs, basis, vanishing, reds, integrals); }));
    }
    PairingSpec pairing;
    if (cj.contains("pairing")) {
        const json& pj2 = cj["pairing"];
        if (pj2.contains("involution"))
            for (const auto& [a, b] : pj2["involution"].items())
                pairing.involution[r.sector(json(a), "/cohomology/pairing/involution", rank)] =
                    r.sector(b, "/cohomology/pairing/involution/" + a, rank);
        if (pj2.contains("weights"))
            for (const auto& [a, w] : pj2["weights"].items())
                pairing.orbifold_weights[r.sector(json(a), "/cohomology/pairing/weights", rank)] =
                    r.rational(w, "/cohomology/pairing/weights/" + a);
    }
    CohomologyModel model = r.guarded("/cohomology", [&] { return CohomologyModel(hnames, rings, pairing); });
    std::vector<SectorId> sectors = enumerate_sectors(pres);
    for (const auto& s : sectors)
        if (!model.has_ring(s)) r.fail("/cohomology/sectors", "no ring for sector " + s.to_string());
    for (const auto& [s, _] : model.rings())
        if (std::find(sectors.begin(), sectors.end(), s) == sectors.end())
            r.fail("/cohomology/sectors", "ring given for " + s.to_string() + ", which is not a sector of the presentation");

    cfg.context = std::make_shared<const SeriesContext>(SeriesContext{pres, model, chart, t_names});
    cfg.setup.ctx = cfg.context;
    cfg.setup.generators = gens;

    // twisted classes
    if (doc.contains("twisted_classes")) {
        const json& tj = r.array(doc["twisted_classes"], "/twisted_classes");
        for (std::size_t i = 0; i < tj.size(); ++i) {
            const std::string path = "/twisted_classes/" + std::to_string(i);
            const json& e = tj[i];
            TwistedClassEntry entry;
            if (e.contains("degree")) entry.degree = Degree{r.qvector(e["degree"], path + "/degree", rank)};
            if (e.contains("stratum")) {
                std::vector<TauClass> st;
                const json& a = r.array(e["stratum"], path + "/stratum");
                for (std::size_t m = 0; m < a.size(); ++m) st.push_back(detail::parse_tau_class(r, a[m], path + "/stratum/" + std::to_string(m)));
                if (st.size() != tau.size()) r.fail(path + "/stratum", "stratum needs one entry per tau");
                entry.stratum = st;
            }
            if (!entry.degree && !entry.stratum) r.fail(path, "entry needs a 'degree' or a 'stratum'");
            entry.provenance = r.str(r.at(e, path, "provenance"), path + "/provenance");
            if (entry.provenance.empty()) r.fail(path + "/provenance", "provenance note must be nonempty");
            SectorId sid = r.sector(r.at(e, path, "sector"), path + "/sector", rank);
            if (entry.degree && !(coefficient_sector(*entry.degree) == sid))
                r.fail(path + "/sector", "degree entry must live in sector " + coefficient_sector(*entry.degree).to_string());
            Poly cls = r.poly(r.at(e, path, "class"), path + "/class", hnames);
            entry.cls = r.guarded(path, [&] { return model.make_class(sid, cls); });
            cfg.setup.provider.table.push_back(std::move(entry));
        }
    }

    // truncation
    if (doc.contains("truncation")) {
        const json& tj = doc["truncation"];
        cfg.truncation.theta_bound = r.rational(r.at(tj, "/truncation", "theta_bound"), "/truncation/theta_bound");
        if (tj.contains("t_bound")) cfg.truncation.t_bound = static_cast<int>(r.integer(tj["t_bound"], "/truncation/t_bound"));
        if (cfg.truncation.theta_bound < 0 || cfg.truncation.t_bound < 0) r.fail("/truncation", "bounds must be nonnegative");
    }

    // prefactor
    if (doc.contains("prefactor")) {
        const json& a = r.array(doc["prefactor"], "/prefactor");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string path = "/prefactor/" + std::to_string(i);
            std::string t = r.str(r.at(a[i], path, "t"), path + "/t");
            auto it = std::find(t_names.begin(), t_names.end(), t);
            if (it == t_names.end()) r.fail(path + "/t", "unknown t-variable '" + t + "'");
            cfg.setup.prefactor.entries.push_back(
                {static_cast<std::size_t>(it - t_names.begin()), r.poly(r.at(a[i], path, "u"), path + "/u", hnames)});
        }
    }

    if (doc.contains("ifunction")) {
        std::string f = r.str(doc["ifunction"], "/ifunction");
        if (f == "big") cfg.form = IFunctionForm::Big;
        else if (f == "hypersurface") cfg.form = IFunctionForm::Hypersurface;
        else if (f == "semipositive") cfg.form = IFunctionForm::Semipositive;
        else r.fail("/ifunction", "expected big, hypersurface or semipositive");
        if (cfg.form == IFunctionForm::Hypersurface && tau.size() != 1) r.fail("/ifunction", "hypersurface form needs exactly one tau");
    }

    // frame
    std::vector<std::string> flow_vars = chart.names();
    flow_vars.insert(flow_vars.end(), t_names.begin(), t_names.end());
    if (doc.contains("frame")) {
        const json& fj = doc["frame"];
        if (fj.contains("flow")) {
            cfg.flow = r.str(fj["flow"], "/frame/flow");
            if (cfg.flow != "auto") r.poly(fj["flow"], "/frame/flow", flow_vars);
        }
        if (fj.contains("directions")) {
            const json& a = r.array(fj["directions"], "/frame/directions");
            for (std::size_t i = 0; i < a.size(); ++i) {
                std::string d = r.str(a[i], "/frame/directions/" + std::to_string(i));
                if (std::find(flow_vars.begin(), flow_vars.end(), d) == flow_vars.end())
                    r.fail("/frame/directions/" + std::to_string(i), "'" + d + "' is neither a Novikov coordinate nor a t-variable");
                cfg.frame_directions.push_back(d);
            }
        }
    }

    // product table basis
    if (doc.contains("table")) {
        const json& a = r.array(r.at(doc["table"], "/table", "basis"), "/table/basis");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string path = "/table/basis/" + std::to_string(i);
            TableBasisEntry e;
            e.label = r.str(r.at(a[i], path, "label"), path + "/label");
            SectorId sid = a[i].contains("sector") ? r.sector(a[i]["sector"], path + "/sector", rank) : SectorId::identity(rank);
            Poly cls = r.poly(r.at(a[i], path, "class"), path + "/class", hnames);
            e.cls = r.guarded(path, [&] { return model.make_class(sid, cls); });
            if (a[i].contains("direction")) e.direction = r.str(a[i]["direction"], path + "/direction");
            cfg.table_basis.push_back(std::move(e));
        }
    }

    if (doc.contains("products")) {
        const json& a = r.array(doc["products"], "/products");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string path = "/products/" + std::to_string(i);
            ProductRequest pr{r.str(r.at(a[i], path, "a"), path + "/a"), r.str(r.at(a[i], path, "b"), path + "/b"), {}};
            if (a[i].contains("at"))
                for (const auto& [v, val] : a[i]["at"].items()) pr.at[v] = r.rational(val, path + "/at/" + v);
            cfg.products.push_back(std::move(pr));
        }
    }
    return cfg;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    return parse_config(doc, path);
}

/// The I-function selected by the configuration.
inline MultiSeries config_ifunction(const Config& cfg, const TruncationSpec& trunc) {
    switch (cfg.form) {
        case IFunctionForm::Hypersurface: return hypersurface_I(cfg.setup, trunc);
        case IFunctionForm::Semipositive: return semipositive_I(cfg.setup, trunc);
        case IFunctionForm::Big: break;
    }
    return big_I(cfg.setup, trunc);
}

inline FrameOptions config_frame_options(const Config& cfg, const TruncationSpec& trunc) {
    FrameOptions o;
    o.directions = cfg.frame_directions;
    if (cfg.flow != "auto") {
        std::vector<std::string> vars = cfg.ctx().chart.names();
        vars.insert(vars.end(), cfg.ctx().t_names.begin(), cfg.ctx().t_names.end());
        o.flow = scalar_series(cfg.context, trunc, parse_polynomial(cfg.flow, vars));
    }
    return o;
}

}  // namespace toricqc
