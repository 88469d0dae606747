#pragma once

// Command dispatch for the engine binary. Output is assembled in memory so
// that tests can drive every command without a subprocess.

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "toricqc/config.hpp"
#include "toricqc/emit.hpp"
#include "toricqc/error.hpp"
#include "toricqc/mirror.hpp"

namespace toricqc {

inline const std::vector<std::string>& cli_commands() {
    static const std::vector<std::string> cmds{"validate", "sectors",  "effective", "ifun",
                                               "mirror-map", "qproduct", "table",     "coewc-check"};
    return cmds;
}

struct CliOptions {
    std::string command;
    std::optional<Q> order;  ///< theta-degree truncation override
    Format format = Format::Text;
    std::optional<std::string> a, b;
    std::map<std::string, Q> at;
    std::optional<Q> bound;
    bool experimental_divisor = false;
};

struct RunResult {
    std::string out;
    std::string log;  ///< diagnostics for stderr
    int status = 0;
};

enum ExitCode { kExitOk = 0, kExitValidation = 2, kExitComputation = 3 };

inline int exit_code_for(const Error& e) { return e.is_validation() ? kExitValidation : kExitComputation; }

/// "x=0" or "x=0,t1=0".
inline std::map<std::string, Q> parse_assignments(const std::string& text) {
    std::map<std::string, Q> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(ErrorCode::ValidationError, "expected VAR=VALUE, got '" + item + "'");
        out[item.substr(0, eq)] = parse_q(item.substr(eq + 1));
    }
    return out;
}

namespace detail {

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline TruncationSpec effective_truncation(const Config& cfg, const CliOptions& o) {
    TruncationSpec t = cfg.truncation;
    if (o.order) {
        if (*o.order < 0) throw Error(ErrorCode::ValidationError, "--order must be nonnegative");
        t.theta_bound = *o.order;
    }
    return t;
}

inline std::string degree_label(const SeriesContext& ctx, const Degree& d) {
    return d.is_zero() ? "0" : ctx.chart.format(d);
}

inline RunResult cmd_validate(const Config& cfg, const CliOptions& o) {
    const auto& ctx = cfg.ctx();
    const auto& p = ctx.presentation;
    RunResult r;
    std::vector<std::string> supports;
    for (const auto& info : cfg.report.supports) {
        std::string t = "{";
        for (std::size_t i = 0; i < info.support.size(); ++i) t += (i ? "," : "") + std::to_string(info.support[i] + 1);
        supports.push_back(t + "}");
    }
    std::vector<std::string> sectors;
    for (const auto& s : enumerate_sectors(p)) sectors.push_back(s.to_string());
    if (o.format == Format::Json) {
        nlohmann::json rings = nlohmann::json::array();
        for (const auto& [s, ring] : ctx.cohomology.rings()) {
            nlohmann::json basis = nlohmann::json::array();
            for (const auto& m : ring.basis()) basis.push_back(format_monomial(m, ctx.cohomology.generator_names()));
            rings.push_back({{"sector", s.to_string()}, {"basis", basis}});
        }
        nlohmann::json table = nlohmann::json::array();
        for (const auto& e : cfg.setup.provider.table) {
            nlohmann::json j = {{"class", render_class(ctx, e.cls)}, {"provenance", e.provenance}};
            if (e.degree) j["degree"] = qvector_json(e.degree->coords);
            if (e.stratum) {
                nlohmann::json st = nlohmann::json::array();
                for (auto c : *e.stratum) st.push_back(std::string(tau_class_name(c)));
                j["stratum"] = st;
            }
            table.push_back(j);
        }
        r.out = dump({{"schema", kSchema},
                      {"kind", "validation"},
                      {"name", cfg.name},
                      {"rank", p.rank},
                      {"n", p.n()},
                      {"exponent", cfg.report.exponent.get_str()},
                      {"minimal_supports", supports},
                      {"sectors", sectors},
                      {"rings", rings},
                      {"twisted_classes", table},
                      {"status", "ok"}});
        return r;
    }
    std::ostringstream os;
    os << "presentation " << cfg.name << ": k=" << p.rank << " n=" << p.n() << " tau=" << p.tau.size() << "\n";
    os << "exponent: " << cfg.report.exponent.get_str() << "\n";
    os << "minimal supports:";
    for (const auto& s : supports) os << " " << s;
    os << "\nsectors:";
    for (const auto& s : sectors) os << " " << s;
    os << "\n";
    for (const auto& [s, ring] : ctx.cohomology.rings()) {
        os << "ring " << s.to_string() << ": basis";
        for (std::size_t i = 0; i < ring.basis().size(); ++i)
            os << (i ? ", " : " ") << format_monomial(ring.basis()[i], ctx.cohomology.generator_names());
        os << "\n";
    }
    for (const auto& e : cfg.setup.provider.table) {
        os << "twisted class ";
        if (e.degree) os << "[degree " << format_qvector(e.degree->coords) << "]";
        if (e.stratum) {
            std::string st;
            for (auto c : *e.stratum) st += (st.empty() ? "" : ",") + std::string(tau_class_name(c));
            os << "[stratum " << st << "]";
        }
        os << " = " << render_class(ctx, e.cls) << "  provenance: " << e.provenance << "\n";
    }
    os << "ok\n";
    r.out = os.str();
    return r;
}

inline RunResult cmd_sectors(const Config& cfg, const CliOptions& o) {
    RunResult r;
    std::vector<std::string> sectors;
    for (const auto& s : enumerate_sectors(cfg.ctx().presentation)) sectors.push_back(s.to_string());
    if (o.format == Format::Json) {
        r.out = dump({{"schema", kSchema}, {"kind", "sectors"}, {"sectors", sectors}});
    } else {
        for (const auto& s : sectors) r.out += s + "\n";
    }
    return r;
}

inline RunResult cmd_effective(const Config& cfg, const CliOptions& o) {
    const auto& ctx = cfg.ctx();
    Q bound = o.bound ? *o.bound : detail::effective_truncation(cfg, o).theta_bound;
    RunResult r;
    auto degs = enumerate_effective(ctx.presentation, cfg.setup.generators, bound);
    if (o.format == Format::Json) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& d : degs)
            a.push_back({{"degree", qvector_json(d.coords)},
                         {"monomial", degree_label(ctx, d)},
                         {"theta", format_q(theta_pairing(ctx.presentation, d))}});
        r.out = dump({{"schema", kSchema}, {"kind", "effective"}, {"bound", format_q(bound)}, {"degrees", a}});
    } else if (o.format == Format::Csv) {
        r.out = "monomial,degree,theta\n";
        for (const auto& d : degs)
            r.out += degree_label(ctx, d) + ",\"" + format_qvector(d.coords) + "\"," +
                     format_q(theta_pairing(ctx.presentation, d)) + "\n";
    } else {
        for (const auto& d : degs) r.out += degree_label(ctx, d) + "\n";
    }
    return r;
}

inline std::string series_output(const MultiSeries& s, Format f) {
    if (f == Format::Json) return dump(series_to_json(s));
    if (f == Format::Csv) {
        std::string out = "monomial,z,class\n";
        for (const auto& k : sorted_keys(s.ctx(), s.coeffs())) {
            const auto& lau = s.coeffs().at(k);
            for (auto it = lau.terms().rbegin(); it != lau.terms().rend(); ++it)
                out += format_key(s.ctx(), k) + "," + std::to_string(it->first) + "," +
                       csv_field(render_class(s.ctx(), it->second)) + "\n";
        }
        return out;
    }
    return render_series_text(s);
}

inline JFrame build_frame(const Config& cfg, const MultiSeries& I, RunResult& r) {
    JFrame f = normalize_frame(I, config_frame_options(cfg, I.truncation()));
    if (f.flow_auto) {
        ClassSeries flow;
        for (const auto& [k, c] : z_coefficient(f.flow, 0)) flow.emplace(k, c);
        r.log += "flow: auto-detected " + render_class_series(cfg.ctx(), flow) + "\n";
    }
    r.log += "frame: residual order " + std::to_string(f.residual_order) + "\n";
    return f;
}

inline const char* kExperimentalBanner =
    "WARNING: experimental divisor-direction products (q d/dq with an e^{p log q/z} dressing); "
    "the orbifold divisor-equation bookkeeping for twisted Novikov degrees is an assumption";

}  // namespace detail

/// Dispatches one command. Errors propagate as toricqc::Error.
inline RunResult run(const Config& cfg, const CliOptions& o) {
    const std::string& c = o.command;
    if (c == "validate") return detail::cmd_validate(cfg, o);
    if (c == "sectors") return detail::cmd_sectors(cfg, o);
    if (c == "effective") return detail::cmd_effective(cfg, o);

    const TruncationSpec trunc = detail::effective_truncation(cfg, o);
    RunResult r;
    if (c == "ifun") {
        r.out = detail::series_output(config_ifunction(cfg, trunc), o.format);
        return r;
    }
    if (c == "mirror-map") {
        r.out = detail::series_output(mirror_map(config_ifunction(cfg, trunc)).mu, o.format);
        return r;
    }
    if (c == "coewc-check") {
        MultiSeries I = config_ifunction(cfg, trunc);
        CoewcReport rep = coewc_plus_check(I, mirror_map(I));
        if (o.format == Format::Json) {
            nlohmann::json v = nlohmann::json::array();
            for (const auto& k : rep.violations) v.push_back(key_json(cfg.ctx(), k));
            r.out = detail::dump({{"schema", kSchema}, {"kind", "coewc_check"}, {"checked", rep.checked},
                                  {"violations", v}, {"passed", rep.passed()}});
        } else {
            r.out = "checked " + std::to_string(rep.checked) + " indices, " + std::to_string(rep.violations.size()) +
                    " violations\n";
            for (const auto& k : rep.violations) r.out += "violation at " + format_key(cfg.ctx(), k) + "\n";
        }
        if (!rep.passed()) r.status = kExitComputation;
        return r;
    }
    if (c == "qproduct") {
        std::string a, b;
        std::map<std::string, Q> at = o.at;
        if (o.a && o.b) {
            a = *o.a;
            b = *o.b;
        } else if (!o.a && !o.b && !cfg.products.empty()) {
            a = cfg.products.front().a;
            b = cfg.products.front().b;
            if (at.empty()) at = cfg.products.front().at;
        } else {
            throw Error(ErrorCode::ValidationError, "qproduct needs both --a and --b (or a products entry in the config)");
        }
        MultiSeries I = config_ifunction(cfg, trunc);
        JFrame f = detail::build_frame(cfg, I, r);
        ClassSeries v = quantum_product(f, a, b, at, o.experimental_divisor);
        if (o.experimental_divisor) r.log += std::string(detail::kExperimentalBanner) + "\n";
        if (o.format == Format::Json) {
            nlohmann::json j = class_series_to_json(cfg.ctx(), v);
            j["a"] = a;
            j["b"] = b;
            if (o.experimental_divisor) j["warning"] = detail::kExperimentalBanner;
            r.out = detail::dump(j);
        } else {
            r.out = render_class_series(cfg.ctx(), v) + "\n";
        }
        return r;
    }
    if (c == "table") {
        if (cfg.table_basis.empty()) throw Error(ErrorCode::ValidationError, "config has no table basis");
        MultiSeries I = config_ifunction(cfg, trunc);
        JFrame f = detail::build_frame(cfg, I, r);
        ProductTable t = product_table(f, cfg.table_basis, o.experimental_divisor);
        if (o.experimental_divisor) r.log += std::string(detail::kExperimentalBanner) + "\n";
        if (o.format == Format::Json) {
            nlohmann::json j = table_to_json(cfg.ctx(), t);
            if (o.experimental_divisor) j["warning"] = detail::kExperimentalBanner;
            r.out = detail::dump(j);
        } else if (o.format == Format::Csv) {
            r.out = render_table_csv(cfg.ctx(), t);
        } else {
            if (o.experimental_divisor) r.out = "# " + std::string(detail::kExperimentalBanner) + "\n";
            r.out += render_table_text(cfg.ctx(), t);
        }
        return r;
    }
    throw Error(ErrorCode::ValidationError, "unknown command '" + c + "'");
}

}  // namespace toricqc
