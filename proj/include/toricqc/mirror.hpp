#pragma once

// Mirror map, J-frame normalization and small quantum products read off
// second derivatives of a normalized I-function.

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toricqc/cohomology.hpp"
#include "toricqc/error.hpp"
#include "toricqc/presentation.hpp"
#include "toricqc/rational.hpp"
#include "toricqc/series.hpp"

namespace toricqc {

/// Class-valued series in the Novikov/t variables left after evaluation.
using ClassSeries = std::map<SeriesKey, CRClass>;

struct MirrorMap {
    MultiSeries mu;

    /// mu_{beta,p}
    ZLaurent piece(const SeriesKey& k) const { return mu.coefficient(k); }
};

inline void require_unital(const MultiSeries& I) {
    ZLaurent lead = I.coefficient(I.zero_key());
    if (!(lead == ZLaurent(0, I.ctx().cohomology.unit())))
        throw Error(ErrorCode::NotUnital, "I-function coefficient at q^0 t^0 is not the unit class");
}

inline MultiSeries z_unit(const MultiSeries& like) {
    MultiSeries one = like.empty_like();
    one.add(one.zero_key(), ZLaurent(1, like.ctx().cohomology.unit()));
    return one;
}

/// mu = [z I - z 1]_+
inline MirrorMap mirror_map(const MultiSeries& I) {
    require_unital(I);
    return MirrorMap{truncate_plus(sub(shift_z(I, 1), z_unit(I)))};
}

struct CoewcReport {
    std::size_t checked = 0;
    std::vector<SeriesKey> violations;

    bool passed() const { return violations.empty(); }
};

/// Checks [z I_{beta,p}]_+ = delta_{(beta,p),0} z + mu_{beta,p} at every index
/// present in either series.
inline CoewcReport coewc_plus_check(const MultiSeries& I, const MirrorMap& m) {
    std::map<SeriesKey, bool> keys{{I.zero_key(), true}};
    for (const auto& [k, _] : I.coeffs()) keys[k] = true;
    for (const auto& [k, _] : m.mu.coeffs()) keys[k] = true;
    CoewcReport rep;
    const CRClass one = I.ctx().cohomology.unit();
    for (const auto& [k, _] : keys) {
        ++rep.checked;
        ZLaurent lhs = I.coefficient(k).shifted(1).filtered(true);
        ZLaurent rhs = m.piece(k);
        if (k == I.zero_key()) rhs.add(1, one);
        if (!(lhs == rhs)) rep.violations.push_back(k);
    }
    return rep;
}

/// Scalar series sum c_m q^{a} t^{b} * 1 from a polynomial whose variables are
/// the chart names followed by the t names.
inline MultiSeries scalar_series(const ContextPtr& ctx, const TruncationSpec& trunc, const Poly& poly) {
    const std::size_t nq = ctx->chart.names().size();
    MultiSeries s(ctx, trunc);
    if (poly.is_zero()) return s;
    if (poly.nvars() != nq + ctx->num_t())
        throw Error(ErrorCode::DimensionMismatch, "scalar series polynomial has the wrong number of variables");
    for (const auto& [m, c] : poly.terms()) {
        QVector a(m.begin(), m.begin() + static_cast<long>(nq));
        TIndex t(m.begin() + static_cast<long>(nq), m.end());
        Degree d = nq ? ctx->chart.degree_of(a) : Degree::zero(ctx->presentation.rank);
        s.add(SeriesKey{d, t}, ZLaurent(0, c * ctx->cohomology.unit()));
    }
    return s;
}

/// Unit-sector z^0 scalar part of mu.
inline MultiSeries auto_flow(const MultiSeries& I) {
    MirrorMap m = mirror_map(I);
    const auto& model = I.ctx().cohomology;
    MultiSeries flow = I.empty_like();
    for (const auto& [k, cls] : z_coefficient(m.mu, 0)) {
        Q c = cls.part(model.untwisted()).constant_term();
        if (c != 0) flow.add(k, ZLaurent(0, c * model.unit()));
    }
    return flow;
}

struct FrameOptions {
    std::optional<MultiSeries> flow;  ///< nullopt: auto_flow
    std::vector<std::string> directions;
};

struct JFrame {
    MultiSeries flow;
    bool flow_auto = false;
    MultiSeries normalized;  ///< e^{-flow/z} I = 1 + tau/z + ...
    ClassSeries tau;
    std::vector<SeriesDirection> directions;
    int residual_order = 0;
    std::optional<SeriesKey> residual_key;  ///< first non-frame term, if any
};

namespace detail {

inline Q direction_order(const SeriesContext& ctx, const std::vector<SeriesDirection>& dirs, const SeriesKey& k) {
    Q o = 0;
    for (const auto& d : dirs) o += direction_exponent(ctx, d, k);
    return o;
}

inline bool is_direction_generator(const SeriesContext& ctx, const SeriesDirection& d, const SeriesKey& k) {
    if (d.kind == SeriesDirection::Kind::TVariable) {
        if (!k.degree.is_zero()) return false;
        for (std::size_t i = 0; i < k.t.size(); ++i)
            if (k.t[i] != (i == d.index ? 1 : 0)) return false;
        return true;
    }
    return t_degree(k.t) == 0 && k.degree == ctx.chart.generators()[d.index];
}

/// Largest direction order the truncation resolves completely, plus one.
inline int truncation_capacity(const MultiSeries& s, const std::vector<SeriesDirection>& dirs) {
    int cap = std::numeric_limits<int>::max();
    for (const auto& d : dirs) {
        int c;
        if (d.kind == SeriesDirection::Kind::TVariable) c = s.truncation().t_bound + 1;
        else {
            Q th = theta_pairing(s.ctx().presentation, s.ctx().chart.generators()[d.index]);
            if (th <= 0) throw Error(ErrorCode::GeneratorNotThetaPositive, "direction " + d.name + " has nonpositive theta-degree");
            c = static_cast<int>(to_long(floor_q(s.truncation().theta_bound / th))) + 1;
        }
        cap = std::min(cap, c);
    }
    return cap;
}

}  // namespace detail

/// S = e^{-flow/z} I; checks that z S = z 1 + tau + O(1/z) modulo the
/// direction order reported as residual_order.
inline JFrame normalize_frame(const MultiSeries& I, const FrameOptions& opts) {
    require_unital(I);
    const auto& ctx = I.ctx();
    JFrame f;
    for (const auto& name : opts.directions) f.directions.push_back(resolve_direction(ctx, name));
    f.flow_auto = !opts.flow.has_value();
    f.flow = opts.flow ? *opts.flow : auto_flow(I);
    f.normalized = exp_divisor_flow(I, f.flow, -1);

    const CRClass one = ctx.cohomology.unit();
    const SeriesKey zero = I.zero_key();
    std::optional<Q> worst;
    for (const auto& [k, lau] : f.normalized.coeffs())
        for (const auto& [e, cls] : lau.terms()) {
            if (e < -1) continue;
            CRClass rest = cls;
            if (k == zero && e == 0) rest -= one;
            if (e == -1)
                for (const auto& d : f.directions)
                    if (detail::is_direction_generator(ctx, d, k)) {
                        f.tau.emplace(k, cls);
                        rest = CRClass();
                        break;
                    }
            if (rest.is_zero()) continue;
            Q ord = detail::direction_order(ctx, f.directions, k);
            if (!worst || ord < *worst || (ord == *worst && k < *f.residual_key)) {
                worst = ord;
                f.residual_key = k;
            }
        }
    int cap = detail::truncation_capacity(f.normalized, f.directions);
    f.residual_order = cap;
    if (worst) {
        if (!is_integer(*worst)) throw Error(ErrorCode::NotIntegral, "non-integral direction order " + format_q(*worst));
        f.residual_order = std::min<long>(cap, to_long(worst->get_num()));
    }
    if (f.residual_order <= 1)
        throw Error(ErrorCode::PositivePowersRemain,
                    f.residual_key ? "nonnegative z-powers of z*exp(-flow/z)*I remain at " + format_key(ctx, *f.residual_key) +
                                         " (direction order " + std::to_string(f.residual_order) + ")"
                                   : "truncation resolves the frame only to direction order " +
                                         std::to_string(f.residual_order));
    return f;
}

struct ProductDirection {
    enum class Kind { String, Series, Divisor };
    Kind kind = Kind::String;
    SeriesDirection series;
    std::size_t generator = 0;  ///< Divisor: index j of c_1(L_{pi_j})
    std::string name;
};

/// "1" is the string direction, frame directions are series directions and
/// cohomology generator names are divisor directions (opt-in only).
inline ProductDirection resolve_product_direction(const JFrame& f, const std::string& name, bool allow_divisor) {
    if (name == "1") return {ProductDirection::Kind::String, {}, 0, name};
    for (const auto& d : f.directions)
        if (d.name == name) return {ProductDirection::Kind::Series, d, 0, name};
    const auto& gens = f.normalized.ctx().cohomology.generator_names();
    for (std::size_t j = 0; j < gens.size(); ++j)
        if (gens[j] == name) {
            if (!allow_divisor)
                throw Error(ErrorCode::UnknownDirection,
                            "'" + name + "' is a divisor direction; enable the experimental divisor extension");
            return {ProductDirection::Kind::Divisor, {}, j, name};
        }
    throw Error(ErrorCode::UnknownDirection, "'" + name + "' is not a frame direction, '1' or a divisor");
}

namespace detail {

/// beta with the frame-direction chart coordinates removed.
inline Degree non_direction_part(const SeriesContext& ctx, const std::vector<SeriesDirection>& dirs, const Degree& beta) {
    if (ctx.chart.empty()) return beta;
    auto a = ctx.chart.coordinates(beta);
    if (!a) throw Error(ErrorCode::UnknownDirection, "degree (" + format_qvector(beta.coords) + ") is outside the Novikov chart");
    for (const auto& d : dirs)
        if (d.kind == SeriesDirection::Kind::Novikov) (*a)[d.index] = 0;
    return ctx.chart.degree_of(*a);
}

inline MultiSeries apply_direction(const JFrame& f, const ProductDirection& d, const MultiSeries& s) {
    switch (d.kind) {
        case ProductDirection::Kind::String: return shift_z(s, -1);
        case ProductDirection::Kind::Series: return differentiate(s, d.series);
        case ProductDirection::Kind::Divisor: {
            const auto& ctx = s.ctx();
            Character chi{std::vector<long>(ctx.presentation.rank, 0)};
            chi.coords[d.generator] = 1;
            Poly P = Poly::variable(ctx.cohomology.ngens(), d.generator);
            MultiSeries r = s.empty_like();
            for (const auto& [k, lau] : s.coeffs()) {
                Q w = degree_pairing(non_direction_part(ctx, f.directions, k.degree), chi);
                ZLaurent out = w * lau;
                for (const auto& [e, cls] : lau.terms()) out.add(e - 1, cr_multiply(ctx.cohomology, cls, P));
                r.add(k, out);
            }
            return r;
        }
    }
    return s;
}

inline void check_evaluation(const JFrame& f, const std::map<std::string, Q>& at) {
    for (const auto& [name, v] : at) {
        bool known = false;
        for (const auto& d : f.directions) known = known || d.name == name;
        if (!known) throw Error(ErrorCode::UnknownDirection, "cannot evaluate '" + name + "': not a frame direction");
        if (v != 0)
            throw Error(ErrorCode::UnsupportedEvaluation,
                        "only evaluation at 0 is supported (" + name + "=" + format_q(v) + ")");
    }
}

}  // namespace detail

/// Every key of `s` whose frame-direction exponents vanish, restricted to
/// the region the truncation still determines after the derivatives.
inline ClassSeries evaluate_z0(const JFrame& f, const MultiSeries& s, const Q& theta_budget, int t_budget) {
    const auto& ctx = s.ctx();
    ClassSeries out;
    for (const auto& [k, cls] : z_coefficient(s, 0)) {
        if (detail::direction_order(ctx, f.directions, k) != 0) continue;
        if (s.theta_of(k) > theta_budget || t_degree(k.t) > t_budget) continue;
        out.emplace(k, cls);
    }
    return out;
}

/// z^0-part of z d_a d_b (z S), directions evaluated at 0.
inline ClassSeries quantum_product(const JFrame& f, const std::string& dir_a, const std::string& dir_b,
                                   const std::map<std::string, Q>& eval_at = {}, bool allow_divisor = false) {
    detail::check_evaluation(f, eval_at);
    const auto& ctx = f.normalized.ctx();
    ProductDirection a = resolve_product_direction(f, dir_a, allow_divisor);
    ProductDirection b = resolve_product_direction(f, dir_b, allow_divisor);
    int derivs = 0;
    Q theta_budget = f.normalized.truncation().theta_bound;
    int t_budget = f.normalized.truncation().t_bound;
    for (const auto* d : {&a, &b}) {
        if (d->kind != ProductDirection::Kind::Series) continue;
        ++derivs;
        if (d->series.kind == SeriesDirection::Kind::TVariable) t_budget -= 1;
        else theta_budget -= theta_pairing(ctx.presentation, ctx.chart.generators()[d->series.index]);
    }
    if (f.residual_order <= derivs)
        throw Error(ErrorCode::FrameResidualTooLow, "product " + dir_a + "*" + dir_b + " needs the frame modulo order " +
                                                        std::to_string(derivs + 1) + ", verified only modulo order " +
                                                        std::to_string(f.residual_order));
    MultiSeries t = detail::apply_direction(f, b, f.normalized);
    t = detail::apply_direction(f, a, t);
    return evaluate_z0(f, shift_z(t, 2), theta_budget, t_budget);
}

/// The same second derivative expanded by the product rule:
/// z d_a d_b (z e^{-c/z} I) = e^{-c/z}(c_a c_b I - z c_ab I - z c_a I_b - z c_b I_a + z^2 I_ab).
inline MultiSeries product_rule_expansion(const MultiSeries& I, const MultiSeries& flow, const std::string& dir_a,
                                          const std::string& dir_b) {
    const auto& ctx = I.ctx();
    SeriesDirection a = resolve_direction(ctx, dir_a), b = resolve_direction(ctx, dir_b);
    MultiSeries ca = differentiate(flow, a), cb = differentiate(flow, b), cab = differentiate(ca, b);
    MultiSeries Ia = differentiate(I, a), Ib = differentiate(I, b), Iab = differentiate(Ia, b);
    MultiSeries sum = mul(mul(ca, cb), I);
    sum = sub(sum, shift_z(mul(cab, I), 1));
    sum = sub(sum, shift_z(mul(ca, Ib), 1));
    sum = sub(sum, shift_z(mul(cb, Ia), 1));
    sum = add(sum, shift_z(Iab, 2));
    return exp_divisor_flow(sum, flow, -1);
}

/// <value, cls> coefficientwise.
inline std::map<SeriesKey, Q> pair_with(const CohomologyModel& model, const ClassSeries& value, const CRClass& cls) {
    std::map<SeriesKey, Q> out;
    for (const auto& [k, v] : value) {
        Q p = orb_pairing(model, v, cls);
        if (p != 0) out.emplace(k, p);
    }
    return out;
}

struct TableBasisEntry {
    std::string label;
    CRClass cls;
    std::optional<std::string> direction;
};

enum class CellStatus { Computed, StringAxiom, Experimental, NotParameterized, Failed };

constexpr std::string_view cell_status_name(CellStatus s) {
    switch (s) {
        case CellStatus::Computed: return "computed";
        case CellStatus::StringAxiom: return "string axiom";
        case CellStatus::Experimental: return "experimental";
        case CellStatus::NotParameterized: return "n/a (direction not parameterized)";
        case CellStatus::Failed: return "failed";
    }
    return "?";
}

struct TableCell {
    CellStatus status = CellStatus::NotParameterized;
    ClassSeries value;
    std::string note;
};

struct ProductTable {
    std::vector<std::string> labels;
    std::vector<std::vector<TableCell>> cells;  ///< symmetric
};

inline ProductTable product_table(const JFrame& f, const std::vector<TableBasisEntry>& basis, bool allow_divisor) {
    const auto& ctx = f.normalized.ctx();
    const std::size_t n = basis.size();
    std::vector<std::optional<ProductDirection>> real(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = basis[i];
        std::string dir = e.direction ? *e.direction : (e.cls == ctx.cohomology.unit() ? "1" : "");
        if (dir.empty()) continue;
        try {
            real[i] = resolve_product_direction(f, dir, allow_divisor);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::UnknownDirection) throw;
        }
    }
    ProductTable t;
    for (const auto& e : basis) t.labels.push_back(e.label);
    t.cells.assign(n, std::vector<TableCell>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            TableCell c;
            if (real[i] && real[j]) {
                bool exp = real[i]->kind == ProductDirection::Kind::Divisor || real[j]->kind == ProductDirection::Kind::Divisor;
                try {
                    c.value = quantum_product(f, real[i]->name, real[j]->name, {}, allow_divisor);
                    c.status = exp ? CellStatus::Experimental : CellStatus::Computed;
                } catch (const Error& err) {
                    c.status = CellStatus::Failed;
                    c.note = err.what();
                }
            } else if ((real[i] && real[i]->kind == ProductDirection::Kind::String) ||
                       (real[j] && real[j]->kind == ProductDirection::Kind::String)) {
                const CRClass& other = (real[i] && real[i]->kind == ProductDirection::Kind::String) ? basis[j].cls : basis[i].cls;
                if (!other.is_zero()) c.value.emplace(f.normalized.zero_key(), other);
                c.status = CellStatus::StringAxiom;
            }
            t.cells[i][j] = c;
            t.cells[j][i] = c;
        }
    return t;
}

}  // namespace toricqc
