#pragma once

// Truncated formal series in Novikov degrees and t-variables whose
// coefficients are finite Laurent polynomials in z with CRClass values.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toricqc/cohomology.hpp"
#include "toricqc/error.hpp"
#include "toricqc/polynomial.hpp"
#include "toricqc/presentation.hpp"
#include "toricqc/rational.hpp"

namespace toricqc {

using TIndex = std::vector<int>;

inline int t_degree(const TIndex& p) {
    int s = 0;
    for (int e : p) s += e;
    return s;
}

/// Exponent pair (beta, p) of q^beta t^p.
struct SeriesKey {
    Degree degree;
    TIndex t;

    friend bool operator==(const SeriesKey&, const SeriesKey&) = default;
    friend bool operator<(const SeriesKey& a, const SeriesKey& b) {
        if (!(a.degree == b.degree)) return a.degree < b.degree;
        return a.t < b.t;
    }
};

/// Finite Laurent polynomial in z with CRClass coefficients.
class ZLaurent {
public:
    ZLaurent() = default;
    ZLaurent(int power, const CRClass& c) { add(power, c); }

    const std::map<int, CRClass>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    CRClass coefficient(int power) const {
        auto it = terms_.find(power);
        return it == terms_.end() ? CRClass() : it->second;
    }

    void add(int power, const CRClass& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(power, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    ZLaurent& operator+=(const ZLaurent& o) {
        for (const auto& [e, c] : o.terms_) add(e, c);
        return *this;
    }
    ZLaurent& operator-=(const ZLaurent& o) {
        for (const auto& [e, c] : o.terms_) add(e, Q(-1) * c);
        return *this;
    }
    ZLaurent& operator*=(const Q& s) {
        if (s == 0) terms_.clear();
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend ZLaurent operator+(ZLaurent a, const ZLaurent& b) { return a += b; }
    friend ZLaurent operator-(ZLaurent a, const ZLaurent& b) { return a -= b; }
    friend ZLaurent operator*(const Q& s, ZLaurent a) { return a *= s; }
    friend bool operator==(const ZLaurent& a, const ZLaurent& b) { return a.terms_ == b.terms_; }

    /// Multiplication by z^n.
    ZLaurent shifted(int n) const {
        ZLaurent r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e + n, c);
        return r;
    }

    ZLaurent filtered(bool nonnegative) const {
        ZLaurent r;
        for (const auto& [e, c] : terms_)
            if ((e >= 0) == nonnegative) r.terms_.emplace(e, c);
        return r;
    }

    std::optional<int> min_power() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.begin()->first;
    }
    std::optional<int> max_power() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.rbegin()->first;
    }

private:
    std::map<int, CRClass> terms_;
};

inline ZLaurent z_multiply(const CohomologyModel& model, const ZLaurent& a, const ZLaurent& b) {
    ZLaurent r;
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms()) r.add(ea + eb, cr_multiply(model, ca, cb));
    return r;
}

struct TruncationSpec {
    Q theta_bound = 0;
    int t_bound = 0;
    std::optional<int> z_floor;
    std::optional<int> z_ceil;

    TruncationSpec() = default;
    TruncationSpec(Q theta, int t, std::optional<int> floor = {}, std::optional<int> ceil = {})
        : theta_bound(std::move(theta)), t_bound(t), z_floor(floor), z_ceil(ceil) {}

    static TruncationSpec intersect(const TruncationSpec& a, const TruncationSpec& b) {
        TruncationSpec r;
        r.theta_bound = a.theta_bound < b.theta_bound ? a.theta_bound : b.theta_bound;
        r.t_bound = std::min(a.t_bound, b.t_bound);
        auto pick = [](std::optional<int> x, std::optional<int> y, bool lower) -> std::optional<int> {
            if (!x) return y;
            if (!y) return x;
            return lower ? std::max(*x, *y) : std::min(*x, *y);
        };
        r.z_floor = pick(a.z_floor, b.z_floor, true);
        r.z_ceil = pick(a.z_ceil, b.z_ceil, false);
        return r;
    }
    friend bool operator==(const TruncationSpec&, const TruncationSpec&) = default;
};

/// Everything a series needs to multiply and truncate: theta, the sector
/// rings, the Novikov chart and the names of the t-variables.
struct SeriesContext {
    GitPresentation presentation;
    CohomologyModel cohomology;
    NovikovChart chart;
    std::vector<std::string> t_names;

    std::size_t num_t() const { return t_names.size(); }
};

using ContextPtr = std::shared_ptr<const SeriesContext>;

class MultiSeries {
public:
    using Coeffs = std::map<SeriesKey, ZLaurent>;

    MultiSeries() = default;
    MultiSeries(ContextPtr ctx, TruncationSpec trunc) : ctx_(std::move(ctx)), trunc_(std::move(trunc)) {
        if (trunc_.theta_bound < 0) throw Error(ErrorCode::ValidationError, "theta bound must be nonnegative");
        if (trunc_.t_bound < 0) throw Error(ErrorCode::ValidationError, "t bound must be nonnegative");
    }

    static MultiSeries unit(ContextPtr ctx, TruncationSpec trunc) {
        MultiSeries s(ctx, trunc);
        s.add(s.zero_key(), ZLaurent(0, ctx->cohomology.unit()));
        return s;
    }

    const ContextPtr& context() const { return ctx_; }
    const SeriesContext& ctx() const { return *ctx_; }
    const TruncationSpec& truncation() const { return trunc_; }
    const Coeffs& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    SeriesKey zero_key() const {
        return SeriesKey{Degree::zero(ctx_->presentation.rank), TIndex(ctx_->num_t(), 0)};
    }

    Q theta_of(const SeriesKey& k) const { return theta_pairing(ctx_->presentation, k.degree); }

    bool admits(const SeriesKey& k) const {
        return theta_of(k) <= trunc_.theta_bound && t_degree(k.t) <= trunc_.t_bound;
    }

    ZLaurent coefficient(const SeriesKey& k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? ZLaurent() : it->second;
    }

    /// Adds c at key k; silently dropped when k is outside the truncation.
    void add(const SeriesKey& k, const ZLaurent& c) {
        if (k.t.size() != ctx_->num_t()) throw Error(ErrorCode::DimensionMismatch, "t-index has the wrong length");
        if (!admits(k)) return;
        ZLaurent clamped;
        for (const auto& [e, cls] : c.terms()) {
            if (trunc_.z_floor && e < *trunc_.z_floor) continue;
            if (trunc_.z_ceil && e > *trunc_.z_ceil) continue;
            clamped.add(e, cls);
        }
        if (clamped.is_zero()) return;
        auto [it, inserted] = coeffs_.try_emplace(k, clamped);
        if (!inserted) {
            it->second += clamped;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    MultiSeries empty_like() const { return MultiSeries(ctx_, trunc_); }

    friend bool operator==(const MultiSeries& a, const MultiSeries& b) { return a.coeffs_ == b.coeffs_; }

private:
    ContextPtr ctx_;
    TruncationSpec trunc_;
    Coeffs coeffs_;
};

namespace detail {
inline void require_same_context(const MultiSeries& a, const MultiSeries& b) {
    if (a.context() != b.context() && !(a.context() && b.context() && &a.ctx() == &b.ctx()))
        throw Error(ErrorCode::DimensionMismatch, "series built over different contexts");
}
}  // namespace detail

/// "q^2*x*t1", or "1" for the zero key.
inline std::string format_key(const SeriesContext& ctx, const SeriesKey& k) {
    std::string out = k.degree.is_zero() ? std::string() : ctx.chart.format(k.degree);
    for (std::size_t i = 0; i < k.t.size(); ++i) {
        if (k.t[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += ctx.t_names.at(i);
        if (k.t[i] != 1) out += "^" + std::to_string(k.t[i]);
    }
    return out.empty() ? "1" : out;
}

inline MultiSeries add(const MultiSeries& a, const MultiSeries& b) {
    detail::require_same_context(a, b);
    MultiSeries r(a.context(), TruncationSpec::intersect(a.truncation(), b.truncation()));
    for (const auto& [k, c] : a.coeffs()) r.add(k, c);
    for (const auto& [k, c] : b.coeffs()) r.add(k, c);
    return r;
}

inline MultiSeries scale(const MultiSeries& a, const Q& s) {
    MultiSeries r = a.empty_like();
    for (const auto& [k, c] : a.coeffs()) r.add(k, s * c);
    return r;
}

inline MultiSeries sub(const MultiSeries& a, const MultiSeries& b) { return add(a, scale(b, Q(-1))); }

/// Multiplication by z^n.
inline MultiSeries shift_z(const MultiSeries& a, int n) {
    MultiSeries r = a.empty_like();
    for (const auto& [k, c] : a.coeffs()) r.add(k, c.shifted(n));
    return r;
}

inline SeriesKey key_sum(const SeriesKey& a, const SeriesKey& b) {
    TIndex t(a.t.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = a.t[i] + b.t.at(i);
    return SeriesKey{a.degree + b.degree, t};
}

/// Cauchy product over (beta, p), dropping keys outside the common truncation.
inline MultiSeries mul(const MultiSeries& a, const MultiSeries& b) {
    detail::require_same_context(a, b);
    MultiSeries r(a.context(), TruncationSpec::intersect(a.truncation(), b.truncation()));
    const auto& model = a.ctx().cohomology;
    for (const auto& [ka, ca] : a.coeffs())
        for (const auto& [kb, cb] : b.coeffs()) {
            SeriesKey k = key_sum(ka, kb);
            if (!r.admits(k)) continue;
            r.add(k, z_multiply(model, ca, cb));
        }
    return r;
}

inline MultiSeries truncate_plus(const MultiSeries& s) {
    MultiSeries r = s.empty_like();
    for (const auto& [k, c] : s.coeffs()) r.add(k, c.filtered(true));
    return r;
}

inline MultiSeries truncate_minus(const MultiSeries& s) {
    MultiSeries r = s.empty_like();
    for (const auto& [k, c] : s.coeffs()) r.add(k, c.filtered(false));
    return r;
}

/// Coefficient of z^c at every key (absent keys have zero coefficient).
inline std::map<SeriesKey, CRClass> z_coefficient(const MultiSeries& s, int c) {
    std::map<SeriesKey, CRClass> out;
    for (const auto& [k, lau] : s.coeffs()) {
        CRClass cls = lau.coefficient(c);
        if (!cls.is_zero()) out.emplace(k, cls);
    }
    return out;
}

/// Laurent polynomial in z with coefficients in one fixed sector ring.
class SectorLaurent {
public:
    explicit SectorLaurent(const RingSpec& ring) : ring_(&ring) {}

    static SectorLaurent constant(const RingSpec& ring, const Poly& p) {
        SectorLaurent r(ring);
        r.add(0, p);
        return r;
    }

    const RingSpec& ring() const { return *ring_; }
    const std::map<int, Poly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(int power, const Poly& p) {
        Poly nf = ring_->normal_form(p).coeffs;
        if (nf.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(power, nf);
        if (!inserted) {
            it->second += nf;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend SectorLaurent operator*(const SectorLaurent& a, const SectorLaurent& b) {
        SectorLaurent r(*a.ring_);
        for (const auto& [ea, pa] : a.terms_)
            for (const auto& [eb, pb] : b.terms_) r.add(ea + eb, pa * pb);
        return r;
    }
    SectorLaurent& operator*=(const SectorLaurent& o) { return *this = *this * o; }

    /// D + c z for a ring polynomial D.
    static SectorLaurent linear(const RingSpec& ring, const Poly& d, const Q& c) {
        SectorLaurent r(ring);
        r.add(0, d);
        if (c != 0) r.add(1, Poly::constant(ring.ngens(), c));
        return r;
    }

    ZLaurent to_zlaurent() const {
        ZLaurent z;
        for (const auto& [e, p] : terms_) z.add(e, CRClass(SectorClass{ring_->sector(), p}));
        return z;
    }

    friend bool operator==(const SectorLaurent& a, const SectorLaurent& b) { return a.terms_ == b.terms_; }

private:
    const RingSpec* ring_;
    std::map<int, Poly> terms_;
};

/// 1/(D + c z) = (cz)^{-1} sum_m (-D/(cz))^m; finite because D is nilpotent.
inline SectorLaurent invert_linear_factor_in(const RingSpec& ring, const Poly& d, const Q& c) {
    if (c == 0) throw Error(ErrorCode::ZeroZCoefficient, "cannot invert a linear factor with zero z-coefficient");
    Poly dn = ring.normal_form(d).coeffs;
    if (dn.constant_term() != 0)
        throw Error(ErrorCode::NotNilpotent, "linear factor has a nonzero constant term after normal form");
    SectorLaurent r(ring);
    Poly power = Poly::constant(ring.ngens(), Q(1));
    const Q inv_c = Q(1) / c;
    Q coef = inv_c;
    const std::size_t limit = ring.basis().size() + 1;
    for (std::size_t m = 0;; ++m) {
        if (power.is_zero()) break;
        if (m > limit) throw Error(ErrorCode::NotNilpotent, "divisor class is not nilpotent in its sector ring");
        r.add(-static_cast<int>(m) - 1, power * coef);
        power = ring.normal_form(power * dn).coeffs;
        coef *= -inv_c;
    }
    return r;
}

inline ZLaurent invert_linear_factor(const RingSpec& ring, const SectorClass& d, const Q& c) {
    if (d.sector != ring.sector()) throw Error(ErrorCode::DimensionMismatch, "divisor class lives in another sector");
    return invert_linear_factor_in(ring, d.coeffs.is_zero() ? Poly(ring.ngens()) : d.coeffs, c).to_zlaurent();
}

struct ExpPrefactorSpec {
    struct Entry {
        std::size_t t_index;
        Poly u;  ///< polynomial in the k generators H_j
    };
    std::vector<Entry> entries;
};

namespace detail {

/// Polynomial in t with SectorLaurent coefficients (fixed ring).
using TLaurent = std::map<TIndex, SectorLaurent>;

inline void tl_add(TLaurent& acc, const TIndex& p, const SectorLaurent& v) {
    if (v.is_zero()) return;
    auto it = acc.find(p);
    if (it == acc.end()) {
        acc.emplace(p, v);
        return;
    }
    for (const auto& [e, poly] : v.terms()) it->second.add(e, poly);
    if (it->second.is_zero()) acc.erase(it);
}

inline TLaurent tl_mul(const TLaurent& a, const TLaurent& b, int t_budget) {
    TLaurent r;
    for (const auto& [pa, va] : a)
        for (const auto& [pb, vb] : b) {
            TIndex p(pa.size());
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = pa[i] + pb[i];
            if (t_degree(p) > t_budget) continue;
            tl_add(r, p, va * vb);
        }
    return r;
}

/// exp((1/z) sum_i t_i u_i(H_j + beta_j z)) in the given ring, to t-degree
/// <= t_budget. Substitution happens first, normal form second.
inline TLaurent exp_prefactor(const RingSpec& ring, const ExpPrefactorSpec& spec, const Degree& beta,
                              std::size_t num_t, int t_budget) {
    const std::size_t k = ring.ngens();
    // images H_j -> H_j + beta_j z in Q[H_1..H_k, z]
    std::vector<Poly> images;
    for (std::size_t j = 0; j < k; ++j) {
        Poly img = Poly::variable(k + 1, j);
        img += Poly::variable(k + 1, k) * beta.coords.at(j);
        images.push_back(img);
    }
    TLaurent arg;
    for (const auto& e : spec.entries) {
        if (e.t_index >= num_t) throw Error(ErrorCode::DimensionMismatch, "prefactor names an unknown t-variable");
        Poly u = e.u.is_zero() ? Poly(k) : e.u;
        if (u.nvars() != k) throw Error(ErrorCode::DimensionMismatch, "prefactor polynomial has the wrong arity");
        Poly shifted = u.substitute(images);
        SectorLaurent v(ring);
        for (const auto& [m, c] : shifted.terms()) {
            Monomial h(m.begin(), m.begin() + static_cast<long>(k));
            v.add(m[k] - 1, Poly::monomial(h, c));
        }
        TIndex p(num_t, 0);
        p[e.t_index] = 1;
        tl_add(arg, p, v);
    }
    TLaurent result;
    tl_add(result, TIndex(num_t, 0), SectorLaurent::constant(ring, Poly::constant(k, Q(1))));
    TLaurent power = result;
    for (int m = 1; m <= t_budget && !arg.empty(); ++m) {
        power = tl_mul(power, arg, t_budget);
        if (power.empty()) break;
        Q inv_fact = Q(1) / factorial_q(m);
        for (const auto& [p, v] : power) {
            SectorLaurent scaled(ring);
            for (const auto& [e, poly] : v.terms()) scaled.add(e, poly * inv_fact);
            tl_add(result, p, scaled);
        }
    }
    return result;
}

}  // namespace detail

inline MultiSeries apply_exp_prefactor(const MultiSeries& s, const ExpPrefactorSpec& spec) {
    if (spec.entries.empty()) return s;
    const auto& ctx = s.ctx();
    const auto& model = ctx.cohomology;
    MultiSeries r = s.empty_like();
    std::map<std::pair<Degree, SectorId>, detail::TLaurent> cache;
    for (const auto& [key, lau] : s.coeffs()) {
        int budget = s.truncation().t_bound - t_degree(key.t);
        for (const auto& [ez, cls] : lau.terms())
            for (const auto& [sector, poly] : cls.parts()) {
                const RingSpec& ring = model.ring(sector);
                auto ck = std::make_pair(key.degree, sector);
                auto it = cache.find(ck);
                if (it == cache.end())
                    it = cache
                             .emplace(ck, detail::exp_prefactor(ring, spec, key.degree, ctx.num_t(),
                                                                s.truncation().t_bound))
                             .first;
                for (const auto& [p, v] : it->second) {
                    if (t_degree(p) > budget) continue;
                    SeriesKey nk{key.degree, key.t};
                    for (std::size_t i = 0; i < p.size(); ++i) nk.t[i] += p[i];
                    ZLaurent contrib;
                    for (const auto& [e, hp] : v.terms())
                        contrib.add(ez + e, CRClass(ring.normal_form(poly * hp)));
                    r.add(nk, contrib);
                }
            }
    }
    return r;
}

/// A direction along which a series can be differentiated.
struct SeriesDirection {
    enum class Kind { TVariable, Novikov };
    Kind kind = Kind::TVariable;
    std::size_t index = 0;
    std::string name;
};

inline SeriesDirection resolve_direction(const SeriesContext& ctx, const std::string& name) {
    for (std::size_t i = 0; i < ctx.t_names.size(); ++i)
        if (ctx.t_names[i] == name) return {SeriesDirection::Kind::TVariable, i, name};
    if (auto i = ctx.chart.index_of(name)) return {SeriesDirection::Kind::Novikov, *i, name};
    throw Error(ErrorCode::UnknownDirection, "'" + name + "' is neither a t-variable nor a Novikov coordinate");
}

/// Exponent of the direction's variable in the monomial of key k.
inline Q direction_exponent(const SeriesContext& ctx, const SeriesDirection& d, const SeriesKey& k) {
    if (d.kind == SeriesDirection::Kind::TVariable) return Q(k.t.at(d.index));
    auto a = ctx.chart.coordinates(k.degree);
    if (!a) throw Error(ErrorCode::UnknownDirection, "degree (" + format_qvector(k.degree.coords) + ") is outside the Novikov chart");
    return (*a)[d.index];
}

inline MultiSeries differentiate(const MultiSeries& s, const SeriesDirection& d) {
    const auto& ctx = s.ctx();
    MultiSeries r = s.empty_like();
    for (const auto& [k, c] : s.coeffs()) {
        Q e = direction_exponent(ctx, d, k);
        if (e == 0) continue;
        if (!is_integer(e) || e < 0)
            throw Error(ErrorCode::NotIntegral, "non-integral exponent " + format_q(e) + " along " + d.name);
        SeriesKey nk = k;
        if (d.kind == SeriesDirection::Kind::TVariable) nk.t[d.index] -= 1;
        else nk.degree = k.degree - ctx.chart.generators()[d.index];
        r.add(nk, e * c);
    }
    return r;
}

inline MultiSeries differentiate(const MultiSeries& s, const std::string& direction) {
    return differentiate(s, resolve_direction(s.ctx(), direction));
}

/// S * exp(sign * c / z) within the truncation of S. c must vanish at (0, 0).
inline MultiSeries exp_divisor_flow(const MultiSeries& s, const MultiSeries& c, int sign) {
    for (const auto& [k, _] : c.coeffs())
        if (c.theta_of(k) <= 0 && t_degree(k.t) == 0)
            throw Error(ErrorCode::NontruncatingArgument,
                        "flow argument has a term of zero theta- and t-degree at (" + format_qvector(k.degree.coords) + ")");
    MultiSeries arg = shift_z(scale(c, Q(sign)), -1);
    MultiSeries result = s;
    MultiSeries power = s;
    for (int m = 1; !power.is_zero(); ++m) {
        power = scale(mul(power, arg), Q(1) / Q(m));
        result = add(result, power);
    }
    return result;
}

}  // namespace toricqc
