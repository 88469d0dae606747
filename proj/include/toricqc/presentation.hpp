#pragma once

// GIT presentation data (characters of a split torus G = (C*)^k acting on
// C^n) and the cone/lattice combinatorics built on it: semistable supports,
// stabilizers and sectors, degree pairings and per-degree support profiles.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toricqc/error.hpp"
#include "toricqc/linalg.hpp"
#include "toricqc/rational.hpp"

namespace toricqc {

/// Integral character m_1*pi_1 + ... + m_k*pi_k of G.
struct Character {
    std::vector<long> coords;

    std::size_t rank() const { return coords.size(); }
    bool is_zero() const {
        return std::all_of(coords.begin(), coords.end(), [](long c) { return c == 0; });
    }
    QVector as_q() const { return QVector(coords.begin(), coords.end()); }
    friend bool operator==(const Character&, const Character&) = default;
    friend Character operator+(Character a, const Character& b) {
        for (std::size_t i = 0; i < a.coords.size(); ++i) a.coords[i] += b.coords.at(i);
        return a;
    }
};

namespace detail {
inline bool qvec_less(const QVector& a, const QVector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}
}  // namespace detail

/// beta in Hom(Pic, Q), stored as (beta(L_{pi_1}), ..., beta(L_{pi_k})).
struct Degree {
    QVector coords;

    static Degree zero(std::size_t k) { return Degree{QVector(k, Q(0))}; }
    bool is_zero() const {
        return std::all_of(coords.begin(), coords.end(), [](const Q& c) { return c == 0; });
    }
    friend bool operator==(const Degree&, const Degree&) = default;
    friend bool operator<(const Degree& a, const Degree& b) { return detail::qvec_less(a.coords, b.coords); }
    friend Degree operator+(Degree a, const Degree& b) {
        for (std::size_t i = 0; i < a.coords.size(); ++i) a.coords[i] += b.coords.at(i);
        return a;
    }
    friend Degree operator-(Degree a, const Degree& b) {
        for (std::size_t i = 0; i < a.coords.size(); ++i) a.coords[i] -= b.coords.at(i);
        return a;
    }
    friend Degree operator*(const Q& s, Degree a) {
        for (auto& c : a.coords) c *= s;
        return a;
    }
};

/// Torsion element exp(2 pi i frac) of G; entries lie in [0, 1).
struct SectorId {
    QVector frac;

    static SectorId identity(std::size_t k) { return SectorId{QVector(k, Q(0))}; }
    static SectorId from_exponents(const QVector& x) {
        SectorId s;
        for (const auto& v : x) s.frac.push_back(frac_part(v));
        return s;
    }
    bool is_identity() const {
        return std::all_of(frac.begin(), frac.end(), [](const Q& c) { return c == 0; });
    }
    SectorId inverse() const {
        SectorId s;
        for (const auto& v : frac) s.frac.push_back(frac_part(-v));
        return s;
    }
    /// Group law in (Q/Z)^k.
    SectorId operator*(const SectorId& o) const {
        SectorId s;
        for (std::size_t i = 0; i < frac.size(); ++i) s.frac.push_back(frac_part(frac[i] + o.frac.at(i)));
        return s;
    }
    Z order() const {
        Z o = 1;
        for (const auto& v : frac) o = lcm_z(o, v.get_den());
        return o;
    }
    std::string to_string() const { return format_qvector(frac); }

    friend bool operator==(const SectorId&, const SectorId&) = default;
    friend bool operator<(const SectorId& a, const SectorId& b) { return detail::qvec_less(a.frac, b.frac); }
};

struct GitPresentation {
    std::size_t rank = 0;
    std::vector<Character> rho;
    Character theta;
    std::vector<Character> tau;
    std::string name;

    GitPresentation() = default;
    GitPresentation(std::size_t k, std::vector<Character> rho_, Character theta_, std::vector<Character> tau_ = {},
                    std::string name_ = {})
        : rank(k), rho(std::move(rho_)), theta(std::move(theta_)), tau(std::move(tau_)), name(std::move(name_)) {
        if (k == 0) throw Error(ErrorCode::ValidationError, "presentation rank must be positive");
        auto check = [&](const Character& c, const std::string& what) {
            if (c.rank() != k)
                throw Error(ErrorCode::DimensionMismatch,
                            what + " has " + std::to_string(c.rank()) + " coordinates, expected " + std::to_string(k));
        };
        for (std::size_t i = 0; i < rho.size(); ++i) check(rho[i], "rho_" + std::to_string(i + 1));
        check(theta, "theta");
        for (std::size_t b = 0; b < tau.size(); ++b) check(tau[b], "tau_" + std::to_string(b + 1));
    }

    std::size_t n() const { return rho.size(); }
};

using IndexSet = std::vector<std::size_t>;  // sorted, 0-based

struct StabilizerInfo {
    IndexSet support;
    std::size_t support_rank = 0;
    std::vector<SectorId> elements;  // sorted, identity first
    Z order = 0;
};

struct ValidationReport {
    std::vector<StabilizerInfo> supports;
    Z exponent = 1;  ///< lcm of stabilizer orders
};

inline Q degree_pairing(const Degree& beta, const Character& chi) {
    if (beta.coords.size() != chi.coords.size())
        throw Error(ErrorCode::DimensionMismatch, "degree and character have different rank");
    Q s = 0;
    for (std::size_t j = 0; j < chi.coords.size(); ++j) s += beta.coords[j] * chi.coords[j];
    return s;
}

inline Q degree_pairing(const GitPresentation& p, const Degree& beta, const Character& chi) {
    if (beta.coords.size() != p.rank) throw Error(ErrorCode::DimensionMismatch, "degree rank differs from presentation");
    return degree_pairing(beta, chi);
}

namespace detail {

/// Calls f on every subset of {0..n-1} of size <= max_size, in increasing size.
template <typename F>
void for_each_subset(std::size_t n, std::size_t max_size, F&& f) {
    IndexSet cur;
    for (std::size_t size = 1; size <= std::min(n, max_size); ++size) {
        std::vector<bool> mask(n, false);
        std::fill(mask.begin(), mask.begin() + static_cast<long>(size), true);
        do {
            cur.clear();
            for (std::size_t i = 0; i < n; ++i)
                if (mask[i]) cur.push_back(i);
            f(cur);
        } while (std::prev_permutation(mask.begin(), mask.end()));
    }
}

/// True when theta is a strictly positive combination of the (linearly
/// independent) vectors indexed by s.
inline bool strictly_positive_independent(const std::vector<QVector>& vecs, const IndexSet& s, const QVector& theta) {
    std::vector<QVector> cols;
    for (auto i : s) cols.push_back(vecs[i]);
    auto sol = solve_unique(cols, theta);
    if (!sol) return false;
    return std::all_of(sol->begin(), sol->end(), [](const Q& a) { return a > 0; });
}

}  // namespace detail

/// Inclusion-minimal S with theta in Cone_Q(rho_i : i in S). A minimal such S
/// is always linearly independent with a unique, strictly positive
/// representation of theta (Caratheodory), so the search only visits
/// independent subsets of size <= k and solves each exactly.
inline std::vector<IndexSet> semistable_supports(const GitPresentation& p) {
    std::vector<IndexSet> out;
    if (p.theta.is_zero()) throw Error(ErrorCode::EmptySemistableLocus, "theta is the trivial character");
    std::vector<QVector> vecs;
    for (const auto& r : p.rho) vecs.push_back(r.as_q());
    const QVector th = p.theta.as_q();
    detail::for_each_subset(p.n(), p.rank, [&](const IndexSet& s) {
        if (detail::strictly_positive_independent(vecs, s, th)) out.push_back(s);
    });
    if (out.empty()) throw Error(ErrorCode::EmptySemistableLocus, "theta lies in no cone spanned by the rho_i");
    std::sort(out.begin(), out.end());
    return out;
}

/// theta in Cone_Q(rho_i : i in allowed)?
inline bool contains_semistable_support(const GitPresentation& p, const IndexSet& allowed) {
    if (p.theta.is_zero()) return false;
    std::vector<QVector> vecs;
    for (auto i : allowed) vecs.push_back(p.rho.at(i).as_q());
    const QVector th = p.theta.as_q();
    bool found = false;
    detail::for_each_subset(vecs.size(), p.rank, [&](const IndexSet& s) {
        if (!found && detail::strictly_positive_independent(vecs, s, th)) found = true;
    });
    return found;
}

/// Finite group {g : rho_i(g) = 1, i in support}, via Smith normal form of the
/// support sub-matrix. Throws InfiniteStabilizer when the sub-matrix has
/// rank < k.
inline StabilizerInfo stabilizer(const GitPresentation& p, const IndexSet& support) {
    StabilizerInfo info;
    info.support = support;
    ZMatrix m;
    std::vector<QVector> qrows;
    for (auto i : support) {
        std::vector<Z> row;
        for (long c : p.rho.at(i).coords) row.emplace_back(c);
        m.push_back(row);
        qrows.push_back(p.rho[i].as_q());
    }
    info.support_rank = rank_of_vectors(qrows);
    if (info.support_rank < p.rank) {
        std::string s;
        for (auto i : support) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
        throw Error(ErrorCode::InfiniteStabilizer, "support {" + s + "} has rank " + std::to_string(info.support_rank) +
                                                       " < " + std::to_string(p.rank) + " (positive-dimensional stabilizer)");
    }
    SmithForm snf = smith_normal_form(m);
    const std::size_t k = p.rank;
    // g = V u with u_j in (1/d_j) Z / Z
    std::vector<long> d(k);
    for (std::size_t j = 0; j < k; ++j) d[j] = to_long(snf.diagonal.at(j));
    std::set<SectorId> elems;
    std::vector<long> u(k, 0);
    for (;;) {
        QVector x(k, Q(0));
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t j = 0; j < k; ++j) x[r] += Q(snf.column_transform[r][j]) * make_q(u[j], d[j]);
        elems.insert(SectorId::from_exponents(x));
        std::size_t j = 0;
        while (j < k && ++u[j] == d[j]) u[j++] = 0;
        if (j == k) break;
    }
    info.elements.assign(elems.begin(), elems.end());
    info.order = static_cast<long>(info.elements.size());
    return info;
}

inline ValidationReport validate_presentation(const GitPresentation& p) {
    std::vector<QVector> rows;
    for (const auto& r : p.rho) rows.push_back(r.as_q());
    if (p.n() < p.rank || rank_of_vectors(rows) < p.rank)
        throw Error(ErrorCode::RankDeficient, "the rho_i do not span a rank-" + std::to_string(p.rank) + " lattice");
    ValidationReport rep;
    for (const auto& s : semistable_supports(p)) {
        rep.supports.push_back(stabilizer(p, s));
        rep.exponent = lcm_z(rep.exponent, rep.supports.back().order);
    }
    return rep;
}

inline SectorId sector_from_degree(const Degree& beta) { return SectorId::from_exponents(beta.coords); }

inline std::vector<SectorId> enumerate_sectors(const GitPresentation& p) {
    std::set<SectorId> all;
    for (const auto& s : semistable_supports(p))
        for (const auto& g : stabilizer(p, s).elements) all.insert(g);
    return {all.begin(), all.end()};
}

enum class TauClass { NonnegIntegral, NegativeIntegral, NegativeFractional, NonintegralNonneg };

constexpr std::string_view tau_class_name(TauClass c) {
    switch (c) {
        case TauClass::NonnegIntegral: return "nonneg-integral";
        case TauClass::NegativeIntegral: return "negative-integral";
        case TauClass::NegativeFractional: return "negative-fractional";
        case TauClass::NonintegralNonneg: return "nonintegral-nonneg";
    }
    return "?";
}

inline TauClass classify_pairing(const Q& v) {
    if (is_integer(v)) return v >= 0 ? TauClass::NonnegIntegral : TauClass::NegativeIntegral;
    return v > 0 ? TauClass::NonintegralNonneg : TauClass::NegativeFractional;
}

struct SupportProfile {
    IndexSet nonneg_integral;
    IndexSet nonpos_integral;
    bool zss_nonempty = false;
    std::vector<TauClass> tau_classification;
    std::vector<Q> rho_pairings;
    std::vector<Q> tau_pairings;
};

inline SupportProfile support_profile(const GitPresentation& p, const Degree& beta) {
    SupportProfile sp;
    for (std::size_t i = 0; i < p.n(); ++i) {
        Q v = degree_pairing(p, beta, p.rho[i]);
        sp.rho_pairings.push_back(v);
        if (is_integer(v) && v >= 0) sp.nonneg_integral.push_back(i);
        if (is_integer(v) && v <= 0) sp.nonpos_integral.push_back(i);
    }
    sp.zss_nonempty = contains_semistable_support(p, sp.nonneg_integral);
    for (const auto& t : p.tau) {
        Q v = degree_pairing(p, beta, t);
        sp.tau_pairings.push_back(v);
        sp.tau_classification.push_back(classify_pairing(v));
    }
    return sp;
}

inline Q theta_pairing(const GitPresentation& p, const Degree& beta) { return degree_pairing(p, beta, p.theta); }

/// All N-combinations of the generators with beta(L_theta) <= theta_bound and
/// nonempty Z^ss_beta, sorted by (beta(L_theta), coords).
inline std::vector<Degree> enumerate_effective(const GitPresentation& p, const std::vector<Degree>& generators,
                                               const Q& theta_bound) {
    if (theta_bound < 0) throw Error(ErrorCode::ValidationError, "theta bound must be nonnegative");
    for (const auto& g : generators) {
        if (g.coords.size() != p.rank) throw Error(ErrorCode::DimensionMismatch, "generator rank differs from presentation");
        if (!g.is_zero() && theta_pairing(p, g) <= 0)
            throw Error(ErrorCode::GeneratorNotThetaPositive,
                        "generator (" + format_qvector(g.coords) + ") has beta(L_theta) = " +
                            format_q(theta_pairing(p, g)) + " <= 0");
    }
    std::set<Degree> seen{Degree::zero(p.rank)};
    std::vector<Degree> frontier{Degree::zero(p.rank)};
    while (!frontier.empty()) {
        std::vector<Degree> next;
        for (const auto& b : frontier)
            for (const auto& g : generators) {
                if (g.is_zero()) continue;
                Degree c = b + g;
                if (theta_pairing(p, c) > theta_bound) continue;
                if (seen.insert(c).second) next.push_back(c);
            }
        frontier = std::move(next);
    }
    std::vector<Degree> out;
    for (const auto& b : seen)
        if (support_profile(p, b).zss_nonempty) out.push_back(b);
    std::stable_sort(out.begin(), out.end(), [&](const Degree& a, const Degree& b) {
        Q ta = theta_pairing(p, a), tb = theta_pairing(p, b);
        if (ta != tb) return ta < tb;
        return a < b;
    });
    return out;
}

/// Named coordinates on degrees relative to a Q-basis of generators, e.g.
/// q^l x^k for beta = l*beta_1 + k*beta_2.
class NovikovChart {
public:
    NovikovChart() = default;
    NovikovChart(std::vector<std::string> names, std::vector<Degree> generators)
        : names_(std::move(names)), generators_(std::move(generators)) {
        if (names_.size() != generators_.size())
            throw Error(ErrorCode::ValidationError, "novikov coordinate names and generators differ in count");
        if (!generators_.empty()) {
            std::vector<QVector> rows;
            for (const auto& g : generators_) rows.push_back(g.coords);
            if (rank_of_vectors(rows) != generators_.size())
                throw Error(ErrorCode::ValidationError, "novikov generators are not linearly independent");
        }
    }

    bool empty() const { return names_.empty(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<Degree>& generators() const { return generators_; }

    std::optional<std::size_t> index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        return std::nullopt;
    }

    /// Coefficients a with beta = sum a_i g_i, if beta lies in their span.
    std::optional<QVector> coordinates(const Degree& beta) const {
        if (generators_.empty()) return std::nullopt;
        std::vector<QVector> cols;
        for (const auto& g : generators_) cols.push_back(g.coords);
        return solve_unique(cols, beta.coords);
    }

    Degree degree_of(const QVector& coords) const {
        Degree d = Degree::zero(generators_.empty() ? 0 : generators_.front().coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i) d = d + coords[i] * generators_[i];
        return d;
    }

    /// "q^2*x", "1" for zero; falls back to "q^[a,b]" outside the chart.
    std::string format(const Degree& beta) const {
        if (beta.is_zero()) return "1";
        auto a = coordinates(beta);
        bool ok = a.has_value();
        if (ok)
            for (const auto& c : *a) ok = ok && is_integer(c) && c >= 0;
        if (!ok) return "q^[" + format_qvector(beta.coords) + "]";
        std::string out;
        for (std::size_t i = 0; i < a->size(); ++i) {
            if ((*a)[i] == 0) continue;
            if (!out.empty()) out += "*";
            out += names_[i];
            if ((*a)[i] != 1) out += "^" + format_q((*a)[i]);
        }
        return out;
    }

private:
    std::vector<std::string> names_;
    std::vector<Degree> generators_;
};

}  // namespace toricqc
