#pragma once

// Per-sector presented cohomology rings, sector-indexed classes, the
// orbifold Poincare pairing and dual bases.
//
// Each sector ring is a quotient of Q[H_1..H_k] (H_j = c_1(L_{pi_j})) given
// by linear substitutions, vanishing monomials and optional rewrite rules,
// together with a basis of surviving monomials and an integral table. Any
// orbifold normalization of the pairing is folded into that table.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "toricqc/error.hpp"
#include "toricqc/linalg.hpp"
#include "toricqc/polynomial.hpp"
#include "toricqc/presentation.hpp"
#include "toricqc/rational.hpp"

namespace toricqc {

/// A class in a single sector: a Q-combination of that sector's basis
/// monomials, stored as a polynomial.
struct SectorClass {
    SectorId sector;
    Poly coeffs;

    bool is_zero() const { return coeffs.is_zero(); }
    friend bool operator==(const SectorClass& a, const SectorClass& b) {
        return a.sector == b.sector && a.coeffs == b.coeffs;
    }
};

class RingSpec {
public:
    struct Reduction {
        Monomial lhs;
        Poly rhs;
    };

    RingSpec() = default;
    RingSpec(SectorId sector, std::size_t ngens, std::map<std::size_t, Poly> substitutions, std::vector<Monomial> basis,
             std::vector<Monomial> vanishing, std::vector<Reduction> reductions, std::map<Monomial, Q> integral)
        : sector_(std::move(sector)),
          ngens_(ngens),
          substitutions_(std::move(substitutions)),
          basis_(std::move(basis)),
          vanishing_(std::move(vanishing)),
          reductions_(std::move(reductions)),
          integral_(std::move(integral)) {
        build_images();
        check_confluence();
    }

    /// Q[H_1..H_k]/(H^{top+1}) with every monomial of degree <= top a basis
    /// element; handy for tests and default sector models.
    static RingSpec truncated(SectorId sector, std::size_t ngens, int top, std::map<Monomial, Q> integral = {}) {
        std::vector<Monomial> basis, vanishing;
        Monomial m(ngens, 0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
            if (j == ngens) {
                int d = total_degree(m);
                if (d <= top) basis.push_back(m);
                else if (d == top + 1) vanishing.push_back(m);
                return;
            }
            for (int e = 0; e <= left; ++e) {
                m[j] = e;
                rec(j + 1, left - e);
            }
            m[j] = 0;
        };
        rec(0, top + 1);
        return RingSpec(std::move(sector), ngens, {}, basis, vanishing, {}, std::move(integral));
    }

    const SectorId& sector() const { return sector_; }
    std::size_t ngens() const { return ngens_; }
    const std::vector<Monomial>& basis() const { return basis_; }
    const std::vector<Monomial>& vanishing() const { return vanishing_; }
    const std::map<std::size_t, Poly>& substitutions() const { return substitutions_; }
    const std::vector<Reduction>& reductions() const { return reductions_; }
    const std::map<Monomial, Q>& integral_table() const { return integral_; }
    int top_degree() const {
        int d = 0;
        for (const auto& b : basis_) d = std::max(d, total_degree(b));
        return d;
    }
    bool is_basis(const Monomial& m) const { return std::find(basis_.begin(), basis_.end(), m) != basis_.end(); }

    SectorClass normal_form(const Poly& p) const {
        Poly in = p.is_zero() ? Poly(ngens_) : p;
        Poly sub = in.substitute(images_);
        Poly out(ngens_);
        for (const auto& [m, c] : sub.terms()) out += reduce_monomial(m, 0) * c;
        return SectorClass{sector_, out};
    }

    SectorClass unit() const { return normal_form(Poly::constant(ngens_, Q(1))); }

    Q integrate(const SectorClass& a) const {
        if (a.sector != sector_) throw Error(ErrorCode::DimensionMismatch, "integrating a class over the wrong sector");
        Q s = 0;
        for (const auto& [m, c] : a.coeffs.terms()) {
            auto it = integral_.find(m);
            if (it != integral_.end()) s += c * it->second;
        }
        return s;
    }

private:
    void build_images() {
        images_.clear();
        for (std::size_t j = 0; j < ngens_; ++j) images_.push_back(Poly::variable(ngens_, j));
        for (const auto& [j, img] : substitutions_) {
            if (j >= ngens_) throw Error(ErrorCode::ValidationError, "substitution for unknown generator");
            for (const auto& [m, c] : img.terms())
                for (const auto& [jj, _] : substitutions_)
                    if (m.at(jj) != 0)
                        throw Error(ErrorCode::NonConfluentRingSpec,
                                    "substitution image for generator " + std::to_string(j + 1) +
                                        " mentions a substituted generator");
            images_[j] = img.is_zero() ? Poly(ngens_) : img;
        }
    }

    Poly reduce_monomial(const Monomial& m, int depth) const {
        if (depth > 64) throw Error(ErrorCode::NonConfluentRingSpec, "reduction rules do not terminate");
        if (is_basis(m)) return Poly::monomial(m, Q(1));
        for (const auto& v : vanishing_)
            if (divides(v, m)) return Poly(ngens_);
        for (const auto& r : reductions_)
            if (divides(r.lhs, m)) return reduce_poly(r.rhs * Poly::monomial(mono_div(m, r.lhs), Q(1)), depth + 1);
        throw Error(ErrorCode::NonConfluentRingSpec,
                    "monomial " + format_monomial(m, {}) + " in sector " + sector_.to_string() +
                        " is neither a basis element nor reducible");
    }

    Poly reduce_poly(const Poly& p, int depth) const {
        Poly out(ngens_);
        const Poly sub = p.substitute(images_);
        for (const auto& [m, c] : sub.terms()) out += reduce_monomial(m, depth) * c;
        return out;
    }

    /// Every monomial up to top degree + 1 in the free generators must reduce,
    /// and every admissible first rewrite must lead to the same normal form.
    void check_confluence() const {
        std::set<Monomial> seen;
        for (const auto& b : basis_) {
            if (b.size() != ngens_) throw Error(ErrorCode::ValidationError, "basis monomial arity mismatch");
            if (!seen.insert(b).second)
                throw Error(ErrorCode::ValidationError, "duplicate basis monomial " + format_monomial(b, {}));
            for (const auto& v : vanishing_)
                if (divides(v, b))
                    throw Error(ErrorCode::NonConfluentRingSpec,
                                "basis monomial " + format_monomial(b, {}) + " is divisible by vanishing monomial " +
                                    format_monomial(v, {}));
            for (const auto& r : reductions_)
                if (divides(r.lhs, b))
                    throw Error(ErrorCode::NonConfluentRingSpec,
                                "basis monomial " + format_monomial(b, {}) + " is the head of a rewrite rule");
            for (const auto& [j, _] : substitutions_)
                if (b[j] != 0)
                    throw Error(ErrorCode::NonConfluentRingSpec,
                                "basis monomial " + format_monomial(b, {}) + " uses a substituted generator");
        }
        const int bound = top_degree() + 1;
        Monomial m(ngens_, 0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
            if (j == ngens_) {
                check_monomial(m);
                return;
            }
            if (substitutions_.count(j)) {
                rec(j + 1, left);
                return;
            }
            for (int e = 0; e <= left; ++e) {
                m[j] = e;
                rec(j + 1, left - e);
            }
            m[j] = 0;
        };
        rec(0, bound);
    }

    void check_monomial(const Monomial& m) const {
        Poly canonical = reduce_monomial(m, 0);
        if (is_basis(m)) return;
        auto mismatch = [&](const Poly& alt) {
            if (!(alt == canonical))
                throw Error(ErrorCode::NonConfluentRingSpec,
                            "monomial " + format_monomial(m, {}) + " in sector " + sector_.to_string() +
                                " has two different normal forms");
        };
        for (const auto& v : vanishing_)
            if (divides(v, m)) mismatch(Poly(ngens_));
        for (const auto& r : reductions_)
            if (divides(r.lhs, m)) mismatch(reduce_poly(r.rhs * Poly::monomial(mono_div(m, r.lhs), Q(1)), 1));
    }

    SectorId sector_;
    std::size_t ngens_ = 0;
    std::map<std::size_t, Poly> substitutions_;
    std::vector<Monomial> basis_;
    std::vector<Monomial> vanishing_;
    std::vector<Reduction> reductions_;
    std::map<Monomial, Q> integral_;
    std::vector<Poly> images_;
};

/// Sector-indexed class; zero parts are never stored.
class CRClass {
public:
    CRClass() = default;
    explicit CRClass(const SectorClass& s) { add(s.sector, s.coeffs); }

    const std::map<SectorId, Poly>& parts() const { return parts_; }
    bool is_zero() const { return parts_.empty(); }

    Poly part(const SectorId& s) const {
        auto it = parts_.find(s);
        return it == parts_.end() ? Poly() : it->second;
    }

    void add(const SectorId& s, const Poly& p) {
        if (p.is_zero()) return;
        auto [it, inserted] = parts_.try_emplace(s, p);
        if (!inserted) {
            it->second += p;
            if (it->second.is_zero()) parts_.erase(it);
        }
    }

    CRClass& operator+=(const CRClass& o) {
        for (const auto& [s, p] : o.parts_) add(s, p);
        return *this;
    }
    CRClass& operator-=(const CRClass& o) {
        for (const auto& [s, p] : o.parts_) add(s, -p);
        return *this;
    }
    CRClass& operator*=(const Q& c) {
        if (c == 0) parts_.clear();
        for (auto& [s, p] : parts_) p *= c;
        return *this;
    }
    friend CRClass operator+(CRClass a, const CRClass& b) { return a += b; }
    friend CRClass operator-(CRClass a, const CRClass& b) { return a -= b; }
    friend CRClass operator*(const Q& c, CRClass a) { return a *= c; }
    friend bool operator==(const CRClass& a, const CRClass& b) { return a.parts_ == b.parts_; }

private:
    std::map<SectorId, Poly> parts_;
};

struct PairingSpec {
    std::map<SectorId, SectorId> involution;  ///< empty entries default to g -> g^{-1}
    std::map<SectorId, Q> orbifold_weights;   ///< default 1

    SectorId pair_of(const SectorId& s) const {
        auto it = involution.find(s);
        return it == involution.end() ? s.inverse() : it->second;
    }
    Q weight(const SectorId& s) const {
        auto it = orbifold_weights.find(s);
        return it == orbifold_weights.end() ? Q(1) : it->second;
    }
};

/// The collection of sector rings of Y plus the pairing data.
class CohomologyModel {
public:
    CohomologyModel() = default;
    CohomologyModel(std::vector<std::string> generator_names, std::vector<RingSpec> rings, PairingSpec pairing = {})
        : names_(std::move(generator_names)), pairing_(std::move(pairing)) {
        for (auto& r : rings) {
            if (r.ngens() != names_.size())
                throw Error(ErrorCode::ValidationError, "ring for sector " + r.sector().to_string() +
                                                            " has the wrong number of generators");
            SectorId s = r.sector();
            if (!rings_.emplace(s, std::move(r)).second)
                throw Error(ErrorCode::ValidationError, "duplicate ring for sector " + s.to_string());
        }
        for (const auto& [s, _] : rings_) {
            SectorId t = pairing_.pair_of(s);
            if (!(pairing_.pair_of(t) == s))
                throw Error(ErrorCode::ValidationError, "pairing involution is not an involution at " + s.to_string());
        }
    }

    std::size_t ngens() const { return names_.size(); }
    const std::vector<std::string>& generator_names() const { return names_; }
    const PairingSpec& pairing() const { return pairing_; }
    const std::map<SectorId, RingSpec>& rings() const { return rings_; }
    bool has_ring(const SectorId& s) const { return rings_.count(s) != 0; }

    const RingSpec& ring(const SectorId& s) const {
        auto it = rings_.find(s);
        if (it == rings_.end()) throw Error(ErrorCode::MissingSectorRing, "no ring given for sector " + s.to_string());
        return it->second;
    }

    SectorId untwisted() const { return SectorId::identity(names_.size()); }

    /// Fundamental class 1_g.
    CRClass unit(const SectorId& s) const { return CRClass(ring(s).unit()); }
    CRClass unit() const { return unit(untwisted()); }

    /// Normal form of an untwisted-generator polynomial placed in sector s.
    CRClass make_class(const SectorId& s, const Poly& p) const { return CRClass(ring(s).normal_form(p)); }

private:
    std::vector<std::string> names_;
    std::map<SectorId, RingSpec> rings_;
    PairingSpec pairing_;
};

inline SectorClass normal_form(const RingSpec& ring, const Poly& p) { return ring.normal_form(p); }

/// c_1(L_chi) = sum_j m_j H_j, normal-formed in the ring.
inline SectorClass restrict_character(const RingSpec& ring, const Character& chi) {
    if (chi.rank() != ring.ngens()) throw Error(ErrorCode::DimensionMismatch, "character rank differs from ring");
    Poly p(ring.ngens());
    for (std::size_t j = 0; j < chi.rank(); ++j)
        if (chi.coords[j]) p += Poly::variable(ring.ngens(), j) * Q(chi.coords[j]);
    return ring.normal_form(p);
}

inline SectorClass restrict_character(const GitPresentation& p, const RingSpec& ring, const Character& chi) {
    if (p.rank != ring.ngens()) throw Error(ErrorCode::DimensionMismatch, "presentation rank differs from ring");
    return restrict_character(ring, chi);
}

inline SectorClass multiply(const RingSpec& ring, const SectorClass& a, const Poly& p) {
    if (a.sector != ring.sector()) throw Error(ErrorCode::DimensionMismatch, "class and ring sectors differ");
    if (a.is_zero() || p.is_zero()) return SectorClass{ring.sector(), Poly(ring.ngens())};
    return ring.normal_form(a.coeffs * p);
}

inline Q integrate(const RingSpec& ring, const SectorClass& a) { return ring.integrate(a); }

/// Product of two classes when at most one factor is twisted; the untwisted
/// factor is pulled back to the other factor's sector.
inline CRClass cr_multiply(const CohomologyModel& model, const CRClass& a, const CRClass& b) {
    CRClass out;
    for (const auto& [sa, pa] : a.parts())
        for (const auto& [sb, pb] : b.parts()) {
            if (!sa.is_identity() && !sb.is_identity())
                throw Error(ErrorCode::TwistedProductUnsupported,
                            "product of classes in twisted sectors " + sa.to_string() + " and " + sb.to_string());
            const SectorId& target = sa.is_identity() ? sb : sa;
            out += model.make_class(target, pa * pb);
        }
    return out;
}

/// Untwisted-generator polynomial times a class, sector by sector.
inline CRClass cr_multiply(const CohomologyModel& model, const CRClass& a, const Poly& p) {
    CRClass out;
    if (p.is_zero()) return out;
    for (const auto& [s, pa] : a.parts()) out += model.make_class(s, pa * p);
    return out;
}

inline Q orb_pairing(const CohomologyModel& model, const CRClass& a, const CRClass& b) {
    const PairingSpec& spec = model.pairing();
    Q total = 0;
    for (const auto& [s, pa] : a.parts()) {
        SectorId t = spec.pair_of(s);
        Poly pb = b.part(t);
        if (pb.is_zero()) continue;
        const RingSpec& ring = model.ring(s);
        total += spec.weight(s) * ring.integrate(ring.normal_form(pa * pb));
    }
    return total;
}

inline QMatrix gram_matrix(const CohomologyModel& model, const std::vector<CRClass>& basis) {
    QMatrix g(basis.size(), QVector(basis.size()));
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = 0; b < basis.size(); ++b) g[a][b] = orb_pairing(model, basis[a], basis[b]);
    return g;
}

/// phi^a with <phi_b, phi^a> = delta_b^a.
inline std::vector<CRClass> dual_basis(const CohomologyModel& model, const std::vector<CRClass>& basis) {
    auto inv = inverse(gram_matrix(model, basis));
    if (!inv) throw Error(ErrorCode::SingularPairingMatrix, "pairing matrix on the given basis is singular");
    std::vector<CRClass> duals(basis.size());
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = 0; b < basis.size(); ++b)
            if ((*inv)[b][a] != 0) duals[a] += (*inv)[b][a] * basis[b];
    return duals;
}

}  // namespace toricqc
