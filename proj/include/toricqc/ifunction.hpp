#pragma once

// Coefficient-by-coefficient assembly of the big I-function of a complete
// intersection Y in a toric stack X, plus the hypersurface (three strata)
// and semi-positive specializations.
//
// The coefficient of q^beta lives in the sector g_beta^{-1}. It is the
// product of the ambient Gamma-ratio over the rho_i, the Gamma-ratio over
// the tau_b and a "twisted class" in that sector.

#include <cstddef>
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

/// User-supplied classes for degrees outside the default (no tau_b with
/// negative integral pairing). An entry applies either to one degree or to
/// every degree whose tau classification matches `stratum`.
struct TwistedClassEntry {
    std::optional<Degree> degree;
    std::optional<std::vector<TauClass>> stratum;
    CRClass cls;
    std::string provenance;
};

struct TwistedClassProvider {
    std::vector<TwistedClassEntry> table;

    const TwistedClassEntry* lookup(const Degree& beta, const SupportProfile& prof) const {
        for (const auto& e : table)
            if (e.degree && *e.degree == beta) return &e;
        for (const auto& e : table)
            if (!e.degree && e.stratum && *e.stratum == prof.tau_classification) return &e;
        return nullptr;
    }
};

struct IFunctionSetup {
    ContextPtr ctx;
    std::vector<Degree> generators;
    TwistedClassProvider provider;
    ExpPrefactorSpec prefactor;
};

/// Sector g_beta^{-1} carrying the coefficient of q^beta.
inline SectorId coefficient_sector(const Degree& beta) { return sector_from_degree(beta).inverse(); }

namespace detail {

enum class RangeKind { Strict, Inclusive };

inline Poly divisor_poly(const RingSpec& ring, const Character& chi) { return restrict_character(ring, chi).coeffs; }

/// prod_{v < i < 0} (D + (v - i) z)   (Strict)
/// prod_{v <= i < 0} (D + (v - i) z)  (Inclusive)
inline SectorLaurent negative_range_product(const RingSpec& ring, const Poly& d, const Q& v, RangeKind kind) {
    SectorLaurent r = SectorLaurent::constant(ring, Poly::constant(ring.ngens(), Q(1)));
    if (v >= 0) return r;
    long lo = kind == RangeKind::Strict ? to_long(floor_q(v)) + 1 : to_long(ceil_q(v));
    for (long i = lo; i < 0; ++i) r *= SectorLaurent::linear(ring, d, v - Q(i));
    return r;
}

/// prod_{0 <= i < v} (D + (v - i) z)
inline SectorLaurent positive_range_product(const RingSpec& ring, const Poly& d, const Q& v) {
    SectorLaurent r = SectorLaurent::constant(ring, Poly::constant(ring.ngens(), Q(1)));
    if (v <= 0) return r;
    long hi = to_long(ceil_q(v));
    for (long i = 0; i < hi; ++i) r *= SectorLaurent::linear(ring, d, v - Q(i));
    return r;
}

inline SectorLaurent inverse_positive_range_product(const RingSpec& ring, const Poly& d, const Q& v) {
    SectorLaurent r = SectorLaurent::constant(ring, Poly::constant(ring.ngens(), Q(1)));
    if (v <= 0) return r;
    long hi = to_long(ceil_q(v));
    for (long i = 0; i < hi; ++i) r *= invert_linear_factor_in(ring, d, v - Q(i));
    return r;
}

inline SectorLaurent inverse_negative_range_product(const RingSpec& ring, const Poly& d, const Q& v) {
    SectorLaurent r = SectorLaurent::constant(ring, Poly::constant(ring.ngens(), Q(1)));
    if (v >= 0) return r;
    for (long i = to_long(floor_q(v)) + 1; i < 0; ++i) r *= invert_linear_factor_in(ring, d, v - Q(i));
    return r;
}

inline SectorLaurent ambient_factor_in(const GitPresentation& p, const Degree& beta, const RingSpec& ring,
                                       RangeKind kind) {
    SectorLaurent r = SectorLaurent::constant(ring, Poly::constant(ring.ngens(), Q(1)));
    for (const auto& rho : p.rho) {
        Q v = degree_pairing(p, beta, rho);
        Poly d = divisor_poly(ring, rho);
        if (v < 0) r *= negative_range_product(ring, d, v, kind);
        else if (v > 0) r *= inverse_positive_range_product(ring, d, v);
    }
    return r;
}

inline SectorLaurent ci_factor_in(const GitPresentation& p, const Degree& beta, const RingSpec& ring) {
    SectorLaurent r = SectorLaurent::constant(ring, Poly::constant(ring.ngens(), Q(1)));
    for (const auto& tau : p.tau) {
        Q v = degree_pairing(p, beta, tau);
        Poly c1 = divisor_poly(ring, tau);
        if (v > 0) r *= positive_range_product(ring, c1, v);
        else if (v < 0) r *= inverse_negative_range_product(ring, c1, v);
    }
    return r;
}

inline ZLaurent times_class(const SectorLaurent& f, const CRClass& cls) {
    const RingSpec& ring = f.ring();
    ZLaurent out;
    Poly c = cls.part(ring.sector());
    for (const auto& [s, _] : cls.parts())
        if (!(s == ring.sector()))
            throw Error(ErrorCode::ValidationError, "twisted class has a component outside sector " +
                                                        ring.sector().to_string());
    if (c.is_zero()) return out;
    for (const auto& [e, poly] : f.terms()) out.add(e, CRClass(ring.normal_form(poly * c)));
    return out;
}

inline void require_effective(const GitPresentation& p, const Degree& beta, const SupportProfile& prof) {
    if (!prof.zss_nonempty || (!beta.is_zero() && theta_pairing(p, beta) <= 0))
        throw Error(ErrorCode::NotEffective, "degree (" + format_qvector(beta.coords) + ") is not effective");
}

}  // namespace detail

/// Ambient Gamma-ratio over the rho_i, evaluated in `ring` (normally the ring
/// of sector g_beta^{-1}).
inline ZLaurent ambient_factor(const GitPresentation& p, const Degree& beta, const RingSpec& ring) {
    return detail::ambient_factor_in(p, beta, ring, detail::RangeKind::Strict).to_zlaurent();
}

inline ZLaurent ci_factor(const GitPresentation& p, const Degree& beta, const RingSpec& ring) {
    return detail::ci_factor_in(p, beta, ring).to_zlaurent();
}

/// Default: if no tau_b pairs to a negative integer, the class is
/// (prod_{rho : beta(L_rho) in Z_{<0}} D_rho) * 1_{g_beta^{-1}}. Otherwise the
/// provider table must supply it.
inline CRClass twisted_class(const SeriesContext& ctx, const Degree& beta, const TwistedClassProvider& provider) {
    const auto& p = ctx.presentation;
    SupportProfile prof = support_profile(p, beta);
    const SectorId sector = coefficient_sector(beta);
    bool default_case = true;
    for (auto c : prof.tau_classification)
        if (c == TauClass::NegativeIntegral) default_case = false;
    if (default_case) {
        const RingSpec& ring = ctx.cohomology.ring(sector);
        Poly prod = Poly::constant(ring.ngens(), Q(1));
        for (std::size_t i = 0; i < p.n(); ++i) {
            const Q& v = prof.rho_pairings[i];
            if (is_integer(v) && v < 0) prod = prod * detail::divisor_poly(ring, p.rho[i]);
        }
        return CRClass(ring.normal_form(prod));
    }
    const TwistedClassEntry* e = provider.lookup(beta, prof);
    if (!e) {
        std::string strat;
        for (auto c : prof.tau_classification) strat += (strat.empty() ? "" : ",") + std::string(tau_class_name(c));
        throw Error(ErrorCode::MissingTwistedClass, "no class for degree (" + format_qvector(beta.coords) +
                                                        ") in stratum [" + strat + "] and no table entry");
    }
    for (const auto& [s, _] : e->cls.parts())
        if (!(s == sector))
            throw Error(ErrorCode::ValidationError, "table class for degree (" + format_qvector(beta.coords) +
                                                        ") lives in sector " + s.to_string() + ", expected " +
                                                        sector.to_string());
    return e->cls;
}

/// Full coefficient of q^beta (before the exponential prefactor).
inline ZLaurent i_coefficient(const IFunctionSetup& setup, const Degree& beta) {
    const auto& ctx = *setup.ctx;
    const auto& p = ctx.presentation;
    SupportProfile prof = support_profile(p, beta);
    detail::require_effective(p, beta, prof);
    const RingSpec& ring = ctx.cohomology.ring(coefficient_sector(beta));
    SectorLaurent f = detail::ambient_factor_in(p, beta, ring, detail::RangeKind::Strict) * detail::ci_factor_in(p, beta, ring);
    return detail::times_class(f, twisted_class(ctx, beta, setup.provider));
}

inline MultiSeries big_I(const IFunctionSetup& setup, const TruncationSpec& trunc) {
    MultiSeries s(setup.ctx, trunc);
    TIndex t0(setup.ctx->num_t(), 0);
    for (const auto& beta : enumerate_effective(setup.ctx->presentation, setup.generators, trunc.theta_bound))
        s.add(SeriesKey{beta, t0}, i_coefficient(setup, beta));
    return apply_exp_prefactor(s, setup.prefactor);
}

/// Single-tau hypersurface form, each stratum written out separately; the
/// first and third strata use the inclusive range beta(L_rho) <= i < 0.
inline MultiSeries hypersurface_I(const IFunctionSetup& setup, const TruncationSpec& trunc) {
    const auto& ctx = *setup.ctx;
    const auto& p = ctx.presentation;
    if (p.tau.size() != 1)
        throw Error(ErrorCode::ValidationError, "hypersurface form needs exactly one tau, got " + std::to_string(p.tau.size()));
    const Character& L = p.tau.front();
    MultiSeries s(setup.ctx, trunc);
    TIndex t0(ctx.num_t(), 0);
    for (const auto& beta : enumerate_effective(p, setup.generators, trunc.theta_bound)) {
        SupportProfile prof = support_profile(p, beta);
        const SectorId sector = coefficient_sector(beta);
        const RingSpec& ring = ctx.cohomology.ring(sector);
        const Q v = degree_pairing(p, beta, L);
        const Poly c1 = detail::divisor_poly(ring, L);
        ZLaurent coef;
        if (v >= 0) {
            SectorLaurent f = detail::ambient_factor_in(p, beta, ring, detail::RangeKind::Inclusive) *
                              detail::positive_range_product(ring, c1, v);
            coef = detail::times_class(f, ctx.cohomology.unit(sector));
        } else if (is_integer(v)) {
            SectorLaurent f = detail::ambient_factor_in(p, beta, ring, detail::RangeKind::Strict) *
                              detail::inverse_negative_range_product(ring, c1, v);
            const TwistedClassEntry* e = setup.provider.lookup(beta, prof);
            if (!e)
                throw Error(ErrorCode::MissingTwistedClass, "no [Y^ss_beta] class for degree (" +
                                                                format_qvector(beta.coords) + ") in stratum negative-integral");
            coef = detail::times_class(f, e->cls);
        } else {
            SectorLaurent f = detail::ambient_factor_in(p, beta, ring, detail::RangeKind::Inclusive) *
                              detail::inverse_negative_range_product(ring, c1, v);
            coef = detail::times_class(f, ctx.cohomology.unit(sector));
        }
        s.add(SeriesKey{beta, t0}, coef);
    }
    return apply_exp_prefactor(s, setup.prefactor);
}

/// All tau_b semi-positive: every effective degree pairs nonnegatively.
inline MultiSeries semipositive_I(const IFunctionSetup& setup, const TruncationSpec& trunc) {
    const auto& ctx = *setup.ctx;
    const auto& p = ctx.presentation;
    MultiSeries s(setup.ctx, trunc);
    TIndex t0(ctx.num_t(), 0);
    for (const auto& beta : enumerate_effective(p, setup.generators, trunc.theta_bound)) {
        const SectorId sector = coefficient_sector(beta);
        const RingSpec& ring = ctx.cohomology.ring(sector);
        SectorLaurent f = detail::ambient_factor_in(p, beta, ring, detail::RangeKind::Inclusive);
        for (std::size_t b = 0; b < p.tau.size(); ++b) {
            Q v = degree_pairing(p, beta, p.tau[b]);
            if (v < 0)
                throw Error(ErrorCode::SemipositivityViolated,
                            "tau_" + std::to_string(b + 1) + " pairs to " + format_q(v) + " with degree (" +
                                format_qvector(beta.coords) + "); L_tau is not a semi-positive line bundle");
            f *= detail::positive_range_product(ring, detail::divisor_poly(ring, p.tau[b]), v);
        }
        s.add(SeriesKey{beta, t0}, detail::times_class(f, ctx.cohomology.unit(sector)));
    }
    return apply_exp_prefactor(s, setup.prefactor);
}

}  // namespace toricqc
