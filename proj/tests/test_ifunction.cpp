#include <gtest/gtest.h>

#include "support.hpp"

using namespace tq_test;

namespace {

TruncationSpec bound(long b) { return TruncationSpec{Q(b), 0}; }

}  // namespace

TEST(IFunction, CubicHypersurfaceMatchesOracle) {
    const auto& cfg = cubic_config();
    MultiSeries I = hypersurface_I(cfg.setup, bound(6));
    std::size_t seen = 0;
    for (long k = 0; 2 * k <= 6; ++k)
        for (long l = 0; l + 2 * k <= 6; ++l) {
            SCOPED_TRACE("q^" + std::to_string(l) + " x^" + std::to_string(k));
            ZLaurent expected = to_zlaurent(cubic_oracle(l, k));
            EXPECT_EQ(I.coefficient(key_lk(cfg.ctx(), l, k)), expected)
                << render_laurent(cfg.ctx(), I.coefficient(key_lk(cfg.ctx(), l, k))) << " vs "
                << render_laurent(cfg.ctx(), expected);
            if (!expected.is_zero()) ++seen;
        }
    EXPECT_EQ(I.coeffs().size(), seen);
}

TEST(IFunction, BigAndHypersurfaceFormsAgree) {
    const auto& cfg = cubic_config();
    EXPECT_EQ(big_I(cfg.setup, bound(6)), hypersurface_I(cfg.setup, bound(6)));
}

TEST(IFunction, TwistedDegreeHalfZero) {
    const auto& cfg = cubic_config();
    // (p + z/2)^{-3} (2p + z)^{-1} (3p + 3z/2)(3p + z/2) with p -> 0: 8/z^3 * 1/z * 3z^2/4
    ZLaurent c = i_coefficient(cfg.setup, Degree{{Q(1, 2), Q(0)}});
    EXPECT_EQ(c, ZLaurent(-2, Q(6) * cfg.ctx().cohomology.unit(half_sector())));
    EXPECT_EQ(coefficient_sector(Degree{{Q(1, 2), Q(0)}}), half_sector());
}

TEST(IFunction, AmbientAndCiFactorsSeparately) {
    const auto& cfg = cubic_config();
    const auto& ring = cfg.ctx().cohomology.ring(half_sector());
    Degree b{{Q(1, 2), Q(0)}};
    EXPECT_EQ(ambient_factor(cfg.ctx().presentation, b, ring),
              ZLaurent(-4, Q(8) * cfg.ctx().cohomology.unit(half_sector())));
    EXPECT_EQ(ci_factor(cfg.ctx().presentation, b, ring),
              ZLaurent(2, Q(3, 4) * cfg.ctx().cohomology.unit(half_sector())));
}

TEST(IFunction, NegativeIntegralStratumUsesTable) {
    const auto& cfg = cubic_config();
    // x^2: tau pairs to -1; the class is the table entry (1/3) p^2
    CRClass cls = twisted_class(cfg.ctx(), Degree{{Q(-1), Q(2)}}, cfg.setup.provider);
    EXPECT_EQ(cls, cfg.ctx().cohomology.make_class(SectorId::identity(2), parse_polynomial("1/3*p^2", {"p", "h"})));
    IFunctionSetup bare = cfg.setup;
    bare.provider.table.clear();
    try {
        i_coefficient(bare, Degree{{Q(-1), Q(2)}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingTwistedClass);
    }
    EXPECT_NO_THROW(i_coefficient(bare, Degree{{Q(-1, 2), Q(1)}}));
}

TEST(IFunction, TableEntryInWrongSectorIsRejected) {
    const auto& cfg = cubic_config();
    IFunctionSetup s = cfg.setup;
    s.provider.table = {TwistedClassEntry{Degree{{Q(-1), Q(2)}}, std::nullopt, cfg.ctx().cohomology.unit(half_sector()), "test"}};
    try {
        i_coefficient(s, Degree{{Q(-1), Q(2)}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    }
}

TEST(IFunction, NotEffective) {
    const auto& cfg = cubic_config();
    try {
        i_coefficient(cfg.setup, Degree{{Q(-1), Q(0)}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotEffective);
    }
}

TEST(IFunction, CubicIsNotSemipositive) {
    const auto& cfg = cubic_config();
    try {
        semipositive_I(cfg.setup, bound(3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SemipositivityViolated);
    }
}

TEST(IFunction, QuinticMatchesDenseOracle) {
    const auto& cfg = quintic_config();
    MultiSeries I = semipositive_I(cfg.setup, bound(3));
    EXPECT_EQ(I, big_I(cfg.setup, bound(3)));
    const SectorId e = SectorId::identity(1);
    for (long d = 0; d <= 3; ++d) {
        SCOPED_TRACE("q^" + std::to_string(d));
        Dense4 dense = quintic_oracle(d);
        // degree-zero homogeneity: the H^j coefficient sits at z^{-j}
        ZLaurent expected;
        for (int j = 0; j < 4; ++j)
            expected.add(-j, cfg.ctx().cohomology.make_class(e, Poly::variable(1, 0).pow(j) * dense[j]));
        EXPECT_EQ(I.coefficient(SeriesKey{Degree{{Q(d)}}, {}}), expected);
        EXPECT_EQ(dense[0], Q(quintic_unit_closed_form(d)));
    }
    EXPECT_EQ(quintic_unit_closed_form(1), 120);
    EXPECT_EQ(quintic_unit_closed_form(2), 113400);
    EXPECT_EQ(quintic_unit_closed_form(3), 168168000);
}

TEST(IFunction, PrefactorOnlyShiftsTDegrees) {
    auto ctx = std::make_shared<SeriesContext>(quintic_config().ctx());
    ctx->t_names = {"t"};
    IFunctionSetup s = quintic_config().setup;
    s.ctx = ctx;
    s.prefactor.entries = {{0, Poly::variable(1, 0)}};
    TruncationSpec tr{Q(2), 1};
    MultiSeries I = big_I(s, tr);
    // t^0 part is the plain I-function
    for (long d = 0; d <= 2; ++d) {
        Dense4 dense = quintic_oracle(d);
        EXPECT_EQ(I.coefficient(SeriesKey{Degree{{Q(d)}}, {0}}).coefficient(0),
                  dense[0] * ctx->cohomology.unit());
    }
    // t^1 at q^0: H/z
    EXPECT_EQ(I.coefficient(SeriesKey{Degree{{Q(0)}}, {1}}),
              ZLaurent(-1, ctx->cohomology.make_class(SectorId::identity(1), Poly::variable(1, 0))));
}
