#include <gtest/gtest.h>

#include <set>

#include "properties.hpp"

using namespace tq_test;

namespace {

GitPresentation cubic_presentation() {
    return GitPresentation(2, {{{1, 0}}, {{1, 0}}, {{1, 0}}, {{2, 1}}, {{0, 1}}}, {{2, 3}}, {{{3, 1}}}, "cubic");
}

long abs_det(const std::vector<Character>& rows) {
    QMatrix m;
    for (const auto& r : rows) m.push_back(r.as_q());
    const std::size_t n = m.size();
    Q det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            Q f = m[r][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return std::abs(to_long_exact(det));
}

/// {g in (Q/Z)^k : rho_i . g in Z for i in s}, by exhaustive search over (1/N)Z^k.
std::set<SectorId> brute_stabilizer(const GitPresentation& p, const IndexSet& s) {
    std::vector<Character> rows;
    for (auto i : s) rows.push_back(p.rho[i]);
    long n = abs_det(rows);
    std::set<SectorId> out;
    std::vector<long> x(p.rank, 0);
    for (;;) {
        bool ok = true;
        for (auto i : s) {
            Q v = 0;
            for (std::size_t j = 0; j < p.rank; ++j) v += make_q(p.rho[i].coords[j] * x[j], n);
            ok = ok && is_integer(v);
        }
        if (ok) {
            QVector g;
            for (auto c : x) g.push_back(make_q(c, n));
            out.insert(SectorId::from_exponents(g));
        }
        std::size_t j = 0;
        while (j < p.rank && ++x[j] == n) x[j++] = 0;
        if (j == p.rank) break;
    }
    return out;
}

}  // namespace

TEST(Presentation, CubicSupportsAndExponent) {
    auto p = cubic_presentation();
    auto rep = validate_presentation(p);
    std::vector<IndexSet> supports;
    for (const auto& s : rep.supports) supports.push_back(s.support);
    EXPECT_EQ(supports, (std::vector<IndexSet>{{0, 4}, {1, 4}, {2, 4}, {3, 4}}));
    EXPECT_EQ(rep.exponent, 2);
    EXPECT_EQ(rep.supports[3].order, 2);
    EXPECT_EQ(rep.supports[0].order, 1);
}

TEST(Presentation, CubicSectors) {
    auto sectors = enumerate_sectors(cubic_presentation());
    ASSERT_EQ(sectors.size(), 2u);
    EXPECT_TRUE(sectors[0].is_identity());
    EXPECT_EQ(sectors[1], half_sector());
    EXPECT_EQ(half_sector().inverse(), half_sector());
}

TEST(Presentation, CubicEffectiveDegreesMatchLatticeCount) {
    auto p = cubic_presentation();
    std::vector<Degree> gens{Degree{{Q(1, 2), Q(0)}}, Degree{{Q(-1, 2), Q(1)}}};
    auto eff = enumerate_effective(p, gens, Q(6));
    // q^l x^k has theta-degree l + 2k
    std::set<Degree> expected;
    for (long l = 0; l <= 6; ++l)
        for (long k = 0; l + 2 * k <= 6; ++k) expected.insert(Q(l) * gens[0] + Q(k) * gens[1]);
    EXPECT_EQ(eff.size(), 16u);
    EXPECT_EQ(std::set<Degree>(eff.begin(), eff.end()), expected);
    for (std::size_t i = 1; i < eff.size(); ++i) EXPECT_LE(theta_pairing(p, eff[i - 1]), theta_pairing(p, eff[i]));
}

TEST(Presentation, ThetaDegreesOfChartGenerators) {
    auto p = cubic_presentation();
    EXPECT_EQ(theta_pairing(p, Degree{{Q(1, 2), Q(0)}}), 1);
    EXPECT_EQ(theta_pairing(p, Degree{{Q(-1, 2), Q(1)}}), 2);
}

TEST(Presentation, GeneratorWithNonpositiveThetaIsRejected) {
    auto p = cubic_presentation();
    try {
        enumerate_effective(p, {Degree{{Q(-1), Q(0)}}}, Q(3));
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GeneratorNotThetaPositive);
        EXPECT_TRUE(e.is_validation());
    }
}

TEST(Presentation, SupportProfileOfTwistedDegree) {
    auto p = cubic_presentation();
    // x = (-1/2, 1): rho_1..3 pair to -1/2, rho_4 to 0, rho_5 to 1, tau to -1/2
    auto prof = support_profile(p, Degree{{Q(-1, 2), Q(1)}});
    EXPECT_EQ(prof.nonneg_integral, (IndexSet{3, 4}));
    EXPECT_TRUE(prof.zss_nonempty);
    ASSERT_EQ(prof.tau_classification.size(), 1u);
    EXPECT_EQ(prof.tau_classification[0], TauClass::NegativeFractional);
    EXPECT_EQ(coefficient_sector(Degree{{Q(-1, 2), Q(1)}}), half_sector());
}

TEST(Presentation, TauClassification) {
    EXPECT_EQ(classify_pairing(Q(0)), TauClass::NonnegIntegral);
    EXPECT_EQ(classify_pairing(Q(-2)), TauClass::NegativeIntegral);
    EXPECT_EQ(classify_pairing(Q(-1, 3)), TauClass::NegativeFractional);
    EXPECT_EQ(classify_pairing(Q(5, 2)), TauClass::NonintegralNonneg);
}

TEST(Presentation, EmptySemistableLocus) {
    GitPresentation p(1, {{{1}}, {{1}}}, {{-1}});
    try {
        validate_presentation(p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptySemistableLocus);
    }
}

TEST(Presentation, InfiniteStabilizer) {
    GitPresentation p(2, {{{1, 0}}, {{0, 1}}, {{1, 1}}}, {{1, 1}});
    try {
        validate_presentation(p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InfiniteStabilizer);
    }
}

TEST(Presentation, RankDeficient) {
    GitPresentation p(2, {{{1, 0}}, {{2, 0}}}, {{1, 0}});
    try {
        validate_presentation(p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
    }
}

TEST(Presentation, DimensionMismatch) {
    EXPECT_THROW(GitPresentation(2, {{{1, 0}}, {{1}}}, {{1, 0}}), Error);
}

TEST(Presentation, WeightedProjectiveSpaceStabilizers) {
    // P(1,1,1,3): the support {4} alone carries mu_3
    GitPresentation p(1, {{{1}}, {{1}}, {{1}}, {{3}}}, {{1}});
    auto sectors = enumerate_sectors(p);
    ASSERT_EQ(sectors.size(), 3u);
    EXPECT_EQ(validate_presentation(p).exponent, 3);
}

TEST(Presentation, StabilizersMatchBruteForceOnRandomPresentations) {
    std::mt19937 rng(17);
    for (int c = 0; c < 60; ++c) {
        GitPresentation p = draw_presentation(rng);
        for (const auto& s : semistable_supports(p)) {
            auto info = stabilizer(p, s);
            EXPECT_EQ(std::set<SectorId>(info.elements.begin(), info.elements.end()), brute_stabilizer(p, s));
        }
    }
}

TEST(Presentation, NovikovChartFormatting) {
    NovikovChart chart({"q", "x"}, {Degree{{Q(1, 2), Q(0)}}, Degree{{Q(-1, 2), Q(1)}}});
    EXPECT_EQ(chart.format(chart.degree_of({Q(2), Q(1)})), "q^2*x");
    EXPECT_EQ(chart.format(Degree::zero(2)), "1");
    EXPECT_EQ(chart.format(Degree{{Q(1, 3), Q(0)}}), "q^[1/3,0]");
    auto a = chart.coordinates(Degree{{Q(0), Q(1)}});
    ASSERT_TRUE(a);
    EXPECT_EQ(*a, (QVector{Q(1), Q(1)}));
}
