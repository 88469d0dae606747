#include <gtest/gtest.h>

#include <fstream>

#include "support.hpp"

using namespace tq_test;

namespace {

struct CubicFrame {
    MultiSeries I;
    JFrame frame;
};

const CubicFrame& cubic_frame() {
    static const CubicFrame cf = [] {
        const auto& cfg = cubic_config();
        MultiSeries I = config_ifunction(cfg, cfg.truncation);
        return CubicFrame{I, normalize_frame(I, config_frame_options(cfg, cfg.truncation))};
    }();
    return cf;
}

CRClass untw(const std::string& text) {
    return cubic_config().ctx().cohomology.make_class(SectorId::identity(2), parse_polynomial(text, {"p", "h"}));
}
CRClass tw(const Q& c) { return c * cubic_config().ctx().cohomology.unit(half_sector()); }

ClassSeries expected_xx() {
    const auto& ctx = cubic_config().ctx();
    return {{key_lk(ctx, 0, 0), untw("1/3*p^2")}, {key_lk(ctx, 1, 0), tw(Q(-3, 2))}};
}

Config cubic_with_scaled_integrals(const Q& lambda) {
    std::ifstream in(data_path("p1112_cubic.json"));
    nlohmann::json doc = nlohmann::json::parse(in);
    for (auto& sec : doc["cohomology"]["sectors"])
        for (auto& [m, v] : sec["integrals"].items()) v = format_q(parse_q(v.get<std::string>()) * lambda);
    return parse_config(doc, "scaled");
}

}  // namespace

TEST(Mirror, CubicMirrorMapAgainstOracle) {
    const auto& ctx = cubic_config().ctx();
    MirrorMap m = mirror_map(cubic_frame().I);
    for (long k = 0; 2 * k <= 6; ++k)
        for (long l = 0; l + 2 * k <= 6; ++l) {
            ZLaurent expected = to_zlaurent(cubic_oracle(l, k)).shifted(1).filtered(true);
            if (l == 0 && k == 0) expected = ZLaurent();
            EXPECT_EQ(m.piece(key_lk(ctx, l, k)), expected) << "q^" << l << " x^" << k;
        }
    EXPECT_EQ(m.piece(key_lk(ctx, 0, 1)), ZLaurent(0, tw(1)));
    EXPECT_EQ(m.piece(key_lk(ctx, 1, 1)), ZLaurent(0, untw("1")));
    EXPECT_EQ(m.piece(key_lk(ctx, 0, 3)), ZLaurent(0, tw(Q(1, 24))));
}

TEST(Mirror, CoewcDetectsTamperedMirrorMap) {
    const auto& I = cubic_frame().I;
    MirrorMap m = mirror_map(I);
    auto rep = coewc_plus_check(I, m);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.checked, 16u);
    MirrorMap bad = m;
    bad.mu.add(key_lk(I.ctx(), 1, 1), ZLaurent(0, Q(-1) * untw("1")));
    auto rep2 = coewc_plus_check(I, bad);
    ASSERT_EQ(rep2.violations.size(), 1u);
    EXPECT_EQ(rep2.violations[0], key_lk(I.ctx(), 1, 1));
}

TEST(Mirror, NotUnital) {
    MultiSeries I = scale(cubic_frame().I, Q(2));
    try {
        mirror_map(I);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotUnital);
    }
}

TEST(Mirror, FrameWithStringFlow) {
    const auto& f = cubic_frame().frame;
    const auto& ctx = cubic_config().ctx();
    EXPECT_EQ(f.residual_order, 3);
    EXPECT_FALSE(f.flow_auto);
    ClassSeries tau{{key_lk(ctx, 0, 1), tw(1)}};
    EXPECT_EQ(f.tau, tau);
    // z e^{-qx/z} I = z + x 1_{1/2} + O(x^3) + O(1/z)
    for (const auto& [k, lau] : f.normalized.coeffs()) {
        if (k == key_lk(ctx, 0, 0)) {
            EXPECT_EQ(lau.filtered(true), ZLaurent(0, untw("1")));
            continue;
        }
        if (k == key_lk(ctx, 0, 1)) {
            EXPECT_EQ(lau.coefficient(-1), tw(1));
            EXPECT_TRUE(lau.filtered(true).is_zero());
            continue;
        }
        auto a = ctx.chart.coordinates(k.degree);
        if ((*a)[1] < 3) {
            EXPECT_TRUE(lau.shifted(1).filtered(true).is_zero()) << format_key(ctx, k);
        }
    }
    // the flow re-applied recovers I
    EXPECT_EQ(exp_divisor_flow(f.normalized, f.flow, +1), cubic_frame().I);
}

TEST(Mirror, AutoFlowMatchesStringFlow) {
    const auto& cfg = cubic_config();
    const auto& I = cubic_frame().I;
    JFrame f = normalize_frame(I, FrameOptions{std::nullopt, {"x"}});
    EXPECT_TRUE(f.flow_auto);
    EXPECT_EQ(f.flow, scalar_series(cfg.context, cfg.truncation, parse_polynomial("q*x", {"q", "x"})));
    EXPECT_EQ(f.residual_order, 3);
}

TEST(Mirror, ZeroFlowLeavesPositivePowers) {
    const auto& cfg = cubic_config();
    try {
        normalize_frame(cubic_frame().I, FrameOptions{MultiSeries(cfg.context, cfg.truncation), {"x"}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PositivePowersRemain);
        EXPECT_NE(std::string(e.what()).find("q*x"), std::string::npos);
    }
}

TEST(Mirror, TwistedUnitSquareAndPairing) {
    const auto& f = cubic_frame().frame;
    ClassSeries xx = quantum_product(f, "x", "x", {{"x", Q(0)}});
    EXPECT_EQ(xx, expected_xx());
    auto pairing = pair_with(cubic_config().ctx().cohomology, xx, tw(1));
    std::map<SeriesKey, Q> expected{{key_lk(cubic_config().ctx(), 1, 0), Q(-3, 4)}};
    EXPECT_EQ(pairing, expected);
    // r = q/2: -3/4 q = -3/2 r
    EXPECT_EQ(pairing.begin()->second * 2, Q(-3, 2));
}

TEST(Mirror, ProductIsSymmetric) {
    const auto& f = cubic_frame().frame;
    EXPECT_EQ(quantum_product(f, "1", "x"), quantum_product(f, "x", "1"));
    EXPECT_EQ(quantum_product(f, "p", "x", {}, true), quantum_product(f, "x", "p", {}, true));
    EXPECT_EQ(quantum_product(f, "1", "x"), (ClassSeries{{key_lk(cubic_config().ctx(), 0, 0), tw(1)}}));
}

TEST(Mirror, ProductRuleRouteAgrees) {
    const auto& cf = cubic_frame();
    const auto& ctx = cubic_config().ctx();
    MultiSeries expanded = product_rule_expansion(cf.I, cf.frame.flow, "x", "x");
    MultiSeries direct = shift_z(differentiate(differentiate(cf.frame.normalized, "x"), "x"), 2);
    // two x-derivatives cost theta-degree 4 of the bound 6
    auto complete = [&](const MultiSeries& s) {
        MultiSeries r(s.context(), TruncationSpec{Q(2), 0});
        for (const auto& [k, c] : s.coeffs()) r.add(k, c);
        return r;
    };
    EXPECT_EQ(complete(expanded), complete(direct));
    EXPECT_FALSE(complete(direct).is_zero());
    EXPECT_EQ(evaluate_z0(cf.frame, expanded, Q(2), 0), expected_xx());
    EXPECT_EQ(ctx.chart.names().size(), 2u);
}

TEST(Mirror, PairingScaleInvariance) {
    Config scaled = cubic_with_scaled_integrals(Q(5));
    MultiSeries I = config_ifunction(scaled, scaled.truncation);
    JFrame f = normalize_frame(I, config_frame_options(scaled, scaled.truncation));
    ClassSeries xx = quantum_product(f, "x", "x", {{"x", Q(0)}});
    ASSERT_EQ(xx.size(), 2u);
    EXPECT_EQ(xx, expected_xx());
    auto pairing = pair_with(scaled.ctx().cohomology, xx, scaled.ctx().cohomology.unit(half_sector()));
    EXPECT_EQ(pairing.at(key_lk(scaled.ctx(), 1, 0)), Q(-15, 4));
}

TEST(Mirror, EvaluationOnlyAtZero) {
    const auto& f = cubic_frame().frame;
    try {
        quantum_product(f, "x", "x", {{"x", Q(1)}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedEvaluation);
    }
    try {
        quantum_product(f, "x", "y");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownDirection);
    }
    try {
        quantum_product(f, "p", "x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownDirection);
    }
}

TEST(Mirror, ResidualTooLowForTwoDerivatives) {
    const auto& cfg = cubic_config();
    TruncationSpec small{Q(3), 0};
    MultiSeries I = config_ifunction(cfg, small);
    JFrame f = normalize_frame(I, config_frame_options(cfg, small));
    EXPECT_EQ(f.residual_order, 2);
    EXPECT_NO_THROW(quantum_product(f, "1", "x"));
    try {
        quantum_product(f, "x", "x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FrameResidualTooLow);
    }
}

TEST(Mirror, TableUnitRow) {
    const auto& cfg = cubic_config();
    ProductTable t = product_table(cubic_frame().frame, cfg.table_basis, false);
    ASSERT_EQ(t.labels, (std::vector<std::string>{"1", "p", "p^2", "1_{1/2}"}));
    const SeriesKey zero = key_lk(cfg.ctx(), 0, 0);
    std::vector<CRClass> phi{untw("1"), untw("p"), untw("p^2"), tw(1)};
    for (std::size_t j = 0; j < phi.size(); ++j) {
        EXPECT_EQ(t.cells[0][j].value, (ClassSeries{{zero, phi[j]}})) << t.labels[j];
        EXPECT_EQ(t.cells[j][0].value, t.cells[0][j].value);
        EXPECT_NE(t.cells[0][j].status, CellStatus::Failed);
    }
    EXPECT_EQ(t.cells[3][3].status, CellStatus::Computed);
    EXPECT_EQ(t.cells[3][3].value, expected_xx());
    EXPECT_EQ(t.cells[1][1].status, CellStatus::NotParameterized);
    EXPECT_EQ(t.cells[2][2].status, CellStatus::NotParameterized);
}

TEST(Mirror, ExperimentalDivisorCells) {
    const auto& cfg = cubic_config();
    ProductTable t = product_table(cubic_frame().frame, cfg.table_basis, true);
    const auto& ctx = cfg.ctx();
    // p o p = p^2 + 12 r^2 + 3 r 1_{1/2} and p o 1_{1/2} = r p with r = q/2
    ClassSeries pp{{key_lk(ctx, 0, 0), untw("p^2")}, {key_lk(ctx, 1, 0), tw(Q(3, 2))}, {key_lk(ctx, 2, 0), untw("3")}};
    EXPECT_EQ(t.cells[1][1].status, CellStatus::Experimental);
    EXPECT_EQ(t.cells[1][1].value, pp);
    EXPECT_EQ(t.cells[1][3].value, (ClassSeries{{key_lk(ctx, 1, 0), untw("1/2*p")}}));
    EXPECT_EQ(t.cells[2][2].status, CellStatus::NotParameterized);
}
