#include <gtest/gtest.h>

#include "properties.hpp"

using namespace tq_test;

namespace {

void expect_property(const PropertyResult& r) {
    EXPECT_GE(r.cases, kPropertyCases) << r.name;
    EXPECT_TRUE(r.ok()) << r.name << ": " << r.failures << " failures, first: " << r.first_failure;
}

}  // namespace

TEST(Property, ThetaPositivityOnEffectiveDegrees) { expect_property(property_theta_positivity(101)); }
TEST(Property, TruncationSplitIsIdentity) { expect_property(property_truncation_split(202)); }
TEST(Property, SectorFromDegreeIsHomomorphism) { expect_property(property_sector_homomorphism(303)); }
TEST(Property, DualBasisDualityAndInvolutivity) { expect_property(property_dual_basis(404)); }
TEST(Property, InvertLinearFactorIsExact) { expect_property(property_invert_linear_factor(505)); }
TEST(Property, CoewcPassesOnGeneratedI) { expect_property(property_coewc(606)); }
TEST(Property, ExpPrefactorIsMultiplicative) { expect_property(property_prefactor_multiplicative(707)); }

// A second seed per suite guards against a lucky draw.
TEST(Property, ThetaPositivitySecondSeed) { expect_property(property_theta_positivity(9001)); }
TEST(Property, CoewcSecondSeed) { expect_property(property_coewc(9006)); }
