#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fmech/axioms.hpp"
#include "fmech/mechanisms.hpp"
#include "test_support.hpp"

using namespace fmech;

namespace {

AgentProfile euclid(std::vector<Point> pts) { return AgentProfile(std::move(pts), Metric::Euclidean); }
AgentProfile manhattan(std::vector<Point> pts) { return AgentProfile(std::move(pts), Metric::Manhattan); }

Solution single(const Point& at, const AgentProfile& p) {
    Solution s{{at}, {}};
    s.assignment = assign_nearest(s.locations, p);
    return s;
}

const std::vector<Point> kRectangle{{0, 0}, {0, 2}, {12, 0}, {12, 2}};

SearchBudget coarse(double res, double pad = 1.0) {
    SearchBudget b;
    b.grid_resolution = res;
    b.bounding_box_pad = pad;
    return b;
}

} // namespace

TEST(Anonymity, SerialDictatorshipIsNotAnonymous) {
    const auto p = euclid({{0, 0}, {5, 5}});
    const auto c = check_anonymity(MechanismDescriptor::serial_dictatorship(), p, FacilitySpec{});
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->kind, CertificateKind::AnonymityViolation);
    EXPECT_EQ(std::get<Permutation>(c->witness), (Permutation{1, 0}));
    // Largest coordinate gap between (0,0) and (5,5).
    EXPECT_NEAR(c->improvement, 5.0, 1e-12);
    EXPECT_TRUE(verify_certificate(*c));
}

TEST(Anonymity, PercentileMechanismsAreAnonymous) {
    std::mt19937_64 rng(51);
    for (int t = 0; t < 40; ++t) {
        const auto p = euclid(fmtest::random_points(rng, 1 + t % 6));
        EXPECT_FALSE(check_anonymity(MechanismDescriptor::median(), p, FacilitySpec{}).has_value());
        EXPECT_FALSE(check_anonymity(MechanismDescriptor::percentile_multi_d({{0.1, 0.7}, {1, 0}}), p,
                                     FacilitySpec{2, std::nullopt})
                         .has_value());
    }
    // Larger profiles use the sampled path.
    const auto big = euclid(fmtest::random_points(rng, 10));
    EXPECT_FALSE(check_anonymity(MechanismDescriptor::median(), big, FacilitySpec{}, 200, 3).has_value());
    EXPECT_TRUE(check_anonymity(MechanismDescriptor::serial_dictatorship(), big, FacilitySpec{}, 200, 3).has_value());
}

TEST(Anonymity, SingleAgentNeverViolates) {
    const auto p = euclid({{4, 4}});
    EXPECT_FALSE(check_anonymity(MechanismDescriptor::serial_dictatorship(), p, FacilitySpec{}).has_value());
    EXPECT_FALSE(check_anonymity(MechanismDescriptor::median(), p, FacilitySpec{}).has_value());
}

TEST(Pareto, CoordinateMaxDominatedOnThreeAgents) {
    const auto p = manhattan({{0, 2}, {1, 0}, {2, 1}});
    const auto c = check_pareto(p, single({2, 2}, p));
    ASSERT_TRUE(c.has_value());
    EXPECT_TRUE(verify_certificate(*c));
    // The witness must be no worse for anyone; (1,1) itself dominates.
    const std::vector<Point> at11{{1, 1}};
    EXPECT_TRUE(detail::domination_margin(p, detail::served_distances(p, single({2, 2}, p)), at11).has_value());
}

TEST(Pareto, CoordinateMinDominatedOnFourAgents) {
    const auto p = manhattan({{0, 2}, {1, 0}, {2, 1}, {3, 0}});
    const auto c = check_pareto(p, single({0, 0}, p));
    ASSERT_TRUE(c.has_value());
    EXPECT_TRUE(verify_certificate(*c));
    const std::vector<Point> at11{{1, 1}};
    const auto margin = detail::domination_margin(p, detail::served_distances(p, single({0, 0}, p)), at11);
    ASSERT_TRUE(margin.has_value());
    EXPECT_GT(*margin, 0.0);
}

TEST(Pareto, FacilityOnSoleAgentIsOptimal) {
    const auto p = euclid({{3, 3}});
    EXPECT_FALSE(check_pareto(p, single({3, 3}, p)).has_value());
    const auto q = manhattan({{3, 3}});
    EXPECT_FALSE(check_pareto(q, single({3, 3}, q)).has_value());
}

TEST(Pareto, FacilityOutsideHullIsDominated) {
    const auto p = euclid({{0, 0}, {1, 0}});
    const auto c = check_pareto(p, single({0.5, 3}, p));
    ASSERT_TRUE(c.has_value());
    EXPECT_TRUE(verify_certificate(*c));
}

TEST(Pareto, TwoFacilitiesOnSameAgentAreDominated) {
    const auto p = euclid({{0, 0}, {4, 0}});
    Solution s{{{0, 0}, {0, 0}}, {0, 0}};
    const auto c = check_pareto(p, s);
    ASSERT_TRUE(c.has_value());
    EXPECT_TRUE(verify_certificate(*c));
}

TEST(Pareto, MedianOfOddProfilesNotDominatedOnGrid) {
    std::mt19937_64 rng(52);
    for (int t = 0; t < 60; ++t) {
        const auto p = euclid(fmtest::lattice_points(rng, 3 + 2 * (t % 2), 0, 4));
        const auto s = run_mechanism(MechanismDescriptor::of(MechanismKind::GeometricMedian), p, FacilitySpec{});
        EXPECT_FALSE(check_pareto(p, s, coarse(0.5)).has_value());
    }
}

TEST(StrategyProofness, GeometricMedianManipulable) {
    const auto p = euclid(kRectangle);
    const auto c = check_strategy_proofness(MechanismDescriptor::of(MechanismKind::GeometricMedian), p, FacilitySpec{},
                                            coarse(1.0, 1.0), std::size_t{2});
    ASSERT_TRUE(c.has_value());
    const auto& m = std::get<Misreport>(c->witness);
    EXPECT_EQ(m.agent, 2u);
    EXPECT_GE(c->improvement, 4.0);
    EXPECT_LE(c->improvement, std::sqrt(37.0) + 1e-9);
    EXPECT_TRUE(verify_certificate(*c));
    // The reported example: (12,2) gains sqrt(37) - 2.
    Certificate direct{CertificateKind::Manipulation, p, FacilitySpec{}, MechanismDescriptor::of(MechanismKind::GeometricMedian),
                       std::nullopt, Misreport{2, Point{12, 2}}, std::sqrt(37.0) - 2.0 - 1e-6};
    EXPECT_TRUE(verify_certificate(direct));
}

TEST(StrategyProofness, OneCentreManipulable) {
    const auto p = euclid({{0, 0}, {0, 0}, {0, 1}});
    const auto c = check_strategy_proofness(MechanismDescriptor::of(MechanismKind::OneCentre), p, FacilitySpec{},
                                            SearchBudget{}, std::size_t{2});
    ASSERT_TRUE(c.has_value());
    EXPECT_NEAR(c->improvement, 0.5, 1e-9);
    EXPECT_TRUE(verify_certificate(*c));
    Certificate direct{CertificateKind::Manipulation, p, FacilitySpec{}, MechanismDescriptor::of(MechanismKind::OneCentre),
                       std::nullopt, Misreport{2, Point{0, 2}}, 0.5};
    EXPECT_TRUE(verify_certificate(direct));
}

TEST(StrategyProofness, MedianOddProfilesHaveNoManipulation) {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 40; ++t) {
        const auto p = euclid(fmtest::random_points(rng, 3 + 2 * (t % 2), 2, 0, 2));
        EXPECT_FALSE(check_strategy_proofness(MechanismDescriptor::median(), p, FacilitySpec{}, coarse(0.25)).has_value());
    }
}

TEST(StrategyProofness, LexicographicFirstAgent) {
    const auto lex = MechanismDescriptor::of(MechanismKind::LexicographicFirstAgent);
    const auto c = check_strategy_proofness(lex, euclid({{0, 0}, {1, 5}}), FacilitySpec{}, coarse(0.5));
    ASSERT_TRUE(c.has_value());
    EXPECT_TRUE(verify_certificate(*c));
    // On a horizontal line it is the leftmost-agent rule, which no one can move closer.
    EXPECT_FALSE(check_strategy_proofness(lex, euclid({{0, 0}, {1, 0}}), FacilitySpec{}, coarse(0.1)).has_value());
}

TEST(StrategyProofness, SerialDictatorshipNoManipulation) {
    std::mt19937_64 rng(54);
    for (int t = 0; t < 30; ++t) {
        const auto p = euclid(fmtest::lattice_points(rng, 2 + t % 3, 0, 3));
        EXPECT_FALSE(check_strategy_proofness(MechanismDescriptor::serial_dictatorship(), p,
                                              FacilitySpec{1 + std::size_t(t % 2), std::nullopt}, coarse(0.5))
                         .has_value());
    }
}

TEST(SearchBudget, GridCapIsResourceError) {
    SearchBudget b;
    b.grid_resolution = 1e-4;
    b.max_grid_points = 1000;
    EXPECT_THROW(check_strategy_proofness(MechanismDescriptor::median(), euclid({{0, 0}, {1, 1}, {2, 0}}), FacilitySpec{}, b),
                 ResourceError);
    b.grid_resolution = 0.0;
    EXPECT_THROW(check_pareto(euclid({{0, 0}, {1, 1}}), single({0, 0}, euclid({{0, 0}, {1, 1}})), b), InputError);
}

TEST(VerifyCertificate, RejectsZeroedAndFabricated) {
    const auto p = euclid(kRectangle);
    auto c = *check_strategy_proofness(MechanismDescriptor::of(MechanismKind::GeometricMedian), p, FacilitySpec{},
                                       coarse(1.0, 1.0), std::size_t{2});
    c.improvement = 0.0;
    EXPECT_FALSE(verify_certificate(c));

    Certificate fake{CertificateKind::AnonymityViolation, euclid({{0, 2}, {1, 0}, {2, 1}}), FacilitySpec{},
                     MechanismDescriptor::median(), std::nullopt, Permutation{2, 1, 0}, 1.0};
    EXPECT_FALSE(verify_certificate(fake));

    // Overstated gain fails replay.
    Certificate inflated{CertificateKind::Manipulation, euclid({{0, 0}, {0, 0}, {0, 1}}), FacilitySpec{},
                         MechanismDescriptor::of(MechanismKind::OneCentre), std::nullopt, Misreport{2, Point{0, 2}}, 0.6};
    EXPECT_FALSE(verify_certificate(inflated));
}

TEST(VerifyCertificate, MalformedThrows) {
    const auto p = euclid({{0, 0}, {1, 1}});
    Certificate no_mech{CertificateKind::Manipulation, p, FacilitySpec{}, std::nullopt, std::nullopt, Misreport{0, Point{1, 1}}, 1.0};
    EXPECT_THROW(verify_certificate(no_mech), InputError);
    Certificate wrong_witness{CertificateKind::AnonymityViolation, p, FacilitySpec{}, MechanismDescriptor::median(),
                              std::nullopt, Misreport{0, Point{1, 1}}, 1.0};
    EXPECT_THROW(verify_certificate(wrong_witness), InputError);
    Certificate bad_agent{CertificateKind::Manipulation, p, FacilitySpec{}, MechanismDescriptor::median(), std::nullopt,
                          Misreport{7, Point{1, 1}}, 1.0};
    EXPECT_THROW(verify_certificate(bad_agent), InputError);
    Certificate bad_perm{CertificateKind::AnonymityViolation, p, FacilitySpec{}, MechanismDescriptor::median(),
                         std::nullopt, Permutation{0, 0}, 1.0};
    EXPECT_THROW(verify_certificate(bad_perm), InputError);
    Certificate no_original{CertificateKind::ParetoDomination, p, FacilitySpec{}, std::nullopt, std::nullopt,
                            Solution{{{0, 0}}, {0, 0}}, 1.0};
    EXPECT_THROW(verify_certificate(no_original), InputError);
}

TEST(VerifyCertificate, EveryFoundCertificateReplays) {
    std::mt19937_64 rng(55);
    const std::vector<MechanismDescriptor> mechs{
        MechanismDescriptor::serial_dictatorship(),
        MechanismDescriptor::of(MechanismKind::OneCentre),
        MechanismDescriptor::of(MechanismKind::GeometricMedian),
        MechanismDescriptor::of(MechanismKind::LexicographicFirstAgent),
        MechanismDescriptor::of(MechanismKind::CoordinateMax),
    };
    int found = 0;
    for (int t = 0; t < 40; ++t) {
        const auto metric = t % 2 ? Metric::Euclidean : Metric::Manhattan;
        const AgentProfile p(fmtest::lattice_points(rng, 2 + t % 3, 0, 3), metric);
        for (const auto& d : mechs) {
            for (auto c : {check_anonymity(d, p, FacilitySpec{}),
                           check_strategy_proofness(d, p, FacilitySpec{}, coarse(0.5)),
                           check_pareto(p, run_mechanism(d, p, FacilitySpec{}), coarse(0.5))}) {
                if (!c) continue;
                ++found;
                EXPECT_GT(c->improvement, kStrictGain);
                EXPECT_TRUE(verify_certificate(*c));
            }
        }
    }
    EXPECT_GT(found, 20);
}
