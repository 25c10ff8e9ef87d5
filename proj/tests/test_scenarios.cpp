#include <set>
#include <string>

#include <gtest/gtest.h>

#include "fmech/scenarios.hpp"

using namespace fmech;

TEST(Scenarios, RegistryIsLargeAndUnique) {
    const auto& reg = scenario_registry();
    EXPECT_GE(reg.size(), 11u);
    std::set<std::string> names;
    for (const auto& s : reg) {
        EXPECT_TRUE(names.insert(s.name).second) << s.name;
        EXPECT_FALSE(s.anchor.empty()) << s.name;
        EXPECT_FALSE(s.expectations.empty()) << s.name;
        for (const auto& e : s.expectations) {
            EXPECT_TRUE(e.measure) << s.name << ": " << e.quantity;
            if (e.source == Source::Reported) {
                EXPECT_FALSE(e.anchor.empty()) << s.name << ": " << e.quantity;
            }
        }
    }
    EXPECT_EQ(list_scenarios().size(), reg.size());
}

TEST(Scenarios, NamedScenariosPresent) {
    std::set<std::string> names;
    for (const auto& [n, a] : list_scenarios()) names.insert(n);
    for (const char* want : {"thm1_manipulation", "thm4_case1", "thm4_case2", "thm4_case3", "manhattan_3agent_median",
                             "onecentre_manipulation", "capacitated_even", "capacitated_odd"})
        EXPECT_TRUE(names.count(want)) << want;
}

TEST(Scenarios, UnknownNameIsInputError) { EXPECT_THROW(run_scenario("nope"), InputError); }

TEST(Scenarios, ComparisonSemantics) {
    Expectation e;
    e.comparison = Comparison::Between;
    e.expected = 1.0003;
    e.upper = 1.0004;
    EXPECT_TRUE(detail::holds(e, 1.00035));
    EXPECT_FALSE(detail::holds(e, 1.0003));
    e.comparison = Comparison::Unbounded;
    EXPECT_TRUE(detail::holds(e, INFINITY));
    EXPECT_FALSE(detail::holds(e, 1e300));
    e.comparison = Comparison::AtLeast;
    e.expected = 2;
    e.tolerance = 0.1;
    EXPECT_TRUE(detail::holds(e, 1.95));
    EXPECT_FALSE(detail::holds(e, 1.85));
}

class EveryScenario : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryScenario, Passes) {
    const auto rep = run_scenario(GetParam());
    for (const auto& r : rep.results)
        EXPECT_TRUE(r.passed) << r.quantity << " measured " << r.measured << " expected " << r.expected;
    EXPECT_TRUE(rep.passed());
}

INSTANTIATE_TEST_SUITE_P(Registry, EveryScenario, ::testing::ValuesIn([] {
                             std::vector<std::string> names;
                             for (const auto& [n, a] : list_scenarios()) names.push_back(n);
                             return names;
                         }()),
                         [](const auto& info) { return info.param; });
