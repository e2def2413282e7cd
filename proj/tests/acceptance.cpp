#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>

#include "spikelab/acceptance.hpp"

using namespace spikelab;

TEST_CASE("full verification ladder") {
    const auto results = run_acceptance();
    print_acceptance(results, std::cout);
    REQUIRE(results.size() == 12);
    for (const auto& r : results) {
        INFO("criterion ", r.id, ": ", r.detail);
        if (r.expected_failure) {
            // pinned to reference values known to contradict the rest of the
            // ladder; if this ever passes, the contradiction needs revisiting
            CHECK_FALSE(r.passed);
        } else {
            CHECK(r.passed);
        }
    }
}
