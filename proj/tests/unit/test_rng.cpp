/*
   Copyright 2026 The mvlevy Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvlevy/rng.hpp"
#include "mvlevy/stats.hpp"

#include <cmath>
#include <vector>

using namespace mvlevy;

TEST_CASE("philox matches the published known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::apply(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::apply(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::apply(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs_c |= x != c.next_u64();
        differs_d |= x != d.next_u64();
    }
    CHECK(differs_c);
    CHECK(differs_d);
}

TEST_CASE("uniform, normal and exponential variates have the right laws") {
    RandomStream rng(3, 0);
    const std::size_t n = 200000;
    std::vector<double> u(n), z(n), e(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = rng.uniform();
        z[i] = rng.normal();
        e[i] = rng.exponential();
        REQUIRE(u[i] > 0.0);
        REQUIRE(u[i] < 1.0);
    }
    const auto [mu, vu] = mean_and_variance(u);
    const auto [mz, vz] = mean_and_variance(z);
    const auto [me, ve] = mean_and_variance(e);
    const double se = 5.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(mu - 0.5) < se * std::sqrt(1.0 / 12));
    CHECK(std::abs(vu - 1.0 / 12) < 0.01 / 12);
    CHECK(std::abs(mz) < se);
    CHECK(std::abs(vz - 1.0) < 0.02);
    CHECK(std::abs(me - 1.0) < se);
    CHECK(std::abs(ve - 1.0) < 0.03);
}

TEST_CASE("block counter advances by one per four words") {
    RandomStream rng(1, 1);
    CHECK(rng.blocks_used() == 0);
    for (int i = 0; i < 4; ++i) rng.next_u32();
    CHECK(rng.blocks_used() == 1);
    rng.next_u32();
    CHECK(rng.blocks_used() == 2);
}
