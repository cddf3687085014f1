// Copyright 2026 The bcqzk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bcqzk/ot.hpp"
#include "oracles/ot_views.hpp"

#include <algorithm>
#include <map>

#include "gtest/gtest.h"

using namespace bcqzk;

TEST(srot, correctness_exhaustive_inputs) {
    for (std::size_t lambda : {2, 4, 8}) {
        for (std::uint8_t beta = 0; beta < 2; ++beta) {
            for (std::uint8_t m0 = 0; m0 < 2; ++m0) {
                for (std::uint8_t m1 = 0; m1 < 2; ++m1) {
                    for (std::uint64_t t = 0; t < 8; ++t) {
                        Rng rng(derive_seed(lambda * 100 + beta * 4 + m0 * 2 + m1, t));
                        auto out = srot_run(m0, m1, beta, lambda, rng);
                        ASSERT_TRUE(out.output.has_value());
                        EXPECT_EQ(*out.output, beta ? m1 : m0);
                    }
                }
            }
        }
    }
}

TEST(srot, reconstruction_identity) {
    for (std::uint64_t t = 0; t < 50; ++t) {
        Rng rng(t);
        auto s = srot_interact(SrotReceiverStrategy::honest(t & 1), 4, rng);
        auto pair = *s.final_pair(1, 0);
        EXPECT_EQ(pair.first ^ pair.second, s.run.r ^ 1);
        EXPECT_EQ(s.run.r_tilde, s.run.r_prime ^ (s.run.r & s.run.beta));
    }
}

TEST(srot, cheating_receivers_abort) {
    for (std::uint64_t t = 0; t < 40; ++t) {
        Rng a(t), b(t + 1000), c(t + 2000);
        EXPECT_TRUE(srot_interact(SrotReceiverStrategy::inconsistent_beta(t & 1), 4, a).run.aborted);
        EXPECT_TRUE(srot_interact(SrotReceiverStrategy::share_withholder(), 4, b).run.aborted);
        EXPECT_TRUE(srot_interact(SrotReceiverStrategy::location_liar(1.0), 4, c).run.aborted);
    }
    int aborted = 0;
    for (std::uint64_t t = 0; t < 400; ++t) {
        Rng rng(t);
        aborted += srot_interact(SrotReceiverStrategy::location_liar(0.5), 2, rng).run.aborted;
    }
    EXPECT_NEAR(aborted / 400.0, 0.5, 0.08);
}

TEST(srot, per_cell_recovery_rate) {
    std::uint64_t hit = 0, cells = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
        Rng rng(t);
        auto s = srot_interact(SrotReceiverStrategy::honest(0), 8, rng);
        for (auto &row : s.run.cells) {
            for (auto &c : row) {
                hit += c.sender_bit == c.statement.location;
                ++cells;
                if (c.sender_bit == c.statement.location) EXPECT_EQ(c.received, c.witness.share);
            }
        }
    }
    EXPECT_NEAR(static_cast<double>(hit) / static_cast<double>(cells), 0.5, 0.02);
}

TEST(receiver_privacy, exact_tv_lambda2) {
    Rational tv = receiver_privacy_tv_exact(2);
    // f + f/2 - f^2/2 with f = 2^-lambda.
    Rational f(1, 4);
    EXPECT_EQ(tv, f + f / 2 - f * f / 2);
    EXPECT_EQ(tv, Rational(11, 32));

    EXPECT_EQ(tv, oracles::enumerated_tv_lambda2());
}

TEST(receiver_privacy, exact_tv_lambda3_formula) {
    Rational f(1, 8);
    EXPECT_EQ(receiver_privacy_tv_exact(3), f + f / 2 - f * f / 2);
    EXPECT_THROW(receiver_privacy_tv_exact(4), ValidationError);
}

TEST(receiver_privacy, statistic_matches_views) {
    // Whenever the statistic names a bit, it is the true beta.
    for (std::uint64_t t = 0; t < 2000; ++t) {
        Rng rng(t);
        auto s = srot_interact(SrotReceiverStrategy::honest(t & 1), 2, rng);
        auto T = sender_beta_statistic(s.run);
        if (T != 2) EXPECT_EQ(T, s.run.beta);
    }
}

TEST(receiver_privacy, sampled_tv_lambda2_near_exact) {
    auto e = receiver_privacy_tv_sampled(2, 20000, 4);
    EXPECT_NEAR(e.tv, 11.0 / 32, 0.02);
}

TEST(receiver_privacy, sampled_tv_lambda8) {
    auto e = receiver_privacy_tv_sampled(8, 20000, 5);
    EXPECT_LE(e.tv, 0.06);
}

TEST(receiver_privacy, same_beta_null_check) {
    const std::uint64_t n = 20000;
    auto tally = [&](std::uint64_t seed) {
        std::array<double, 3> c{};
        for (std::uint64_t i = 0; i < n; ++i) {
            Rng rng(derive_seed(seed, i));
            c[sender_beta_statistic(srot_interact(SrotReceiverStrategy::honest(0), 2, rng).run)] += 1;
        }
        return c;
    };
    auto a = tally(21), b = tally(22);
    double tv = 0;
    for (int t = 0; t < 3; ++t) tv += std::abs(a[t] - b[t]) / (2.0 * n);
    // Three cells, each with standard error under sqrt(0.5 / n).
    EXPECT_LE(tv, 3 * 1.5 * std::sqrt(0.5 / n));
}

TEST(sender_privacy, honest_receivers_have_no_advantage) {
    for (std::uint8_t beta = 0; beta < 2; ++beta) {
        auto r = sender_privacy_game(SrotReceiverStrategy::honest(beta), 0, 1, 4, 5000, 11 + beta);
        EXPECT_EQ(r.aborted, 0u);
        EXPECT_LE(r.advantage, 0.03);
        // The receiver does read its own slot.
        EXPECT_NEAR(beta ? r.p1_hat : r.p0_hat, 0.5, 1e-12);
    }
}

TEST(sender_privacy, aborts_are_excluded) {
    auto r = sender_privacy_game(SrotReceiverStrategy::location_liar(0.5), 0, 1, 2, 2000, 3);
    EXPECT_EQ(r.aborted + r.completed, r.trials);
    EXPECT_GT(r.aborted, 0u);
    EXPECT_LE(r.advantage, 0.05);
}

TEST(srot, record_fields) {
    Rng rng(9);
    auto s = srot_interact(SrotReceiverStrategy::honest(1), 2, rng);
    auto rec = s.run.to_record();
    EXPECT_EQ(rec.at("lambda"), "2");
    EXPECT_EQ(rec.at("main_ot1").size(), 64u);
    EXPECT_EQ(rec.at("locations"), rec.at("locations").substr(0, 12));
    EXPECT_EQ(std::count(rec.at("locations").begin(), rec.at("locations").end(), '/'), 4);
}
