#include <doctest.h>

#include "ridemarket/choice.hpp"
#include "ridemarket/errors.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

using namespace ridemarket;

namespace {

Alternative alt(std::int32_t id, Nest nest, double utility, bool aware = true) {
    return Alternative{id, nest, utility, aware};
}

// The worked three-alternative market: two ride-sourcing platforms at 0.6 and
// 0.4, the outside option at 0.5.
std::vector<Alternative> small_market() {
    return {alt(0, Nest::ride_sourcing, 0.6), alt(1, Nest::ride_sourcing, 0.4),
            alt(2, Nest::other, 0.5)};
}

} // namespace

TEST_CASE("sigmoid matches a high-precision evaluation") {
    for (double x : {-700.0, -30.0, -2.5, -0.5, 0.0, 0.5, 1e-9, 3.0, 30.0, 700.0}) {
        double got = sigmoid(x);
        double want = static_cast<double>(oracles::sigmoid_oracle(x));
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(0.5) == doctest::Approx(0.6224593312018546).epsilon(1e-12));
    CHECK(sigmoid(5.0) + sigmoid(-5.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("component updates move the latent by kappa times the centered signal") {
    SUBCASE("neutral signal is a no-op") {
        LearnedComponent c{1.25};
        LearnedComponent after = update_component(c, 0.5, 1.0);
        CHECK(after.latent == 1.25);
        CHECK(after.value() == c.value());
    }
    SUBCASE("full signal from a fresh component") {
        LearnedComponent c;
        LearnedComponent after = update_component(c, 1.0, 1.0);
        CHECK(after.latent == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(after.value() == doctest::Approx(0.6224593312018546).epsilon(1e-12));
    }
    SUBCASE("rate scales the step") {
        LearnedComponent after = update_component(LearnedComponent{}, 0.0, 0.4);
        CHECK(after.latent == doctest::Approx(-0.2).epsilon(1e-12));
    }
    SUBCASE("rejects signals outside [0,1] and nonpositive rates") {
        CHECK_THROWS_AS(update_component(LearnedComponent{}, -0.01, 1.0), InputError);
        CHECK_THROWS_AS(update_component(LearnedComponent{}, 1.01, 1.0), InputError);
        CHECK_THROWS_AS(update_component(LearnedComponent{}, 0.5, 0.0), InputError);
        CHECK_THROWS_AS(update_component(LearnedComponent{}, 0.5, -1.0), InputError);
    }
}

TEST_CASE("repeated positive signals climb the S-curve without escaping (0,1]") {
    LearnedComponent c;
    double prev = c.value();
    for (int k = 0; k < 1000; ++k) {
        c = update_component(c, 1.0, 0.1);
        double v = c.value();
        CHECK(v >= prev);
        if (k < 50)
            CHECK(v > prev); // early on the curve is still visibly steep
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK(prev > 0.99);
}

TEST_CASE("equal-rate updates commute in latent space") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        double s1 = rng.uniform();
        double s2 = rng.uniform();
        double kappa = 0.1 + rng.uniform();
        LearnedComponent start{rng.uniform() * 4.0 - 2.0};
        LearnedComponent ab = update_component(update_component(start, s1, kappa), s2, kappa);
        LearnedComponent ba = update_component(update_component(start, s2, kappa), s1, kappa);
        CHECK(ab.latent == doctest::Approx(ba.latent).epsilon(1e-12));
    }
}

TEST_CASE("driver day rating compares hourly income to the reservation wage") {
    CHECK(experience_signal_driver(48.0, 4.0, 12.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(experience_signal_driver(0.0, 4.0, 12.0) == 0.0);
    CHECK(experience_signal_driver(72.0, 4.0, 12.0) == doctest::Approx(0.75).epsilon(1e-12));
    // Anything at or beyond double the reservation wage saturates.
    CHECK(experience_signal_driver(120.0, 4.0, 12.0) == 1.0);
    CHECK_THROWS_AS(experience_signal_driver(10.0, 0.0, 12.0), InputError);
    CHECK_THROWS_AS(experience_signal_driver(10.0, 4.0, 0.0), InputError);
}

TEST_CASE("traveler day rating compares generalized cost to public transport") {
    SUBCASE("half the public-transport cost rates 0.75") {
        // fare 5, no time component: g = 5 against pt cost 10.
        CHECK(experience_signal_traveler(0.0, 0.0, 5.0, 10.0, 10.0, 2.0) ==
              doctest::Approx(0.75).epsilon(1e-12));
    }
    SUBCASE("matching public transport is indifferent") {
        // g = 4 + 10*(300*2 + 600)/3600 = 4 + 10/3 + ... pick pt equal to g.
        double g = 4.0 + 10.0 * (300.0 * 2.0 + 600.0) / 3600.0;
        CHECK(experience_signal_traveler(300.0, 600.0, 4.0, g, 10.0, 2.0) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("waiting is weighted by the multiplier") {
        // 360 s wait at multiplier 2 and vot 10 adds 2 euro to g.
        double with_wait = experience_signal_traveler(360.0, 0.0, 3.0, 10.0, 10.0, 2.0);
        double no_wait = experience_signal_traveler(0.0, 0.0, 5.0, 10.0, 10.0, 2.0);
        CHECK(with_wait == doctest::Approx(no_wait).epsilon(1e-12));
    }
    SUBCASE("clamped at both ends") {
        CHECK(experience_signal_traveler(0.0, 0.0, 25.0, 10.0, 10.0, 2.0) == 0.0);
        CHECK(experience_signal_traveler(0.0, 0.0, 0.0, 10.0, 10.0, 2.0) == 1.0);
    }
    SUBCASE("rejects bad inputs") {
        CHECK_THROWS_AS(experience_signal_traveler(0.0, 0.0, 5.0, 0.0, 10.0, 2.0), InputError);
        CHECK_THROWS_AS(experience_signal_traveler(-1.0, 0.0, 5.0, 10.0, 10.0, 2.0), InputError);
    }
}

TEST_CASE("nested logit matches the long-double oracle on the worked market") {
    auto alts = small_market();
    ChoiceScales scales; // mu 1, mu_nest 2
    for (bool excluded : {false, true}) {
        ChoiceBreakdown b = nested_logit_breakdown(alts, scales, excluded);
        auto want = oracles::nested_logit_oracle(alts, scales.mu, scales.mu_nest, excluded);
        REQUIRE(b.probability.size() == 3);
        for (std::size_t n = 0; n < 2; ++n)
            CHECK(b.nest_probability[n] ==
                  doctest::Approx(static_cast<double>(want.nest_probability[n])).epsilon(1e-12));
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(b.conditional_probability[i] ==
                  doctest::Approx(static_cast<double>(want.conditional_probability[i]))
                      .epsilon(1e-12));
            CHECK(b.probability[i] ==
                  doctest::Approx(static_cast<double>(want.probability[i])).epsilon(1e-12));
        }
    }

    // Hand checks: the within-nest split is a binary logit on mu_nest times the
    // utility gap, and the nest split reduces to sqrt-denominators at mu 1,
    // mu_nest 2.
    ChoiceBreakdown b = nested_logit_breakdown(alts, scales, true);
    CHECK(b.conditional_probability[0] ==
          doctest::Approx(1.0 / (1.0 + std::exp(-0.4))).epsilon(1e-12));
    CHECK(b.conditional_probability[1] ==
          doctest::Approx(1.0 / (1.0 + std::exp(0.4))).epsilon(1e-12));
    CHECK(b.conditional_probability[2] == doctest::Approx(1.0).epsilon(1e-12));
    double rs_weight = std::sqrt(std::exp(1.2) + std::exp(0.8));
    double other_weight = std::sqrt(std::exp(1.0));
    CHECK(b.nest_probability[0] ==
          doctest::Approx(rs_weight / (rs_weight + other_weight)).epsilon(1e-12));
}

TEST_CASE("nested logit probabilities normalize on random configurations") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t n_rs = rng.uniform_int(4);
        std::size_t n_other = 1 + rng.uniform_int(2);
        std::vector<Alternative> alts;
        for (std::size_t i = 0; i < n_rs; ++i)
            alts.push_back(alt(static_cast<std::int32_t>(i), Nest::ride_sourcing,
                               rng.uniform() * 8.0 - 4.0, rng.uniform() < 0.8));
        for (std::size_t i = 0; i < n_other; ++i)
            alts.push_back(alt(static_cast<std::int32_t>(n_rs + i), Nest::other,
                               rng.uniform() * 8.0 - 4.0));
        ChoiceScales scales{0.2 + rng.uniform() * 2.0, 0.0};
        scales.mu_nest = scales.mu + rng.uniform() * 3.0;
        bool excluded = rng.uniform() < 0.5;

        ChoiceBreakdown b = nested_logit_breakdown(alts, scales, excluded);
        double nest_total = b.nest_probability[0] + b.nest_probability[1];
        CHECK(std::abs(nest_total - 1.0) < 1e-12);
        double prob_total = 0.0;
        for (double p : b.probability) {
            CHECK(p >= 0.0);
            prob_total += p;
        }
        CHECK(std::abs(prob_total - 1.0) < 1e-12);

        auto want = oracles::nested_logit_oracle(alts, scales.mu, scales.mu_nest, excluded);
        for (std::size_t i = 0; i < alts.size(); ++i)
            CHECK(b.probability[i] ==
                  doctest::Approx(static_cast<double>(want.probability[i])).epsilon(1e-10));
    }
}

TEST_CASE("nested logit handles awareness in both modes") {
    ChoiceScales scales;
    SUBCASE("excluded mode drops the alternative and can empty a nest") {
        std::vector<Alternative> alts = {alt(0, Nest::ride_sourcing, 2.0, false),
                                         alt(1, Nest::other, 0.5)};
        ChoiceBreakdown b = nested_logit_breakdown(alts, scales, true);
        CHECK(b.nest_probability[0] == 0.0);
        CHECK(b.probability[0] == 0.0);
        CHECK(b.probability[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("literal mode keeps the unaware alternative at exp(0)") {
        std::vector<Alternative> alts = {alt(0, Nest::ride_sourcing, 2.0, false),
                                         alt(1, Nest::ride_sourcing, 0.3),
                                         alt(2, Nest::other, 0.5)};
        ChoiceBreakdown b = nested_logit_breakdown(alts, scales, false);
        CHECK(b.probability[0] > 0.0);
        // The unaware alternative competes as if its utility were zero.
        double e0 = 1.0;
        double e1 = std::exp(scales.mu_nest * 0.3);
        CHECK(b.conditional_probability[0] == doctest::Approx(e0 / (e0 + e1)).epsilon(1e-12));
        auto want = oracles::nested_logit_oracle(alts, scales.mu, scales.mu_nest, false);
        for (std::size_t i = 0; i < alts.size(); ++i)
            CHECK(b.probability[i] ==
                  doctest::Approx(static_cast<double>(want.probability[i])).epsilon(1e-12));
    }
    SUBCASE("awareness never raises someone else's probability when it arrives") {
        // Flipping alternative 0 to aware with a strong utility must not
        // increase the outside option's share.
        std::vector<Alternative> before = {alt(0, Nest::ride_sourcing, 1.5, false),
                                           alt(1, Nest::other, 0.5)};
        std::vector<Alternative> after = before;
        after[0].aware = true;
        double outside_before = nested_logit_probabilities(before, scales, true)[1];
        double outside_after = nested_logit_probabilities(after, scales, true)[1];
        CHECK(outside_after < outside_before);
    }
    SUBCASE("nothing available anywhere is an error") {
        std::vector<Alternative> alts = {alt(0, Nest::ride_sourcing, 1.0, false)};
        CHECK_THROWS_AS(nested_logit_breakdown(alts, scales, true), InputError);
    }
}

TEST_CASE("nested logit structural properties") {
    ChoiceScales scales;
    SUBCASE("identical platforms split their nest evenly") {
        std::vector<Alternative> alts = {alt(0, Nest::ride_sourcing, 0.7),
                                         alt(1, Nest::ride_sourcing, 0.7),
                                         alt(2, Nest::other, 0.5)};
        ChoiceBreakdown b = nested_logit_breakdown(alts, scales, true);
        CHECK(b.conditional_probability[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(b.conditional_probability[1] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(b.probability[0] == doctest::Approx(b.probability[1]).epsilon(1e-12));
    }
    SUBCASE("a lone alternative takes probability one") {
        std::vector<Alternative> alts = {alt(0, Nest::other, -3.0)};
        auto p = nested_logit_probabilities(alts, scales, true);
        CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("raising a utility never lowers its own probability") {
        SplitMix64 rng(5);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<Alternative> alts = {
                alt(0, Nest::ride_sourcing, rng.uniform() * 2.0 - 1.0),
                alt(1, Nest::ride_sourcing, rng.uniform() * 2.0 - 1.0),
                alt(2, Nest::other, rng.uniform() * 2.0 - 1.0)};
            std::size_t target = rng.uniform_int(alts.size());
            double before = nested_logit_probabilities(alts, scales, true)[target];
            alts[target].utility += 0.1;
            double after = nested_logit_probabilities(alts, scales, true)[target];
            CHECK(after >= before);
        }
    }
    SUBCASE("a huge within-nest scale makes the gap decisive") {
        std::vector<Alternative> alts = {alt(0, Nest::ride_sourcing, 0.6),
                                         alt(1, Nest::ride_sourcing, 0.5),
                                         alt(2, Nest::other, 0.5)};
        ChoiceScales sharp{1.0, 1000.0};
        ChoiceBreakdown b = nested_logit_breakdown(alts, sharp, true);
        CHECK(b.conditional_probability[0] > 0.999);
        CHECK(std::isfinite(b.probability[0]));
    }
    SUBCASE("extreme utilities stay finite through the max shift") {
        std::vector<Alternative> alts = {alt(0, Nest::ride_sourcing, 600.0),
                                         alt(1, Nest::ride_sourcing, -600.0),
                                         alt(2, Nest::other, 0.0)};
        ChoiceBreakdown b = nested_logit_breakdown(alts, scales, true);
        double total = b.probability[0] + b.probability[1] + b.probability[2];
        CHECK(std::abs(total - 1.0) < 1e-12);
        CHECK(b.conditional_probability[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("rejects bad inputs") {
        CHECK_THROWS_AS(nested_logit_breakdown({}, scales, true), InputError);
        std::vector<Alternative> nan_alt = {alt(0, Nest::other, std::nan(""))};
        CHECK_THROWS_AS(nested_logit_breakdown(nan_alt, scales, true), InputError);
        std::vector<Alternative> ok = {alt(0, Nest::other, 0.0)};
        CHECK_THROWS_AS(nested_logit_breakdown(ok, ChoiceScales{0.0, 2.0}, true), InputError);
        CHECK_THROWS_AS(nested_logit_breakdown(ok, ChoiceScales{1.0, -2.0}, true), InputError);
        CHECK_THROWS_AS(nested_logit_breakdown(ok, ChoiceScales{3.0, 2.0}, true), InputError);
    }
}

TEST_CASE("sampling frequencies track the analytic probabilities") {
    auto alts = small_market();
    ChoiceScales scales;
    ChoiceBreakdown b = nested_logit_breakdown(alts, scales, true);
    SplitMix64 rng(2024);
    const int n = 100000;
    std::vector<int> count(alts.size(), 0);
    for (int i = 0; i < n; ++i) {
        std::size_t pick = nested_logit_sample(alts, scales, true, rng);
        REQUIRE(pick < alts.size());
        ++count[pick];
    }
    for (std::size_t i = 0; i < alts.size(); ++i) {
        double p = b.probability[i];
        double se = std::sqrt(p * (1.0 - p) / n);
        CHECK(std::abs(count[i] / static_cast<double>(n) - p) <= 3.0 * se);
    }
}

TEST_CASE("sampling never returns an unavailable alternative") {
    std::vector<Alternative> alts = {alt(0, Nest::ride_sourcing, 3.0, false),
                                     alt(1, Nest::ride_sourcing, 0.2),
                                     alt(2, Nest::other, 0.5)};
    ChoiceScales scales;
    SplitMix64 rng(17);
    for (int i = 0; i < 5000; ++i)
        CHECK(nested_logit_sample(alts, scales, true, rng) != 0);
}

TEST_CASE("composite perceived utility blends the components") {
    PerceivedUtility fresh;
    UtilityWeights w;
    CHECK(fresh.composite(w) == doctest::Approx(0.5).epsilon(1e-12));

    PerceivedUtility tilted;
    tilted.asc = 0.4;
    CHECK(tilted.composite(w) == doctest::Approx(0.9).epsilon(1e-12));

    // Only the experience weight multiplies the experience component.
    PerceivedUtility expert;
    expert.experience.latent = 50.0; // saturated to 1
    CHECK(expert.composite(w) == doctest::Approx(0.7 * 1.0 + 0.2 * 0.5 + 0.1 * 0.5).epsilon(1e-9));
}

TEST_CASE("word of mouth spreads awareness and pre-exchange beliefs") {
    UtilityWeights w;
    SUBCASE("rate zero and tiny populations are no-ops") {
        std::vector<AgentMind> pop(3, AgentMind(2));
        pop[0].aware[0] = 1;
        pop[0].platforms[0].asc = 0.4;
        auto before = pop;
        SplitMix64 rng(1);
        word_of_mouth_round(pop, 0.0, w, 1.0, rng);
        CHECK(pop == before);

        std::vector<AgentMind> lone(1, AgentMind(2));
        lone[0].aware = {1, 1};
        auto lone_before = lone;
        word_of_mouth_round(lone, 5.0, w, 1.0, rng);
        CHECK(lone == lone_before);

        CHECK_THROWS_AS(word_of_mouth_round(pop, -0.1, w, 1.0, rng), InputError);
    }
    SUBCASE("a satisfied speaker shifts the listener by kappa times the surplus") {
        std::vector<AgentMind> pop(2, AgentMind(1));
        pop[0].aware[0] = 1;
        pop[0].platforms[0].asc = 0.4; // composite 0.9 on neutral components
        SplitMix64 rng(3);
        word_of_mouth_round(pop, 1.0, w, 1.0, rng);
        CHECK(pop[1].aware[0] == 1);
        CHECK(pop[1].platforms[0].word_of_mouth.latent == doctest::Approx(0.4).epsilon(1e-12));
        // The listener had nothing to say, so the speaker is untouched.
        CHECK(pop[0].platforms[0].word_of_mouth.latent == 0.0);
        CHECK(pop[0].platforms[0].asc == 0.4);
    }
    SUBCASE("overflowing composites are clamped before being spoken") {
        std::vector<AgentMind> pop(2, AgentMind(1));
        pop[0].aware[0] = 1;
        pop[0].platforms[0].asc = 5.0; // composite 5.5, spoken as 1.0
        SplitMix64 rng(3);
        word_of_mouth_round(pop, 1.0, w, 1.0, rng);
        CHECK(pop[1].platforms[0].word_of_mouth.latent == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("both directions of a meeting use pre-exchange state") {
        std::vector<AgentMind> pop(2, AgentMind(1));
        pop[0].aware[0] = 1;
        pop[1].aware[0] = 1;
        pop[0].platforms[0].asc = 0.3;  // composite 0.8
        pop[1].platforms[0].asc = -0.3; // composite 0.2
        SplitMix64 rng(11);
        word_of_mouth_round(pop, 1.0, w, 1.0, rng);
        // Each listener hears the other's composite as it stood before the
        // exchange, not after its own update landed.
        CHECK(pop[0].platforms[0].word_of_mouth.latent == doctest::Approx(-0.3).epsilon(1e-12));
        CHECK(pop[1].platforms[0].word_of_mouth.latent == doctest::Approx(0.3).epsilon(1e-12));
    }
    SUBCASE("an integer rate runs exactly that many pairings") {
        // Zero weights pin each composite to the asc, so every round moves the
        // listener by the same step and the arithmetic counts the rounds.
        UtilityWeights frozen{0.0, 0.0, 0.0};
        std::vector<AgentMind> pop(2, AgentMind(1));
        pop[0].aware[0] = 1;
        pop[0].platforms[0].asc = 0.9;
        SplitMix64 rng(23);
        word_of_mouth_round(pop, 2.0, frozen, 1.0, rng);
        CHECK(pop[1].platforms[0].word_of_mouth.latent == doctest::Approx(0.8).epsilon(1e-12));
        // The second agent only found its voice for round two (composite 0).
        CHECK(pop[0].platforms[0].word_of_mouth.latent == doctest::Approx(-0.5).epsilon(1e-12));
    }
    SUBCASE("a fractional rate runs the extra pairing at the right frequency") {
        int ran = 0;
        const int trials = 2000;
        SplitMix64 rng(31);
        for (int t = 0; t < trials; ++t) {
            std::vector<AgentMind> pop(2, AgentMind(1));
            pop[0].aware[0] = 1;
            pop[0].platforms[0].asc = 0.4;
            word_of_mouth_round(pop, 0.5, w, 1.0, rng);
            if (pop[1].aware[0])
                ++ran;
        }
        double freq = ran / static_cast<double>(trials);
        CHECK(std::abs(freq - 0.5) <= 3.0 * std::sqrt(0.25 / trials));
    }
    SUBCASE("awareness only ever spreads") {
        SplitMix64 rng(41);
        std::vector<AgentMind> pop(9, AgentMind(2));
        pop[0].aware[0] = 1;
        pop[1].aware[1] = 1;
        std::size_t seen = 2;
        for (int round = 0; round < 60; ++round) {
            word_of_mouth_round(pop, 1.0, w, 1.0, rng);
            std::size_t now = 0;
            for (const AgentMind& m : pop)
                for (std::uint8_t a : m.aware)
                    now += a;
            CHECK(now >= seen);
            seen = now;
        }
        // With one meeting per agent per day, nine agents saturate quickly.
        CHECK(seen == 18);
    }
}

TEST_CASE("marketing flips the unaware and feeds everyone aware") {
    SUBCASE("zero reach leaves the unaware untouched") {
        std::vector<AgentMind> pop(5, AgentMind(2));
        auto before = pop;
        SplitMix64 rng(1);
        marketing_round(pop, 0, 0.0, 0.7, 1.0, rng);
        CHECK(pop == before);
    }
    SUBCASE("full reach converts everyone and seeds the component") {
        std::vector<AgentMind> pop(5, AgentMind(2));
        SplitMix64 rng(2);
        marketing_round(pop, 1, 1.0, 0.7, 1.0, rng);
        for (const AgentMind& m : pop) {
            CHECK(m.aware[1] == 1);
            CHECK(m.aware[0] == 0);
            CHECK(m.platforms[1].marketing.latent == doctest::Approx(0.2).epsilon(1e-12));
            CHECK(m.platforms[0].marketing.latent == 0.0);
        }
        // Aware agents keep absorbing on later passes even at zero reach.
        marketing_round(pop, 1, 0.0, 0.7, 1.0, rng);
        for (const AgentMind& m : pop)
            CHECK(m.platforms[1].marketing.latent == doctest::Approx(0.4).epsilon(1e-12));
    }
    SUBCASE("conversions hit the expected rate") {
        std::vector<AgentMind> pop(1000, AgentMind(1));
        SplitMix64 rng(3);
        marketing_round(pop, 0, 0.3, 0.7, 1.0, rng);
        int aware = 0;
        for (const AgentMind& m : pop)
            aware += m.aware[0];
        double se = std::sqrt(1000 * 0.3 * 0.7);
        CHECK(std::abs(aware - 300.0) <= 3.0 * se);
    }
    SUBCASE("rejects bad reach and unknown platforms") {
        std::vector<AgentMind> pop(2, AgentMind(1));
        SplitMix64 rng(4);
        CHECK_THROWS_AS(marketing_round(pop, 0, 1.5, 0.7, 1.0, rng), InputError);
        CHECK_THROWS_AS(marketing_round(pop, 3, 0.5, 0.7, 1.0, rng), InputError);
    }
}

TEST_CASE("awareness stays monotone under interleaved marketing and gossip") {
    SplitMix64 rng(2718);
    UtilityWeights w;
    std::vector<AgentMind> pop(12, AgentMind(2));
    auto snapshot = [&] {
        std::vector<std::uint8_t> flat;
        for (const AgentMind& m : pop)
            flat.insert(flat.end(), m.aware.begin(), m.aware.end());
        return flat;
    };
    auto prev = snapshot();
    for (int step = 0; step < 200; ++step) {
        switch (rng.uniform_int(3)) {
        case 0:
            marketing_round(pop, rng.uniform_int(2), 0.1, 0.7, 1.0, rng);
            break;
        case 1:
            word_of_mouth_round(pop, 1.0, w, 1.0, rng);
            break;
        default:
            word_of_mouth_round(pop, 0.5, w, 0.3, rng);
            break;
        }
        auto now = snapshot();
        for (std::size_t i = 0; i < now.size(); ++i)
            CHECK(now[i] >= prev[i]);
        prev = now;
    }
}
