#pragma once

#include "ridemarket/rng.hpp"

#include <cstdint>
#include <vector>

namespace ridemarket {

double sigmoid(double x);

/// One learned utility component: an unbounded latent score read out through
/// the sigmoid. Neutral signals (0.5) leave it unchanged; the read-out moves
/// fastest near 0.5 and flattens at the extremes.
struct LearnedComponent {
    double latent = 0.0;
    double value() const { return sigmoid(latent); }

    bool operator==(const LearnedComponent&) const = default;
};

/// latent' = latent + kappa * (signal - 0.5). Throws InputError if the
/// signal leaves [0,1] or kappa is not positive.
LearnedComponent update_component(LearnedComponent c, double signal, double kappa);

/// Driver day rating against the reservation wage:
/// clamp(0.5 + 0.5*(hourly - reservation_wage)/reservation_wage, 0, 1),
/// where hourly = income_today / hours (income includes any wage top-up).
double experience_signal_driver(double income_today_eur, double hours, double reservation_wage_eur_h);

/// Traveler day rating against the public-transport generalized cost
/// pt_cost: g = fare + vot*(wait*w_wait + in_vehicle)/3600;
/// clamp(0.5 + 0.5*(pt_cost - g)/pt_cost, 0, 1). Unserved days are rated 0
/// by the caller, not here.
double experience_signal_traveler(double wait_s, double in_vehicle_s, double fare_paid_eur,
                                  double pt_generalized_cost_eur, double vot_eur_h,
                                  double wait_multiplier);

enum class Nest : std::uint8_t { ride_sourcing, other };

struct Alternative {
    std::int32_t id;
    Nest nest;
    double utility;
    bool aware = true; // the outside option is always aware
};

struct ChoiceScales {
    double mu = 1.0;      // across nests
    double mu_nest = 2.0; // within a nest; consistency requires mu <= mu_nest
};

struct ChoiceBreakdown {
    std::vector<double> nest_probability;        // [ride_sourcing, other]
    std::vector<double> conditional_probability; // P(a | its nest), per alternative
    std::vector<double> probability;             // product, per alternative
};

/// Two-level nested logit over the given alternatives.
///
/// Within nest n the conditional choice is softmax(mu_nest * G_a * U_a)
/// where G_a is the awareness flag (0/1); the nest logsum is
/// W_n = ln(sum exp(mu_nest * G_a * U_a)) / mu_nest and nests are chosen by
/// softmax(mu * W_n). With unaware_excluded an unaware alternative is
/// dropped from its nest instead of entering the sums as exp(0); a nest with
/// nothing available gets probability 0.
ChoiceBreakdown nested_logit_breakdown(const std::vector<Alternative>& alternatives,
                                       const ChoiceScales& scales, bool unaware_excluded);

std::vector<double> nested_logit_probabilities(const std::vector<Alternative>& alternatives,
                                               const ChoiceScales& scales, bool unaware_excluded);

/// Sample literally in two stages (nest draw, then within-nest draw); the
/// index returned points into `alternatives`.
std::size_t nested_logit_sample(const std::vector<Alternative>& alternatives,
                                const ChoiceScales& scales, bool unaware_excluded,
                                SplitMix64& rng);

struct UtilityWeights {
    double experience = 0.7;
    double marketing = 0.2;
    double word_of_mouth = 0.1;
};

/// What one agent believes about one platform.
struct PerceivedUtility {
    LearnedComponent experience;
    LearnedComponent word_of_mouth;
    LearnedComponent marketing;
    double asc = 0.0;

    double composite(const UtilityWeights& w) const {
        return w.experience * experience.value() + w.marketing * marketing.value() +
               w.word_of_mouth * word_of_mouth.value() + asc;
    }

    bool operator==(const PerceivedUtility&) const = default;
};

/// Per-agent beliefs and awareness across all platforms.
struct AgentMind {
    std::vector<PerceivedUtility> platforms;
    std::vector<std::uint8_t> aware;

    explicit AgentMind(std::size_t n_platforms = 0)
        : platforms(n_platforms), aware(n_platforms, 0) {}

    bool operator==(const AgentMind&) const = default;
};

/// One gossip round inside a population. floor(rate) full pairings run, plus
/// one more with probability rate - floor(rate); a full pairing shuffles the
/// population and meets adjacent disjoint pairs, so each agent expects
/// `rate` meetings. Within a pair each side speaks about every platform it
/// is aware of: the listener hears the speaker's pre-exchange composite
/// utility clamped to [0,1] as a word-of-mouth signal and becomes aware of
/// that platform.
void word_of_mouth_round(std::vector<AgentMind>& population, double meetings_per_agent,
                         const UtilityWeights& weights, double kappa, SplitMix64& rng);

/// Marketing pass for one platform: unaware agents flip to aware with
/// probability reach, then every aware agent absorbs `signal` into the
/// marketing component.
void marketing_round(std::vector<AgentMind>& population, std::size_t platform, double reach,
                     double signal, double kappa, SplitMix64& rng);

} // namespace ridemarket
