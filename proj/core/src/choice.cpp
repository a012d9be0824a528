#include "ridemarket/choice.hpp"

#include "ridemarket/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace ridemarket {

double sigmoid(double x) {
    // Evaluate through exp(-|x|) so neither branch can overflow.
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

LearnedComponent update_component(LearnedComponent c, double signal, double kappa) {
    if (!(signal >= 0.0 && signal <= 1.0))
        throw InputError("learning signal must lie in [0,1]");
    if (!(kappa > 0.0))
        throw InputError("learning rate must be positive");
    c.latent += kappa * (signal - 0.5);
    return c;
}

double experience_signal_driver(double income_today_eur, double hours,
                                double reservation_wage_eur_h) {
    if (!(hours > 0.0))
        throw InputError("shift hours must be positive");
    if (!(reservation_wage_eur_h > 0.0))
        throw InputError("reservation wage must be positive");
    double hourly = income_today_eur / hours;
    double s = 0.5 + 0.5 * (hourly - reservation_wage_eur_h) / reservation_wage_eur_h;
    return std::clamp(s, 0.0, 1.0);
}

double experience_signal_traveler(double wait_s, double in_vehicle_s, double fare_paid_eur,
                                  double pt_generalized_cost_eur, double vot_eur_h,
                                  double wait_multiplier) {
    if (!(pt_generalized_cost_eur > 0.0))
        throw InputError("public-transport generalized cost must be positive");
    if (wait_s < 0.0 || in_vehicle_s < 0.0 || fare_paid_eur < 0.0)
        throw InputError("traveler experience inputs must be nonnegative");
    double g = fare_paid_eur + vot_eur_h * (wait_s * wait_multiplier + in_vehicle_s) / 3600.0;
    double s = 0.5 + 0.5 * (pt_generalized_cost_eur - g) / pt_generalized_cost_eur;
    return std::clamp(s, 0.0, 1.0);
}

namespace {

void validate_scales(const ChoiceScales& s) {
    if (!(s.mu > 0.0) || !(s.mu_nest > 0.0))
        throw InputError("choice scale parameters must be positive");
    if (s.mu > s.mu_nest)
        throw InputError("nest-level scale must not exceed the within-nest scale");
}

constexpr std::size_t kNests = 2;

std::size_t nest_index(Nest n) { return n == Nest::ride_sourcing ? 0 : 1; }

} // namespace

ChoiceBreakdown nested_logit_breakdown(const std::vector<Alternative>& alternatives,
                                       const ChoiceScales& scales, bool unaware_excluded) {
    validate_scales(scales);
    if (alternatives.empty())
        throw InputError("choice set is empty");
    for (const Alternative& a : alternatives)
        if (!std::isfinite(a.utility))
            throw InputError("non-finite utility in choice set");

    ChoiceBreakdown out;
    out.conditional_probability.assign(alternatives.size(), 0.0);
    out.probability.assign(alternatives.size(), 0.0);

    // Effective within-nest exponent mu_nest * G * U: an unaware alternative
    // enters as exp(0) unless excluded entirely.
    std::vector<double> exponent(alternatives.size(), 0.0);
    std::vector<char> present(alternatives.size(), 0);
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
        const Alternative& a = alternatives[i];
        if (unaware_excluded && !a.aware)
            continue;
        present[i] = 1;
        exponent[i] = a.aware ? scales.mu_nest * a.utility : 0.0;
    }

    // Per-nest logsum, max-shifted so large scales stay finite.
    std::array<double, kNests> nest_max{};
    std::array<bool, kNests> nest_nonempty{};
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
        if (!present[i])
            continue;
        std::size_t n = nest_index(alternatives[i].nest);
        if (!nest_nonempty[n] || exponent[i] > nest_max[n]) {
            nest_max[n] = exponent[i];
            nest_nonempty[n] = true;
        }
    }
    std::array<double, kNests> nest_sum{};
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
        if (!present[i])
            continue;
        std::size_t n = nest_index(alternatives[i].nest);
        nest_sum[n] += std::exp(exponent[i] - nest_max[n]);
    }
    std::array<double, kNests> logsum{}; // W_n = (max + ln sum)/mu_nest
    for (std::size_t n = 0; n < kNests; ++n)
        if (nest_nonempty[n])
            logsum[n] = (nest_max[n] + std::log(nest_sum[n])) / scales.mu_nest;

    out.nest_probability.assign(kNests, 0.0);
    double top_max = 0.0;
    bool any = false;
    for (std::size_t n = 0; n < kNests; ++n)
        if (nest_nonempty[n] && (!any || scales.mu * logsum[n] > top_max)) {
            top_max = scales.mu * logsum[n];
            any = true;
        }
    if (!any)
        throw InputError("no available alternative in any nest");
    double top_sum = 0.0;
    for (std::size_t n = 0; n < kNests; ++n)
        if (nest_nonempty[n])
            top_sum += std::exp(scales.mu * logsum[n] - top_max);
    for (std::size_t n = 0; n < kNests; ++n)
        if (nest_nonempty[n])
            out.nest_probability[n] = std::exp(scales.mu * logsum[n] - top_max) / top_sum;

    for (std::size_t i = 0; i < alternatives.size(); ++i) {
        if (!present[i])
            continue;
        std::size_t n = nest_index(alternatives[i].nest);
        out.conditional_probability[i] = std::exp(exponent[i] - nest_max[n]) / nest_sum[n];
        out.probability[i] = out.nest_probability[n] * out.conditional_probability[i];
    }
    return out;
}

std::vector<double> nested_logit_probabilities(const std::vector<Alternative>& alternatives,
                                               const ChoiceScales& scales, bool unaware_excluded) {
    return nested_logit_breakdown(alternatives, scales, unaware_excluded).probability;
}

std::size_t nested_logit_sample(const std::vector<Alternative>& alternatives,
                                const ChoiceScales& scales, bool unaware_excluded,
                                SplitMix64& rng) {
    ChoiceBreakdown b = nested_logit_breakdown(alternatives, scales, unaware_excluded);

    // Stage 1: nest.
    double u = rng.uniform();
    std::size_t nest = kNests - 1;
    double acc = 0.0;
    for (std::size_t n = 0; n < kNests; ++n) {
        acc += b.nest_probability[n];
        if (u < acc) {
            nest = n;
            break;
        }
    }
    while (b.nest_probability[nest] == 0.0)
        --nest; // numeric edge: never land on an empty nest

    // Stage 2: alternative within the nest.
    double v = rng.uniform();
    acc = 0.0;
    std::size_t last_in_nest = alternatives.size();
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
        if (nest_index(alternatives[i].nest) != nest || b.probability[i] == 0.0)
            continue;
        last_in_nest = i;
        acc += b.conditional_probability[i];
        if (v < acc)
            return i;
    }
    return last_in_nest;
}

void word_of_mouth_round(std::vector<AgentMind>& population, double meetings_per_agent,
                         const UtilityWeights& weights, double kappa, SplitMix64& rng) {
    if (meetings_per_agent < 0.0)
        throw InputError("word-of-mouth rate must be nonnegative");
    if (population.size() < 2)
        return;

    int full = static_cast<int>(std::floor(meetings_per_agent));
    double frac = meetings_per_agent - full;
    int rounds = full + ((frac > 0.0 && rng.uniform() < frac) ? 1 : 0);

    std::vector<std::size_t> order(population.size());
    for (int r = 0; r < rounds; ++r) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle(order, rng);
        for (std::size_t k = 0; k + 1 < order.size(); k += 2) {
            AgentMind& a = population[order[k]];
            AgentMind& b = population[order[k + 1]];
            std::size_t n = std::min(a.platforms.size(), b.platforms.size());

            // Both directions use pre-exchange beliefs and awareness.
            std::vector<double> a_says(n), b_says(n);
            std::vector<char> a_spoke(n), b_spoke(n);
            for (std::size_t p = 0; p < n; ++p) {
                a_says[p] = std::clamp(a.platforms[p].composite(weights), 0.0, 1.0);
                b_says[p] = std::clamp(b.platforms[p].composite(weights), 0.0, 1.0);
                a_spoke[p] = a.aware[p];
                b_spoke[p] = b.aware[p];
            }
            for (std::size_t p = 0; p < n; ++p) {
                if (a_spoke[p]) {
                    b.platforms[p].word_of_mouth =
                        update_component(b.platforms[p].word_of_mouth, a_says[p], kappa);
                    b.aware[p] = 1;
                }
                if (b_spoke[p]) {
                    a.platforms[p].word_of_mouth =
                        update_component(a.platforms[p].word_of_mouth, b_says[p], kappa);
                    a.aware[p] = 1;
                }
            }
        }
    }
}

void marketing_round(std::vector<AgentMind>& population, std::size_t platform, double reach,
                     double signal, double kappa, SplitMix64& rng) {
    if (!(reach >= 0.0 && reach <= 1.0))
        throw InputError("marketing reach must lie in [0,1]");
    for (AgentMind& agent : population) {
        if (platform >= agent.platforms.size())
            throw InputError("marketing round addressed a platform the population does not know");
        if (!agent.aware[platform] && rng.bernoulli(reach))
            agent.aware[platform] = 1;
        if (agent.aware[platform])
            agent.platforms[platform].marketing =
                update_component(agent.platforms[platform].marketing, signal, kappa);
    }
}

} // namespace ridemarket
