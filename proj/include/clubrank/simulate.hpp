#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clubrank/glm.hpp"
#include "clubrank/swiss.hpp"

namespace clubrank {

// Turns a strength difference into a (home win, draw, away win) triple.
// Two modes:
//  - fitted_trinomial: softmax of a fitted trinomial's linear predictors
//    (intercept + one delta coefficient per non-reference category);
//  - elo_implied: W from the Elo expected-score curve, with a draw share
//    p_draw = draw_rate * 4W(1-W) and the remainder split proportionally.
struct OutcomeModel {
    enum class Kind { fitted_trinomial, elo_implied };
    Kind kind = Kind::elo_implied;

    // fitted_trinomial coefficients (vs reference = away win)
    double home_const = 0.0, home_slope = 0.0;
    double draw_const = 0.0, draw_slope = 0.0;

    // elo_implied parameters
    double scale = 400.0;
    double home_advantage = 65.0;
    double draw_rate = 0.30;

    static OutcomeModel from_regression(const RegressionModel& model);
    static OutcomeModel implied(double scale, double home_advantage, double draw_rate);

    // {p_home_win, p_draw, p_away_win}; components in (0,1), sum 1. With
    // home = false the elo-implied mode drops the home bonus and the fitted
    // mode symmetrizes (average of p(delta) and the swap of p(-delta)).
    std::array<double, 3> probs(double delta, bool home) const;
};

std::array<double, 3> outcome_probs(const OutcomeModel& model, double delta_elo, bool home);

struct SimulationOptions {
    long runs = 10000;
    std::uint64_t seed = 0;
};

struct StandingsDistribution {
    std::vector<std::string> clubs;               // input club order
    std::vector<std::vector<double>> rank_probs;  // [club][rank-1]
    std::vector<double> expected_rank;
    std::vector<double> top8_prob;      // direct qualification band
    std::vector<double> band_9_24_prob; // play-off band
    long runs = 0;
    std::uint64_t seed = 0;
};

// Monte Carlo over the league phase: samples every fixture, scores 3/1/0,
// ranks by points, then head-to-head points among ties, then a seeded random
// order. Deterministic given (schedule, strengths, model, runs, seed).
StandingsDistribution simulate_league(const DrawInput& input, const Schedule& schedule,
                                      const std::map<std::string, double>& strengths,
                                      const OutcomeModel& model, const SimulationOptions& options);

struct SeedingPolicyResult {
    std::string name;
    double mean_spread = 0.0;       // opponent-strength sum spread, averaged over draws
    double rank_correlation = 0.0;  // Spearman: strength order vs expected finish
};

struct FairnessReport {
    SeedingPolicyResult policy_a;
    SeedingPolicyResult policy_b;
    long draws = 0;
    long runs_per_draw = 0;
    std::uint64_t seed = 0;
};

struct CompareOptions {
    long draws = 200;          // seeded schedule draws per policy
    long runs_per_draw = 200;  // league simulations per drawn schedule
    std::uint64_t seed = 0;
};

// Pots clubs by rating_a and rating_b, draws schedules under each policy,
// simulates with the true strengths and reports schedule balance plus the
// rank correlation between true strength and expected final rank.
FairnessReport compare_seedings(const std::vector<std::string>& clubs,
                                const std::vector<std::string>& associations,
                                const std::map<std::string, double>& rating_a,
                                const std::map<std::string, double>& rating_b,
                                const std::map<std::string, double>& true_strength,
                                const OutcomeModel& model, const CompareOptions& options);

// Pots by descending rating; club count must divide evenly into `n_pots`.
DrawInput pots_by_rating(const std::vector<std::string>& clubs,
                         const std::vector<std::string>& associations,
                         const std::map<std::string, double>& rating, std::size_t n_pots = 4);

// Spearman rank correlation with midranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

std::string standings_to_csv(const StandingsDistribution& dist);
std::string standings_to_json(const StandingsDistribution& dist);
std::string fairness_to_json(const FairnessReport& report);

}  // namespace clubrank
