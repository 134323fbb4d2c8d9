#include "clubrank/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "clubrank/errors.hpp"
#include "clubrank/rng.hpp"

namespace clubrank {

OutcomeModel OutcomeModel::from_regression(const RegressionModel& model) {
    if (!model.multinomial || model.categories.size() != 2) {
        throw DomainError("outcome model needs a trinomial fit (two non-reference categories)");
    }
    if (model.features.size() != 2) {
        throw DomainError("outcome model needs exactly one delta feature");
    }
    OutcomeModel out;
    out.kind = Kind::fitted_trinomial;
    for (std::size_t k = 0; k < model.categories.size(); ++k) {
        const double c = model.blocks[k][0].estimate;
        const double s = model.blocks[k][1].estimate;
        if (model.categories[k] == "home win") {
            out.home_const = c;
            out.home_slope = s;
        } else if (model.categories[k] == "draw") {
            out.draw_const = c;
            out.draw_slope = s;
        } else {
            throw DomainError("unexpected category '" + model.categories[k] +
                              "'; expected home win / draw vs away win");
        }
    }
    return out;
}

OutcomeModel OutcomeModel::implied(double scale, double home_advantage, double draw_rate) {
    if (!(scale > 0) || draw_rate < 0.0 || draw_rate >= 1.0) {
        throw DomainError("elo-implied model needs scale > 0 and draw_rate in [0,1)");
    }
    OutcomeModel out;
    out.kind = Kind::elo_implied;
    out.scale = scale;
    out.home_advantage = home_advantage;
    out.draw_rate = draw_rate;
    return out;
}

std::array<double, 3> OutcomeModel::probs(double delta, bool home) const {
    if (!std::isfinite(delta)) throw DomainError("non-finite strength difference");
    if (kind == Kind::elo_implied) {
        const double advantage = home ? home_advantage : 0.0;
        const double w = 1.0 / (1.0 + std::pow(10.0, -(delta + advantage) / scale));
        const double p_draw = draw_rate * 4.0 * w * (1.0 - w);
        return {(1.0 - p_draw) * w, p_draw, (1.0 - p_draw) * (1.0 - w)};
    }

    auto softmax = [&](double d) -> std::array<double, 3> {
        const double eta_home = home_const + home_slope * d;
        const double eta_draw = draw_const + draw_slope * d;
        const double top = std::max({0.0, eta_home, eta_draw});
        const double e_away = std::exp(-top);
        const double e_home = std::exp(eta_home - top);
        const double e_draw = std::exp(eta_draw - top);
        const double total = e_away + e_home + e_draw;
        return {e_home / total, e_draw / total, e_away / total};
    };

    if (home) return softmax(delta);
    // Neutral ground: average out the home bias.
    const auto straight = softmax(delta);
    const auto mirrored = softmax(-delta);
    return {0.5 * (straight[0] + mirrored[2]), 0.5 * (straight[1] + mirrored[1]),
            0.5 * (straight[2] + mirrored[0])};
}

std::array<double, 3> outcome_probs(const OutcomeModel& model, double delta_elo, bool home) {
    return model.probs(delta_elo, home);
}

namespace {

// Final table of one simulated run: points desc, then head-to-head points
// among the tied set, then a seeded random order.
std::vector<int> rank_clubs(const std::vector<int>& points,
                            const std::vector<std::array<int, 3>>& fixture_results,
                            const std::vector<Fixture>& fixtures, Rng& rng) {
    const std::size_t n = points.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    // Random permutation first so residual ties break randomly but
    // deterministically under the run's generator.
    std::vector<int> lottery(n);
    std::iota(lottery.begin(), lottery.end(), 0);
    rng.shuffle(lottery);
    std::vector<int> lottery_pos(n);
    for (std::size_t i = 0; i < n; ++i) lottery_pos[static_cast<std::size_t>(lottery[i])] = static_cast<int>(i);

    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (points[static_cast<std::size_t>(a)] != points[static_cast<std::size_t>(b)]) {
            return points[static_cast<std::size_t>(a)] > points[static_cast<std::size_t>(b)];
        }
        return lottery_pos[static_cast<std::size_t>(a)] < lottery_pos[static_cast<std::size_t>(b)];
    });

    // Head-to-head pass: within each equal-points block, re-rank by points
    // earned in fixtures among the block.
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && points[static_cast<std::size_t>(order[j])] ==
                            points[static_cast<std::size_t>(order[i])]) {
            ++j;
        }
        if (j - i > 1) {
            std::vector<char> in_block(n, 0);
            for (std::size_t k = i; k < j; ++k) in_block[static_cast<std::size_t>(order[k])] = 1;
            std::vector<int> h2h(n, 0);
            for (std::size_t f = 0; f < fixtures.size(); ++f) {
                const auto h = static_cast<std::size_t>(fixtures[f].home);
                const auto a = static_cast<std::size_t>(fixtures[f].away);
                if (!in_block[h] || !in_block[a]) continue;
                h2h[h] += fixture_results[f][0];
                h2h[a] += fixture_results[f][1];
            }
            std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(i),
                             order.begin() + static_cast<std::ptrdiff_t>(j), [&](int a, int b) {
                                 return h2h[static_cast<std::size_t>(a)] >
                                        h2h[static_cast<std::size_t>(b)];
                             });
        }
        i = j;
    }
    return order;
}

}  // namespace

StandingsDistribution simulate_league(const DrawInput& input, const Schedule& schedule,
                                      const std::map<std::string, double>& strengths,
                                      const OutcomeModel& model,
                                      const SimulationOptions& options) {
    if (options.runs <= 0) throw DomainError("runs must be positive");
    const std::size_t n = input.clubs.size();
    std::vector<double> strength(n);
    for (std::size_t c = 0; c < n; ++c) {
        auto it = strengths.find(input.clubs[c]);
        if (it == strengths.end()) {
            throw DomainError("no strength for club '" + input.clubs[c] + "'");
        }
        strength[c] = it->second;
    }

    // Fixture probabilities are run-independent; precompute the cumulative
    // triples once.
    const std::size_t n_fixtures = schedule.fixtures.size();
    std::vector<std::array<double, 2>> cumulative(n_fixtures);
    for (std::size_t f = 0; f < n_fixtures; ++f) {
        const auto& fx = schedule.fixtures[f];
        const auto p = model.probs(strength[static_cast<std::size_t>(fx.home)] -
                                       strength[static_cast<std::size_t>(fx.away)],
                                   true);
        const double sum = p[0] + p[1] + p[2];
        if (std::fabs(sum - 1.0) > 1e-12) throw DomainError("outcome probabilities do not sum to 1");
        cumulative[f] = {p[0], p[0] + p[1]};
    }

    StandingsDistribution dist;
    dist.clubs = input.clubs;
    dist.rank_probs.assign(n, std::vector<double>(n, 0.0));
    dist.runs = options.runs;
    dist.seed = options.seed;

    std::vector<int> points(n);
    // Points per fixture: {home points, away points, unused}.
    std::vector<std::array<int, 3>> fixture_results(n_fixtures);

    for (long run = 0; run < options.runs; ++run) {
        Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(run)));
        std::fill(points.begin(), points.end(), 0);
        for (std::size_t f = 0; f < n_fixtures; ++f) {
            const double u = rng.uniform01();
            const auto& fx = schedule.fixtures[f];
            if (u < cumulative[f][0]) {
                fixture_results[f] = {3, 0, 0};
            } else if (u < cumulative[f][1]) {
                fixture_results[f] = {1, 1, 0};
            } else {
                fixture_results[f] = {0, 3, 0};
            }
            points[static_cast<std::size_t>(fx.home)] += fixture_results[f][0];
            points[static_cast<std::size_t>(fx.away)] += fixture_results[f][1];
        }
        const std::vector<int> order = rank_clubs(points, fixture_results, schedule.fixtures, rng);
        for (std::size_t pos = 0; pos < n; ++pos) {
            dist.rank_probs[static_cast<std::size_t>(order[pos])][pos] += 1.0;
        }
    }

    const double inv_runs = 1.0 / static_cast<double>(options.runs);
    dist.expected_rank.assign(n, 0.0);
    dist.top8_prob.assign(n, 0.0);
    dist.band_9_24_prob.assign(n, 0.0);
    const std::size_t top_band = std::min<std::size_t>(8, n);
    const std::size_t mid_band_end = std::min<std::size_t>(24, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            dist.rank_probs[c][r] *= inv_runs;
            dist.expected_rank[c] += dist.rank_probs[c][r] * static_cast<double>(r + 1);
            if (r < top_band) dist.top8_prob[c] += dist.rank_probs[c][r];
            else if (r < mid_band_end) dist.band_9_24_prob[c] += dist.rank_probs[c][r];
        }
    }
    return dist;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw DomainError("spearman needs paired data");
    auto midranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
        std::vector<double> ranks(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && v[order[j]] == v[order[i]]) ++j;
            const double midrank = 0.5 * static_cast<double>(i + 1 + j);
            for (std::size_t k = i; k < j; ++k) ranks[order[k]] = midrank;
            i = j;
        }
        return ranks;
    };
    const std::vector<double> ra = midranks(a);
    const std::vector<double> rb = midranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) {
        throw UndefinedValueError("spearman undefined for a constant ranking");
    }
    return cov / std::sqrt(va * vb);
}

DrawInput pots_by_rating(const std::vector<std::string>& clubs,
                         const std::vector<std::string>& associations,
                         const std::map<std::string, double>& rating, std::size_t n_pots) {
    if (clubs.size() != associations.size()) {
        throw DomainError("clubs/associations size mismatch");
    }
    if (n_pots == 0 || clubs.size() % n_pots != 0) {
        throw DomainError("club count must divide evenly into pots");
    }
    std::vector<std::size_t> order(clubs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const double rx = rating.at(clubs[x]);
        const double ry = rating.at(clubs[y]);
        if (rx != ry) return rx > ry;
        return clubs[x] < clubs[y];  // deterministic tie-break
    });

    DrawInput input;
    input.clubs = clubs;
    input.association = associations;
    const std::size_t pot_size = clubs.size() / n_pots;
    for (std::size_t p = 0; p < n_pots; ++p) {
        std::vector<int> pot;
        for (std::size_t i = 0; i < pot_size; ++i) {
            pot.push_back(static_cast<int>(order[p * pot_size + i]));
        }
        input.pots.push_back(std::move(pot));
    }
    input.validate();
    return input;
}

namespace {

SeedingPolicyResult evaluate_policy(const std::string& name,
                                    const std::vector<std::string>& clubs,
                                    const std::vector<std::string>& associations,
                                    const std::map<std::string, double>& rating,
                                    const std::map<std::string, double>& true_strength,
                                    const OutcomeModel& model, const CompareOptions& options,
                                    std::uint64_t policy_stream) {
    const DrawInput input = pots_by_rating(clubs, associations, rating);

    std::vector<double> strength_by_club;
    for (const auto& club : clubs) strength_by_club.push_back(true_strength.at(club));

    double spread_total = 0.0;
    std::vector<double> expected_rank(clubs.size(), 0.0);
    for (long d = 0; d < options.draws; ++d) {
        const std::uint64_t draw_seed =
            derive_seed(options.seed, policy_stream * 1000003ULL + static_cast<std::uint64_t>(d));
        const Schedule schedule = draw(input, draw_seed);
        spread_total += balance_metrics(input, schedule, true_strength).spread;

        SimulationOptions sim;
        sim.runs = options.runs_per_draw;
        sim.seed = derive_seed(draw_seed, 1);
        const StandingsDistribution dist =
            simulate_league(input, schedule, true_strength, model, sim);
        for (std::size_t c = 0; c < clubs.size(); ++c) {
            expected_rank[c] += dist.expected_rank[c];
        }
    }
    for (double& r : expected_rank) r /= static_cast<double>(options.draws);

    SeedingPolicyResult result;
    result.name = name;
    result.mean_spread = spread_total / static_cast<double>(options.draws);
    // Correlate strength order (1 = strongest) with expected finishing rank.
    std::vector<double> strength_rank(clubs.size());
    for (std::size_t c = 0; c < clubs.size(); ++c) {
        strength_rank[c] = -strength_by_club[c];  // spearman is monotone-invariant
    }
    result.rank_correlation = spearman(strength_rank, expected_rank);
    return result;
}

}  // namespace

FairnessReport compare_seedings(const std::vector<std::string>& clubs,
                                const std::vector<std::string>& associations,
                                const std::map<std::string, double>& rating_a,
                                const std::map<std::string, double>& rating_b,
                                const std::map<std::string, double>& true_strength,
                                const OutcomeModel& model, const CompareOptions& options) {
    if (options.draws <= 0 || options.runs_per_draw <= 0) {
        throw DomainError("draws and runs_per_draw must be positive");
    }
    FairnessReport report;
    report.policy_a = evaluate_policy("rating_a", clubs, associations, rating_a, true_strength,
                                      model, options, 1);
    report.policy_b = evaluate_policy("rating_b", clubs, associations, rating_b, true_strength,
                                      model, options, 2);
    report.draws = options.draws;
    report.runs_per_draw = options.runs_per_draw;
    report.seed = options.seed;
    return report;
}

std::string standings_to_csv(const StandingsDistribution& dist) {
    std::ostringstream out;
    out << "club,rank,probability\n";
    out.precision(12);
    for (std::size_t c = 0; c < dist.clubs.size(); ++c) {
        for (std::size_t r = 0; r < dist.clubs.size(); ++r) {
            out << dist.clubs[c] << ',' << r + 1 << ',' << dist.rank_probs[c][r] << "\n";
        }
    }
    return out.str();
}

std::string standings_to_json(const StandingsDistribution& dist) {
    nlohmann::ordered_json j;
    j["runs"] = dist.runs;
    j["seed"] = dist.seed;
    j["tie_breakers"] = {"points", "head-to-head points", "seeded random order"};
    nlohmann::ordered_json clubs = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < dist.clubs.size(); ++c) {
        nlohmann::ordered_json item;
        item["club"] = dist.clubs[c];
        item["expected_rank"] = dist.expected_rank[c];
        item["top8_prob"] = dist.top8_prob[c];
        item["band_9_24_prob"] = dist.band_9_24_prob[c];
        item["rank_probs"] = dist.rank_probs[c];
        clubs.push_back(item);
    }
    j["clubs"] = clubs;
    return j.dump(2) + "\n";
}

std::string fairness_to_json(const FairnessReport& report) {
    nlohmann::ordered_json j;
    j["draws"] = report.draws;
    j["runs_per_draw"] = report.runs_per_draw;
    j["seed"] = report.seed;
    auto policy = [](const SeedingPolicyResult& p) {
        nlohmann::ordered_json item;
        item["name"] = p.name;
        item["mean_opponent_strength_spread"] = p.mean_spread;
        item["strength_rank_correlation"] = p.rank_correlation;
        return item;
    };
    j["policy_a"] = policy(report.policy_a);
    j["policy_b"] = policy(report.policy_b);
    return j.dump(2) + "\n";
}

}  // namespace clubrank
