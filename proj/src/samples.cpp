#include "clubrank/samples.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "clubrank/errors.hpp"

namespace clubrank {

namespace {

double rating_or_throw(const RatingTable& table, const std::string& season,
                       const std::string& team) {
    auto value = table.lookup(season, team);
    if (!value) throw UnresolvedRatingError(team, season);
    return *value;
}

Observation make_group_observation(const MatchRecord& rec, const RatingTable& uefa,
                                   const RatingTable& elo, SampleFamily tag) {
    Observation obs;
    obs.season = rec.season;
    obs.tag = tag;
    obs.delta_uefa = rating_or_throw(uefa, rec.season, rec.home_team) -
                     rating_or_throw(uefa, rec.season, rec.away_team);
    obs.delta_elo = rating_or_throw(elo, rec.season, rec.home_team) -
                    rating_or_throw(elo, rec.season, rec.away_team);
    return obs;
}

bool is_group_match(const MatchRecord& rec) {
    return rec.competition == Competition::cl && rec.stage == Stage::group;
}

}  // namespace

std::string to_string(SampleFamily family) {
    switch (family) {
        case SampleFamily::group_match: return "group-match";
        case SampleFamily::knockout: return "knockout";
        case SampleFamily::group_ranking: return "group-ranking";
        case SampleFamily::group_ranking_elo: return "group-ranking-elo";
        case SampleFamily::group_match_trinomial: return "group-match-trinomial";
    }
    return "?";
}

std::vector<Observation> build_group_match_sample(const std::vector<MatchRecord>& records,
                                                  const RatingTable& ratings_uefa,
                                                  const RatingTable& ratings_elo) {
    std::vector<Observation> sample;
    for (const auto& rec : records) {
        if (!is_group_match(rec)) continue;
        if (rec.home_goals == rec.away_goals) continue;  // draws are excluded
        Observation obs =
            make_group_observation(rec, ratings_uefa, ratings_elo, SampleFamily::group_match);
        obs.y = rec.home_goals > rec.away_goals ? 1 : 0;
        sample.push_back(std::move(obs));
    }
    return sample;
}

std::vector<Observation> build_group_match_trinomial_sample(
    const std::vector<MatchRecord>& records, const RatingTable& ratings_uefa,
    const RatingTable& ratings_elo) {
    std::vector<Observation> sample;
    for (const auto& rec : records) {
        if (!is_group_match(rec)) continue;
        Observation obs = make_group_observation(rec, ratings_uefa, ratings_elo,
                                                 SampleFamily::group_match_trinomial);
        if (rec.home_goals > rec.away_goals) obs.y = 2;
        else if (rec.home_goals == rec.away_goals) obs.y = 1;
        else obs.y = 0;
        sample.push_back(std::move(obs));
    }
    return sample;
}

std::vector<Observation> build_knockout_sample(const std::vector<MatchRecord>& records,
                                               const RatingTable& ratings_uefa,
                                               const RatingTable& ratings_elo) {
    // Key ties by season, stage and the unordered club pair.
    using TieKey = std::tuple<std::string, Stage, std::string, std::string>;
    std::map<TieKey, std::vector<const MatchRecord*>> ties;
    for (const auto& rec : records) {
        if (rec.competition != Competition::cl) continue;
        if (rec.stage != Stage::r16 && rec.stage != Stage::qf && rec.stage != Stage::sf) continue;
        auto pair = std::minmax(rec.home_team, rec.away_team);
        ties[{rec.season, rec.stage, pair.first, pair.second}].push_back(&rec);
    }

    std::vector<Observation> sample;
    for (auto& [key, legs] : ties) {
        const auto tie_name = std::get<2>(key) + " vs " + std::get<3>(key) + " (" +
                              std::get<0>(key) + " " + to_string(std::get<1>(key)) + ")";
        if (legs.size() == 1) {
            if (legs.front()->single_leg) continue;  // 2019/20 single-leg rounds are dropped
            throw PairingError("tie " + tie_name + " has one leg and no single_leg flag");
        }
        if (legs.size() != 2) {
            throw PairingError("tie " + tie_name + " has " + std::to_string(legs.size()) +
                               " legs");
        }
        std::sort(legs.begin(), legs.end(), [](const MatchRecord* a, const MatchRecord* b) {
            if (a->date != b->date) return a->date < b->date;
            return a->match_id < b->match_id;
        });
        const MatchRecord& first = *legs[0];
        const MatchRecord& second = *legs[1];
        if (first.single_leg || second.single_leg) {
            throw PairingError("tie " + tie_name + " is flagged single_leg but has two legs");
        }
        if (first.home_team != second.away_team || first.away_team != second.home_team) {
            throw PairingError("tie " + tie_name + " legs do not mirror home/away");
        }

        const int host_aggregate = first.home_goals + second.away_goals;
        const int other_aggregate = first.away_goals + second.home_goals;
        bool host_advances;
        if (host_aggregate != other_aggregate) {
            host_advances = host_aggregate > other_aggregate;
        } else if (second.away_goals != first.away_goals) {
            host_advances = second.away_goals > first.away_goals;  // away-goals rule
        } else {
            throw ValidationError("tie " + tie_name +
                                  " is level after away goals; outcome not reconstructible from "
                                  "scores");
        }

        Observation obs;
        obs.season = first.season;
        obs.tag = SampleFamily::knockout;
        obs.y = host_advances ? 1 : 0;
        obs.delta_uefa = rating_or_throw(ratings_uefa, first.season, first.home_team) -
                         rating_or_throw(ratings_uefa, first.season, first.away_team);
        obs.delta_elo = rating_or_throw(ratings_elo, first.season, first.home_team) -
                        rating_or_throw(ratings_elo, first.season, first.away_team);
        sample.push_back(std::move(obs));
    }
    return sample;
}

GroupRankingSample build_group_ranking_sample(const std::vector<GroupStanding>& standings,
                                              const RatingTable& ratings_uefa,
                                              const RatingTable& ratings_elo,
                                              RankingConvention convention) {
    std::map<std::pair<std::string, std::string>, std::vector<const GroupStanding*>> groups;
    for (const auto& s : standings) groups[{s.season, s.group}].push_back(&s);

    GroupRankingSample result;
    for (auto& [key, members] : groups) {
        const std::string group_name = key.first + " group " + key.second;
        if (members.size() != 4) {
            throw ValidationError(group_name + " has " + std::to_string(members.size()) +
                                  " teams, expected 4");
        }
        std::sort(members.begin(), members.end(),
                  [](const GroupStanding* a, const GroupStanding* b) { return a->rank < b->rank; });
        for (int expected = 1; expected <= 4; ++expected) {
            if (members[static_cast<std::size_t>(expected - 1)]->rank != expected) {
                throw ValidationError(group_name + " ranks are not {1,2,3,4}");
            }
        }

        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = a + 1; b < 4; ++b) {
                const GroupStanding& ta = *members[a];  // ta ranks higher (smaller rank)
                const GroupStanding& tb = *members[b];
                const double uefa_a = rating_or_throw(ratings_uefa, ta.season, ta.team);
                const double uefa_b = rating_or_throw(ratings_uefa, tb.season, tb.team);
                const double elo_a = rating_or_throw(ratings_elo, ta.season, ta.team);
                const double elo_b = rating_or_throw(ratings_elo, tb.season, tb.team);

                bool a_is_favorite;  // favorite = higher-rated under the convention
                if (convention == RankingConvention::by_uefa) {
                    if (uefa_a == uefa_b) {
                        throw ValidationError("equal coefficients within " + group_name + " (" +
                                              ta.team + ", " + tb.team + ")");
                    }
                    a_is_favorite = uefa_a > uefa_b;
                } else {
                    if (elo_a == elo_b) {
                        ++result.ties_excluded;
                        continue;
                    }
                    a_is_favorite = elo_a > elo_b;
                }

                Observation obs;
                obs.season = ta.season;
                obs.tag = convention == RankingConvention::by_uefa ? SampleFamily::group_ranking
                                                                   : SampleFamily::group_ranking_elo;
                // ta already ranks higher, so y = 1 iff the favorite is ta.
                obs.y = a_is_favorite ? 1 : 0;
                const double sign = a_is_favorite ? 1.0 : -1.0;
                obs.delta_uefa = sign * (uefa_a - uefa_b);
                obs.delta_elo = sign * (elo_a - elo_b);
                result.observations.push_back(std::move(obs));
            }
        }
    }
    return result;
}

PeriodSplit split_periods(const std::vector<Observation>& sample) {
    PeriodSplit split;
    for (const auto& obs : sample) {
        const int year = parse_season_label(obs.season);
        if (year >= 2003 && year <= 2011) {
            split.early.push_back(obs);
        } else if (year >= 2012 && year <= 2021 && year != 2020) {
            split.late.push_back(obs);
        }
    }
    return split;
}

DescriptiveStats descriptive_stats(std::vector<double> values) {
    if (values.empty()) throw UndefinedValueError("descriptive_stats on empty input");
    DescriptiveStats stats;
    const std::size_t n = values.size();

    double sum = 0.0;
    for (double v : values) sum += v;
    stats.mean = sum / static_cast<double>(n);

    double ss = 0.0;
    for (double v : values) ss += (v - stats.mean) * (v - stats.mean);
    stats.st_dev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;

    std::sort(values.begin(), values.end());
    stats.min = values.front();
    stats.max = values.back();
    stats.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    return stats;
}

}  // namespace clubrank
