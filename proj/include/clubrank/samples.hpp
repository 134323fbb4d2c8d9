#pragma once

#include <string>
#include <vector>

#include "clubrank/records.hpp"

namespace clubrank {

enum class SampleFamily {
    group_match,
    knockout,
    group_ranking,        // oriented by UEFA coefficient
    group_ranking_elo,    // oriented by Elo
    group_match_trinomial
};

std::string to_string(SampleFamily family);

// One regression observation. `y` is 0/1 for the binary families; for the
// trinomial family it is 0 = away win, 1 = draw, 2 = home win (reference =
// away win downstream). Deltas are raw, never standardized.
struct Observation {
    int y = 0;
    double delta_uefa = 0.0;
    double delta_elo = 0.0;
    std::string season;
    SampleFamily tag = SampleFamily::group_match;
};

inline const std::vector<std::string> kTrinomialCategories = {"away win", "draw", "home win"};
inline constexpr int kTrinomialReference = 0;  // away win

enum class RankingConvention { by_uefa, by_elo };

// Decided CL group matches; y = 1 iff home win, deltas = home minus away.
std::vector<Observation> build_group_match_sample(const std::vector<MatchRecord>& records,
                                                  const RatingTable& ratings_uefa,
                                                  const RatingTable& ratings_elo);

// All CL group matches including draws.
std::vector<Observation> build_group_match_trinomial_sample(
    const std::vector<MatchRecord>& records, const RatingTable& ratings_uefa,
    const RatingTable& ratings_elo);

// Two-legged R16/QF/SF clashes; y = 1 iff the first-leg host advances (higher
// aggregate, then away goals). Finals never enter; single-leg-flagged ties are
// dropped. A leg without its pair raises PairingError; a tie level after away
// goals raises ValidationError (the CSV cannot express a shootout).
std::vector<Observation> build_knockout_sample(const std::vector<MatchRecord>& records,
                                               const RatingTable& ratings_uefa,
                                               const RatingTable& ratings_elo);

struct GroupRankingSample {
    std::vector<Observation> observations;
    std::size_t ties_excluded = 0;  // equal-Elo pairs dropped under by-elo
};

// Six pairwise comparisons per group, oriented from the higher-rated club
// under `convention`; y = 1 iff that club ranked higher.
GroupRankingSample build_group_ranking_sample(const std::vector<GroupStanding>& standings,
                                              const RatingTable& ratings_uefa,
                                              const RatingTable& ratings_elo,
                                              RankingConvention convention);

// The paper's period split: early = 2003/04-2011/12, late = 2012/13-2021/22
// without 2020/21. Seasons outside the study window fall in neither half.
struct PeriodSplit {
    std::vector<Observation> early;
    std::vector<Observation> late;
};
PeriodSplit split_periods(const std::vector<Observation>& sample);

struct DescriptiveStats {
    double mean = 0.0;
    double median = 0.0;
    double st_dev = 0.0;  // sample standard deviation (n - 1)
    double min = 0.0;
    double max = 0.0;
};
DescriptiveStats descriptive_stats(std::vector<double> values);  // throws on empty input

}  // namespace clubrank
