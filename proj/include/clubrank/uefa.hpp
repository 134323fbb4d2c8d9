#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "clubrank/config.hpp"
#include "clubrank/records.hpp"

namespace clubrank {

// Match-point and bonus schedule for one rulebook era, applicable to seasons
// whose start year falls in [first_season, last_season].
struct PointsRules {
    int first_season = 0;
    int last_season = 9999;
    double win_points = 2.0;
    double draw_points = 1.0;
    // One bonus per (competition, stage) a club appears in that season.
    std::map<std::pair<Competition, Stage>, double> stage_bonuses;
    // Admitted by the format but empty by default (qualifying rounds are out
    // of the bundled sample).
    std::map<std::string, double> qualification_bonuses;

    void validate() const;  // all values >= 0
};

// Era-keyed rules. The default single era encodes the modern rulebook:
// win 2 / draw 1, Champions League round bonuses R16 5, QF 1, SF 1, final 1.
struct RulesTable {
    std::vector<PointsRules> eras;

    static RulesTable modern_default();
    static RulesTable from_config(const Config& config);

    const PointsRules& for_season(int start_year) const;  // throws ConfigError if uncovered
};

// Per-club per-season points plus association membership. Immutable once
// built; queries are thread-safe.
struct CoefficientLedger {
    std::map<std::pair<std::string, int>, double> club_points;  // (team, start year)
    std::map<std::string, std::string> membership;              // team -> association

    // Teams that scored (have an entry) for `season`, per association.
    std::vector<std::string> participants(const std::string& association, int season) const;
};

// Points one club earned in one season: win/draw points per match plus one
// bonus per (competition, stage) it appears in. `records` must already be
// limited to that club's UEFA-competition matches of that season.
double season_points(const std::vector<MatchRecord>& records, const std::string& team,
                     const PointsRules& rules);

// Folds a full match list into a ledger (UEFA competitions only; other
// records are ignored). Membership comes from coefficients.csv rows.
CoefficientLedger build_ledger(const std::vector<MatchRecord>& records, const RulesTable& rules,
                               const std::map<std::string, std::string>& membership);

// Mean seasonal points of the association's participating clubs.
double association_coefficient(const CoefficientLedger& ledger, const std::string& association,
                               int season);  // throws UndefinedValueError without participants

// Rolling coefficient at the start of `season`: the club's own points over the
// previous `window` seasons, floored by 20% of the association coefficient
// summed over the same window.
double club_coefficient(const CoefficientLedger& ledger, const std::string& team, int season,
                        int window = 5);

}  // namespace clubrank
