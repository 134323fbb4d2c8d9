#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clubrank/date.hpp"

namespace clubrank {

enum class Competition { cl, el, ecl, domestic_league, domestic_cup };
enum class Stage { group, r16, qf, sf, final_match, league_phase, other };

Competition parse_competition(const std::string& token);
Stage parse_stage(const std::string& token);
std::string to_string(Competition c);
std::string to_string(Stage s);

bool is_uefa_competition(Competition c);

// One played match as it arrives from matches.csv.
struct MatchRecord {
    std::string match_id;
    Date date;
    std::string season;  // label, e.g. "2003/04"
    Competition competition = Competition::cl;
    Stage stage = Stage::other;
    std::string home_team;
    std::string away_team;
    int home_goals = 0;
    int away_goals = 0;
    bool neutral_venue = false;
    bool behind_closed_doors = false;
    bool single_leg = false;

    int season_start_year() const { return parse_season_label(season); }
};

// Final group-stage table entry.
struct GroupStanding {
    std::string season;
    std::string group;  // "A".."H"
    std::string team;
    int rank = 0;  // 1..4
};

// One row of coefficients.csv: the club-coefficient rating snapshot taken at
// the start of `season`, plus the club's association.
struct CoefficientRow {
    std::string season;
    std::string team;
    std::string association;
    double uefa_points = 0.0;
};

// Ratings resolvable by (season label, team). Both the UEFA coefficients and
// the June-30 Elo snapshots are handed to the sample builders in this shape.
class RatingTable {
public:
    void set(const std::string& season, const std::string& team, double value) {
        values_[{season, team}] = value;
    }

    std::optional<double> lookup(const std::string& season, const std::string& team) const {
        auto it = values_.find({season, team});
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return values_.size(); }

private:
    std::map<std::pair<std::string, std::string>, double> values_;
};

}  // namespace clubrank
