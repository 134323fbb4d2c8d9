#include "clubrank/uefa.hpp"

#include <algorithm>
#include <set>

#include "clubrank/errors.hpp"

namespace clubrank {

void PointsRules::validate() const {
    if (win_points < 0 || draw_points < 0) throw ValidationError("match points must be >= 0");
    for (const auto& [key, value] : stage_bonuses) {
        if (value < 0) throw ValidationError("stage bonus must be >= 0");
    }
    for (const auto& [key, value] : qualification_bonuses) {
        if (value < 0) throw ValidationError("qualification bonus must be >= 0");
    }
    if (first_season > last_season) throw ValidationError("empty rules era");
}

RulesTable RulesTable::modern_default() {
    PointsRules rules;
    rules.first_season = 0;
    rules.last_season = 9999;
    rules.win_points = 2.0;
    rules.draw_points = 1.0;
    rules.stage_bonuses[{Competition::cl, Stage::r16}] = 5.0;
    rules.stage_bonuses[{Competition::cl, Stage::qf}] = 1.0;
    rules.stage_bonuses[{Competition::cl, Stage::sf}] = 1.0;
    rules.stage_bonuses[{Competition::cl, Stage::final_match}] = 1.0;
    return RulesTable{{rules}};
}

RulesTable RulesTable::from_config(const Config& config) {
    const auto sections = config.find_all("points");
    if (sections.empty()) return modern_default();

    RulesTable table;
    for (const ConfigSection* section : sections) {
        PointsRules rules;
        rules.first_season = section->get_int("first_season", 0);
        rules.last_season = section->get_int("last_season", 9999);
        rules.win_points = section->get_double("win", 2.0);
        rules.draw_points = section->get_double("draw", 1.0);
        // Bonus keys look like `bonus_cl_r16 = 5`.
        for (const auto& [key, raw] : section->values) {
            if (key.rfind("bonus_", 0) != 0) continue;
            const auto rest = key.substr(6);
            const auto sep = rest.find('_');
            if (sep == std::string::npos) {
                throw ConfigError("bad bonus key '" + key + "', expected bonus_<comp>_<stage>");
            }
            std::string comp_token = rest.substr(0, sep);
            std::string stage_token = rest.substr(sep + 1);
            std::transform(comp_token.begin(), comp_token.end(), comp_token.begin(), ::toupper);
            if (stage_token == "r16") stage_token = "R16";
            else if (stage_token == "qf") stage_token = "QF";
            else if (stage_token == "sf") stage_token = "SF";
            rules.stage_bonuses[{parse_competition(comp_token), parse_stage(stage_token)}] =
                section->get_double(key, 0.0);
        }
        rules.validate();
        table.eras.push_back(std::move(rules));
    }
    return table;
}

const PointsRules& RulesTable::for_season(int start_year) const {
    for (const auto& era : eras) {
        if (start_year >= era.first_season && start_year <= era.last_season) return era;
    }
    throw ConfigError("no points rules cover season " + season_label(start_year));
}

std::vector<std::string> CoefficientLedger::participants(const std::string& association,
                                                         int season) const {
    std::vector<std::string> out;
    for (const auto& [key, points] : club_points) {
        if (key.second != season) continue;
        auto member = membership.find(key.first);
        if (member != membership.end() && member->second == association) {
            out.push_back(key.first);
        }
    }
    return out;
}

double season_points(const std::vector<MatchRecord>& records, const std::string& team,
                     const PointsRules& rules) {
    rules.validate();
    double points = 0.0;
    std::set<std::pair<Competition, Stage>> stages_played;
    for (const auto& rec : records) {
        if (!is_uefa_competition(rec.competition)) {
            throw ValidationError("season_points asked to score non-UEFA match " + rec.match_id);
        }
        const bool is_home = rec.home_team == team;
        const bool is_away = rec.away_team == team;
        if (!is_home && !is_away) {
            throw ValidationError("match " + rec.match_id + " does not involve " + team);
        }
        const int own = is_home ? rec.home_goals : rec.away_goals;
        const int other = is_home ? rec.away_goals : rec.home_goals;
        if (own > other) points += rules.win_points;
        else if (own == other) points += rules.draw_points;
        stages_played.insert({rec.competition, rec.stage});
    }
    for (const auto& key : stages_played) {
        auto bonus = rules.stage_bonuses.find(key);
        if (bonus != rules.stage_bonuses.end()) points += bonus->second;
    }
    return points;
}

CoefficientLedger build_ledger(const std::vector<MatchRecord>& records, const RulesTable& rules,
                               const std::map<std::string, std::string>& membership) {
    // Bucket matches by (team, season), then score each bucket.
    std::map<std::pair<std::string, int>, std::vector<MatchRecord>> buckets;
    for (const auto& rec : records) {
        if (!is_uefa_competition(rec.competition)) continue;
        const int year = rec.season_start_year();
        buckets[{rec.home_team, year}].push_back(rec);
        buckets[{rec.away_team, year}].push_back(rec);
    }

    CoefficientLedger ledger;
    ledger.membership = membership;
    for (const auto& [key, matches] : buckets) {
        ledger.club_points[key] =
            season_points(matches, key.first, rules.for_season(key.second));
    }
    return ledger;
}

double association_coefficient(const CoefficientLedger& ledger, const std::string& association,
                               int season) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& [key, points] : ledger.club_points) {
        if (key.second != season) continue;
        auto member = ledger.membership.find(key.first);
        if (member != ledger.membership.end() && member->second == association) {
            sum += points;
            ++count;
        }
    }
    if (count == 0) {
        throw UndefinedValueError("association '" + association + "' has no participants in " +
                                  season_label(season));
    }
    return sum / static_cast<double>(count);
}

double club_coefficient(const CoefficientLedger& ledger, const std::string& team, int season,
                        int window) {
    if (window <= 0) throw DomainError("window must be positive");
    auto member = ledger.membership.find(team);
    if (member == ledger.membership.end()) {
        throw ConfigError("team '" + team + "' has no association membership");
    }

    double own = 0.0;
    double floor = 0.0;
    for (int year = season - window; year < season; ++year) {
        auto points = ledger.club_points.find({team, year});
        if (points != ledger.club_points.end()) own += points->second;
        // Seasons where the association fielded nobody contribute 0 to the floor.
        try {
            floor += 0.2 * association_coefficient(ledger, member->second, year);
        } catch (const UndefinedValueError&) {
        }
    }
    return std::max(own, floor);
}

}  // namespace clubrank
