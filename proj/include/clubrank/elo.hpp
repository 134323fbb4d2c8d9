#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clubrank/date.hpp"
#include "clubrank/records.hpp"

namespace clubrank {

// Margin-of-victory multiplier: a lookup table indexed by goal difference,
// extended linearly past the last entry. Default is the common football-Elo
// convention (x1 up to one goal, x1.5 at two, x1.75 at three, +1/8 per extra
// goal beyond that).
struct MovRule {
    std::vector<double> table{1.0, 1.0, 1.5, 1.75};  // index = goal diff
    double tail_step = 0.125;

    double factor(int goal_diff) const;
    bool valid() const;  // >= 1 everywhere and non-decreasing
};

struct EloParams {
    double scale = 400.0;          // rating points per decade of odds
    double k_factor = 20.0;
    double home_advantage = 65.0;  // added to the home side on non-neutral venues
    double initial_rating = 1500.0;
    MovRule mov;

    void validate() const;  // throws DomainError / ValidationError
};

// Match outcome from the home perspective: 1 win, 0.5 draw, 0 loss.
struct MatchResult {
    double r;
    int goal_diff;  // absolute, >= 0

    static MatchResult from_goals(int home_goals, int away_goals);
};

struct EloState {
    std::map<std::string, double> ratings;
    Date as_of = Date::floor();

    double rating_or(const std::string& team, double fallback) const {
        auto it = ratings.find(team);
        return it == ratings.end() ? fallback : it->second;
    }
};

// Expected score of the home side. Implemented so the higher-rated side gets
// W > 0.5; home advantage is added to the home rating on non-neutral venues.
double expected_score(double r_home, double r_away, const EloParams& params, bool neutral);

// Applies one match. Both sides are auto-initialized at initial_rating when
// absent. Returns the home side's rating change; the away side moves by the
// exact negation, so the rating sum is conserved.
double update(EloState& state, const std::string& home, const std::string& away,
              const MatchResult& result, const EloParams& params, bool neutral);

// Full replay of a match history, queryable at any date.
class EloTimeline {
public:
    struct Event {
        Date date;
        std::string match_id;
        std::string home;
        std::string away;
        double home_after;
        double away_after;
    };

    EloTimeline(EloParams params, Date start) : params_(std::move(params)), start_(start) {}

    const EloParams& params() const { return params_; }
    Date start() const { return start_; }
    const std::vector<Event>& events() const { return events_; }
    const EloState& final_state() const { return final_state_; }

    // Ratings after every match dated <= `date`. Teams without a match by then
    // are absent from the map (they are still at initial_rating).
    EloState snapshot_at(Date date) const;  // throws DomainError before start

private:
    friend EloTimeline rate_history(const std::vector<MatchRecord>&, const EloParams&,
                                    std::optional<Date>);
    EloParams params_;
    Date start_;
    std::vector<Event> events_;
    EloState final_state_;
};

// Replays all matches in chronological order (ties broken by match_id).
EloTimeline rate_history(const std::vector<MatchRecord>& records, const EloParams& params,
                         std::optional<Date> start = std::nullopt);

// Writes `season,team,rating` (two decimals) for each season start year in
// [first_season, last_season], using the June-30 snapshot before each season.
std::string render_snapshot_csv(const EloTimeline& timeline, int first_season, int last_season);

}  // namespace clubrank
