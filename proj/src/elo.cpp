#include "clubrank/elo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "clubrank/errors.hpp"

namespace clubrank {

double MovRule::factor(int goal_diff) const {
    if (goal_diff < 0) throw DomainError("negative goal difference");
    if (table.empty()) return 1.0;
    const auto idx = static_cast<std::size_t>(goal_diff);
    if (idx < table.size()) return table[idx];
    return table.back() + tail_step * static_cast<double>(idx - (table.size() - 1));
}

bool MovRule::valid() const {
    if (tail_step < 0.0) return false;
    double prev = 1.0;
    for (double m : table) {
        if (m < 1.0 || m < prev || !std::isfinite(m)) return false;
        prev = m;
    }
    return true;
}

void EloParams::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("scale must be > 0");
    if (!(k_factor > 0.0) || !std::isfinite(k_factor)) throw DomainError("k_factor must be > 0");
    if (!std::isfinite(home_advantage)) throw DomainError("home_advantage must be finite");
    if (!std::isfinite(initial_rating)) throw DomainError("initial_rating must be finite");
    if (!mov.valid()) {
        throw ValidationError("margin-of-victory multipliers must be >= 1 and non-decreasing");
    }
}

MatchResult MatchResult::from_goals(int home_goals, int away_goals) {
    if (home_goals < 0 || away_goals < 0) throw DomainError("negative goals");
    MatchResult r{};
    r.goal_diff = std::abs(home_goals - away_goals);
    if (home_goals > away_goals) r.r = 1.0;
    else if (home_goals < away_goals) r.r = 0.0;
    else r.r = 0.5;
    return r;
}

double expected_score(double r_home, double r_away, const EloParams& params, bool neutral) {
    if (!std::isfinite(r_home) || !std::isfinite(r_away)) {
        throw DomainError("non-finite rating");
    }
    const double advantage = neutral ? 0.0 : params.home_advantage;
    const double delta = r_home + advantage - r_away;
    return 1.0 / (1.0 + std::pow(10.0, -delta / params.scale));
}

double update(EloState& state, const std::string& home, const std::string& away,
              const MatchResult& result, const EloParams& params, bool neutral) {
    if (home == away) throw DomainError("a team cannot play itself");
    if (result.r == 0.5 && result.goal_diff != 0) {
        throw DomainError("draw with nonzero goal difference");
    }
    if (result.r != 0.5 && result.goal_diff == 0) {
        throw DomainError("decisive result with zero goal difference");
    }

    double& r_home = state.ratings.try_emplace(home, params.initial_rating).first->second;
    double& r_away = state.ratings.try_emplace(away, params.initial_rating).first->second;

    const double w = expected_score(r_home, r_away, params, neutral);
    const double delta = params.k_factor * params.mov.factor(result.goal_diff) * (result.r - w);
    r_home += delta;
    r_away -= delta;
    return delta;
}

EloState EloTimeline::snapshot_at(Date date) const {
    if (date < start_) {
        throw DomainError("snapshot date " + date.to_string() + " is before timeline start " +
                          start_.to_string());
    }
    EloState state;
    state.as_of = date;
    for (const auto& ev : events_) {
        if (ev.date > date) break;
        state.ratings[ev.home] = ev.home_after;
        state.ratings[ev.away] = ev.away_after;
    }
    return state;
}

EloTimeline rate_history(const std::vector<MatchRecord>& records, const EloParams& params,
                         std::optional<Date> start) {
    params.validate();
    EloTimeline timeline(params, start.value_or(Date::floor()));

    std::vector<const MatchRecord*> ordered;
    ordered.reserve(records.size());
    for (const auto& r : records) ordered.push_back(&r);
    std::sort(ordered.begin(), ordered.end(), [](const MatchRecord* a, const MatchRecord* b) {
        if (a->date != b->date) return a->date < b->date;
        return a->match_id < b->match_id;
    });

    EloState state;
    state.as_of = timeline.start();
    for (const MatchRecord* rec : ordered) {
        if (rec->date < timeline.start()) {
            throw DomainError("match " + rec->match_id + " predates timeline start");
        }
        const MatchResult result = MatchResult::from_goals(rec->home_goals, rec->away_goals);
        update(state, rec->home_team, rec->away_team, result, params, rec->neutral_venue);
        state.as_of = rec->date;
        timeline.events_.push_back(EloTimeline::Event{
            rec->date, rec->match_id, rec->home_team, rec->away_team,
            state.ratings.at(rec->home_team), state.ratings.at(rec->away_team)});
    }
    timeline.final_state_ = std::move(state);
    return timeline;
}

std::string render_snapshot_csv(const EloTimeline& timeline, int first_season, int last_season) {
    std::ostringstream out;
    out << "season,team,rating\n";
    for (int year = first_season; year <= last_season; ++year) {
        const EloState snap = timeline.snapshot_at(season_rating_snapshot(year));
        for (const auto& [team, rating] : snap.ratings) {
            char value[32];
            std::snprintf(value, sizeof(value), "%.2f", rating);
            out << season_label(year) << ',' << team << ',' << value << '\n';
        }
    }
    return out.str();
}

}  // namespace clubrank
