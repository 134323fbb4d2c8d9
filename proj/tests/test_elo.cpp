#include <doctest.h>

#include <cmath>

#include "clubrank/elo.hpp"
#include "clubrank/errors.hpp"
#include "clubrank/rng.hpp"

using namespace clubrank;

namespace {

EloParams neutral_params() {
    EloParams p;
    p.home_advantage = 0.0;
    return p;
}

MatchRecord match(const std::string& id, const std::string& date, const std::string& home,
                  const std::string& away, int hg, int ag, bool neutral = true) {
    MatchRecord rec;
    rec.match_id = id;
    rec.date = Date::parse(date);
    rec.season = season_label(rec.date.month >= 7 ? rec.date.year : rec.date.year - 1);
    rec.competition = Competition::domestic_league;
    rec.stage = Stage::other;
    rec.home_team = home;
    rec.away_team = away;
    rec.home_goals = hg;
    rec.away_goals = ag;
    rec.neutral_venue = neutral;
    return rec;
}

}  // namespace

TEST_CASE("expected score: symmetry, scale point, home advantage") {
    const EloParams p = neutral_params();
    CHECK(expected_score(1500, 1500, p, true) == doctest::Approx(0.5).epsilon(1e-15));
    // One full scale of rating difference gives 10:1 odds.
    CHECK(expected_score(1900, 1500, p, true) == doctest::Approx(10.0 / 11.0).epsilon(1e-12));

    EloParams with_home = p;
    with_home.home_advantage = 65.0;
    const double w = expected_score(1500, 1500, with_home, false);
    CHECK(w == doctest::Approx(1.0 / (1.0 + std::pow(10.0, -65.0 / 400.0))).epsilon(1e-12));
    CHECK(w == doctest::Approx(0.5926).epsilon(1e-4));
    // Neutral venue ignores the bonus.
    CHECK(expected_score(1500, 1500, with_home, true) == doctest::Approx(0.5));

    CHECK_THROWS_AS(expected_score(std::nan(""), 1500, p, true), DomainError);
}

TEST_CASE("expected score favors the higher-rated side and is monotone") {
    const EloParams p = neutral_params();
    double prev = 0.0;
    for (double r = 1300; r <= 1700; r += 50) {
        const double w = expected_score(r, 1500, p, true);
        CHECK(w > prev);
        prev = w;
    }
    CHECK(expected_score(1700, 1500, p, true) > 0.5);
    CHECK(expected_score(1300, 1500, p, true) < 0.5);
}

TEST_CASE("update: draws between equals do nothing, wins transfer K/2") {
    const EloParams p = neutral_params();
    EloState state;
    const double no_change = update(state, "A", "B", MatchResult::from_goals(1, 1), p, true);
    CHECK(no_change == doctest::Approx(0.0));
    CHECK(state.ratings.at("A") == doctest::Approx(1500.0));
    CHECK(state.ratings.at("B") == doctest::Approx(1500.0));

    // Equal ratings, home win by one: K * 1 * (1 - 0.5) = 10.
    const double gain = update(state, "A", "B", MatchResult::from_goals(1, 0), p, true);
    CHECK(gain == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(state.ratings.at("A") == doctest::Approx(1510.0));
    CHECK(state.ratings.at("B") == doctest::Approx(1490.0));
}

TEST_CASE("a draw lifts the lower-rated side") {
    const EloParams p = neutral_params();
    EloState state;
    state.ratings["weak"] = 1400.0;
    state.ratings["strong"] = 1700.0;
    update(state, "weak", "strong", MatchResult::from_goals(0, 0), p, true);
    CHECK(state.ratings.at("weak") > 1400.0);
    CHECK(state.ratings.at("strong") < 1700.0);
}

TEST_CASE("margin of victory scales the update and never shrinks it") {
    const EloParams p = neutral_params();
    CHECK(p.mov.factor(0) == 1.0);
    CHECK(p.mov.factor(1) == 1.0);
    CHECK(p.mov.factor(2) == 1.5);
    CHECK(p.mov.factor(3) == 1.75);
    CHECK(p.mov.factor(4) == doctest::Approx(1.875));
    CHECK(p.mov.factor(5) == doctest::Approx(2.0));

    double prev = 0.0;
    for (int diff = 1; diff <= 10; ++diff) {
        EloState state;
        const double delta =
            update(state, "A", "B", MatchResult{1.0, diff}, p, true);
        CHECK(std::fabs(delta) >= prev);
        prev = std::fabs(delta);
    }

    MovRule bad;
    bad.table = {1.0, 0.5};
    CHECK_FALSE(bad.valid());
    EloParams bad_params = p;
    bad_params.mov = bad;
    CHECK_THROWS_AS(bad_params.validate(), ValidationError);
}

TEST_CASE("update conserves the rating sum; wins gain, losses lose") {
    EloParams p;  // default home advantage applies
    Rng rng(99);
    EloState state;
    for (int i = 0; i < 1000; ++i) {
        const std::string home = "T" + std::to_string(rng.uniform_int(0, 19));
        std::string away = home;
        while (away == home) away = "T" + std::to_string(rng.uniform_int(0, 19));
        const int hg = rng.uniform_int(0, 5);
        const int ag = rng.uniform_int(0, 5);
        const double delta =
            update(state, home, away, MatchResult::from_goals(hg, ag), p, rng.uniform01() < 0.2);
        if (hg > ag) CHECK(delta > 0.0);  // a win always raises the winner
        if (hg < ag) CHECK(delta < 0.0);
    }
    double sum = 0.0;
    for (const auto& [team, rating] : state.ratings) sum += rating;
    CHECK(sum == doctest::Approx(1500.0 * static_cast<double>(state.ratings.size()))
                     .epsilon(1e-12));
}

TEST_CASE("rate_history replays chronologically with match_id tie-breaks") {
    const EloParams p = neutral_params();

    SUBCASE("empty history holds only the initial state") {
        const EloTimeline timeline = rate_history({}, p);
        CHECK(timeline.events().empty());
        CHECK(timeline.final_state().ratings.empty());
        const EloState snap = timeline.snapshot_at(Date{2020, 1, 1});
        CHECK(snap.ratings.empty());
        CHECK(snap.rating_or("anyone", p.initial_rating) == 1500.0);
    }

    SUBCASE("one match changes only the two participants") {
        const EloTimeline timeline =
            rate_history({match("m1", "2020-09-01", "A", "B", 2, 0)}, p);
        REQUIRE(timeline.events().size() == 1);
        CHECK(timeline.final_state().ratings.size() == 2);
        CHECK(timeline.final_state().ratings.at("A") == doctest::Approx(1515.0));  // K*1.5*0.5
        CHECK(timeline.final_state().ratings.at("B") == doctest::Approx(1485.0));
    }

    SUBCASE("same-day matches process in match_id order") {
        const auto t1 = rate_history({match("a", "2020-09-01", "A", "B", 1, 0),
                                      match("b", "2020-09-01", "A", "C", 1, 0)},
                                     p);
        const auto t2 = rate_history({match("b", "2020-09-01", "A", "C", 1, 0),
                                      match("a", "2020-09-01", "A", "B", 1, 0)},
                                     p);
        CHECK(t1.final_state().ratings.at("A") == t2.final_state().ratings.at("A"));
        CHECK(t1.events()[0].match_id == "a");
        CHECK(t2.events()[0].match_id == "a");
    }

    SUBCASE("round-robin keeps the rating total at 4x initial") {
        std::vector<MatchRecord> records;
        const std::vector<std::string> teams = {"A", "B", "C", "D"};
        int id = 0;
        for (std::size_t i = 0; i < teams.size(); ++i) {
            for (std::size_t j = 0; j < teams.size(); ++j) {
                if (i == j) continue;
                records.push_back(match("m" + std::to_string(id), "2020-09-01", teams[i],
                                        teams[j], (id * 7) % 4, (id * 3) % 3));
                ++id;
            }
        }
        const EloTimeline timeline = rate_history(records, p);
        double sum = 0.0;
        for (const auto& [team, rating] : timeline.final_state().ratings) sum += rating;
        CHECK(sum == doctest::Approx(4 * 1500.0).epsilon(1e-12));
    }
}

TEST_CASE("snapshot_at boundaries") {
    const EloParams p = neutral_params();
    const EloTimeline timeline = rate_history({match("june", "2021-06-30", "A", "B", 1, 0),
                                               match("july", "2021-07-01", "A", "B", 0, 1)},
                                              p);
    const EloState june = timeline.snapshot_at(Date{2021, 6, 30});
    CHECK(june.ratings.at("A") == doctest::Approx(1510.0));  // includes June 30 only
    const EloState before = timeline.snapshot_at(Date{2021, 6, 29});
    CHECK(before.ratings.empty());
    const EloState after = timeline.snapshot_at(Date{2022, 1, 1});
    CHECK(after.ratings.at("A") == timeline.final_state().ratings.at("A"));
    CHECK_THROWS_AS(timeline.snapshot_at(Date{1799, 12, 31}), DomainError);
}

TEST_CASE("replay determinism is bitwise") {
    EloParams p;
    Rng rng(7);
    std::vector<MatchRecord> records;
    for (int i = 0; i < 500; ++i) {
        const int month = rng.uniform_int(1, 12);
        const int day = rng.uniform_int(1, 28);
        const std::string home = "T" + std::to_string(rng.uniform_int(0, 9));
        std::string away = home;
        while (away == home) away = "T" + std::to_string(rng.uniform_int(0, 9));
        auto rec = match("m" + std::to_string(i),
                         Date{2020, month, day}.to_string(), home, away,
                         rng.uniform_int(0, 4), rng.uniform_int(0, 4), false);
        rec.season = month >= 7 ? "2020/21" : "2019/20";
        records.push_back(rec);
    }
    const EloTimeline a = rate_history(records, p);
    const EloTimeline b = rate_history(records, p);
    REQUIRE(a.events().size() == b.events().size());
    for (std::size_t i = 0; i < a.events().size(); ++i) {
        CHECK(a.events()[i].home_after == b.events()[i].home_after);  // bitwise
        CHECK(a.events()[i].away_after == b.events()[i].away_after);
    }
}

TEST_CASE("snapshot csv rounds to two decimals") {
    const EloParams p = neutral_params();
    const EloTimeline timeline = rate_history({match("m", "2020-10-03", "A", "B", 3, 1)}, p);
    const std::string csv = render_snapshot_csv(timeline, 2021, 2021);
    CHECK(csv == "season,team,rating\n2021/22,A,1515.00\n2021/22,B,1485.00\n");
}
