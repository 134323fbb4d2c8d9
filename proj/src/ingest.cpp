#include "clubrank/ingest.hpp"

#include <set>
#include <sstream>

#include "clubrank/csv.hpp"
#include "clubrank/errors.hpp"

namespace clubrank {

const std::vector<std::string> kMatchesHeader = {
    "match_id", "date",       "season",     "competition", "stage",        "home_team",
    "away_team", "home_goals", "away_goals", "neutral",     "closed_doors", "single_leg"};
const std::vector<std::string> kStandingsHeader = {"season", "group", "team", "rank"};
const std::vector<std::string> kCoefficientsHeader = {"season", "team", "association",
                                                      "uefa_points"};

namespace {

int parse_non_negative_int(const std::string& text, const std::string& field, long line) {
    try {
        std::size_t pos = 0;
        const int value = std::stoi(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        if (value < 0) throw ParseError("field '" + field + "' must be >= 0, got " + text, line);
        return value;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("field '" + field + "' is not an integer: '" + text + "'", line);
    }
}

bool parse_bool(const std::string& text, const std::string& field, long line) {
    if (text == "1" || text == "true") return true;
    if (text == "0" || text == "false") return false;
    throw ParseError("field '" + field + "' must be 0/1 or true/false, got '" + text + "'", line);
}

double parse_real(const std::string& text, const std::string& field, long line) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ParseError("field '" + field + "' is not a number: '" + text + "'", line);
    }
}

template <typename Fn>
auto with_line(long line, const std::string& field, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        if (e.line() > 0) throw;
        throw ParseError(std::string("field '") + field + "': " + e.what(), line);
    }
}

}  // namespace

std::vector<MatchRecord> parse_matches(const std::string& path) {
    const CsvTable table = read_csv(path, kMatchesHeader);
    std::vector<MatchRecord> records;
    records.reserve(table.rows.size());
    std::set<std::string> seen_ids;

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const long line = table.row_lines[r];
        MatchRecord rec;
        rec.match_id = row[0];
        if (rec.match_id.empty()) throw ParseError("field 'match_id' is empty", line);
        if (!seen_ids.insert(rec.match_id).second) {
            throw ParseError("duplicate match_id '" + rec.match_id + "'", line);
        }
        rec.date = with_line(line, "date", [&] { return Date::parse(row[1]); });
        rec.season = row[2];
        const int start_year =
            with_line(line, "season", [&] { return parse_season_label(rec.season); });
        rec.competition = with_line(line, "competition", [&] { return parse_competition(row[3]); });
        rec.stage = with_line(line, "stage", [&] { return parse_stage(row[4]); });
        rec.home_team = row[5];
        rec.away_team = row[6];
        if (rec.home_team.empty() || rec.away_team.empty()) {
            throw ParseError("empty team id", line);
        }
        if (rec.home_team == rec.away_team) {
            throw ParseError("field 'away_team': a team cannot play itself", line);
        }
        rec.home_goals = parse_non_negative_int(row[7], "home_goals", line);
        rec.away_goals = parse_non_negative_int(row[8], "away_goals", line);
        rec.neutral_venue = parse_bool(row[9], "neutral", line);
        rec.behind_closed_doors = parse_bool(row[10], "closed_doors", line);
        rec.single_leg = parse_bool(row[11], "single_leg", line);

        if (rec.date < season_start(start_year) || rec.date > season_end(start_year)) {
            throw ParseError("field 'date': " + rec.date.to_string() + " outside season " +
                                 rec.season + " (Jul 1 - Jun 30)",
                             line);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<GroupStanding> parse_standings(const std::string& path) {
    const CsvTable table = read_csv(path, kStandingsHeader);
    std::vector<GroupStanding> standings;
    standings.reserve(table.rows.size());
    std::set<std::tuple<std::string, std::string, std::string>> seen;

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const long line = table.row_lines[r];
        GroupStanding s;
        s.season = row[0];
        with_line(line, "season", [&] { return parse_season_label(s.season); });
        s.group = row[1];
        s.team = row[2];
        if (s.group.empty() || s.team.empty()) throw ParseError("empty group or team", line);
        s.rank = parse_non_negative_int(row[3], "rank", line);
        if (s.rank < 1 || s.rank > 4) {
            throw ParseError("field 'rank' must be 1..4, got " + row[3], line);
        }
        if (!seen.insert({s.season, s.group, s.team}).second) {
            throw ParseError("duplicate standing for " + s.team + " in " + s.season + " group " +
                                 s.group,
                             line);
        }
        standings.push_back(std::move(s));
    }
    return standings;
}

std::vector<CoefficientRow> parse_coefficients(const std::string& path) {
    const CsvTable table = read_csv(path, kCoefficientsHeader);
    std::vector<CoefficientRow> rows;
    rows.reserve(table.rows.size());
    std::set<std::pair<std::string, std::string>> seen;

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const long line = table.row_lines[r];
        CoefficientRow c;
        c.season = row[0];
        with_line(line, "season", [&] { return parse_season_label(c.season); });
        c.team = row[1];
        c.association = row[2];
        if (c.team.empty() || c.association.empty()) {
            throw ParseError("empty team or association", line);
        }
        c.uefa_points = parse_real(row[3], "uefa_points", line);
        if (c.uefa_points < 0) throw ParseError("field 'uefa_points' must be >= 0", line);
        if (!seen.insert({c.season, c.team}).second) {
            throw ParseError("duplicate coefficient for " + c.team + " in " + c.season, line);
        }
        rows.push_back(std::move(c));
    }
    return rows;
}

RatingTable rating_table_from_coefficients(const std::vector<CoefficientRow>& rows) {
    RatingTable table;
    for (const auto& row : rows) table.set(row.season, row.team, row.uefa_points);
    return table;
}

std::map<std::string, std::string> membership_from_coefficients(
    const std::vector<CoefficientRow>& rows) {
    std::map<std::string, std::string> membership;
    for (const auto& row : rows) {
        auto [it, inserted] = membership.try_emplace(row.team, row.association);
        if (!inserted && it->second != row.association) {
            // Clubs do not change association in this corpus; flag the data.
            throw ValidationError("team '" + row.team + "' listed under two associations ('" +
                                  it->second + "', '" + row.association + "')");
        }
    }
    return membership;
}

RatingTable parse_elo_snapshots(const std::string& path) {
    const CsvTable table = read_csv(path, {"season", "team", "rating"});
    RatingTable ratings;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const long line = table.row_lines[r];
        with_line(line, "season", [&] { return parse_season_label(row[0]); });
        if (row[1].empty()) throw ParseError("empty team id", line);
        ratings.set(row[0], row[1], parse_real(row[2], "rating", line));
    }
    return ratings;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

IngestSummary summarize(const std::vector<MatchRecord>& matches,
                        const std::vector<GroupStanding>& standings,
                        const std::vector<CoefficientRow>& coefficients) {
    IngestSummary summary;
    summary.match_rows = matches.size();
    summary.standing_rows = standings.size();
    summary.coefficient_rows = coefficients.size();

    std::ostringstream canon;
    for (const auto& m : matches) {
        canon << m.match_id << '|' << m.date.to_string() << '|' << m.season << '|'
              << to_string(m.competition) << '|' << to_string(m.stage) << '|' << m.home_team << '|'
              << m.away_team << '|' << m.home_goals << '|' << m.away_goals << '|'
              << m.neutral_venue << m.behind_closed_doors << m.single_leg << '\n';
        auto& season = summary.per_season[m.season];
        ++season["matches"];
        ++season[to_string(m.competition)];
        ++season["stage:" + to_string(m.stage)];
        if (m.single_leg) ++season["single_leg"];
        if (m.behind_closed_doors) ++season["closed_doors"];
    }
    for (const auto& s : standings) {
        canon << s.season << '|' << s.group << '|' << s.team << '|' << s.rank << '\n';
    }
    for (const auto& c : coefficients) {
        canon << c.season << '|' << c.team << '|' << c.association << '|' << c.uefa_points << '\n';
    }
    summary.fingerprint = fnv1a64(canon.str());
    return summary;
}

}  // namespace clubrank
