#pragma once

#include <compare>
#include <string>

namespace clubrank {

// Calendar date. Kept as plain fields; all validation happens in parse()/make().
struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31

    auto operator<=>(const Date&) const = default;

    // Strict "YYYY-MM-DD", real calendar (leap years included).
    static Date parse(const std::string& text);
    static bool is_valid(int year, int month, int day);

    std::string to_string() const;

    // Anchor for rating timelines that start before any recorded match.
    static constexpr Date floor() { return Date{1800, 1, 1}; }
};

// Season labels of the form "2003/04". The start year identifies the season;
// the suffix must equal (start+1) mod 100.
int parse_season_label(const std::string& label);
std::string season_label(int start_year);

// A season runs from July 1 of the start year to June 30 of the next;
// June 30 belongs to the closing season.
Date season_start(int start_year);
Date season_end(int start_year);

// Snapshot date used for season ratings: June 30 right before the season starts.
Date season_rating_snapshot(int start_year);

}  // namespace clubrank
