#include "clubrank/date.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "clubrank/errors.hpp"

namespace clubrank {

namespace {

bool is_leap(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 13> kDays = {0, 31, 28, 31, 30, 31, 30,
                                                  31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return kDays[static_cast<std::size_t>(month)];
}

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
    if (from + count > s.size()) return false;
    for (std::size_t i = from; i < from + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

bool Date::is_valid(int year, int month, int day) {
    if (year < 1 || month < 1 || month > 12 || day < 1) return false;
    return day <= days_in_month(year, month);
}

Date Date::parse(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !all_digits(text, 0, 4) || !all_digits(text, 5, 2) || !all_digits(text, 8, 2)) {
        throw ParseError("bad date '" + text + "', expected YYYY-MM-DD");
    }
    const int y = std::stoi(text.substr(0, 4));
    const int m = std::stoi(text.substr(5, 2));
    const int d = std::stoi(text.substr(8, 2));
    if (!is_valid(y, m, d)) {
        throw ParseError("invalid calendar date '" + text + "'");
    }
    return Date{y, m, d};
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

int parse_season_label(const std::string& label) {
    if (label.size() != 7 || label[4] != '/' ||
        !all_digits(label, 0, 4) || !all_digits(label, 5, 2)) {
        throw ParseError("bad season label '" + label + "', expected YYYY/YY");
    }
    const int start = std::stoi(label.substr(0, 4));
    const int suffix = std::stoi(label.substr(5, 2));
    if (suffix != (start + 1) % 100) {
        throw ParseError("season label '" + label + "' does not name consecutive years");
    }
    return start;
}

std::string season_label(int start_year) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d/%02d", start_year, (start_year + 1) % 100);
    return buf;
}

Date season_start(int start_year) { return Date{start_year, 7, 1}; }

Date season_end(int start_year) { return Date{start_year + 1, 6, 30}; }

Date season_rating_snapshot(int start_year) { return Date{start_year, 6, 30}; }

}  // namespace clubrank
