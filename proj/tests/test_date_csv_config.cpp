#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "clubrank/config.hpp"
#include "clubrank/csv.hpp"
#include "clubrank/date.hpp"
#include "clubrank/errors.hpp"

using namespace clubrank;

TEST_CASE("date parsing and ordering") {
    const Date d = Date::parse("2003-07-16");
    CHECK(d.year == 2003);
    CHECK(d.month == 7);
    CHECK(d.day == 16);
    CHECK(Date::parse("2004-02-29") == Date{2004, 2, 29});  // leap year
    CHECK_THROWS_AS(Date::parse("2003-02-29"), ParseError);
    CHECK_THROWS_AS(Date::parse("2003-13-01"), ParseError);
    CHECK_THROWS_AS(Date::parse("03-01-2003"), ParseError);
    CHECK_THROWS_AS(Date::parse("2003/01/02"), ParseError);
    CHECK(Date{2003, 6, 30} < Date{2003, 7, 1});
    CHECK(Date::parse("2021-06-30").to_string() == "2021-06-30");
}

TEST_CASE("season labels") {
    CHECK(parse_season_label("2003/04") == 2003);
    CHECK(parse_season_label("1999/00") == 1999);
    CHECK(season_label(2003) == "2003/04");
    CHECK(season_label(1999) == "1999/00");
    CHECK_THROWS_AS(parse_season_label("2003/05"), ParseError);
    CHECK_THROWS_AS(parse_season_label("2003-04"), ParseError);
    CHECK(season_start(2003) == Date{2003, 7, 1});
    CHECK(season_end(2003) == Date{2004, 6, 30});
    CHECK(season_rating_snapshot(2003) == Date{2003, 6, 30});
}

TEST_CASE("csv line splitting") {
    CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_csv_line("a,,c") == std::vector<std::string>{"a", "", "c"});
    CHECK(split_csv_line("\"a,b\",c") == std::vector<std::string>{"a,b", "c"});
    CHECK(split_csv_line("\"say \"\"hi\"\"\",x") == std::vector<std::string>{"say \"hi\"", "x"});
    CHECK_THROWS_AS(split_csv_line("\"open", 3), ParseError);
}

TEST_CASE("csv file reading enforces header and column counts") {
    const std::string path = "test_csv_tmp.csv";
    {
        std::ofstream out(path);
        out << "a,b\r\n1,2\n\n3,4\n";
    }
    const CsvTable table = read_csv(path, {"a", "b"});
    CHECK(table.rows.size() == 2);
    CHECK(table.rows[1] == std::vector<std::string>{"3", "4"});
    CHECK(table.row_lines[1] == 4);
    CHECK_THROWS_AS(read_csv(path, {"a", "c"}), ParseError);
    {
        std::ofstream out(path);
        out << "a,b\n1,2,3\n";
    }
    CHECK_THROWS_AS(read_csv(path), ParseError);
    std::remove(path.c_str());
}

TEST_CASE("config parsing") {
    const Config config = parse_config(
        "top = 1\n"
        "[elo]\n"
        "scale = 400  # comment\n"
        "k_factor = 20.0\n"
        "mov_table = 1, 1, 1.5, 1.75\n"
        "flag = true\n"
        "frac = 2.5\n"
        "[points]\n"
        "first_season = 2003\n"
        "win = 2\n"
        "[points]\n"
        "first_season = 2010\n");
    CHECK(config.find("")->get_int("top", 0) == 1);
    const ConfigSection* elo = config.find("elo");
    REQUIRE(elo != nullptr);
    CHECK(elo->get_double("scale", 0) == 400.0);
    CHECK(elo->get_bool("flag", false));
    CHECK(elo->get_double_list("mov_table") == std::vector<double>{1, 1, 1.5, 1.75});
    CHECK(elo->get_double("missing", 7.5) == 7.5);
    CHECK(config.find_all("points").size() == 2);
    CHECK_THROWS_AS(parse_config("key value\n"), ParseError);
    CHECK_THROWS_AS(elo->get_int("frac", 0), ConfigError);
    CHECK_THROWS_AS(elo->get_double("flag", 0.0), ConfigError);
}
