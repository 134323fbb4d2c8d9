#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "clubrank/errors.hpp"
#include "clubrank/ingest.hpp"
#include "support/synthetic.hpp"

using namespace clubrank;

namespace {

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

const std::string kHeader =
    "match_id,date,season,competition,stage,home_team,away_team,home_goals,away_goals,"
    "neutral,closed_doors,single_leg\n";

}  // namespace

TEST_CASE("parse_matches reads well-formed rows in order") {
    TempDir dir("clubrank_ingest_ok");
    write(dir.file("m.csv"),
          kHeader +
              "M1,2003-09-16,2003/04,CL,group,Real,Milan,2,1,0,0,0\n"
              "M2,2003-09-17,2003/04,CL,group,Porto,Ajax,1,1,0,0,0\n"
              "M3,2004-02-24,2003/04,CL,R16,Ajax,Real,0,3,0,0,0\n");
    const auto records = parse_matches(dir.file("m.csv"));
    REQUIRE(records.size() == 3);
    CHECK(records[0].match_id == "M1");
    CHECK(records[1].stage == Stage::group);
    CHECK(records[2].date == Date{2004, 2, 24});
    CHECK(records[2].stage == Stage::r16);
}

TEST_CASE("parse_matches rejects bad rows with the offending line") {
    TempDir dir("clubrank_ingest_bad");

    SUBCASE("negative goals") {
        write(dir.file("m.csv"), kHeader + "M1,2003-09-16,2003/04,CL,group,A,B,-1,0,0,0,0\n");
        try {
            parse_matches(dir.file("m.csv"));
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find("home_goals") != std::string::npos);
        }
    }
    SUBCASE("duplicate match_id") {
        write(dir.file("m.csv"), kHeader +
                                     "M1,2003-09-16,2003/04,CL,group,A,B,1,0,0,0,0\n"
                                     "M1,2003-09-17,2003/04,CL,group,C,D,1,0,0,0,0\n");
        CHECK_THROWS_WITH_AS(parse_matches(dir.file("m.csv")),
                             doctest::Contains("duplicate match_id"), ParseError);
    }
    SUBCASE("team playing itself") {
        write(dir.file("m.csv"), kHeader + "M1,2003-09-16,2003/04,CL,group,A,A,1,0,0,0,0\n");
        CHECK_THROWS_AS(parse_matches(dir.file("m.csv")), ParseError);
    }
    SUBCASE("date outside the season window") {
        write(dir.file("m.csv"), kHeader + "M1,2003-06-30,2003/04,CL,group,A,B,1,0,0,0,0\n");
        CHECK_THROWS_WITH_AS(parse_matches(dir.file("m.csv")),
                             doctest::Contains("outside season"), ParseError);
    }
    SUBCASE("June 30 belongs to the closing season") {
        write(dir.file("m.csv"), kHeader + "M1,2004-06-30,2003/04,CL,final,A,B,1,0,1,0,0\n");
        CHECK(parse_matches(dir.file("m.csv")).size() == 1);
    }
    SUBCASE("wrong header") {
        write(dir.file("m.csv"), "id,date\n1,2003-09-16\n");
        CHECK_THROWS_AS(parse_matches(dir.file("m.csv")), ParseError);
    }
    SUBCASE("unknown competition") {
        write(dir.file("m.csv"), kHeader + "M1,2003-09-16,2003/04,NBA,group,A,B,1,0,0,0,0\n");
        CHECK_THROWS_WITH_AS(parse_matches(dir.file("m.csv")),
                             doctest::Contains("competition"), ParseError);
    }
}

TEST_CASE("a full synthetic season round-trips through the csv layer") {
    TempDir dir("clubrank_ingest_season");
    const synth::Dataset dataset = synth::make_single_season(77, 2010);
    synth::write_csv_files(dataset, dir.path.string());

    const auto matches = parse_matches(dir.file("matches.csv"));
    CHECK(matches.size() == dataset.matches.size());
    std::size_t group_count = 0;
    for (const auto& m : matches) {
        if (m.stage == Stage::group) ++group_count;
    }
    CHECK(group_count == 96);  // 8 groups x 12 matches

    const auto standings = parse_standings(dir.file("standings.csv"));
    CHECK(standings.size() == 32);

    const auto coefficients = parse_coefficients(dir.file("coefficients.csv"));
    CHECK(coefficients.size() == 32);

    const IngestSummary summary = summarize(matches, standings, coefficients);
    CHECK(summary.match_rows == matches.size());
    CHECK(summary.per_season.at("2010/11").at("stage:group") == 96);
    CHECK(summary.fingerprint != 0);

    // Same inputs, same fingerprint; different inputs, different fingerprint.
    CHECK(summarize(matches, standings, coefficients).fingerprint == summary.fingerprint);
    auto fewer = matches;
    fewer.pop_back();
    CHECK(summarize(fewer, standings, coefficients).fingerprint != summary.fingerprint);
}

TEST_CASE("standings and coefficients validation") {
    TempDir dir("clubrank_ingest_sc");
    SUBCASE("rank out of range") {
        write(dir.file("s.csv"), "season,group,team,rank\n2003/04,A,X,5\n");
        CHECK_THROWS_AS(parse_standings(dir.file("s.csv")), ParseError);
    }
    SUBCASE("duplicate standing") {
        write(dir.file("s.csv"), "season,group,team,rank\n2003/04,A,X,1\n2003/04,A,X,2\n");
        CHECK_THROWS_AS(parse_standings(dir.file("s.csv")), ParseError);
    }
    SUBCASE("negative coefficient") {
        write(dir.file("c.csv"), "season,team,association,uefa_points\n2003/04,X,ESP,-1\n");
        CHECK_THROWS_AS(parse_coefficients(dir.file("c.csv")), ParseError);
    }
    SUBCASE("membership conflicts are rejected") {
        write(dir.file("c.csv"),
              "season,team,association,uefa_points\n2003/04,X,ESP,10\n2004/05,X,GER,11\n");
        const auto rows = parse_coefficients(dir.file("c.csv"));
        CHECK_THROWS_AS(membership_from_coefficients(rows), ValidationError);
    }
    SUBCASE("rating table lookup") {
        write(dir.file("c.csv"),
              "season,team,association,uefa_points\n2003/04,X,ESP,10.5\n2003/04,Y,GER,7\n");
        const RatingTable table = rating_table_from_coefficients(parse_coefficients(dir.file("c.csv")));
        CHECK(table.lookup("2003/04", "X") == 10.5);
        CHECK(!table.lookup("2004/05", "X"));
        CHECK(!table.lookup("2003/04", "Z"));
    }
}

TEST_CASE("elo snapshot csv parses back into a rating table") {
    TempDir dir("clubrank_ingest_elo");
    write(dir.file("elo.csv"), "season,team,rating\n2003/04,Real,1850.25\n2003/04,Milan,1790.00\n");
    const RatingTable table = parse_elo_snapshots(dir.file("elo.csv"));
    CHECK(table.lookup("2003/04", "Real") == 1850.25);
    CHECK(table.size() == 2);
}
