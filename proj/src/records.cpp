#include "clubrank/records.hpp"

#include "clubrank/errors.hpp"

namespace clubrank {

Competition parse_competition(const std::string& token) {
    if (token == "CL") return Competition::cl;
    if (token == "EL") return Competition::el;
    if (token == "ECL") return Competition::ecl;
    if (token == "domestic-league") return Competition::domestic_league;
    if (token == "domestic-cup") return Competition::domestic_cup;
    throw ParseError("unknown competition '" + token + "'");
}

Stage parse_stage(const std::string& token) {
    if (token == "group") return Stage::group;
    if (token == "R16") return Stage::r16;
    if (token == "QF") return Stage::qf;
    if (token == "SF") return Stage::sf;
    if (token == "final") return Stage::final_match;
    if (token == "league-phase") return Stage::league_phase;
    if (token == "other") return Stage::other;
    throw ParseError("unknown stage '" + token + "'");
}

std::string to_string(Competition c) {
    switch (c) {
        case Competition::cl: return "CL";
        case Competition::el: return "EL";
        case Competition::ecl: return "ECL";
        case Competition::domestic_league: return "domestic-league";
        case Competition::domestic_cup: return "domestic-cup";
    }
    return "?";
}

std::string to_string(Stage s) {
    switch (s) {
        case Stage::group: return "group";
        case Stage::r16: return "R16";
        case Stage::qf: return "QF";
        case Stage::sf: return "SF";
        case Stage::final_match: return "final";
        case Stage::league_phase: return "league-phase";
        case Stage::other: return "other";
    }
    return "?";
}

bool is_uefa_competition(Competition c) {
    return c == Competition::cl || c == Competition::el || c == Competition::ecl;
}

}  // namespace clubrank
