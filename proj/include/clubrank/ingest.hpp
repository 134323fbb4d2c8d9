#pragma once

#include <map>
#include <string>
#include <vector>

#include "clubrank/records.hpp"

namespace clubrank {

// matches.csv column order; the header must match exactly.
extern const std::vector<std::string> kMatchesHeader;       // 12 columns
extern const std::vector<std::string> kStandingsHeader;     // season,group,team,rank
extern const std::vector<std::string> kCoefficientsHeader;  // season,team,association,uefa_points

std::vector<MatchRecord> parse_matches(const std::string& path);
std::vector<GroupStanding> parse_standings(const std::string& path);
std::vector<CoefficientRow> parse_coefficients(const std::string& path);

// coefficients.csv used directly as the UEFA rating table.
RatingTable rating_table_from_coefficients(const std::vector<CoefficientRow>& rows);
std::map<std::string, std::string> membership_from_coefficients(
    const std::vector<CoefficientRow>& rows);

// Elo snapshot CSV (season,team,rating), as written by rate-elo or supplied
// by the user for replication.
RatingTable parse_elo_snapshots(const std::string& path);

// Coverage summary so users can audit which fixtures a dataset contains.
struct IngestSummary {
    std::size_t match_rows = 0;
    std::size_t standing_rows = 0;
    std::size_t coefficient_rows = 0;
    std::uint64_t fingerprint = 0;
    // per season label: matches by competition / stage plus flag counts
    std::map<std::string, std::map<std::string, std::size_t>> per_season;
};

IngestSummary summarize(const std::vector<MatchRecord>& matches,
                        const std::vector<GroupStanding>& standings,
                        const std::vector<CoefficientRow>& coefficients);

// FNV-1a 64-bit, the content hash used in report fingerprints.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace clubrank
