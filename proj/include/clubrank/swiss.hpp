#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace clubrank {

// League-phase draw instance. Clubs are identified by index into `clubs`;
// pots partition them into equal strength bands. The standard instance has
// 4 pots of 9; the tests also use scaled instances (2 pots of 4).
struct DrawInput {
    std::vector<std::string> clubs;
    std::vector<std::vector<int>> pots;     // club indices per pot, equal sizes
    std::vector<std::string> association;   // per club
    bool allow_same_association_exception = true;

    void validate() const;  // throws ValidationError
    int pot_of(int club) const;
    std::size_t association_size(int club) const;

    static DrawInput from_pots_csv(const std::string& path);
};

struct Fixture {
    int home = 0;
    int away = 0;
    int away_pot = 0;  // pot of the away club, recorded for the export
};

struct Schedule {
    std::vector<Fixture> fixtures;
    bool exception_rule_fired = false;  // some fixture pairs same-association clubs
};

struct Violation {
    std::string rule;                // e.g. "home/away balance", "association"
    std::vector<std::string> clubs;  // clubs involved
};

struct ValidityReport {
    bool valid = true;
    std::vector<Violation> violations;
};

// Checks every schedule invariant: 8 distinct opponents per club split 4 home
// / 4 away, exactly one home and one away opponent per pot, and the
// association rule (same-association fixtures only when exceptions are
// allowed, the association has >= 4 clubs in the draw, and each club uses at
// most one).
ValidityReport validate(const DrawInput& input, const Schedule& schedule);

// Randomized constructive search with backtracking: most-constrained slot
// first, candidate order shuffled by the seed. The same-association exception
// is enabled only after the exception-free search is exhausted. Deterministic
// per (input, seed). Throws InfeasibleDrawError when no valid schedule exists.
Schedule draw(const DrawInput& input, std::uint64_t seed);

struct ClubBalance {
    std::string club;
    double opponent_sum = 0.0;
    double opponent_mean = 0.0;
    int rank = 0;  // 1 = hardest schedule (largest opponent sum)
};

struct BalanceReport {
    std::vector<ClubBalance> clubs;  // in input club order
    double spread = 0.0;             // max - min opponent sum
};

BalanceReport balance_metrics(const DrawInput& input, const Schedule& schedule,
                              const std::map<std::string, double>& strengths);

std::string schedule_to_csv(const DrawInput& input, const Schedule& schedule);
std::string schedule_to_json(const DrawInput& input, const Schedule& schedule,
                             std::uint64_t seed);

}  // namespace clubrank
