#include "clubrank/swiss.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "clubrank/csv.hpp"
#include "clubrank/errors.hpp"
#include "clubrank/rng.hpp"

namespace clubrank {

void DrawInput::validate() const {
    if (pots.empty()) throw ValidationError("no pots");
    const std::size_t pot_size = pots.front().size();
    std::set<int> seen;
    for (const auto& pot : pots) {
        if (pot.size() != pot_size) throw ValidationError("pots must have equal sizes");
        for (int club : pot) {
            if (club < 0 || club >= static_cast<int>(clubs.size())) {
                throw ValidationError("pot references unknown club index");
            }
            if (!seen.insert(club).second) {
                throw ValidationError("club '" + clubs[static_cast<std::size_t>(club)] +
                                      "' appears in two pots");
            }
        }
    }
    if (seen.size() != clubs.size()) throw ValidationError("pots do not cover every club");
    if (association.size() != clubs.size()) {
        throw ValidationError("association list does not cover every club");
    }
    // Every club needs one home and one away opponent per pot; within its own
    // pot those opponents must be other clubs, so pots of size < 3 cannot work.
    if (pot_size < 3) throw ValidationError("pots must hold at least 3 clubs");
}

int DrawInput::pot_of(int club) const {
    for (std::size_t p = 0; p < pots.size(); ++p) {
        for (int c : pots[p]) {
            if (c == club) return static_cast<int>(p);
        }
    }
    throw ValidationError("club index not in any pot");
}

std::size_t DrawInput::association_size(int club) const {
    const std::string& a = association[static_cast<std::size_t>(club)];
    std::size_t count = 0;
    for (const auto& other : association) {
        if (other == a) ++count;
    }
    return count;
}

DrawInput DrawInput::from_pots_csv(const std::string& path) {
    const CsvTable table = read_csv(path, {"club", "pot", "association"});
    DrawInput input;
    std::map<int, std::vector<int>> pot_map;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const long line = table.row_lines[r];
        if (row[0].empty()) throw ParseError("empty club name", line);
        int pot;
        try {
            pot = std::stoi(row[1]);
        } catch (const std::exception&) {
            throw ParseError("field 'pot' is not an integer: '" + row[1] + "'", line);
        }
        if (pot < 1) throw ParseError("pot numbers start at 1", line);
        input.clubs.push_back(row[0]);
        input.association.push_back(row[2]);
        pot_map[pot].push_back(static_cast<int>(input.clubs.size()) - 1);
    }
    int expected = 1;
    for (const auto& [pot, members] : pot_map) {
        if (pot != expected++) throw ValidationError("pot numbers must be contiguous from 1");
        input.pots.push_back(members);
    }
    input.validate();
    return input;
}

namespace {

// Search state for the constructive draw. Slots are (club, pot, venue)
// requirements; assigning a fixture fills the home slot of one club and the
// away slot of another.
struct SearchState {
    const DrawInput& input;
    bool allow_exceptions;
    std::size_t n_clubs;
    std::size_t n_pots;
    std::vector<int> pot_of;              // club -> pot
    std::vector<std::size_t> assoc_size;  // club -> association multiplicity
    std::vector<std::vector<char>> need_home;  // [club][pot]
    std::vector<std::vector<char>> need_away;
    std::vector<std::vector<char>> opponent;  // [club][club]
    std::vector<char> exception_used;         // [club]
    std::vector<Fixture> fixtures;
    Rng rng;
    // Deepest dead end, kept for the infeasibility error message.
    int dead_end_club = -1;
    int dead_end_pot = -1;
    bool dead_end_home = false;
    std::size_t dead_end_depth = 0;

    SearchState(const DrawInput& in, bool allow, std::uint64_t seed)
        : input(in), allow_exceptions(allow), n_clubs(in.clubs.size()), n_pots(in.pots.size()),
          rng(seed) {
        pot_of.resize(n_clubs);
        assoc_size.resize(n_clubs);
        for (std::size_t p = 0; p < n_pots; ++p) {
            for (int c : in.pots[p]) pot_of[static_cast<std::size_t>(c)] = static_cast<int>(p);
        }
        for (std::size_t c = 0; c < n_clubs; ++c) {
            assoc_size[c] = in.association_size(static_cast<int>(c));
        }
        need_home.assign(n_clubs, std::vector<char>(n_pots, 1));
        need_away.assign(n_clubs, std::vector<char>(n_pots, 1));
        opponent.assign(n_clubs, std::vector<char>(n_clubs, 0));
        exception_used.assign(n_clubs, 0);
    }

    bool same_association(int a, int b) const {
        return input.association[static_cast<std::size_t>(a)] ==
               input.association[static_cast<std::size_t>(b)];
    }

    // Candidates for the home slot (club, pot): opponents from `pot` that can
    // still visit someone from club's pot.
    void candidates(int club, int pot, bool home, std::vector<int>& out) const {
        out.clear();
        const auto c = static_cast<std::size_t>(club);
        for (int o : input.pots[static_cast<std::size_t>(pot)]) {
            const auto ou = static_cast<std::size_t>(o);
            if (o == club || opponent[c][ou]) continue;
            const auto my_pot = static_cast<std::size_t>(pot_of[c]);
            if (home ? !need_away[ou][my_pot] : !need_home[ou][my_pot]) continue;
            if (same_association(club, o)) {
                if (!allow_exceptions) continue;
                if (assoc_size[c] < 4) continue;
                if (exception_used[c] || exception_used[ou]) continue;
            }
            out.push_back(o);
        }
    }

    void apply(int club, int pot, bool home, int other) {
        const auto c = static_cast<std::size_t>(club);
        const auto o = static_cast<std::size_t>(other);
        const auto my_pot = static_cast<std::size_t>(pot_of[c]);
        opponent[c][o] = opponent[o][c] = 1;
        if (home) {
            need_home[c][static_cast<std::size_t>(pot)] = 0;
            need_away[o][my_pot] = 0;
            fixtures.push_back(Fixture{club, other, pot});
        } else {
            need_away[c][static_cast<std::size_t>(pot)] = 0;
            need_home[o][my_pot] = 0;
            fixtures.push_back(Fixture{other, club, pot_of[c]});
        }
        if (same_association(club, other)) {
            exception_used[c] = exception_used[o] = 1;
        }
    }

    void undo(int club, int pot, bool home, int other) {
        const auto c = static_cast<std::size_t>(club);
        const auto o = static_cast<std::size_t>(other);
        const auto my_pot = static_cast<std::size_t>(pot_of[c]);
        opponent[c][o] = opponent[o][c] = 0;
        if (home) {
            need_home[c][static_cast<std::size_t>(pot)] = 1;
            need_away[o][my_pot] = 1;
        } else {
            need_away[c][static_cast<std::size_t>(pot)] = 1;
            need_home[o][my_pot] = 1;
        }
        fixtures.pop_back();
        if (same_association(club, other)) {
            exception_used[c] = exception_used[o] = 0;
        }
    }

    bool solve() {
        // Most-constrained slot first.
        int best_club = -1, best_pot = -1;
        bool best_home = true;
        std::size_t best_count = std::numeric_limits<std::size_t>::max();
        std::vector<int> cand;
        for (std::size_t c = 0; c < n_clubs && best_count > 1; ++c) {
            for (std::size_t p = 0; p < n_pots && best_count > 1; ++p) {
                for (bool home : {true, false}) {
                    const bool needed = home ? need_home[c][p] : need_away[c][p];
                    if (!needed) continue;
                    candidates(static_cast<int>(c), static_cast<int>(p), home, cand);
                    if (cand.size() < best_count) {
                        best_count = cand.size();
                        best_club = static_cast<int>(c);
                        best_pot = static_cast<int>(p);
                        best_home = home;
                        if (best_count <= 1) break;
                    }
                }
            }
        }
        if (best_club < 0) return true;  // no open slots: complete
        if (best_count == 0) {
            if (fixtures.size() >= dead_end_depth) {
                dead_end_depth = fixtures.size();
                dead_end_club = best_club;
                dead_end_pot = best_pot;
                dead_end_home = best_home;
            }
            return false;
        }

        candidates(best_club, best_pot, best_home, cand);
        rng.shuffle(cand);
        for (int other : cand) {
            apply(best_club, best_pot, best_home, other);
            if (solve()) return true;
            undo(best_club, best_pot, best_home, other);
        }
        return false;
    }
};

// Counting lower bound on forced same-association fixtures. Within a pot of
// size m, an association with k members needs 2k fixture endpoints served by
// the other m-k clubs (2(m-k) endpoints), so at least max(0, 2k-m) fixtures
// must pair the association with itself; across pots P->Q, the k_Q guests
// avoid the k_P same-association hosts, forcing max(0, k_P + k_Q - m).
// Each such fixture spends the one-exception budget of two clubs. Returns a
// reason when even the budget cannot cover the forced fixtures.
std::optional<std::string> forced_exception_overflow(const DrawInput& input,
                                                     bool allow_exceptions) {
    const int m = static_cast<int>(input.pots.front().size());
    std::map<std::string, std::vector<int>> per_pot;  // association -> count per pot
    for (std::size_t p = 0; p < input.pots.size(); ++p) {
        for (int c : input.pots[p]) {
            auto& counts = per_pot[input.association[static_cast<std::size_t>(c)]];
            counts.resize(input.pots.size(), 0);
            ++counts[p];
        }
    }
    for (const auto& [assoc, counts] : per_pot) {
        long forced = 0;
        int members = 0;
        for (std::size_t p = 0; p < counts.size(); ++p) {
            members += counts[p];
            forced += std::max(0, 2 * counts[p] - m);
            for (std::size_t q = 0; q < counts.size(); ++q) {
                if (p == q) continue;
                forced += std::max(0, counts[p] + counts[q] - m);
            }
        }
        if (forced == 0) continue;
        const bool admissible = allow_exceptions && members >= 4;
        const long budget = admissible ? members : 0;
        if (2 * forced > budget) {
            return "association '" + assoc + "' forces " + std::to_string(forced) +
                   " same-association fixture(s), exceeding the exception budget";
        }
    }
    return std::nullopt;
}

}  // namespace

Schedule draw(const DrawInput& input, std::uint64_t seed) {
    input.validate();

    SearchState exception_free(input, false, seed);
    if (!forced_exception_overflow(input, false) && exception_free.solve()) {
        return Schedule{std::move(exception_free.fixtures), false};
    }

    if (input.allow_same_association_exception) {
        // Exception-free search exhausted: rerun with the exception admitted,
        // restarting the generator from the same seed.
        if (auto reason = forced_exception_overflow(input, true)) {
            throw InfeasibleDrawError("draw is infeasible; " + *reason);
        }
        SearchState with_exceptions(input, true, seed);
        if (with_exceptions.solve()) {
            bool fired = false;
            for (const auto& f : with_exceptions.fixtures) {
                if (with_exceptions.same_association(f.home, f.away)) fired = true;
            }
            return Schedule{std::move(with_exceptions.fixtures), fired};
        }
    }

    std::ostringstream msg;
    msg << "draw is infeasible";
    if (!input.allow_same_association_exception) {
        if (auto reason = forced_exception_overflow(input, false)) {
            throw InfeasibleDrawError("draw is infeasible; " + *reason);
        }
    }
    if (exception_free.dead_end_club >= 0) {
        msg << "; tightest failure: club '"
            << input.clubs[static_cast<std::size_t>(exception_free.dead_end_club)]
            << "' has no admissible " << (exception_free.dead_end_home ? "home" : "away")
            << " opponent in pot " << exception_free.dead_end_pot + 1 << " after "
            << exception_free.dead_end_depth << " fixtures";
    }
    throw InfeasibleDrawError(msg.str());
}

ValidityReport validate(const DrawInput& input, const Schedule& schedule) {
    input.validate();
    ValidityReport report;
    auto add = [&](const std::string& rule, std::vector<std::string> clubs) {
        report.valid = false;
        report.violations.push_back(Violation{rule, std::move(clubs)});
    };

    const std::size_t n = input.clubs.size();
    const std::size_t n_pots = input.pots.size();
    std::vector<int> pot_of(n);
    for (std::size_t p = 0; p < n_pots; ++p) {
        for (int c : input.pots[p]) pot_of[static_cast<std::size_t>(c)] = static_cast<int>(p);
    }

    std::vector<std::vector<int>> home_vs_pot(n, std::vector<int>(n_pots, 0));
    std::vector<std::vector<int>> away_vs_pot(n, std::vector<int>(n_pots, 0));
    std::vector<std::set<int>> opponents(n);
    std::vector<int> same_assoc_count(n, 0);
    std::set<std::pair<int, int>> seen_pairs;

    for (const auto& f : schedule.fixtures) {
        if (f.home < 0 || f.away < 0 || f.home >= static_cast<int>(n) ||
            f.away >= static_cast<int>(n)) {
            add("unknown club", {});
            continue;
        }
        const auto h = static_cast<std::size_t>(f.home);
        const auto a = static_cast<std::size_t>(f.away);
        if (f.home == f.away) {
            add("self fixture", {input.clubs[h]});
            continue;
        }
        const auto pair = std::minmax(f.home, f.away);
        if (!seen_pairs.insert(pair).second) {
            add("repeated pairing", {input.clubs[h], input.clubs[a]});
        }
        if (f.away_pot != pot_of[a]) {
            add("away_pot mismatch", {input.clubs[h], input.clubs[a]});
        }
        ++home_vs_pot[h][static_cast<std::size_t>(pot_of[a])];
        ++away_vs_pot[a][static_cast<std::size_t>(pot_of[h])];
        opponents[h].insert(f.away);
        opponents[a].insert(f.home);
        if (input.association[h] == input.association[a]) {
            ++same_assoc_count[f.home];
            ++same_assoc_count[f.away];
            const bool admissible = input.allow_same_association_exception &&
                                    input.association_size(f.home) >= 4;
            if (!admissible) {
                add("association", {input.clubs[h], input.clubs[a]});
            }
        }
    }

    for (std::size_t c = 0; c < n; ++c) {
        int home_total = 0, away_total = 0;
        for (std::size_t p = 0; p < n_pots; ++p) {
            home_total += home_vs_pot[c][p];
            away_total += away_vs_pot[c][p];
            if (home_vs_pot[c][p] != 1 || away_vs_pot[c][p] != 1) {
                add("pot coverage", {input.clubs[c], "pot " + std::to_string(p + 1)});
            }
        }
        if (home_total != static_cast<int>(n_pots) || away_total != static_cast<int>(n_pots)) {
            add("home/away balance", {input.clubs[c]});
        }
        if (opponents[c].size() != 2 * n_pots) {
            add("distinct opponents", {input.clubs[c]});
        }
        if (same_assoc_count[c] > 1) {
            add("association exception budget", {input.clubs[c]});
        }
    }
    return report;
}

BalanceReport balance_metrics(const DrawInput& input, const Schedule& schedule,
                              const std::map<std::string, double>& strengths) {
    for (const auto& club : input.clubs) {
        if (!strengths.count(club)) {
            throw DomainError("no strength for club '" + club + "'");
        }
    }

    const std::size_t n = input.clubs.size();
    std::vector<double> sums(n, 0.0);
    std::vector<int> counts(n, 0);
    for (const auto& f : schedule.fixtures) {
        const auto h = static_cast<std::size_t>(f.home);
        const auto a = static_cast<std::size_t>(f.away);
        sums[h] += strengths.at(input.clubs[a]);
        sums[a] += strengths.at(input.clubs[h]);
        ++counts[h];
        ++counts[a];
    }

    BalanceReport report;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) {
        ClubBalance cb;
        cb.club = input.clubs[c];
        cb.opponent_sum = sums[c];
        cb.opponent_mean = counts[c] > 0 ? sums[c] / counts[c] : 0.0;
        report.clubs.push_back(cb);
        lo = std::min(lo, sums[c]);
        hi = std::max(hi, sums[c]);
    }
    report.spread = hi - lo;

    // Competition ranking of opponent-strength sums, 1 = hardest.
    for (auto& cb : report.clubs) {
        int rank = 1;
        for (const auto& other : report.clubs) {
            if (other.opponent_sum > cb.opponent_sum) ++rank;
        }
        cb.rank = rank;
    }
    return report;
}

std::string schedule_to_csv(const DrawInput& input, const Schedule& schedule) {
    std::ostringstream out;
    out << "home,away,away_pot\n";
    for (const auto& f : schedule.fixtures) {
        out << join_csv_row({input.clubs[static_cast<std::size_t>(f.home)],
                             input.clubs[static_cast<std::size_t>(f.away)],
                             std::to_string(f.away_pot + 1)})
            << "\n";
    }
    return out.str();
}

std::string schedule_to_json(const DrawInput& input, const Schedule& schedule,
                             std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["exception_rule_fired"] = schedule.exception_rule_fired;
    const ValidityReport report = validate(input, schedule);
    j["valid"] = report.valid;
    nlohmann::ordered_json fixtures = nlohmann::ordered_json::array();
    for (const auto& f : schedule.fixtures) {
        nlohmann::ordered_json item;
        item["home"] = input.clubs[static_cast<std::size_t>(f.home)];
        item["away"] = input.clubs[static_cast<std::size_t>(f.away)];
        item["away_pot"] = f.away_pot + 1;
        fixtures.push_back(item);
    }
    j["fixtures"] = fixtures;
    return j.dump(2) + "\n";
}

}  // namespace clubrank
