// clubrank: ratings, regression suites, draws and league simulation for
// Champions League style data. See README.md for the file schemas.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clubrank/config.hpp"
#include "clubrank/csv.hpp"
#include "clubrank/elo.hpp"
#include "clubrank/errors.hpp"
#include "clubrank/evaluation.hpp"
#include "clubrank/ingest.hpp"
#include "clubrank/samples.hpp"
#include "clubrank/simulate.hpp"
#include "clubrank/swiss.hpp"
#include "clubrank/uefa.hpp"

namespace {

using namespace clubrank;
using ordered_json = nlohmann::ordered_json;

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string config_path;
    std::string out_dir = ".";
};

Config load_config_or_default(const GlobalOptions& options) {
    if (options.config_path.empty()) return Config{};
    return load_config(options.config_path);
}

EloParams elo_params_from_config(const Config& config) {
    EloParams params;
    if (const ConfigSection* elo = config.find("elo")) {
        params.scale = elo->get_double("scale", params.scale);
        params.k_factor = elo->get_double("k_factor", params.k_factor);
        params.home_advantage = elo->get_double("home_advantage", params.home_advantage);
        params.initial_rating = elo->get_double("initial_rating", params.initial_rating);
        if (elo->has("mov_table")) params.mov.table = elo->get_double_list("mov_table");
        params.mov.tail_step = elo->get_double("mov_tail_step", params.mov.tail_step);
    }
    params.validate();
    return params;
}

std::string out_path(const GlobalOptions& options, const std::string& name) {
    std::filesystem::create_directories(options.out_dir);
    return (std::filesystem::path(options.out_dir) / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

// Season start years present in a match list.
std::pair<int, int> season_range(const std::vector<MatchRecord>& records) {
    int lo = 9999, hi = 0;
    for (const auto& rec : records) {
        const int year = rec.season_start_year();
        lo = std::min(lo, year);
        hi = std::max(hi, year);
    }
    if (hi == 0) throw ValidationError("no matches found");
    return {lo, hi};
}

// June-30 Elo snapshots covering every (season, team) the samples can ask
// about: match participants, standings entries and coefficient rows.
RatingTable elo_table_from_history(const std::vector<MatchRecord>& matches,
                                   const std::vector<GroupStanding>& standings,
                                   const std::vector<CoefficientRow>& coefficients,
                                   const EloParams& params) {
    std::map<std::string, std::set<std::string>> teams_by_season;
    for (const auto& m : matches) {
        if (m.competition != Competition::cl) continue;
        teams_by_season[m.season].insert(m.home_team);
        teams_by_season[m.season].insert(m.away_team);
    }
    for (const auto& s : standings) teams_by_season[s.season].insert(s.team);
    for (const auto& c : coefficients) teams_by_season[c.season].insert(c.team);

    const EloTimeline timeline = rate_history(matches, params);
    RatingTable table;
    for (const auto& [season, teams] : teams_by_season) {
        const int year = parse_season_label(season);
        const EloState snap = timeline.snapshot_at(season_rating_snapshot(year));
        for (const auto& team : teams) {
            table.set(season, team, snap.rating_or(team, params.initial_rating));
        }
    }
    return table;
}

struct LoadedData {
    std::vector<MatchRecord> matches;
    std::vector<GroupStanding> standings;
    std::vector<CoefficientRow> coefficients;
    RatingTable uefa;
    RatingTable elo;
};

LoadedData load_for_fitting(const std::string& matches_path, const std::string& standings_path,
                            const std::string& coefficients_path, const std::string& elo_path,
                            const EloParams& params) {
    LoadedData data;
    data.matches = parse_matches(matches_path);
    if (!standings_path.empty()) data.standings = parse_standings(standings_path);
    data.coefficients = parse_coefficients(coefficients_path);
    data.uefa = rating_table_from_coefficients(data.coefficients);
    data.elo = elo_path.empty()
                   ? elo_table_from_history(data.matches, data.standings, data.coefficients,
                                            params)
                   : parse_elo_snapshots(elo_path);
    return data;
}

std::vector<Observation> sample_for_family(const LoadedData& data, SampleFamily family,
                                           std::size_t* ties_excluded = nullptr) {
    switch (family) {
        case SampleFamily::group_match:
            return build_group_match_sample(data.matches, data.uefa, data.elo);
        case SampleFamily::group_match_trinomial:
            return build_group_match_trinomial_sample(data.matches, data.uefa, data.elo);
        case SampleFamily::knockout:
            return build_knockout_sample(data.matches, data.uefa, data.elo);
        case SampleFamily::group_ranking:
        case SampleFamily::group_ranking_elo: {
            const auto convention = family == SampleFamily::group_ranking
                                        ? RankingConvention::by_uefa
                                        : RankingConvention::by_elo;
            auto result =
                build_group_ranking_sample(data.standings, data.uefa, data.elo, convention);
            if (ties_excluded) *ties_excluded = result.ties_excluded;
            return std::move(result.observations);
        }
    }
    throw DomainError("unhandled sample family");
}

std::vector<Observation> filter_period(const std::vector<Observation>& sample,
                                       const std::string& period) {
    if (period == "all") return sample;
    const PeriodSplit split = split_periods(sample);
    if (period == "early") return split.early;
    if (period == "late") return split.late;
    throw DomainError("unknown period '" + period + "' (use all, early or late)");
}

int cmd_ingest(const GlobalOptions& global, const std::string& matches_path,
               const std::string& standings_path, const std::string& coefficients_path) {
    const auto matches = parse_matches(matches_path);
    std::vector<GroupStanding> standings;
    if (!standings_path.empty()) standings = parse_standings(standings_path);
    std::vector<CoefficientRow> coefficients;
    if (!coefficients_path.empty()) {
        coefficients = parse_coefficients(coefficients_path);
        membership_from_coefficients(coefficients);  // consistency check
    }

    const IngestSummary summary = summarize(matches, standings, coefficients);
    ordered_json j;
    j["matches"] = summary.match_rows;
    j["standings"] = summary.standing_rows;
    j["coefficients"] = summary.coefficient_rows;
    char fp[24];
    std::snprintf(fp, sizeof(fp), "%016llx", static_cast<unsigned long long>(summary.fingerprint));
    j["fingerprint"] = fp;
    ordered_json seasons;
    for (const auto& [season, counts] : summary.per_season) {
        ordered_json c;
        for (const auto& [key, value] : counts) c[key] = value;
        seasons[season] = c;
    }
    j["per_season"] = seasons;
    const std::string path = out_path(global, "ingest_summary.json");
    write_file(path, j.dump(2) + "\n");
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_rate_elo(const GlobalOptions& global, const std::string& matches_path, int first_season,
                 int last_season) {
    const Config config = load_config_or_default(global);
    const EloParams params = elo_params_from_config(config);
    const auto matches = parse_matches(matches_path);
    const auto [lo, hi] = season_range(matches);
    if (first_season == 0) first_season = lo;
    if (last_season == 0) last_season = hi;
    const EloTimeline timeline = rate_history(matches, params);
    const std::string path = out_path(global, "elo_snapshot.csv");
    write_file(path, render_snapshot_csv(timeline, first_season, last_season));
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_coef(const GlobalOptions& global, const std::string& matches_path,
             const std::string& coefficients_path) {
    const Config config = load_config_or_default(global);
    const RulesTable rules = RulesTable::from_config(config);
    const auto matches = parse_matches(matches_path);
    const auto coefficients = parse_coefficients(coefficients_path);
    const auto membership = membership_from_coefficients(coefficients);
    const CoefficientLedger ledger = build_ledger(matches, rules, membership);

    std::ostringstream out;
    out << "season,team,coefficient\n";
    char buf[32];
    for (const auto& row : coefficients) {
        const double value = club_coefficient(ledger, row.team, parse_season_label(row.season));
        std::snprintf(buf, sizeof(buf), "%.3f", value);
        out << join_csv_row({row.season, row.team, buf}) << "\n";
    }
    const std::string path = out_path(global, "computed_coefficients.csv");
    write_file(path, out.str());
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_fit(const GlobalOptions& global, const std::string& matches_path,
            const std::string& standings_path, const std::string& coefficients_path,
            const std::string& elo_path, const std::string& family_name, int model_id,
            const std::string& period) {
    const Config config = load_config_or_default(global);
    const EloParams params = elo_params_from_config(config);
    const LoadedData data =
        load_for_fitting(matches_path, standings_path, coefficients_path, elo_path, params);

    SampleFamily family = SampleFamily::group_match;
    bool found = false;
    for (SampleFamily f : {SampleFamily::group_match, SampleFamily::knockout,
                           SampleFamily::group_ranking, SampleFamily::group_ranking_elo,
                           SampleFamily::group_match_trinomial}) {
        if (to_string(f) == family_name) {
            family = f;
            found = true;
        }
    }
    if (!found) throw DomainError("unknown family '" + family_name + "'");

    const auto sample = filter_period(sample_for_family(data, family), period);
    SuiteSpec spec;
    spec.family = family;
    spec.period = period;
    if (model_id != 0) {
        if (model_id < 1 || model_id > 3) throw DomainError("model must be 1, 2 or 3");
        spec.models = {static_cast<ModelId>(model_id)};
    }
    const FamilyReport report = run_suite(sample, spec);
    const std::string name = "fit_" + family_name + "_" + period +
                             (model_id ? "_model" + std::to_string(model_id) : "") + ".json";
    const std::string path = out_path(global, name);
    write_file(path, report_to_json(report));
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_suite(const GlobalOptions& global, const std::string& matches_path,
              const std::string& standings_path, const std::string& coefficients_path,
              const std::string& elo_path) {
    const Config config = load_config_or_default(global);
    const EloParams params = elo_params_from_config(config);
    const LoadedData data =
        load_for_fitting(matches_path, standings_path, coefficients_path, elo_path, params);

    std::vector<FamilyReport> reports;
    for (SampleFamily family : {SampleFamily::group_match, SampleFamily::knockout,
                                SampleFamily::group_ranking, SampleFamily::group_ranking_elo,
                                SampleFamily::group_match_trinomial}) {
        std::size_t ties_excluded = 0;
        const auto sample = sample_for_family(data, family, &ties_excluded);
        if (ties_excluded > 0) {
            std::cerr << "note: " << ties_excluded << " equal-Elo pair(s) excluded from "
                      << to_string(family) << "\n";
        }
        reports.push_back(run_suite(sample, SuiteSpec{family, "all"}));
        auto [early, late] = period_report(sample, family);
        reports.push_back(std::move(early));
        reports.push_back(std::move(late));
    }
    const std::string path = out_path(global, "suite.json");
    write_file(path, suite_to_json(reports));
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_draw(const GlobalOptions& global, const std::string& pots_path) {
    const DrawInput input = DrawInput::from_pots_csv(pots_path);
    const Schedule schedule = draw(input, global.seed);
    const std::string csv_path = out_path(global, "schedule.csv");
    write_file(csv_path, schedule_to_csv(input, schedule));
    const std::string json_path = out_path(global, "schedule.json");
    write_file(json_path, schedule_to_json(input, schedule, global.seed));
    std::cout << "wrote " << csv_path << " and " << json_path << "\n";
    return 0;
}

Schedule schedule_from_csv(const std::string& path, const DrawInput& input) {
    const CsvTable table = read_csv(path, {"home", "away", "away_pot"});
    std::map<std::string, int> index;
    for (std::size_t c = 0; c < input.clubs.size(); ++c) {
        index[input.clubs[c]] = static_cast<int>(c);
    }
    Schedule schedule;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const long line = table.row_lines[r];
        auto h = index.find(row[0]);
        auto a = index.find(row[1]);
        if (h == index.end() || a == index.end()) {
            throw ParseError("fixture references a club missing from pots.csv", line);
        }
        Fixture f;
        f.home = h->second;
        f.away = a->second;
        f.away_pot = std::stoi(row[2]) - 1;
        schedule.fixtures.push_back(f);
    }
    return schedule;
}

std::map<std::string, double> strengths_from_csv(const std::string& path) {
    const CsvTable table = read_csv(path, {"club", "strength"});
    std::map<std::string, double> strengths;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        strengths[table.rows[r][0]] = std::stod(table.rows[r][1]);
    }
    return strengths;
}

OutcomeModel outcome_model_from_flags(const std::string& model_file, double draw_rate,
                                      const EloParams& params) {
    if (model_file.empty()) {
        return OutcomeModel::implied(params.scale, params.home_advantage, draw_rate);
    }
    std::ifstream in(model_file);
    if (!in) throw Error("cannot open '" + model_file + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const ordered_json j = ordered_json::parse(buf.str());
    const auto& models = j.contains("models") ? j.at("models") : ordered_json::array({j});
    for (const auto& m : models) {
        if (!m.contains("blocks")) continue;
        OutcomeModel model;
        model.kind = OutcomeModel::Kind::fitted_trinomial;
        for (const auto& block : m.at("blocks")) {
            double constant = 0.0, slope = 0.0;
            for (const auto& term : block.at("terms")) {
                const auto feature = term.at("feature").get<std::string>();
                if (feature == "const") constant = term.at("estimate").get<double>();
                else slope = term.at("estimate").get<double>();
            }
            if (block.at("category") == "home win") {
                model.home_const = constant;
                model.home_slope = slope;
            } else if (block.at("category") == "draw") {
                model.draw_const = constant;
                model.draw_slope = slope;
            }
        }
        return model;
    }
    throw DomainError("'" + model_file + "' holds no trinomial model block");
}

int cmd_simulate_league(const GlobalOptions& global, const std::string& pots_path,
                        const std::string& schedule_path, const std::string& strengths_path,
                        const std::string& model_file, double draw_rate, long runs) {
    const Config config = load_config_or_default(global);
    const EloParams params = elo_params_from_config(config);
    const DrawInput input = DrawInput::from_pots_csv(pots_path);

    Schedule schedule;
    if (schedule_path.empty()) {
        schedule = draw(input, global.seed);
    } else {
        schedule = schedule_from_csv(schedule_path, input);
        const ValidityReport validity = validate(input, schedule);
        if (!validity.valid) {
            throw ValidationError("supplied schedule fails validation (" +
                                  std::to_string(validity.violations.size()) + " violations)");
        }
    }

    const auto strengths = strengths_from_csv(strengths_path);
    const OutcomeModel model = outcome_model_from_flags(model_file, draw_rate, params);
    SimulationOptions options;
    options.runs = runs;
    options.seed = global.seed;
    const StandingsDistribution dist = simulate_league(input, schedule, strengths, model, options);

    const std::string csv_path = out_path(global, "standings.csv");
    write_file(csv_path, standings_to_csv(dist));
    const std::string json_path = out_path(global, "standings.json");
    write_file(json_path, standings_to_json(dist));
    std::cout << "wrote " << csv_path << " and " << json_path << "\n";
    return 0;
}

int cmd_simulate_compare(const GlobalOptions& global, const std::string& population_path,
                         const std::string& model_file, double draw_rate, long draws,
                         long runs_per_draw) {
    const Config config = load_config_or_default(global);
    const EloParams params = elo_params_from_config(config);
    const CsvTable table =
        read_csv(population_path, {"club", "association", "rating_a", "rating_b", "true_strength"});
    std::vector<std::string> clubs, associations;
    std::map<std::string, double> rating_a, rating_b, truth;
    for (const auto& row : table.rows) {
        clubs.push_back(row[0]);
        associations.push_back(row[1]);
        rating_a[row[0]] = std::stod(row[2]);
        rating_b[row[0]] = std::stod(row[3]);
        truth[row[0]] = std::stod(row[4]);
    }
    const OutcomeModel model = outcome_model_from_flags(model_file, draw_rate, params);
    CompareOptions options;
    options.draws = draws;
    options.runs_per_draw = runs_per_draw;
    options.seed = global.seed;
    const FairnessReport report =
        compare_seedings(clubs, associations, rating_a, rating_b, truth, model, options);
    const std::string path = out_path(global, "fairness.json");
    write_file(path, fairness_to_json(report));
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_report(const GlobalOptions& global, const std::string& suite_path) {
    std::ifstream in(suite_path);
    if (!in) throw Error("cannot open '" + suite_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::vector<FamilyReport> reports = suite_from_json(buf.str());
    std::ostringstream out;
    for (const auto& report : reports) {
        out << render_table(report) << "\n";
    }
    const std::string path = out_path(global, "tables.txt");
    write_file(path, out.str());
    std::cout << out.str();
    std::cout << "wrote " << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"club ratings, regression evaluation and league-phase simulation"};
    app.require_subcommand(1);
    // Let --seed/--config/--out-dir appear after the subcommand as well.
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--seed", global.seed, "master 64-bit seed for all randomized commands");
    app.add_option("--config", global.config_path, "key/value config file");
    app.add_option("--out-dir", global.out_dir, "directory for every output file");

    std::string matches_path, standings_path, coefficients_path, elo_path;
    std::string pots_path, schedule_path, strengths_path, population_path, model_file, suite_path;
    std::string family = "group-match", period = "all";
    int model_id = 0;
    int first_season = 0, last_season = 0;
    double draw_rate = 0.30;
    long runs = 10000, draws = 200, runs_per_draw = 200;
    bool compare_mode = false;

    const char* kMatchesSchema =
        "matches.csv: match_id,date(YYYY-MM-DD),season(YYYY/YY),competition(CL|EL|ECL|"
        "domestic-league|domestic-cup),stage(group|R16|QF|SF|final|league-phase|other),"
        "home_team,away_team,home_goals,away_goals,neutral(0|1),closed_doors(0|1),single_leg(0|1)";
    const char* kStandingsSchema = "standings.csv: season,group(A-H),team,rank(1-4)";
    const char* kCoefficientsSchema =
        "coefficients.csv: season,team,association,uefa_points (snapshot at season start)";

    CLI::App* ingest = app.add_subcommand("ingest", "validate CSVs and emit a coverage summary");
    ingest->add_option("--matches", matches_path, kMatchesSchema)->required();
    ingest->add_option("--standings", standings_path, kStandingsSchema);
    ingest->add_option("--coefficients", coefficients_path, kCoefficientsSchema);

    CLI::App* rate = app.add_subcommand(
        "rate-elo", "replay matches into June-30 Elo snapshots (season,team,rating)");
    rate->add_option("--matches", matches_path, kMatchesSchema)->required();
    rate->add_option("--first-season", first_season, "first season start year to export");
    rate->add_option("--last-season", last_season, "last season start year to export");

    CLI::App* coef = app.add_subcommand("coef", "rebuild club coefficients from match data");
    coef->add_option("--matches", matches_path, kMatchesSchema)->required();
    coef->add_option("--coefficients", coefficients_path,
                     std::string(kCoefficientsSchema) + "; supplies the roster and membership")
        ->required();

    CLI::App* fit = app.add_subcommand("fit", "fit one model family");
    fit->add_option("--matches", matches_path, kMatchesSchema)->required();
    fit->add_option("--standings", standings_path, kStandingsSchema);
    fit->add_option("--coefficients", coefficients_path, kCoefficientsSchema)->required();
    fit->add_option("--elo", elo_path,
                    "elo snapshot csv season,team,rating (default: replayed from matches)");
    fit->add_option("--family", family,
                    "group-match | knockout | group-ranking | group-ranking-elo | "
                    "group-match-trinomial");
    fit->add_option("--model", model_id, "1 = UEFA only, 2 = Elo only, 3 = both (0 = all)");
    fit->add_option("--period", period, "all | early | late");

    CLI::App* suite = app.add_subcommand("suite", "run every family and period split");
    suite->add_option("--matches", matches_path, kMatchesSchema)->required();
    suite->add_option("--standings", standings_path, kStandingsSchema)->required();
    suite->add_option("--coefficients", coefficients_path, kCoefficientsSchema)->required();
    suite->add_option("--elo", elo_path,
                      "elo snapshot csv season,team,rating (default: replayed from matches)");

    CLI::App* draw_cmd = app.add_subcommand("draw", "draw a league-phase schedule from pots");
    draw_cmd->add_option("--pots", pots_path, "pots.csv: club,pot(1-based),association")
        ->required();

    CLI::App* simulate = app.add_subcommand("simulate", "simulate standings or compare seedings");
    simulate->add_option("--pots", pots_path, "pots.csv: club,pot(1-based),association");
    simulate->add_option("--schedule", schedule_path,
                         "schedule.csv: home,away,away_pot (default: drawn from pots)");
    simulate->add_option("--strengths", strengths_path, "strengths.csv: club,strength");
    simulate->add_option("--model-file", model_file, "fit JSON with a trinomial block");
    simulate->add_option("--draw-rate", draw_rate, "elo-implied draw share at equal strength");
    simulate->add_option("--runs", runs);
    simulate->add_flag("--compare", compare_mode, "seeding fairness comparison mode");
    simulate->add_option("--population", population_path,
                         "population.csv: club,association,rating_a,rating_b,true_strength");
    simulate->add_option("--draws", draws, "schedule draws per policy (compare mode)");
    simulate->add_option("--runs-per-draw", runs_per_draw);

    CLI::App* report = app.add_subcommand("report", "render suite JSON as text tables");
    report->add_option("--suite", suite_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            return cmd_ingest(global, matches_path, standings_path, coefficients_path);
        }
        if (rate->parsed()) {
            return cmd_rate_elo(global, matches_path, first_season, last_season);
        }
        if (coef->parsed()) return cmd_coef(global, matches_path, coefficients_path);
        if (fit->parsed()) {
            return cmd_fit(global, matches_path, standings_path, coefficients_path, elo_path,
                           family, model_id, period);
        }
        if (suite->parsed()) {
            return cmd_suite(global, matches_path, standings_path, coefficients_path, elo_path);
        }
        if (draw_cmd->parsed()) return cmd_draw(global, pots_path);
        if (simulate->parsed()) {
            if (compare_mode) {
                if (population_path.empty()) {
                    throw DomainError("--compare needs --population");
                }
                return cmd_simulate_compare(global, population_path, model_file, draw_rate, draws,
                                            runs_per_draw);
            }
            if (pots_path.empty() || strengths_path.empty()) {
                throw DomainError("simulate needs --pots and --strengths");
            }
            return cmd_simulate_league(global, pots_path, schedule_path, strengths_path,
                                       model_file, draw_rate, runs);
        }
        if (report->parsed()) return cmd_report(global, suite_path);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const SeparationError& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return 2;
    } catch (const RankError& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleDrawError& e) {
        std::cerr << "draw error: " << e.what() << "\n";
        return 2;
    } catch (const UndefinedValueError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
