#include "clubrank/evaluation.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "clubrank/errors.hpp"
#include "clubrank/ingest.hpp"

namespace clubrank {

using ordered_json = nlohmann::ordered_json;

double naive_accuracy(const std::vector<Observation>& sample, RatingKind kind) {
    if (sample.empty()) return 0.0;
    std::size_t correct = 0;
    for (const auto& obs : sample) {
        const double delta = kind == RatingKind::uefa ? obs.delta_uefa : obs.delta_elo;
        const int predicted = delta >= 0.0 ? 1 : 0;  // higher or equal predicts success
        if (predicted == obs.y) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(sample.size());
}

DesignMatrix make_design(const std::vector<Observation>& sample, ModelId id) {
    std::vector<std::string> features;
    if (id == ModelId::uefa_only) features = {"UEFA"};
    else if (id == ModelId::elo_only) features = {"Elo"};
    else features = {"UEFA", "Elo"};

    DesignMatrix design(features);
    for (const auto& obs : sample) {
        std::vector<double> row;
        if (id != ModelId::elo_only) row.push_back(obs.delta_uefa);
        if (id != ModelId::uefa_only) row.push_back(obs.delta_elo);
        design.add_row(row, obs.y);
    }
    return design;
}

RegressionModel fit_sample(const std::vector<Observation>& sample, SampleFamily family,
                           ModelId id) {
    const DesignMatrix design = make_design(sample, id);
    if (family == SampleFamily::group_match_trinomial) {
        return fit_multinomial(design, kTrinomialReference, kTrinomialCategories);
    }
    return fit_logistic(design);
}

std::uint64_t sample_fingerprint(const std::vector<Observation>& sample) {
    std::ostringstream canon;
    canon.precision(17);
    for (const auto& obs : sample) {
        canon << obs.y << '|' << obs.delta_uefa << '|' << obs.delta_elo << '|' << obs.season << '|'
              << to_string(obs.tag) << '\n';
    }
    return fnv1a64(canon.str());
}

FamilyReport run_suite(const std::vector<Observation>& sample, const SuiteSpec& spec) {
    FamilyReport report;
    report.family = spec.family;
    report.period = spec.period;
    report.n = sample.size();
    report.fingerprint = sample_fingerprint(sample);
    if (sample.empty()) {
        report.skipped = true;
        return report;
    }
    const bool trinomial = spec.family == SampleFamily::group_match_trinomial;
    if (!trinomial) {  // the naive sign rule has no three-way reading
        report.naive_uefa = naive_accuracy(sample, RatingKind::uefa);
        report.naive_elo = naive_accuracy(sample, RatingKind::elo);
    }
    std::vector<double> uefa_deltas(sample.size()), elo_deltas(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        uefa_deltas[i] = sample[i].delta_uefa;
        elo_deltas[i] = sample[i].delta_elo;
    }
    report.delta_uefa_stats = descriptive_stats(std::move(uefa_deltas));
    report.delta_elo_stats = descriptive_stats(std::move(elo_deltas));
    for (ModelId id : spec.models) {
        ModelReport mr;
        mr.id = id;
        const std::string context = "model (" + std::to_string(static_cast<int>(id)) + ") on " +
                                    to_string(spec.family) + "/" + spec.period + ": ";
        try {
            mr.model = fit_sample(sample, spec.family, id);
        } catch (const SeparationError& e) {  // keep the type for exit-code mapping
            throw SeparationError(context + e.what(), e.feature());
        } catch (const RankError& e) {
            throw RankError(context + e.what());
        } catch (const Error& e) {
            throw Error(context + e.what());
        }
        mr.cox_snell = cox_snell_r2(mr.model);
        mr.nagelkerke = nagelkerke_r2(mr.model);
        if (trinomial) mr.mcfadden = mcfadden_r2(mr.model);

        const DesignMatrix design = make_design(sample, id);
        mr.classification = classification_rate(mr.model, design);
        if (!trinomial) {
            std::vector<double> scores(design.n());
            std::vector<int> labels = design.y();
            std::vector<double> row(design.n_features());
            for (std::size_t i = 0; i < design.n(); ++i) {
                for (std::size_t j = 0; j < row.size(); ++j) row[j] = design.x(i, j + 1);
                scores[i] = mr.model.predict_binary(row);
            }
            mr.auc[""] = roc_auc(scores, labels);
        } else {
            const auto order = mr.model.class_order();
            // Paper row order: home win, draw, away win.
            for (std::string cat : {"home win", "draw", "away win"}) {
                for (std::size_t k = 0; k < order.size(); ++k) {
                    if (order[k] == cat) mr.auc[cat] = one_vs_rest_auc(mr.model, design, k);
                }
            }
        }
        report.models.push_back(std::move(mr));
    }
    return report;
}

std::pair<FamilyReport, FamilyReport> period_report(const std::vector<Observation>& sample,
                                                    SampleFamily family) {
    const PeriodSplit split = split_periods(sample);
    FamilyReport early = run_suite(split.early, SuiteSpec{family, "early"});
    FamilyReport late = run_suite(split.late, SuiteSpec{family, "late (w/o 2020/21)"});
    return {std::move(early), std::move(late)};
}

namespace {

ordered_json term_to_json(const FittedTerm& term) {
    ordered_json j;
    j["feature"] = term.feature;
    j["estimate"] = term.estimate;
    j["std_error"] = term.std_error;
    j["z_value"] = term.z_value;
    j["p_value"] = term.p_value;
    j["stars"] = significance_stars(term.p_value);
    return j;
}

ordered_json model_report_to_json(const ModelReport& mr) {
    ordered_json j;
    j["model"] = static_cast<int>(mr.id);
    j["n"] = mr.model.n;
    j["iterations"] = mr.model.iterations;
    j["log_lik_null"] = mr.model.log_lik_null;
    j["log_lik_fit"] = mr.model.log_lik_fit;
    if (mr.model.multinomial) {
        j["reference"] = mr.model.reference;
        ordered_json blocks = ordered_json::array();
        for (std::size_t k = 0; k < mr.model.categories.size(); ++k) {
            ordered_json block;
            block["category"] = mr.model.categories[k];
            ordered_json terms = ordered_json::array();
            for (const auto& term : mr.model.blocks[k]) terms.push_back(term_to_json(term));
            block["terms"] = terms;
            blocks.push_back(block);
        }
        j["blocks"] = blocks;
    } else {
        ordered_json terms = ordered_json::array();
        for (const auto& term : mr.model.blocks.front()) terms.push_back(term_to_json(term));
        j["terms"] = terms;
    }
    j["cox_snell_r2"] = mr.cox_snell;
    j["nagelkerke_r2"] = mr.nagelkerke;
    if (mr.mcfadden) j["mcfadden_r2"] = *mr.mcfadden;
    j["classification_pct"] = mr.classification;
    if (mr.auc.size() == 1 && mr.auc.count("")) {
        j["auc"] = mr.auc.at("");
    } else {
        ordered_json auc;
        for (std::string cat : {"home win", "draw", "away win"}) {
            if (mr.auc.count(cat)) auc[cat] = mr.auc.at(cat);
        }
        j["auc"] = auc;
    }
    return j;
}

ordered_json family_report_to_json(const FamilyReport& report) {
    ordered_json j;
    j["family"] = to_string(report.family);
    j["period"] = report.period;
    j["n"] = report.n;
    char fp[24];
    std::snprintf(fp, sizeof(fp), "%016llx",
                  static_cast<unsigned long long>(report.fingerprint));
    j["fingerprint"] = fp;
    if (report.skipped) {
        j["skipped"] = true;
        return j;
    }
    if (report.family != SampleFamily::group_match_trinomial) {
        j["naive_accuracy_pct"] =
            ordered_json{{"UEFA", report.naive_uefa}, {"Elo", report.naive_elo}};
    }
    auto stats_json = [](const DescriptiveStats& s) {
        return ordered_json{{"mean", s.mean},
                            {"median", s.median},
                            {"st_dev", s.st_dev},
                            {"min", s.min},
                            {"max", s.max}};
    };
    j["delta_stats"] = ordered_json{{"UEFA", stats_json(report.delta_uefa_stats)},
                                    {"Elo", stats_json(report.delta_elo_stats)}};
    ordered_json models = ordered_json::array();
    for (const auto& mr : report.models) models.push_back(model_report_to_json(mr));
    j["models"] = models;
    return j;
}

std::string format_number(double value, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

}  // namespace

std::string report_to_json(const FamilyReport& report, int indent) {
    return family_report_to_json(report).dump(indent) + "\n";
}

std::string suite_to_json(const std::vector<FamilyReport>& reports, int indent) {
    ordered_json j;
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(family_report_to_json(r));
    j["reports"] = arr;
    return j.dump(indent) + "\n";
}

namespace {

SampleFamily family_from_string(const std::string& name) {
    for (SampleFamily f : {SampleFamily::group_match, SampleFamily::knockout,
                           SampleFamily::group_ranking, SampleFamily::group_ranking_elo,
                           SampleFamily::group_match_trinomial}) {
        if (to_string(f) == name) return f;
    }
    throw ParseError("unknown sample family '" + name + "'");
}

std::vector<FittedTerm> terms_from_json(const ordered_json& terms) {
    std::vector<FittedTerm> out;
    for (const auto& t : terms) {
        FittedTerm term;
        term.feature = t.at("feature").get<std::string>();
        term.estimate = t.at("estimate").get<double>();
        term.std_error = t.at("std_error").get<double>();
        term.z_value = t.at("z_value").get<double>();
        term.p_value = t.at("p_value").get<double>();
        out.push_back(std::move(term));
    }
    return out;
}

}  // namespace

std::vector<FamilyReport> suite_from_json(const std::string& json_text) {
    const ordered_json root = ordered_json::parse(json_text);
    std::vector<FamilyReport> reports;
    for (const auto& j : root.at("reports")) {
        FamilyReport report;
        report.family = family_from_string(j.at("family").get<std::string>());
        report.period = j.at("period").get<std::string>();
        report.n = j.at("n").get<std::size_t>();
        report.fingerprint =
            std::stoull(j.at("fingerprint").get<std::string>(), nullptr, 16);
        if (j.contains("skipped") && j.at("skipped").get<bool>()) {
            report.skipped = true;
            reports.push_back(std::move(report));
            continue;
        }
        if (j.contains("naive_accuracy_pct")) {
            report.naive_uefa = j.at("naive_accuracy_pct").at("UEFA").get<double>();
            report.naive_elo = j.at("naive_accuracy_pct").at("Elo").get<double>();
        }
        for (const auto& m : j.at("models")) {
            ModelReport mr;
            mr.id = static_cast<ModelId>(m.at("model").get<int>());
            mr.model.n = m.at("n").get<std::size_t>();
            mr.model.log_lik_null = m.at("log_lik_null").get<double>();
            mr.model.log_lik_fit = m.at("log_lik_fit").get<double>();
            if (m.contains("blocks")) {
                mr.model.multinomial = true;
                mr.model.reference = m.at("reference").get<std::string>();
                for (const auto& block : m.at("blocks")) {
                    mr.model.categories.push_back(block.at("category").get<std::string>());
                    mr.model.blocks.push_back(terms_from_json(block.at("terms")));
                }
            } else {
                mr.model.categories = {"1"};
                mr.model.blocks.push_back(terms_from_json(m.at("terms")));
            }
            mr.cox_snell = m.at("cox_snell_r2").get<double>();
            mr.nagelkerke = m.at("nagelkerke_r2").get<double>();
            if (m.contains("mcfadden_r2")) mr.mcfadden = m.at("mcfadden_r2").get<double>();
            mr.classification = m.at("classification_pct").get<double>();
            if (m.at("auc").is_number()) {
                mr.auc[""] = m.at("auc").get<double>();
            } else {
                for (const auto& [cat, value] : m.at("auc").items()) {
                    mr.auc[cat] = value.get<double>();
                }
            }
            report.models.push_back(std::move(mr));
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::string render_table(const FamilyReport& report) {
    std::ostringstream out;
    out << to_string(report.family) << ", " << report.period << "\n";
    if (report.skipped) {
        out << "  (no observations; skipped)\n";
        return out.str();
    }

    const std::size_t width = 12;
    auto cell = [&](const std::string& s) {
        std::string padded = s;
        if (padded.size() < width) padded.insert(0, width - padded.size(), ' ');
        return padded;
    };
    auto label = [&](const std::string& s) {
        std::string padded = s;
        const std::size_t label_width = 26;
        if (padded.size() < label_width) padded.append(label_width - padded.size(), ' ');
        return padded;
    };

    out << label("");
    for (const auto& mr : report.models) {
        out << cell("(" + std::to_string(static_cast<int>(mr.id)) + ")");
    }
    out << "\n";

    const bool trinomial = report.family == SampleFamily::group_match_trinomial;
    const std::vector<std::string> categories =
        trinomial ? std::vector<std::string>{"home win", "draw"} : std::vector<std::string>{""};

    for (const auto& category : categories) {
        for (std::string feature : {"const", "UEFA", "Elo"}) {
            std::string row_label = feature == "const" ? "Constant" : feature;
            if (!category.empty()) row_label = category + " " + row_label;
            std::string estimates, errors;
            bool any = false;
            for (const auto& mr : report.models) {
                std::size_t block = 0;
                if (trinomial) {
                    for (std::size_t k = 0; k < mr.model.categories.size(); ++k) {
                        if (mr.model.categories[k] == category) block = k;
                    }
                }
                const FittedTerm* term = nullptr;
                for (const auto& t : mr.model.blocks[block]) {
                    if (t.feature == feature) term = &t;
                }
                if (term) {
                    estimates += cell(format_number(term->estimate, 3) +
                                      significance_stars(term->p_value));
                    errors += cell("(" + format_number(term->std_error, 3) + ")");
                    any = true;
                } else {
                    estimates += cell("---");
                    errors += cell("");
                }
            }
            if (!any) continue;
            out << label(row_label) << estimates << "\n" << label("") << errors << "\n";
        }
    }

    auto metric_row = [&](const std::string& name, auto getter, int decimals,
                          const std::string& suffix = "") {
        out << label(name);
        for (const auto& mr : report.models) {
            out << cell(format_number(getter(mr), decimals) + suffix);
        }
        out << "\n";
    };
    metric_row("Cox & Snell R2", [](const ModelReport& m) { return m.cox_snell; }, 3);
    metric_row("Nagelkerke R2", [](const ModelReport& m) { return m.nagelkerke; }, 3);
    if (trinomial) {
        metric_row("McFadden R2", [](const ModelReport& m) { return *m.mcfadden; }, 3);
    }
    metric_row("Classification", [](const ModelReport& m) { return m.classification; }, 1, "%");
    if (!trinomial) {
        metric_row("Area under ROC", [](const ModelReport& m) { return m.auc.at(""); }, 3);
    } else {
        for (std::string cat : {"home win", "draw", "away win"}) {
            metric_row("Area under ROC " + cat,
                       [&](const ModelReport& m) { return m.auc.at(cat); }, 3);
        }
    }
    out << label("Observations");
    for (std::size_t i = 0; i < report.models.size(); ++i) {
        out << cell(std::to_string(report.n));
    }
    out << "\n";
    if (!trinomial) {
        out << label("Naive accuracy") << cell(format_number(report.naive_uefa, 2) + "%")
            << cell(format_number(report.naive_elo, 2) + "%") << cell("") << "\n";
    }
    return out.str();
}

}  // namespace clubrank
