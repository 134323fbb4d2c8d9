#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clubrank/glm.hpp"
#include "clubrank/samples.hpp"

namespace clubrank {

enum class RatingKind { uefa, elo };

// Share of observations where "higher (or equal) rating predicts success"
// gets the outcome right, as a percentage.
double naive_accuracy(const std::vector<Observation>& sample, RatingKind kind);

// Which of the paper's nested models to fit: (1) UEFA only, (2) Elo only,
// (3) both.
enum class ModelId { uefa_only = 1, elo_only = 2, both = 3 };

struct SuiteSpec {
    SampleFamily family = SampleFamily::group_match;
    std::string period = "all";  // "all", "early", "late"
    std::vector<ModelId> models = {ModelId::uefa_only, ModelId::elo_only, ModelId::both};
};

struct ModelReport {
    ModelId id = ModelId::uefa_only;
    RegressionModel model;
    double cox_snell = 0.0;
    double nagelkerke = 0.0;
    std::optional<double> mcfadden;  // reported for the trinomial family
    double classification = 0.0;     // percent
    // Binary: one entry keyed "". Trinomial: one per category.
    std::map<std::string, double> auc;
};

struct FamilyReport {
    SampleFamily family = SampleFamily::group_match;
    std::string period;
    std::size_t n = 0;
    double naive_uefa = 0.0;  // binary families only
    double naive_elo = 0.0;
    DescriptiveStats delta_uefa_stats;  // raw-delta summaries of the sample
    DescriptiveStats delta_elo_stats;
    std::vector<ModelReport> models;  // (1), (2), (3)
    std::uint64_t fingerprint = 0;    // content hash of the sample
    bool skipped = false;             // empty period halves are marked, not fitted
};

// Builds the design for one family/model and fits it.
DesignMatrix make_design(const std::vector<Observation>& sample, ModelId id);
RegressionModel fit_sample(const std::vector<Observation>& sample, SampleFamily family,
                           ModelId id);

// Fits models (1)..(3) on one sample and assembles the table row block.
FamilyReport run_suite(const std::vector<Observation>& sample, const SuiteSpec& spec);

// run_suite on both halves of split_periods.
std::pair<FamilyReport, FamilyReport> period_report(const std::vector<Observation>& sample,
                                                    SampleFamily family);

std::uint64_t sample_fingerprint(const std::vector<Observation>& sample);

// Deterministic JSON (ordered keys, no timestamps).
std::string report_to_json(const FamilyReport& report, int indent = 2);
std::string suite_to_json(const std::vector<FamilyReport>& reports, int indent = 2);

// Inverse of suite_to_json, sufficient to re-render the text tables.
std::vector<FamilyReport> suite_from_json(const std::string& json_text);

// Plain-text table in the paper's row order (coefficients with significance
// stars, standard errors in parentheses, then the fit metrics).
std::string render_table(const FamilyReport& report);

}  // namespace clubrank
