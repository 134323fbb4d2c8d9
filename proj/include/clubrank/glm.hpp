#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace clubrank {

// Observations with an implicit leading intercept column. `y` holds 0/1 for
// binary fits or category indices for multinomial fits.
class DesignMatrix {
public:
    explicit DesignMatrix(std::vector<std::string> feature_names)
        : feature_names_(std::move(feature_names)) {}

    void add_row(const std::vector<double>& features, int y);

    std::size_t n() const { return y_.size(); }
    std::size_t n_features() const { return feature_names_.size(); }
    std::size_t n_columns() const { return feature_names_.size() + 1; }  // + intercept
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<int>& y() const { return y_; }

    // Value of column j (0 = intercept) for row i.
    double x(std::size_t i, std::size_t j) const {
        return j == 0 ? 1.0 : features_[i * feature_names_.size() + (j - 1)];
    }

    void validate_binary() const;
    int validate_categorical() const;  // returns number of levels (>= 2)

private:
    std::vector<std::string> feature_names_;
    std::vector<double> features_;  // row-major, n x n_features
    std::vector<int> y_;
};

struct FittedTerm {
    std::string feature;  // "const" for the intercept
    double estimate = 0.0;
    double std_error = 0.0;
    double z_value = 0.0;
    double p_value = 1.0;
};

// Paper-footnote thresholds: * 5%, ** 1%, *** 0.1%.
std::string significance_stars(double p_value);

// A fitted binary or multinomial logistic model. For binary fits there is
// exactly one block; for multinomial fits one block per non-reference
// category, with the reference's linear predictor fixed at zero.
struct RegressionModel {
    std::vector<std::string> features;            // "const" first
    std::vector<std::string> categories;          // block labels; binary: {"1"}
    std::string reference;                        // multinomial only
    std::vector<std::vector<FittedTerm>> blocks;  // per category, per feature
    double log_lik_null = 0.0;
    double log_lik_fit = 0.0;
    std::size_t n = 0;
    int iterations = 0;
    bool multinomial = false;
    double event_rate = 0.0;  // binary: share of y = 1

    // Maps a design-level category index to its position in class_order().
    // The reference sits at position 0 for multinomial models.
    std::vector<std::size_t> level_positions;

    // Fitted P(y=1 | x) for a binary model; features exclude the intercept.
    double predict_binary(const std::vector<double>& features_row) const;
    // Fitted category probabilities in class_order(): reference first, then
    // the non-reference categories.
    std::vector<double> predict_categorical(const std::vector<double>& features_row) const;
    // Category labels aligned with predict_categorical's output.
    std::vector<std::string> class_order() const;

    std::size_t level_position(int design_level) const {
        return level_positions.at(static_cast<std::size_t>(design_level));
    }
};

struct FitOptions {
    double gradient_tolerance = 1e-8;
    int max_iterations = 100;
    double separation_threshold = 50.0;  // |coefficient| while likelihood improves
};

// Newton/IRLS maximum likelihood with step-halving. Throws SeparationError
// when a coefficient diverges, RankError on a singular information matrix.
RegressionModel fit_logistic(const DesignMatrix& design, const FitOptions& options = {});

// Multinomial logit against `reference_category` (an index into 0..k-1).
RegressionModel fit_multinomial(const DesignMatrix& design, int reference_category,
                                const std::vector<std::string>& category_names,
                                const FitOptions& options = {});

// Likelihood-based fit metrics.
double cox_snell_r2(const RegressionModel& model);
double cox_snell_upper_bound(const RegressionModel& model);
double nagelkerke_r2(const RegressionModel& model);
double mcfadden_r2(const RegressionModel& model);  // throws UndefinedValueError if lnL0 = 0

// Share of observations classified correctly. Binary: positive when fitted
// probability >= cut (ties count as positive). Multinomial: argmax category.
double classification_rate(const RegressionModel& model, const DesignMatrix& design,
                           double cut = 0.5);

// Trapezoidal / Mann-Whitney AUC with ties counted one half. Requires at
// least one positive and one negative label.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

// One-vs-rest AUC for category `index` (position in model.class_order()).
double one_vs_rest_auc(const RegressionModel& model, const DesignMatrix& design,
                       std::size_t index);

// Log-likelihood of a coefficient vector on a binary design; exposed for the
// oracle tests (grid search, finite differences).
double binary_log_likelihood(const DesignMatrix& design, const std::vector<double>& beta);

}  // namespace clubrank
