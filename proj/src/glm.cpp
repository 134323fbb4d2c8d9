#include "clubrank/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "clubrank/errors.hpp"
#include "clubrank/linalg.hpp"

namespace clubrank {

namespace {

// log(1 + e^t) without overflow.
double log1pexp(double t) {
    if (t > 35.0) return t;
    if (t < -35.0) return std::exp(t);
    return std::log1p(std::exp(t));
}

double sigmoid(double t) {
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// Two-sided normal tail.
double wald_p_value(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

double binary_null_log_lik(std::size_t n, std::size_t positives) {
    const double p = static_cast<double>(positives) / static_cast<double>(n);
    double ll = 0.0;
    if (positives > 0) ll += static_cast<double>(positives) * std::log(p);
    if (positives < n) ll += static_cast<double>(n - positives) * std::log(1.0 - p);
    return ll;
}

void check_finite_row(const std::vector<double>& row) {
    for (double v : row) {
        if (!std::isfinite(v)) throw DomainError("non-finite feature value");
    }
}

}  // namespace

void DesignMatrix::add_row(const std::vector<double>& features, int y) {
    if (features.size() != feature_names_.size()) {
        throw DomainError("row has " + std::to_string(features.size()) + " features, expected " +
                          std::to_string(feature_names_.size()));
    }
    check_finite_row(features);
    features_.insert(features_.end(), features.begin(), features.end());
    y_.push_back(y);
}

void DesignMatrix::validate_binary() const {
    if (n() < n_columns()) throw ValidationError("fewer observations than columns");
    for (int v : y_) {
        if (v != 0 && v != 1) throw ValidationError("binary outcome must be 0 or 1");
    }
}

int DesignMatrix::validate_categorical() const {
    if (y_.empty()) throw ValidationError("empty design");
    int max_level = 0;
    for (int v : y_) {
        if (v < 0) throw ValidationError("negative category index");
        max_level = std::max(max_level, v);
    }
    // Two levels degenerate to the binary logit; the fit then matches
    // fit_logistic on the same data.
    const int levels = max_level + 1;
    if (levels < 2) throw ValidationError("categorical fit needs at least 2 categories");
    if (n() < n_columns() * static_cast<std::size_t>(levels - 1)) {
        throw ValidationError("fewer observations than parameters");
    }
    return levels;
}

std::string significance_stars(double p_value) {
    if (p_value < 0.001) return "***";
    if (p_value < 0.01) return "**";
    if (p_value < 0.05) return "*";
    return "";
}

double RegressionModel::predict_binary(const std::vector<double>& features_row) const {
    if (multinomial) throw DomainError("predict_binary called on a multinomial model");
    const auto& terms = blocks.front();
    double eta = terms[0].estimate;
    for (std::size_t j = 0; j < features_row.size(); ++j) {
        eta += terms[j + 1].estimate * features_row[j];
    }
    return sigmoid(eta);
}

std::vector<double> RegressionModel::predict_categorical(
    const std::vector<double>& features_row) const {
    if (!multinomial) {
        const double p = predict_binary(features_row);
        return {1.0 - p, p};
    }
    // Linear predictors with the reference fixed at zero; softmax guarded
    // against overflow by subtracting the max.
    std::vector<double> eta(blocks.size() + 1, 0.0);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        double v = blocks[k][0].estimate;
        for (std::size_t j = 0; j < features_row.size(); ++j) {
            v += blocks[k][j + 1].estimate * features_row[j];
        }
        eta[k + 1] = v;
    }
    const double top = *std::max_element(eta.begin(), eta.end());
    double total = 0.0;
    std::vector<double> probs(eta.size());
    for (std::size_t k = 0; k < eta.size(); ++k) {
        probs[k] = std::exp(eta[k] - top);
        total += probs[k];
    }
    for (double& p : probs) p /= total;
    return probs;
}

std::vector<std::string> RegressionModel::class_order() const {
    if (!multinomial) return {"0", categories.front()};
    std::vector<std::string> order{reference};
    order.insert(order.end(), categories.begin(), categories.end());
    return order;
}

double binary_log_likelihood(const DesignMatrix& design, const std::vector<double>& beta) {
    double ll = 0.0;
    for (std::size_t i = 0; i < design.n(); ++i) {
        double eta = 0.0;
        for (std::size_t j = 0; j < design.n_columns(); ++j) eta += design.x(i, j) * beta[j];
        ll += design.y()[i] == 1 ? -log1pexp(-eta) : -log1pexp(eta);
    }
    return ll;
}

RegressionModel fit_logistic(const DesignMatrix& design, const FitOptions& options) {
    design.validate_binary();
    const std::size_t n = design.n();
    const std::size_t p = design.n_columns();

    const auto positives =
        static_cast<std::size_t>(std::count(design.y().begin(), design.y().end(), 1));
    if (positives == 0 || positives == n) {
        throw SeparationError("outcome is single-class; the intercept diverges", "const");
    }

    std::vector<double> beta(p, 0.0);
    double log_lik = binary_log_likelihood(design, beta);
    int iterations = 0;
    bool improved_last = false;
    int stalled = 0;  // accepted steps with no measurable likelihood gain

    std::vector<double> gradient(p);
    std::vector<double> information(p * p);
    std::vector<double> mu(n);

    for (; iterations < options.max_iterations; ++iterations) {
        // Score and observed information at the current beta.
        std::fill(gradient.begin(), gradient.end(), 0.0);
        std::fill(information.begin(), information.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double eta = 0.0;
            for (std::size_t j = 0; j < p; ++j) eta += design.x(i, j) * beta[j];
            mu[i] = sigmoid(eta);
            const double resid = static_cast<double>(design.y()[i]) - mu[i];
            const double w = mu[i] * (1.0 - mu[i]);
            for (std::size_t j = 0; j < p; ++j) {
                gradient[j] += design.x(i, j) * resid;
                for (std::size_t k = 0; k <= j; ++k) {
                    information[j * p + k] += w * design.x(i, j) * design.x(i, k);
                }
            }
        }

        double grad_max = 0.0;
        for (double g : gradient) grad_max = std::max(grad_max, std::fabs(g));
        if (grad_max < options.gradient_tolerance) break;

        auto chol = Cholesky::factor(information, p);
        if (!chol) throw RankError("singular information matrix (collinear design)");
        const std::vector<double> direction = chol->solve(gradient);

        // Step-halving: never accept a likelihood decrease.
        double step = 1.0;
        std::vector<double> candidate(p);
        double candidate_ll = -std::numeric_limits<double>::infinity();
        while (step > 1e-10) {
            for (std::size_t j = 0; j < p; ++j) candidate[j] = beta[j] + step * direction[j];
            candidate_ll = binary_log_likelihood(design, candidate);
            if (candidate_ll >= log_lik) break;
            step *= 0.5;
        }
        if (candidate_ll < log_lik) break;  // no admissible step; report where we are
        improved_last = candidate_ll > log_lik;
        // The likelihood surface is flat at double precision: the gradient
        // cannot shrink further, so this is the numerical optimum.
        stalled = candidate_ll - log_lik < 1e-13 * (1.0 + std::fabs(log_lik)) ? stalled + 1 : 0;
        beta = candidate;
        log_lik = candidate_ll;
        if (stalled >= 2) break;

        for (std::size_t j = 0; j < p; ++j) {
            if (std::fabs(beta[j]) > options.separation_threshold && improved_last) {
                const std::string culprit = j == 0 ? "const" : design.feature_names()[j - 1];
                throw SeparationError(
                    "coefficient for '" + culprit + "' diverged past " +
                        std::to_string(options.separation_threshold) +
                        " while the likelihood kept improving (separated data)",
                    culprit);
            }
        }
    }

    // Standard errors from the inverse information at the optimum.
    std::fill(information.begin(), information.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double eta = 0.0;
        for (std::size_t j = 0; j < p; ++j) eta += design.x(i, j) * beta[j];
        const double w = sigmoid(eta) * (1.0 - sigmoid(eta));
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t k = 0; k <= j; ++k) {
                information[j * p + k] += w * design.x(i, j) * design.x(i, k);
            }
        }
    }
    auto chol = Cholesky::factor(information, p);
    if (!chol) throw RankError("singular information matrix at the optimum");
    const std::vector<double> variances = chol->inverse_diagonal();

    RegressionModel model;
    model.features.push_back("const");
    for (const auto& name : design.feature_names()) model.features.push_back(name);
    model.categories = {"1"};
    model.level_positions = {0, 1};
    model.multinomial = false;
    model.n = n;
    model.iterations = iterations;
    model.log_lik_fit = log_lik;
    model.log_lik_null = binary_null_log_lik(n, positives);
    model.event_rate = static_cast<double>(positives) / static_cast<double>(n);

    std::vector<FittedTerm> terms;
    for (std::size_t j = 0; j < p; ++j) {
        FittedTerm term;
        term.feature = model.features[j];
        term.estimate = beta[j];
        term.std_error = std::sqrt(variances[j]);
        term.z_value = term.estimate / term.std_error;
        term.p_value = wald_p_value(term.z_value);
        terms.push_back(term);
    }
    model.blocks.push_back(std::move(terms));
    return model;
}

namespace {

// Log-likelihood for the multinomial parametrization used below: beta is
// (k-1) blocks of p coefficients for the non-reference categories, category
// index 0 being the reference with linear predictor 0.
double multinomial_log_likelihood(const DesignMatrix& design, const std::vector<double>& beta,
                                  int levels, const std::vector<int>& remapped_y) {
    const std::size_t p = design.n_columns();
    const std::size_t blocks = static_cast<std::size_t>(levels - 1);
    double ll = 0.0;
    std::vector<double> eta(static_cast<std::size_t>(levels));
    for (std::size_t i = 0; i < design.n(); ++i) {
        eta[0] = 0.0;
        for (std::size_t k = 0; k < blocks; ++k) {
            double v = 0.0;
            for (std::size_t j = 0; j < p; ++j) v += design.x(i, j) * beta[k * p + j];
            eta[k + 1] = v;
        }
        const double top = *std::max_element(eta.begin(), eta.end());
        double total = 0.0;
        for (double e : eta) total += std::exp(e - top);
        ll += eta[static_cast<std::size_t>(remapped_y[i])] - top - std::log(total);
    }
    return ll;
}

}  // namespace

RegressionModel fit_multinomial(const DesignMatrix& design, int reference_category,
                                const std::vector<std::string>& category_names,
                                const FitOptions& options) {
    const int levels = design.validate_categorical();
    if (reference_category < 0 || reference_category >= levels) {
        throw DomainError("reference category out of range");
    }
    if (category_names.size() != static_cast<std::size_t>(levels)) {
        throw DomainError("category_names must name every level");
    }

    // Remap outcomes so the reference is category 0 and the others keep their
    // relative order.
    std::vector<int> level_map(static_cast<std::size_t>(levels));
    {
        int next = 1;
        for (int lv = 0; lv < levels; ++lv) {
            level_map[static_cast<std::size_t>(lv)] = (lv == reference_category) ? 0 : next++;
        }
    }
    std::vector<int> y(design.n());
    std::vector<std::size_t> level_counts(static_cast<std::size_t>(levels), 0);
    for (std::size_t i = 0; i < design.n(); ++i) {
        y[i] = level_map[static_cast<std::size_t>(design.y()[i])];
        ++level_counts[static_cast<std::size_t>(design.y()[i])];
    }
    for (int lv = 0; lv < levels; ++lv) {
        if (level_counts[static_cast<std::size_t>(lv)] == 0) {
            throw SeparationError("category '" + category_names[static_cast<std::size_t>(lv)] +
                                      "' has no observations",
                                  "const");
        }
    }

    const std::size_t n = design.n();
    const std::size_t p = design.n_columns();
    const std::size_t blocks = static_cast<std::size_t>(levels - 1);
    const std::size_t dim = blocks * p;

    std::vector<double> beta(dim, 0.0);
    double log_lik = multinomial_log_likelihood(design, beta, levels, y);
    int iterations = 0;
    int stalled = 0;

    std::vector<double> gradient(dim);
    std::vector<double> hessian(dim * dim);
    std::vector<double> probs(static_cast<std::size_t>(levels));

    for (; iterations < options.max_iterations; ++iterations) {
        std::fill(gradient.begin(), gradient.end(), 0.0);
        std::fill(hessian.begin(), hessian.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double top = 0.0;
            probs[0] = 0.0;
            for (std::size_t k = 0; k < blocks; ++k) {
                double v = 0.0;
                for (std::size_t j = 0; j < p; ++j) v += design.x(i, j) * beta[k * p + j];
                probs[k + 1] = v;
                top = std::max(top, v);
            }
            double total = 0.0;
            for (std::size_t k = 0; k < probs.size(); ++k) {
                probs[k] = std::exp(probs[k] - top);
                total += probs[k];
            }
            for (double& q : probs) q /= total;

            for (std::size_t k = 0; k < blocks; ++k) {
                const double pk = probs[k + 1];
                const double indicator = (y[i] == static_cast<int>(k + 1)) ? 1.0 : 0.0;
                for (std::size_t j = 0; j < p; ++j) {
                    gradient[k * p + j] += design.x(i, j) * (indicator - pk);
                }
                for (std::size_t l = 0; l <= k; ++l) {
                    const double pl = probs[l + 1];
                    const double w = (k == l) ? pk * (1.0 - pk) : -pk * pl;
                    for (std::size_t j = 0; j < p; ++j) {
                        const double xw = design.x(i, j) * w;
                        for (std::size_t m = 0; m < p; ++m) {
                            const std::size_t row = k * p + j;
                            const std::size_t col = l * p + m;
                            if (col <= row) hessian[row * dim + col] += xw * design.x(i, m);
                        }
                    }
                }
            }
        }

        double grad_max = 0.0;
        for (double g : gradient) grad_max = std::max(grad_max, std::fabs(g));
        if (grad_max < options.gradient_tolerance) break;

        auto chol = Cholesky::factor(hessian, dim);
        if (!chol) throw RankError("singular information matrix (collinear design)");
        const std::vector<double> direction = chol->solve(gradient);

        double step = 1.0;
        std::vector<double> candidate(dim);
        double candidate_ll = -std::numeric_limits<double>::infinity();
        while (step > 1e-10) {
            for (std::size_t j = 0; j < dim; ++j) candidate[j] = beta[j] + step * direction[j];
            candidate_ll = multinomial_log_likelihood(design, candidate, levels, y);
            if (candidate_ll >= log_lik) break;
            step *= 0.5;
        }
        if (candidate_ll < log_lik) break;
        const bool improved = candidate_ll > log_lik;
        stalled = candidate_ll - log_lik < 1e-13 * (1.0 + std::fabs(log_lik)) ? stalled + 1 : 0;
        beta = candidate;
        log_lik = candidate_ll;
        if (stalled >= 2) break;

        for (std::size_t j = 0; j < dim; ++j) {
            if (std::fabs(beta[j]) > options.separation_threshold && improved) {
                const std::size_t feature_idx = j % p;
                const std::string culprit =
                    feature_idx == 0 ? "const" : design.feature_names()[feature_idx - 1];
                throw SeparationError("coefficient for '" + culprit + "' diverged (separated data)",
                                      culprit);
            }
        }
    }

    // Rebuild the information at the optimum for standard errors.
    std::fill(hessian.begin(), hessian.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double top = 0.0;
        probs[0] = 0.0;
        for (std::size_t k = 0; k < blocks; ++k) {
            double v = 0.0;
            for (std::size_t j = 0; j < p; ++j) v += design.x(i, j) * beta[k * p + j];
            probs[k + 1] = v;
            top = std::max(top, v);
        }
        double total = 0.0;
        for (std::size_t k = 0; k < probs.size(); ++k) {
            probs[k] = std::exp(probs[k] - top);
            total += probs[k];
        }
        for (double& q : probs) q /= total;
        for (std::size_t k = 0; k < blocks; ++k) {
            for (std::size_t l = 0; l <= k; ++l) {
                const double w =
                    (k == l) ? probs[k + 1] * (1.0 - probs[k + 1]) : -probs[k + 1] * probs[l + 1];
                for (std::size_t j = 0; j < p; ++j) {
                    const double xw = design.x(i, j) * w;
                    for (std::size_t m = 0; m < p; ++m) {
                        const std::size_t row = k * p + j;
                        const std::size_t col = l * p + m;
                        if (col <= row) hessian[row * dim + col] += xw * design.x(i, m);
                    }
                }
            }
        }
    }
    auto chol = Cholesky::factor(hessian, dim);
    if (!chol) throw RankError("singular information matrix at the optimum");
    const std::vector<double> variances = chol->inverse_diagonal();

    RegressionModel model;
    model.features.push_back("const");
    for (const auto& name : design.feature_names()) model.features.push_back(name);
    model.multinomial = true;
    model.reference = category_names[static_cast<std::size_t>(reference_category)];
    model.level_positions.resize(static_cast<std::size_t>(levels));
    for (int lv = 0; lv < levels; ++lv) {
        model.level_positions[static_cast<std::size_t>(lv)] =
            static_cast<std::size_t>(level_map[static_cast<std::size_t>(lv)]);
    }
    model.n = n;
    model.iterations = iterations;
    model.log_lik_fit = log_lik;

    // Intercept-only null: category shares.
    double null_ll = 0.0;
    for (int lv = 0; lv < levels; ++lv) {
        const auto count = level_counts[static_cast<std::size_t>(lv)];
        null_ll += static_cast<double>(count) *
                   std::log(static_cast<double>(count) / static_cast<double>(n));
    }
    model.log_lik_null = null_ll;

    for (int lv = 0; lv < levels; ++lv) {
        if (lv == reference_category) continue;
        model.categories.push_back(category_names[static_cast<std::size_t>(lv)]);
        const auto k = static_cast<std::size_t>(level_map[static_cast<std::size_t>(lv)] - 1);
        std::vector<FittedTerm> terms;
        for (std::size_t j = 0; j < p; ++j) {
            FittedTerm term;
            term.feature = model.features[j];
            term.estimate = beta[k * p + j];
            term.std_error = std::sqrt(variances[k * p + j]);
            term.z_value = term.estimate / term.std_error;
            term.p_value = wald_p_value(term.z_value);
            terms.push_back(term);
        }
        model.blocks.push_back(std::move(terms));
    }
    return model;
}

double cox_snell_r2(const RegressionModel& model) {
    const double exponent = 2.0 * (model.log_lik_null - model.log_lik_fit) /
                            static_cast<double>(model.n);
    return 1.0 - std::exp(exponent);
}

double cox_snell_upper_bound(const RegressionModel& model) {
    return 1.0 - std::exp(2.0 * model.log_lik_null / static_cast<double>(model.n));
}

double nagelkerke_r2(const RegressionModel& model) {
    const double bound = cox_snell_upper_bound(model);
    if (bound <= 0.0) throw UndefinedValueError("Cox & Snell upper bound is zero");
    return cox_snell_r2(model) / bound;
}

double mcfadden_r2(const RegressionModel& model) {
    if (model.log_lik_null == 0.0) {
        throw UndefinedValueError("McFadden R2 undefined: null log-likelihood is zero");
    }
    return 1.0 - model.log_lik_fit / model.log_lik_null;
}

double classification_rate(const RegressionModel& model, const DesignMatrix& design, double cut) {
    std::size_t correct = 0;
    std::vector<double> row(design.n_features());
    for (std::size_t i = 0; i < design.n(); ++i) {
        for (std::size_t j = 0; j < row.size(); ++j) row[j] = design.x(i, j + 1);
        if (!model.multinomial) {
            const int predicted = model.predict_binary(row) >= cut ? 1 : 0;
            if (predicted == design.y()[i]) ++correct;
        } else {
            const std::vector<double> probs = model.predict_categorical(row);
            std::size_t best = 0;
            for (std::size_t k = 1; k < probs.size(); ++k) {
                if (probs[k] > probs[best]) best = k;
            }
            if (best == model.level_position(design.y()[i])) ++correct;
        }
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(design.n());
}

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw DomainError("scores/labels size mismatch");
    const std::size_t n = scores.size();
    std::size_t positives = 0;
    for (int label : labels) {
        if (label != 0 && label != 1) throw DomainError("labels must be 0/1");
        positives += static_cast<std::size_t>(label);
    }
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
        throw UndefinedValueError("AUC undefined for single-class labels");
    }

    // Midrank rank-sum: AUC = (R+ - n+(n+ + 1)/2) / (n+ n-).
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) positive_rank_sum += midrank;
        }
        i = j;
    }
    const double np = static_cast<double>(positives);
    const double nn = static_cast<double>(negatives);
    return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double one_vs_rest_auc(const RegressionModel& model, const DesignMatrix& design,
                       std::size_t index) {
    std::vector<double> scores(design.n());
    std::vector<int> labels(design.n());
    std::vector<double> row(design.n_features());
    for (std::size_t i = 0; i < design.n(); ++i) {
        for (std::size_t j = 0; j < row.size(); ++j) row[j] = design.x(i, j + 1);
        scores[i] = model.predict_categorical(row)[index];
        labels[i] = model.level_position(design.y()[i]) == index ? 1 : 0;
    }
    return roc_auc(scores, labels);
}

}  // namespace clubrank
