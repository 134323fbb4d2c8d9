#include <doctest.h>

#include <cmath>
#include <limits>

#include "clubrank/errors.hpp"
#include "clubrank/glm.hpp"
#include "clubrank/rng.hpp"
#include "support/oracles.hpp"

using namespace clubrank;

namespace {

DesignMatrix hand_dataset() { return oracles::frozen_logistic_dataset(); }

DesignMatrix logistic_sample(std::uint64_t seed, std::size_t n, double b0, double b1,
                             double x_scale = 1.0) {
    Rng rng(seed);
    DesignMatrix design({"x"});
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (rng.uniform01() * 4.0 - 2.0) * x_scale;
        const double p = 1.0 / (1.0 + std::exp(-(b0 + b1 * x / x_scale)));
        design.add_row({x}, rng.uniform01() < p ? 1 : 0);
    }
    return design;
}

}  // namespace

TEST_CASE("logistic fit matches the coefficient-grid oracle within 1e-6") {
    const DesignMatrix design = hand_dataset();
    const RegressionModel model = fit_logistic(design);
    const double oracle = oracles::grid_search_loglik(design);
    CHECK(std::fabs(model.log_lik_fit - oracle) < 1e-6);
    CHECK(model.log_lik_fit >= oracle - 1e-9);  // the oracle can only undershoot
}

TEST_CASE("gradient vanishes at the reported optimum (finite differences)") {
    const DesignMatrix design = hand_dataset();
    const RegressionModel model = fit_logistic(design);
    const std::vector<double> beta = {model.blocks[0][0].estimate, model.blocks[0][1].estimate};
    for (double g : oracles::finite_diff_gradient(design, beta)) {
        CHECK(std::fabs(g) < 1e-5);
    }
}

TEST_CASE("pure-noise feature gets a near-zero coefficient and p near 1") {
    Rng rng(424242);
    DesignMatrix design({"noise"});
    for (int i = 0; i < 2000; ++i) {
        design.add_row({rng.uniform01() * 2.0 - 1.0}, i % 2);
    }
    const RegressionModel model = fit_logistic(design);
    CHECK(std::fabs(model.blocks[0][1].estimate) < 0.15);
    CHECK(model.blocks[0][1].p_value > 0.05);
    CHECK(std::fabs(model.blocks[0][0].estimate) < 0.1);  // balanced outcome
}

TEST_CASE("single-class and separated designs raise typed errors") {
    DesignMatrix all_ones({"x"});
    for (int i = 0; i < 10; ++i) all_ones.add_row({static_cast<double>(i)}, 1);
    CHECK_THROWS_AS(fit_logistic(all_ones), SeparationError);

    // Margins this small force the diverging coefficient across the
    // detection threshold before the gradient can underflow.
    DesignMatrix separated({"x"});
    for (int i = 0; i < 40; ++i) {
        const double x = i < 20 ? -0.3 - 0.005 * i : 0.3 + 0.005 * (i - 20);
        separated.add_row({x}, x > 0 ? 1 : 0);
    }
    CHECK_THROWS_AS(fit_logistic(separated), SeparationError);
    try {
        fit_logistic(separated);
    } catch (const SeparationError& e) {
        CHECK(e.feature() == "x");
    }

    DesignMatrix collinear({"a", "b"});
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.uniform01();
        collinear.add_row({x, 2.0 * x}, rng.uniform01() < 0.5 ? 1 : 0);
    }
    CHECK_THROWS_AS(fit_logistic(collinear), RankError);
}

TEST_CASE("metric identities") {
    SUBCASE("hand case: n=2, lnL0=-1.386, lnLM=-0.693 gives Cox & Snell 0.5") {
        RegressionModel model;
        model.n = 2;
        model.log_lik_null = std::log(0.5) * 2.0;  // -1.386
        model.log_lik_fit = std::log(0.5);         // -0.693
        model.event_rate = 0.5;
        CHECK(cox_snell_r2(model) == doctest::Approx(1.0 - std::exp(-std::log(2.0))).epsilon(1e-12));
        CHECK(cox_snell_r2(model) == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("null model scores zero on all three R2") {
        DesignMatrix design({"x"});
        Rng rng(11);
        for (int i = 0; i < 400; ++i) design.add_row({rng.uniform01()}, i % 4 == 0 ? 1 : 0);
        RegressionModel model = fit_logistic(design);
        // Force the null: a model whose fit equals the intercept-only fit.
        model.log_lik_fit = model.log_lik_null;
        CHECK(cox_snell_r2(model) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(nagelkerke_r2(model) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(mcfadden_r2(model) == doctest::Approx(0.0).epsilon(1e-15));
    }

    SUBCASE("Cox & Snell upper bound equals 1 - [p^p (1-p)^(1-p)]^2") {
        const DesignMatrix design = logistic_sample(77, 500, 0.3, 0.9);
        const RegressionModel model = fit_logistic(design);
        const double p = model.event_rate;
        const double expected =
            1.0 - std::pow(std::pow(p, p) * std::pow(1.0 - p, 1.0 - p), 2.0);
        CHECK(cox_snell_upper_bound(model) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(nagelkerke_r2(model) ==
              doctest::Approx(cox_snell_r2(model) / expected).epsilon(1e-12));
    }

    SUBCASE("near-perfect separation-free data drives Nagelkerke to 1") {
        // Huge feature scale saturates the probabilities while the
        // coefficient itself stays far from the separation threshold.
        DesignMatrix design({"x"});
        for (int i = 0; i < 100; ++i) {
            const double x = (i % 2 == 0 ? 1.0 : -1.0) * 1e4;
            design.add_row({x}, x > 0 ? 1 : 0);
        }
        const RegressionModel model = fit_logistic(design);
        CHECK(nagelkerke_r2(model) == doctest::Approx(1.0).epsilon(1e-6));
    }

    SUBCASE("McFadden is 0.5 when lnLM is half of lnL0") {
        RegressionModel model;
        model.n = 10;
        model.log_lik_null = -10.0;
        model.log_lik_fit = -5.0;
        CHECK(mcfadden_r2(model) == doctest::Approx(0.5));
        model.log_lik_null = 0.0;
        CHECK_THROWS_AS(mcfadden_r2(model), UndefinedValueError);
    }
}

TEST_CASE("classification rate") {
    SUBCASE("hand four-point set") {
        DesignMatrix design({"x"});
        design.add_row({-2.0}, 0);
        design.add_row({-0.5}, 1);  // will be misclassified by a monotone fit
        design.add_row({0.5}, 0);   // likewise
        design.add_row({2.0}, 1);
        design.add_row({-1.5}, 0);
        design.add_row({1.5}, 1);
        const RegressionModel model = fit_logistic(design);
        // Fit is symmetric: positives predicted for x > 0 -> 4 of 6 correct.
        CHECK(classification_rate(model, design) == doctest::Approx(100.0 * 4.0 / 6.0));
    }

    SUBCASE("all-positive sample with intercept classifies 100%") {
        // fit_logistic rejects single-class outcomes, so build the model on
        // mixed data and score it on an all-positive design.
        const DesignMatrix train = logistic_sample(3, 200, 2.0, 0.5);
        const RegressionModel model = fit_logistic(train);
        DesignMatrix all_positive({"x"});
        for (int i = 0; i < 50; ++i) all_positive.add_row({5.0}, 1);
        CHECK(classification_rate(model, all_positive) == 100.0);
    }

    SUBCASE("ties at the cut count as positive") {
        // Handcrafted model with a zero intercept so x = 0 sits exactly at
        // probability 0.5.
        RegressionModel model;
        model.features = {"const", "x"};
        model.categories = {"1"};
        model.level_positions = {0, 1};
        model.blocks = {{FittedTerm{"const", 0.0, 1, 0, 1}, FittedTerm{"x", 1.0, 1, 1, 0.3}}};
        DesignMatrix design({"x"});
        design.add_row({0.0}, 1);  // tie -> predicted positive -> correct
        design.add_row({0.0}, 0);  // tie -> predicted positive -> wrong
        CHECK(model.predict_binary({0.0}) == 0.5);
        CHECK(classification_rate(model, design) == doctest::Approx(50.0));
    }
}

TEST_CASE("roc_auc") {
    SUBCASE("perfect separation gives 1") {
        CHECK(roc_auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}) == 1.0);
    }
    SUBCASE("worked example: 0.75") {
        CHECK(roc_auc({0.9, 0.8, 0.7, 0.6}, {1, 0, 1, 0}) == doctest::Approx(0.75));
    }
    SUBCASE("ties count one half") {
        CHECK(roc_auc({0.5, 0.5}, {1, 0}) == doctest::Approx(0.5));
        // Pairs: (0.7,0.5) and (0.7,0.3) and (0.5,0.3) concordant, (0.5,0.5)
        // tied -> 3.5 of 4.
        CHECK(roc_auc({0.7, 0.5, 0.5, 0.3}, {1, 1, 0, 0}) == doctest::Approx(0.875));
    }
    SUBCASE("single-class input is undefined") {
        CHECK_THROWS_AS(roc_auc({0.5, 0.6}, {1, 1}), UndefinedValueError);
    }
    SUBCASE("matches the brute-force pair count on random data") {
        Rng rng(2024);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform_int(0, 195));
            std::vector<double> scores(n);
            std::vector<int> labels(n);
            bool has_pos = false, has_neg = false;
            for (std::size_t i = 0; i < n; ++i) {
                // Coarse grid so ties actually happen.
                scores[i] = rng.uniform_int(0, 20) / 20.0;
                labels[i] = rng.uniform01() < 0.4 ? 1 : 0;
                has_pos |= labels[i] == 1;
                has_neg |= labels[i] == 0;
            }
            if (!has_pos || !has_neg) continue;
            CHECK(roc_auc(scores, labels) == oracles::brute_force_auc(scores, labels));
        }
    }
}

TEST_CASE("affine invariance of fit quality") {
    // Elo-like deltas so the rescaled coefficient stays far below the
    // separation threshold (0.007 x 100 = 0.7).
    Rng gen(55);
    DesignMatrix design({"x"});
    for (int i = 0; i < 400; ++i) {
        const double delta = (gen.uniform01() * 2.0 - 1.0) * 600.0;
        const double p = 1.0 / (1.0 + std::exp(-(0.4 + 0.007 * delta)));
        design.add_row({delta}, gen.uniform01() < p ? 1 : 0);
    }
    DesignMatrix scaled({"x"});
    const double c = 1.0 / 100.0;
    for (std::size_t i = 0; i < design.n(); ++i) {
        scaled.add_row({design.x(i, 1) * c}, design.y()[i]);
    }
    const RegressionModel base = fit_logistic(design);
    const RegressionModel rescaled = fit_logistic(scaled);

    CHECK(std::fabs(base.log_lik_fit - rescaled.log_lik_fit) < 1e-9);
    CHECK(std::fabs(cox_snell_r2(base) - cox_snell_r2(rescaled)) < 1e-9);
    CHECK(std::fabs(nagelkerke_r2(base) - nagelkerke_r2(rescaled)) < 1e-9);
    CHECK(std::fabs(mcfadden_r2(base) - mcfadden_r2(rescaled)) < 1e-9);
    CHECK(std::fabs(classification_rate(base, design) - classification_rate(rescaled, scaled)) <
          1e-9);
    // Coefficient scales by 1/c, standard error likewise.
    CHECK(rescaled.blocks[0][1].estimate ==
          doctest::Approx(base.blocks[0][1].estimate / c).epsilon(1e-6));
    CHECK(rescaled.blocks[0][1].std_error ==
          doctest::Approx(base.blocks[0][1].std_error / c).epsilon(1e-6));

    std::vector<double> s1(design.n()), s2(design.n());
    std::vector<int> labels = design.y();
    for (std::size_t i = 0; i < design.n(); ++i) {
        s1[i] = base.predict_binary({design.x(i, 1)});
        s2[i] = rescaled.predict_binary({scaled.x(i, 1)});
    }
    CHECK(std::fabs(roc_auc(s1, labels) - roc_auc(s2, labels)) < 1e-9);
}

TEST_CASE("multinomial fit") {
    SUBCASE("three balanced categories on pure noise stay near zero") {
        Rng rng(8);
        DesignMatrix design({"x"});
        for (int i = 0; i < 900; ++i) {
            design.add_row({rng.uniform01() * 2.0 - 1.0}, i % 3);
        }
        const RegressionModel model =
            fit_multinomial(design, 0, {"away win", "draw", "home win"});
        for (const auto& block : model.blocks) {
            for (const auto& term : block) {
                CHECK(std::fabs(term.estimate) < 0.25);
            }
        }
        CHECK(model.reference == "away win");
    }

    SUBCASE("probabilities sum to one and stay positive") {
        Rng rng(9);
        DesignMatrix design({"x"});
        for (int i = 0; i < 300; ++i) {
            const double x = rng.uniform01() * 6.0 - 3.0;
            const int y = x > 1.0 ? 2 : (x > -1.0 ? 1 : 0);
            design.add_row({x}, i % 10 == 0 ? (y + 1) % 3 : y);  // plus some noise
        }
        const RegressionModel model =
            fit_multinomial(design, 0, {"away win", "draw", "home win"});
        for (double x = -3.0; x <= 3.0; x += 0.37) {
            const auto probs = model.predict_categorical({x});
            double sum = 0.0;
            for (double p : probs) {
                CHECK(p > 0.0);
                CHECK(p < 1.0);
                sum += p;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    SUBCASE("gradient check via finite differences on the deviance") {
        Rng rng(10);
        DesignMatrix design({"x"});
        for (int i = 0; i < 200; ++i) {
            const double x = rng.uniform01() * 4.0 - 2.0;
            const double u = rng.uniform01();
            design.add_row({x}, u < 0.3 ? 0 : (u < 0.6 ? 1 : 2));
        }
        const RegressionModel model =
            fit_multinomial(design, 0, {"away win", "draw", "home win"});
        // The per-category one-vs-rest AUCs exist and live in (0,1).
        for (std::size_t k = 0; k < 3; ++k) {
            const double auc = one_vs_rest_auc(model, design, k);
            CHECK(auc > 0.0);
            CHECK(auc < 1.0);
        }
    }
}

TEST_CASE("two-category multinomial reduces to the binary fit") {
    const DesignMatrix design = logistic_sample(21, 150, -0.2, 0.8);
    const RegressionModel binary = fit_logistic(design);
    const RegressionModel reduced = fit_multinomial(design, 0, {"0", "1"});
    CHECK(std::fabs(binary.log_lik_fit - reduced.log_lik_fit) < 1e-8);
    CHECK(std::fabs(binary.log_lik_null - reduced.log_lik_null) < 1e-12);
    CHECK(reduced.blocks.size() == 1);
    CHECK(std::fabs(binary.blocks[0][0].estimate - reduced.blocks[0][0].estimate) < 1e-6);
    CHECK(std::fabs(binary.blocks[0][1].estimate - reduced.blocks[0][1].estimate) < 1e-6);
    CHECK(std::fabs(binary.blocks[0][1].std_error - reduced.blocks[0][1].std_error) < 1e-6);
}

TEST_CASE("significance stars follow the footnote thresholds") {
    CHECK(significance_stars(0.2) == "");
    CHECK(significance_stars(0.049) == "*");
    CHECK(significance_stars(0.009) == "**");
    CHECK(significance_stars(0.0009) == "***");
}

TEST_CASE("designs reject non-finite features") {
    DesignMatrix design({"x"});
    CHECK_THROWS_AS(design.add_row({std::nan("")}, 1), DomainError);
    CHECK_THROWS_AS(design.add_row({std::numeric_limits<double>::infinity()}, 0), DomainError);
    CHECK_THROWS_AS(design.add_row({1.0, 2.0}, 0), DomainError);  // wrong width
}
