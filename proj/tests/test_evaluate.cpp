#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mcdnn/evaluate.hpp"
#include "mcdnn/rng.hpp"

using namespace mcdnn;

namespace {

std::vector<double> dist(std::initializer_list<double> v) { return std::vector<double>(v); }

} // namespace

TEST_CASE("all-correct predictions give a diagonal matrix") {
    std::vector<std::vector<double>> preds = {dist({0.9, 0.05, 0.05}), dist({0.1, 0.8, 0.1}),
                                              dist({0.2, 0.2, 0.6})};
    std::vector<int> labels = {0, 1, 2};
    const EvaluationReport rep = evaluate(preds, labels);
    CHECK(rep.error_rate == 0.0);
    CHECK(rep.second_guess_error == 0.0);
    CHECK(rep.misclassified.empty());
    for (int t = 0; t < 3; ++t)
        for (int p = 0; p < 3; ++p) CHECK(rep.confusion.at(t, p) == (t == p ? 1 : 0));
    CHECK(rep.confusion.total() == 3);
}

TEST_CASE("hand-enumerated 3-class prediction table") {
    // index: prediction -> first/second
    std::vector<std::vector<double>> preds = {
        dist({0.7, 0.2, 0.1}), // first 0, second 1
        dist({0.1, 0.3, 0.6}), // first 2, second 1
        dist({0.4, 0.5, 0.1}), // first 1, second 0
        dist({0.45, 0.1, 0.45}), // tie -> first 0, second 2
        dist({0.2, 0.5, 0.3}), // first 1, second 2
    };
    std::vector<int> labels = {0, 1, 1, 2, 2};
    const EvaluationReport rep = evaluate(preds, labels);
    // wrong: index 1 (first 2, second 1 -> second correct),
    //        index 3 (first 0, second 2 -> second correct),
    //        index 4 (first 1, second 2 -> second correct)
    CHECK(rep.error_rate == doctest::Approx(3.0 / 5.0));
    CHECK(rep.second_guess_error == 0.0);
    CHECK(rep.confusion.at(0, 0) == 1);
    CHECK(rep.confusion.at(1, 2) == 1);
    CHECK(rep.confusion.at(1, 1) == 1);
    CHECK(rep.confusion.at(2, 0) == 1);
    CHECK(rep.confusion.at(2, 1) == 1);
    CHECK(rep.confusion.errors() == 3);
    REQUIRE(rep.misclassified.size() == 3);
    CHECK(rep.misclassified[0].index == 1);
    CHECK(rep.misclassified[0].second == 1);
    CHECK(rep.misclassified[1].index == 3);
    CHECK(rep.misclassified[1].confidence == 0.45);

    CHECK_THROWS_AS(evaluate(preds, std::vector<int>{0, 1}), ShapeError);
}

TEST_CASE("top-2 bookkeeping reproduces the first-or-second-correct arithmetic") {
    // 10000 synthetic predictions built to a 2.70% error rate where 84% of
    // the errors carry a correct second guess: top-2 error must come out at
    // 0.42% + rounding of the construction
    const int n = 10000;
    const int wrong = 270;          // 2.70%
    const int second_right = 227;   // ~84% of the errors (floor)
    std::vector<std::vector<double>> preds;
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        if (i < wrong - second_right) {
            preds.push_back(dist({0.05, 0.6, 0.35})); // first and second both wrong
        } else if (i < wrong) {
            preds.push_back(dist({0.35, 0.6, 0.05})); // wrong first, correct second
        } else {
            preds.push_back(dist({0.9, 0.08, 0.02})); // correct
        }
    }
    const EvaluationReport rep = evaluate(preds, labels);
    CHECK(rep.error_rate == doctest::Approx(0.0270));
    CHECK(rep.second_guess_error == doctest::Approx(static_cast<double>(wrong - second_right) / n));
    CHECK(rep.second_guess_error == doctest::Approx(0.0043));
}

TEST_CASE("rejection curve fractions and accepted error") {
    std::vector<std::vector<double>> preds = {
        dist({0.4, 0.35, 0.25}), // confidence 0.4, wrong (label 1)
        dist({0.6, 0.3, 0.1}),   // confidence 0.6, correct
        dist({0.9, 0.05, 0.05}), // confidence 0.9, correct
    };
    std::vector<int> labels = {1, 0, 0};

    const auto curve = rejection_curve(preds, labels, {0.0, 0.5, 0.95});
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].reject_fraction == 0.0);
    CHECK(curve[0].error_on_accepted == doctest::Approx(1.0 / 3.0));
    CHECK_FALSE(curve[0].all_rejected);

    CHECK(curve[1].reject_fraction == doctest::Approx(1.0 / 3.0)); // only the 0.4 item
    CHECK(curve[1].error_on_accepted == 0.0);

    CHECK(curve[2].reject_fraction == 1.0); // 0.9 < 0.95 rejects everything
    CHECK(curve[2].all_rejected);
    CHECK(curve[2].error_on_accepted == 0.0);

    const auto everything = rejection_curve(preds, labels, {1.1});
    CHECK(everything[0].all_rejected);
    CHECK(everything[0].error_on_accepted == 0.0); // documented empty-set convention

    CHECK_THROWS_AS(rejection_curve(preds, labels, {0.5, 0.1}), ShapeError);
}

TEST_CASE("rejection fractions never decrease in the threshold") {
    Rng rng(13);
    std::vector<std::vector<double>> preds;
    std::vector<int> labels;
    for (int i = 0; i < 500; ++i) {
        std::vector<double> p(4);
        double sum = 0.0;
        for (double& v : p) {
            v = rng.uniform(0.0, 1.0);
            sum += v;
        }
        for (double& v : p) v /= sum;
        preds.push_back(p);
        labels.push_back(static_cast<int>(rng.below(4)));
    }
    std::vector<double> thresholds;
    for (int i = 0; i <= 10; ++i) thresholds.push_back(i / 10.0);
    const auto curve = rejection_curve(preds, labels, thresholds);
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i].reject_fraction >= curve[i - 1].reject_fraction);
}

TEST_CASE("classification depends only on the probability ranking") {
    Rng rng(14);
    std::vector<std::vector<double>> preds, rescaled;
    std::vector<int> labels;
    for (int i = 0; i < 200; ++i) {
        std::vector<double> p(5);
        double sum = 0.0;
        for (double& v : p) {
            v = rng.uniform(0.001, 1.0);
            sum += v;
        }
        for (double& v : p) v /= sum;
        preds.push_back(p);
        // strictly monotone rescaling preserves argmax order
        std::vector<double> q(5);
        for (std::size_t k = 0; k < 5; ++k) q[k] = std::sqrt(p[k]) * 0.5;
        rescaled.push_back(q);
        labels.push_back(static_cast<int>(rng.below(5)));
    }
    CHECK(evaluate(preds, labels).error_rate == evaluate(rescaled, labels).error_rate);
}

TEST_CASE("confusion rendering and CSV round trip") {
    ConfusionMatrix cm(3);
    cm.at(0, 0) = 5;
    cm.at(1, 1) = 4;
    cm.at(2, 2) = 6;

    SUBCASE("identity matrix renders zero off-diagonal percentages") {
        const std::string text = render_confusion(cm);
        CHECK(text.find('%') == std::string::npos); // no errors, no percentages
    }

    SUBCASE("a single error carries 100% of the error mass") {
        cm.at(1, 2) = 1;
        const std::string text = render_confusion(cm);
        CHECK(text.find("100.0%") != std::string::npos);
    }

    SUBCASE("CSV round-trips to identical counts") {
        cm.at(1, 2) = 3;
        cm.at(2, 0) = 2;
        const ConfusionMatrix back = parse_confusion_csv(confusion_csv(cm));
        CHECK(back == cm);
    }
}

TEST_CASE("two-class second guess is the other class") {
    std::vector<std::vector<double>> preds = {dist({0.8, 0.2}), dist({0.3, 0.7})};
    std::vector<int> labels = {1, 1};
    const EvaluationReport rep = evaluate(preds, labels);
    REQUIRE(rep.misclassified.size() == 1);
    CHECK(rep.misclassified[0].first == 0);
    CHECK(rep.misclassified[0].second == 1);
    CHECK(rep.second_guess_error == 0.0);
}
