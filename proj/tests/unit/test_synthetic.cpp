#include "tccm/errors.hpp"
#include "tccm/metrics.hpp"
#include "tccm/synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace tccm;

namespace {

GmmComponent component(int d, double weight, double center, double sigma = 1.0) {
    return {weight, Vector::Constant(d, center), sigma};
}

}  // namespace

TEST_SUITE("synthetic") {

TEST_CASE("single-component sample moments") {
    GmmSpec spec;
    spec.dim = 3;
    spec.components = {component(3, 1.0, 0.0)};
    const Matrix x = sample_gmm(spec, 100000, 1);
    const Eigen::RowVectorXd mean = x.colwise().mean();
    for (int j = 0; j < 3; ++j) CHECK(std::abs(mean[j]) < 0.02);
    const Matrix centered = x.rowwise() - mean;
    const Matrix cov = (centered.transpose() * centered) / static_cast<double>(x.rows());
    CHECK((cov - Matrix::Identity(3, 3)).norm() < 0.05);

    spec.components[0].sigma = 2.0;
    const Matrix y = sample_gmm(spec, 100000, 2);
    const Matrix cy = y.rowwise() - y.colwise().mean();
    CHECK(((cy.transpose() * cy) / 100000.0 - 4.0 * Matrix::Identity(3, 3)).norm() < 0.2);
}

TEST_CASE("component fractions follow the weights") {
    GmmSpec spec;
    spec.dim = 2;
    spec.components = {component(2, 0.5, -5.0), component(2, 0.5, 5.0)};
    std::vector<int> which;
    const Matrix x = sample_gmm(spec, 100000, 3, &which);
    const double frac = static_cast<double>(std::count(which.begin(), which.end(), 0)) / 100000.0;
    CHECK(std::abs(frac - 0.5) < 0.01);
    for (Eigen::Index i = 0; i < 1000; ++i) CHECK((x(i, 0) < 0) == (which[static_cast<std::size_t>(i)] == 0));
}

TEST_CASE("shift mixtures") {
    const GmmSpec n = shift_normal_spec(2);
    REQUIRE(n.components.size() == 3);
    CHECK(n.components[0].mean == Vector::Constant(2, -3.0));
    CHECK(n.components[1].mean == Vector::Zero(2));
    CHECK(n.components[2].mean == Vector::Constant(2, 3.0));
    double total = 0.0;
    for (const auto& c : n.components) {
        total += c.weight;
        CHECK(c.sigma == 1.0);
    }
    CHECK(std::abs(total - 1.0) < 1e-12);

    std::vector<int> which;
    const Matrix x = sample_gmm(n, 60000, 4, &which);
    for (int c = 0; c < 3; ++c) {
        Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(2);
        int count = 0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            if (which[static_cast<std::size_t>(i)] == c) {
                sum += x.row(i);
                ++count;
            }
        }
        const Eigen::RowVectorXd m = sum / count;
        CHECK((m.transpose() - n.components[static_cast<std::size_t>(c)].mean).cwiseAbs().maxCoeff() < 0.05);
    }

    const GmmSpec a = shift_anomaly_spec(4);
    for (const auto& c : a.components) CHECK(std::abs(std::abs(c.mean[0]) - 9.0) < 1e-12);
}

TEST_CASE("invalid mixtures") {
    GmmSpec spec;
    spec.dim = 2;
    spec.components = {component(2, 0.6, 0.0), component(2, 0.6, 1.0)};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.components = {component(2, 1.0, 0.0, 0.0)};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.components = {component(3, 1.0, 0.0)};
    CHECK_THROWS(spec.validate());
}

TEST_CASE("ring geometry") {
    const Dataset ring = make_figure1_dataset(Figure1Kind::Ring, 5000, 500, 5);
    CHECK(ring.rows() == 5500);
    std::size_t inside = 0, normals = 0;
    for (std::size_t i = 0; i < ring.rows(); ++i) {
        if (ring.y[i] != 0) continue;
        ++normals;
        const double r = ring.X.row(static_cast<Eigen::Index>(i)).norm();
        inside += (r >= 0.8 && r <= 1.2) ? 1 : 0;
    }
    CHECK(normals == 5000);
    CHECK(static_cast<double>(inside) >= 0.99 * 5000.0);
}

TEST_CASE("cluster centroids are well separated") {
    const Dataset c = make_figure1_dataset(Figure1Kind::Clusters, 2000, 200, 6);
    Eigen::RowVector2d m0 = Eigen::RowVector2d::Zero(), m1 = Eigen::RowVector2d::Zero();
    for (std::size_t i = 0; i < c.rows(); ++i) {
        (c.y[i] ? m1 : m0) += c.X.row(static_cast<Eigen::Index>(i));
    }
    m0 /= 2000.0;
    m1 /= 200.0;
    CHECK((m1 - m0).norm() >= 4.0 * 0.5);
}

TEST_CASE("moons place anomalies on the lower arc") {
    const Dataset m = make_figure1_dataset(Figure1Kind::Moons, 1000, 100, 7);
    double normal_y = 0.0, anomaly_y = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        (m.y[i] ? anomaly_y : normal_y) += m.X(static_cast<Eigen::Index>(i), 1);
    }
    CHECK(normal_y / 1000.0 > anomaly_y / 100.0);
}

TEST_CASE("interpretability data") {
    CHECK_THROWS_AS(make_interpretability_dataset(2, 0), ConfigError);
    const InterpretabilityData d = make_interpretability_dataset(10, 8, 200, 30);
    CHECK(d.data.rows() == 290);
    std::array<int, 4> by_size{};
    for (std::size_t i = 0; i < d.data.rows(); ++i) {
        const auto& t = d.truth[i];
        if (d.data.y[i] == 0) {
            CHECK(t.empty());
            continue;
        }
        REQUIRE((t.size() >= 1 && t.size() <= 3));
        ++by_size[t.size()];
        CHECK(std::is_sorted(t.begin(), t.end()));
        for (auto j : t) CHECK(std::abs(d.data.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > 10.0);
    }
    CHECK(by_size[1] == 30);
    CHECK(by_size[2] == 30);
    CHECK(by_size[3] == 30);
}

TEST_CASE("explanation metrics") {
    using Sets = std::vector<std::vector<std::size_t>>;
    const Sets truth{{1}, {2, 3}, {0, 4, 5}};
    const auto same = explanation_metrics(truth, truth);
    CHECK(same.exact_match == 1.0);
    CHECK(same.jaccard == 1.0);

    const Sets disjoint{{0}, {4, 5}, {1, 2, 3}};
    const auto none = explanation_metrics(disjoint, truth);
    CHECK(none.exact_match == 0.0);
    CHECK(none.jaccard == 0.0);

    Sets pred, t10;
    for (std::size_t i = 0; i < 10; ++i) {
        t10.push_back({i});
        pred.push_back({i < 5 ? i : i + 1});
    }
    const auto half = explanation_metrics(pred, t10);
    CHECK(half.exact_match == 0.5);
    CHECK(half.jaccard == 0.5);

    const auto partial = explanation_metrics(Sets{{2, 3}}, Sets{{3, 4}});
    CHECK(partial.jaccard == doctest::Approx(1.0 / 3.0));

    CHECK_THROWS_AS(explanation_metrics(Sets{{}}, Sets{{}}), MetricError);
    CHECK_THROWS_AS(explanation_metrics(Sets{{1}}, Sets{{1}, {2}}), MetricError);
}

TEST_CASE("log-gamma against the standard library") {
    double worst = 0.0;
    for (double x = 0.01; x < 60.0; x += 0.0137) {
        worst = std::max(worst, std::abs(log_gamma(x) - std::lgamma(x)) / std::max(1.0, std::abs(std::lgamma(x))));
    }
    CHECK(worst < 1e-13);
    CHECK_THROWS(log_gamma(0.0));
    CHECK_THROWS(log_gamma(-1.0));
}

TEST_CASE("chi means in closed form") {
    CHECK(std::abs(chi_mean(1, 1.0) - std::sqrt(2.0 / std::numbers::pi)) < 1e-12);
    CHECK(std::abs(chi_mean(2, 1.0) - std::sqrt(std::numbers::pi / 2.0)) < 1e-12);
    CHECK(std::abs(chi_mean(3, 1.0) - 2.0 * std::sqrt(2.0 / std::numbers::pi)) < 1e-12);
    for (int d = 1; d < 60; ++d) {
        CHECK(chi_mean(d + 1, 1.0) > chi_mean(d, 1.0));
        CHECK(std::abs(chi_mean(d, 2.5) - 2.5 * chi_mean(d, 1.0)) < 1e-12 * chi_mean(d, 2.5));
        // E||eps|| lies between sqrt(d - 1/2) and sqrt(d) for d >= 1
        CHECK(chi_mean(d, 1.0) < std::sqrt(static_cast<double>(d)));
        CHECK(chi_mean(d, 1.0) > std::sqrt(d - 0.5));
    }
}

TEST_CASE("Monte Carlo chi means") {
    for (int d : {1, 5, 12}) {
        const McEstimate central = noncentral_chi_mean_mc(d, 0.0, 200000, 9);
        CHECK(std::abs(central.estimate - chi_mean(d, 1.0)) < 4.0 * central.stderr_);
    }
    const McEstimate shifted = noncentral_chi_mean_mc(5, 9.0, 1000000, 10);
    CHECK(shifted.estimate - chi_mean(5, 1.0) > 5.0 * shifted.stderr_);
    const McEstimate a = noncentral_chi_mean_mc(5, 9.0, 1000, 11);
    const McEstimate b = noncentral_chi_mean_mc(5, 9.0, 1000, 11);
    CHECK(a.estimate == b.estimate);
}

TEST_CASE("mismatch study at two dimensions") {
    const auto rows = mismatch_study({2}, 0);
    REQUIRE(rows.size() == 1);
    const MismatchRow& r = rows[0];
    CHECK(r.auroc > 0.9);
    CHECK(r.anomaly_median > r.normal_median);
    CHECK(std::abs(r.chi_prediction - r.normal_mean) <= 3.0 * r.normal_stderr);
    CHECK(r.normal_scores.size() + r.anomaly_scores.size() == 1000 + 200);
}

TEST_CASE("interpretability study at ten dimensions") {
    const InterpretabilityResult r = interpretability_study(10, 0);
    CHECK(r.explanation.exact_match >= 0.99);
    CHECK(r.explanation.jaccard >= 0.99);
    CHECK(r.anomalies == 300);
}

}  // TEST_SUITE
