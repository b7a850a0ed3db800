#include "generators.hpp"

#include "tccm/errors.hpp"
#include "tccm/metrics.hpp"
#include "tccm/robustness.hpp"

#include <doctest.h>

#include <cmath>

using namespace tccm;
using tccm::testing::random_matrix;
using tccm::testing::random_params;

namespace {

ModelParams zero_params(int d) { return init_params(d, TimeEmbeddingConfig{}, 0, 8).zeros_like(); }

}  // namespace

TEST_SUITE("robustness") {

TEST_CASE("iteration budget") {
    CHECK(AttackConfig::max_iters(0.1) == 20);
    CHECK(AttackConfig::max_iters(0.7) == 140);
    CHECK(AttackConfig::max_iters(3.0) == 600);
    CHECK(AttackConfig::max_iters(0.101) == 21);
    CHECK(AttackConfig::max_iters(1.1) == 220);
    CHECK(AttackConfig::max_iters(2.2) == 440);

    const auto eps = AttackConfig::default_epsilons();
    REQUIRE(eps.size() == 30);
    CHECK(eps.front() == 0.1);
    CHECK(eps.back() == 3.0);

    Rng rng(1);
    const ModelParams p = random_params(rng, 2);
    const PgdResult r = pgd_attack(p, random_matrix(rng, 4, 2), 0.1, AttackMode::FalsePositive);
    CHECK(r.iterations == 20);
    CHECK(r.iterations_run <= 20);
}

TEST_CASE("zero network descends to the box corner") {
    Matrix z(1, 2);
    z << 3, 4;
    const PgdResult r = pgd_attack(zero_params(2), z, 1.0, AttackMode::FalseNegative);
    CHECK(r.perturbed(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.perturbed(0, 1) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.clean_scores[0] == 5.0);
    CHECK(std::abs(r.scores[0] - std::sqrt(13.0)) < 1e-12);

    const PgdResult up = pgd_attack(zero_params(2), z, 1.0, AttackMode::FalsePositive);
    CHECK(std::abs(up.scores[0] - std::sqrt(41.0)) < 1e-12);
}

TEST_CASE("perturbations stay inside the box and records only improve") {
    Rng rng(2);
    for (int rep = 0; rep < 6; ++rep) {
        const int d = 2 + static_cast<int>(rng.below(4));
        const ModelParams p = random_params(rng, d);
        const Matrix z = random_matrix(rng, 40, d, 2.0);
        const double eps = rng.uniform(0.01, 0.4);
        const AttackMode mode = rep % 2 ? AttackMode::FalsePositive : AttackMode::FalseNegative;
        const PgdResult r = pgd_attack(p, z, eps, mode);
        CHECK((r.perturbed - z).cwiseAbs().maxCoeff() <= eps + 1e-12);
        const auto rescored = score(p, r.perturbed).scores;
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            CHECK(r.scores[i] == rescored[static_cast<std::size_t>(i)]);
            if (mode == AttackMode::FalseNegative) CHECK(r.scores[i] <= r.clean_scores[i]);
            else CHECK(r.scores[i] >= r.clean_scores[i]);
        }
    }
}

TEST_CASE("a larger budget never does worse on a zero network") {
    Matrix z(3, 3);
    z << 1, -2, 0.5, 4, 4, 4, -0.3, 0.2, 0.1;
    double prev = 1e300;
    for (double eps : {0.05, 0.1, 0.2, 0.5, 1.0}) {
        const PgdResult r = pgd_attack(zero_params(3), z, eps, AttackMode::FalseNegative);
        CHECK(r.scores.sum() <= prev);
        prev = r.scores.sum();
    }
}

TEST_CASE("certified margins") {
    Rng rng(3);
    const ModelParams p = random_params(rng, 3);
    Vector z(3);
    z << 0.5, -1, 2;
    const double s = score(p, Matrix(z.transpose())).scores[0];
    const auto [lo0, hi0] = certified_margin(p, z, 0.0);
    CHECK(lo0 == s);
    CHECK(hi0 == s);

    Vector one(1);
    one << -2.5;
    const auto [lo, hi] = certified_margin(zero_params(1), one, 0.3);
    CHECK(lo == doctest::Approx(2.2));
    CHECK(hi == doctest::Approx(2.8));
}

TEST_CASE("attack curves start from the clean evaluation and respect the certificate") {
    Rng rng(4);
    const ModelParams p = random_params(rng, 2, 32);
    Matrix x = random_matrix(rng, 60, 2);
    std::vector<int> y(60, 0);
    for (int i = 50; i < 60; ++i) {
        y[static_cast<std::size_t>(i)] = 1;
        x.row(i).array() += 3.0;
    }
    const auto clean = score(p, x).scores;
    for (auto mode : {AttackMode::FalseNegative, AttackMode::FalsePositive}) {
        AttackConfig cfg;
        cfg.mode = mode;
        cfg.epsilons = {0.1, 0.3, 0.6};
        const auto curve = attack_curve(p, x, y, cfg);
        REQUIRE(curve.size() == 4);
        CHECK(curve[0].epsilon == 0.0);
        CHECK(curve[0].auroc == auroc(clean, y));
        CHECK(curve[0].auprc == auprc(clean, y));
        for (const auto& pt : curve) CHECK(pt.certificate_violations == 0);
        CHECK(format_curve_csv(curve).rfind("epsilon,mode,auroc,auprc,mean_targeted_score\n", 0) == 0);
    }

    // Direct soundness check row by row.
    const PgdResult r = pgd_attack(p, x, 0.5, AttackMode::FalsePositive);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const auto [lo, hi] = certified_margin(p, x.row(i).transpose(), 0.5);
        CHECK(r.scores[i] >= lo);
        CHECK(r.scores[i] <= hi);
    }

    AttackConfig cfg;
    CHECK_THROWS_AS(attack_curve(p, x, std::vector<int>(60, 0), cfg), MetricError);
}

TEST_CASE("configuration errors") {
    CHECK(parse_attack_mode("fn") == AttackMode::FalseNegative);
    CHECK(parse_attack_mode("fp") == AttackMode::FalsePositive);
    CHECK_THROWS_AS(parse_attack_mode("both"), ConfigError);
    AttackConfig cfg;
    cfg.epsilons = {0.1, 0.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.epsilons = {0.1};
    cfg.step_size = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(pgd_attack(zero_params(2), Matrix::Zero(1, 3), 0.1, AttackMode::FalseNegative), DimensionError);
}

TEST_CASE("robustness setup is standardized on training rows") {
    const RobustnessSetup s = make_robustness_setup(2, 0, 500, 300, 100);
    CHECK(s.train_x.rows() == 500);
    CHECK(s.test_x.rows() == 400);
    CHECK(std::count(s.test_y.begin(), s.test_y.end(), 1) == 100);
    CHECK(s.train_x.colwise().mean().cwiseAbs().maxCoeff() < 1e-9);
}

}  // TEST_SUITE
