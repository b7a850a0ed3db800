#pragma once

#include "tccm/model.hpp"
#include "tccm/synthetic.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tccm {

enum class AttackMode {
    FalseNegative,  // push anomalies toward low scores
    FalsePositive,  // push normals toward high scores
};

std::string_view to_string(AttackMode mode);
// Accepts "fn" and "fp".
AttackMode parse_attack_mode(std::string_view name);

struct AttackConfig {
    std::vector<double> epsilons = default_epsilons();
    double step_size = 0.01;
    AttackMode mode = AttackMode::FalseNegative;
    std::uint64_t seed = 0;

    // 0.1, 0.2, ..., 3.0
    static std::vector<double> default_epsilons();
    // ceil(200 * eps), with a small guard so that 200 * 0.7 is 140 and not 141.
    static int max_iters(double epsilon);
    // Throws ConfigError unless step_size > 0 and every epsilon > 0.
    void validate() const;
};

struct PgdResult {
    Matrix perturbed;
    Vector clean_scores;
    Vector scores;           // best objective seen per row
    int iterations = 0;      // ceil(200 * eps)
    int iterations_run = 0;  // fewer when every row reached a fixed point
};

// Signed-gradient L-infinity PGD from the clean rows (already standardized).
// Keeps the best iterate per row, counting the starting point. A row whose
// iterate stops moving has reached a fixed point and is retired early.
// Throws NumericalError naming the row on a non-finite gradient.
PgdResult pgd_attack(const ModelParams& params, const Matrix& rows, double epsilon, AttackMode mode,
                     double step_size = 0.01, double t_fixed = 1.0);

// (S(z) - (L + 1) eps sqrt(d), S(z) + (L + 1) eps sqrt(d)) with L the
// spectral-norm product bound.
std::pair<double, double> certified_margin(const ModelParams& params, const Vector& z, double epsilon,
                                           double t_fixed = 1.0);

struct CurvePoint {
    double epsilon = 0.0;
    AttackMode mode = AttackMode::FalseNegative;
    double auroc = 0.0;
    double auprc = 0.0;
    double mean_targeted_score = 0.0;
    std::size_t certificate_violations = 0;
};

// One row per epsilon, preceded by the unattacked epsilon = 0 row. Targets the
// anomalies for FalseNegative and the normals for FalsePositive, then rescores
// the whole set.
std::vector<CurvePoint> attack_curve(const ModelParams& params, const Matrix& test_x, const std::vector<int>& test_y,
                                     const AttackConfig& cfg, double t_fixed = 1.0);

// epsilon,mode,auroc,auprc,mean_targeted_score
std::string format_curve_csv(const std::vector<CurvePoint>& curve);

// Train on 5000 normals, test on 4000 normals and 1000 anomalies, all drawn
// from the shift mixtures and standardized with the training scaler.
struct RobustnessSetup {
    Matrix train_x;
    Matrix test_x;
    std::vector<int> test_y;
    Scaler scaler;
};

RobustnessSetup make_robustness_setup(int dim, std::uint64_t seed, std::size_t n_train = 5000,
                                      std::size_t n_test_normal = 4000, std::size_t n_test_anomaly = 1000);

struct RobustnessResult {
    ModelParams params;
    double lipschitz = 0.0;
    std::vector<CurvePoint> false_negative;
    std::vector<CurvePoint> false_positive;
};

RobustnessResult robustness_study(int dim, std::uint64_t seed, const StudyTraining& training,
                                  const AttackConfig& fn, const AttackConfig& fp);

}  // namespace tccm
