#include "tccm/robustness.hpp"

#include "tccm/errors.hpp"
#include "tccm/metrics.hpp"
#include "tccm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tccm {

namespace {
constexpr std::size_t kBlockRows = 128;
}

std::string_view to_string(AttackMode mode) {
    return mode == AttackMode::FalseNegative ? "fn" : "fp";
}

AttackMode parse_attack_mode(std::string_view name) {
    if (name == "fn") return AttackMode::FalseNegative;
    if (name == "fp") return AttackMode::FalsePositive;
    throw ConfigError("unknown attack mode '" + std::string(name) + "' (expected fn or fp)");
}

std::vector<double> AttackConfig::default_epsilons() {
    std::vector<double> eps;
    for (int i = 1; i <= 30; ++i) eps.push_back(static_cast<double>(i) / 10.0);
    return eps;
}

int AttackConfig::max_iters(double epsilon) {
    return static_cast<int>(std::ceil(200.0 * epsilon - 1e-9));
}

void AttackConfig::validate() const {
    if (!(step_size > 0.0) || !std::isfinite(step_size)) throw ConfigError("attack step size must be positive");
    if (epsilons.empty()) throw ConfigError("attack needs at least one epsilon");
    for (double e : epsilons) {
        if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("every attack epsilon must be positive");
    }
}

PgdResult pgd_attack(const ModelParams& params, const Matrix& rows, double epsilon, AttackMode mode,
                     double step_size, double t_fixed) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("attack epsilon must be non-negative");
    if (!(step_size > 0.0)) throw ConfigError("attack step size must be positive");
    if (rows.cols() != params.input_dim) {
        throw DimensionError("attack rows have " + std::to_string(rows.cols()) + " columns, model expects " +
                             std::to_string(params.input_dim));
    }
    const FixedTimeField field(params, t_fixed);
    const Eigen::Index n = rows.rows();
    const Eigen::Index d = rows.cols();
    const double direction = mode == AttackMode::FalseNegative ? -1.0 : 1.0;
    auto better = [&](double candidate, double best) {
        return mode == AttackMode::FalseNegative ? candidate < best : candidate > best;
    };

    PgdResult out;
    out.iterations = epsilon > 0.0 ? AttackConfig::max_iters(epsilon) : 0;
    out.perturbed = rows;
    out.scores = field.scores(rows);
    out.clean_scores = out.scores;

    Matrix current = rows;
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < n; ++i) active.push_back(i);

    Matrix batch;
    Matrix grads;
    Vector scores;
    for (int it = 0; it < out.iterations && !active.empty(); ++it) {
        const auto m = static_cast<Eigen::Index>(active.size());
        batch.resize(m, d);
        for (Eigen::Index r = 0; r < m; ++r) batch.row(r) = current.row(active[r]);
        scores.resize(m);
        grads.resize(m, d);
        parallel_for_rows(static_cast<std::size_t>(m), [&](std::size_t begin, std::size_t end) {
            // Small blocks keep the hidden activations cache-resident.
            for (std::size_t b = begin; b < end; b += kBlockRows) {
                const auto lo = static_cast<Eigen::Index>(b);
                const auto len = static_cast<Eigen::Index>(std::min(end, b + kBlockRows) - b);
                Vector s;
                Matrix g;
                field.scores_and_gradients(batch.middleRows(lo, len), s, g);
                scores.segment(lo, len) = s;
                grads.middleRows(lo, len) = g;
            }
        });

        std::vector<Eigen::Index> still_moving;
        for (Eigen::Index r = 0; r < m; ++r) {
            const Eigen::Index i = active[r];
            if (!std::isfinite(scores[r]) || !grads.row(r).allFinite()) {
                throw NumericalError("non-finite score gradient during attack at row " + std::to_string(i));
            }
            if (it > 0 && better(scores[r], out.scores[i])) {
                out.scores[i] = scores[r];
                out.perturbed.row(i) = batch.row(r);
            }
            bool moved = false;
            for (Eigen::Index j = 0; j < d; ++j) {
                const double g = grads(r, j);
                const double s = g > 0.0 ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
                const double z0 = rows(i, j);
                const double step = batch(r, j) + direction * step_size * s;
                const double next = z0 + std::clamp(step - z0, -epsilon, epsilon);
                if (next != batch(r, j)) moved = true;
                current(i, j) = next;
            }
            // An unmoved iterate repeats forever, so its best is already recorded.
            if (moved) still_moving.push_back(i);
        }
        active.swap(still_moving);
        out.iterations_run = it + 1;
    }

    if (!active.empty()) {
        const auto m = static_cast<Eigen::Index>(active.size());
        batch.resize(m, d);
        for (Eigen::Index r = 0; r < m; ++r) batch.row(r) = current.row(active[r]);
        scores = field.scores(batch);
        for (Eigen::Index r = 0; r < m; ++r) {
            const Eigen::Index i = active[r];
            if (!std::isfinite(scores[r])) {
                throw NumericalError("non-finite score during attack at row " + std::to_string(i));
            }
            if (better(scores[r], out.scores[i])) {
                out.scores[i] = scores[r];
                out.perturbed.row(i) = batch.row(r);
            }
        }
    }
    return out;
}

std::pair<double, double> certified_margin(const ModelParams& params, const Vector& z, double epsilon,
                                           double t_fixed) {
    const FixedTimeField field(params, t_fixed);
    const double s = field.scores(Matrix(z.transpose()))[0];
    const double radius = (lipschitz_upper_bound(params) + 1.0) * epsilon * std::sqrt(static_cast<double>(z.size()));
    return {s - radius, s + radius};
}

std::vector<CurvePoint> attack_curve(const ModelParams& params, const Matrix& test_x, const std::vector<int>& test_y,
                                     const AttackConfig& cfg, double t_fixed) {
    cfg.validate();
    if (static_cast<std::size_t>(test_x.rows()) != test_y.size()) {
        throw DimensionError("attack curve: row and label counts differ");
    }
    const int target_label = cfg.mode == AttackMode::FalseNegative ? 1 : 0;
    std::vector<Eigen::Index> targets;
    for (std::size_t i = 0; i < test_y.size(); ++i) {
        if (test_y[i] == target_label) targets.push_back(static_cast<Eigen::Index>(i));
    }
    if (targets.empty() || targets.size() == test_y.size()) {
        throw MetricError("attack curve needs both classes in the test set");
    }
    Matrix target_rows(static_cast<Eigen::Index>(targets.size()), test_x.cols());
    for (std::size_t r = 0; r < targets.size(); ++r) target_rows.row(static_cast<Eigen::Index>(r)) = test_x.row(targets[r]);

    const FixedTimeField field(params, t_fixed);
    const Vector clean = field.scores(test_x);
    const std::vector<double> clean_scores(clean.data(), clean.data() + clean.size());
    const double lip = lipschitz_upper_bound(params);
    const double root_d = std::sqrt(static_cast<double>(test_x.cols()));

    auto mean_targeted = [&](const std::vector<double>& s) {
        double sum = 0.0;
        for (Eigen::Index i : targets) sum += s[static_cast<std::size_t>(i)];
        return sum / static_cast<double>(targets.size());
    };

    std::vector<CurvePoint> curve;
    curve.push_back({0.0, cfg.mode, auroc(clean_scores, test_y), auprc(clean_scores, test_y),
                     mean_targeted(clean_scores), 0});
    for (double eps : cfg.epsilons) {
        const PgdResult res = pgd_attack(params, target_rows, eps, cfg.mode, cfg.step_size, t_fixed);
        std::vector<double> s = clean_scores;
        std::size_t violations = 0;
        const double radius = (lip + 1.0) * eps * root_d;
        for (std::size_t r = 0; r < targets.size(); ++r) {
            const auto rr = static_cast<Eigen::Index>(r);
            s[static_cast<std::size_t>(targets[r])] = res.scores[rr];
            if (std::abs(res.scores[rr] - res.clean_scores[rr]) > radius) ++violations;
        }
        curve.push_back({eps, cfg.mode, auroc(s, test_y), auprc(s, test_y), mean_targeted(s), violations});
    }
    return curve;
}

std::string format_curve_csv(const std::vector<CurvePoint>& curve) {
    std::ostringstream out;
    out << "epsilon,mode,auroc,auprc,mean_targeted_score\n";
    for (const auto& p : curve) {
        out << format_double(p.epsilon) << ',' << to_string(p.mode) << ',' << format_double(p.auroc) << ','
            << format_double(p.auprc) << ',' << format_double(p.mean_targeted_score) << '\n';
    }
    return out.str();
}

RobustnessSetup make_robustness_setup(int dim, std::uint64_t seed, std::size_t n_train, std::size_t n_test_normal,
                                      std::size_t n_test_anomaly) {
    const GmmSpec normal = shift_normal_spec(dim);
    const GmmSpec anomaly = shift_anomaly_spec(dim);
    const Matrix train_raw = sample_gmm(normal, n_train, seed);
    const Matrix test_normal = sample_gmm(normal, n_test_normal, seed + 1);
    const Matrix test_anomaly = sample_gmm(anomaly, n_test_anomaly, seed + 2);

    RobustnessSetup s;
    s.scaler = fit_scaler(train_raw);
    s.train_x = s.scaler.transform(train_raw);
    Matrix test_raw(test_normal.rows() + test_anomaly.rows(), dim);
    test_raw.topRows(test_normal.rows()) = test_normal;
    test_raw.bottomRows(test_anomaly.rows()) = test_anomaly;
    s.test_x = s.scaler.transform(test_raw);
    s.test_y.assign(n_test_normal, 0);
    s.test_y.insert(s.test_y.end(), n_test_anomaly, 1);
    return s;
}

RobustnessResult robustness_study(int dim, std::uint64_t seed, const StudyTraining& training,
                                  const AttackConfig& fn, const AttackConfig& fp) {
    const RobustnessSetup setup = make_robustness_setup(dim, seed);
    const ExperimentConfig exp = to_experiment(training, seed);
    ModelParams init = init_params(dim, exp.embed, seed, exp.hidden);

    RobustnessResult r;
    r.params = train(setup.train_x, std::move(init), exp.train).params;
    r.lipschitz = lipschitz_upper_bound(r.params);
    r.false_negative = attack_curve(r.params, setup.test_x, setup.test_y, fn);
    r.false_positive = attack_curve(r.params, setup.test_x, setup.test_y, fp);
    return r;
}

}  // namespace tccm
