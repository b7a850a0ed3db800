#include "tccm/synthetic.hpp"

#include "tccm/errors.hpp"
#include "tccm/metrics.hpp"
#include "tccm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

namespace tccm {

namespace {

double median(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

double mean(const std::vector<double>& xs) {
    return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double std_error(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

std::vector<std::string> feature_names(int d) {
    std::vector<std::string> names;
    for (int j = 0; j < d; ++j) names.push_back("x" + std::to_string(j));
    return names;
}

}  // namespace

void GmmSpec::validate() const {
    if (dim < 1) throw ConfigError("GMM dim must be >= 1");
    if (components.empty()) throw ConfigError("GMM needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.weight >= 0.0)) throw ConfigError("GMM weights must be non-negative");
        if (!(c.sigma > 0.0)) throw ConfigError("GMM sigma must be positive");
        if (c.mean.size() != dim) throw DimensionError("GMM component mean has wrong dimension");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("GMM weights must sum to 1");
}

Matrix sample_gmm(const GmmSpec& spec, std::size_t n, std::uint64_t seed, std::vector<int>* component_of) {
    spec.validate();
    Rng rng(seed, Stream::Synthetic);
    Matrix out(static_cast<Eigen::Index>(n), spec.dim);
    if (component_of) component_of->assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        std::size_t c = 0;
        double acc = spec.components[0].weight;
        while (u >= acc && c + 1 < spec.components.size()) acc += spec.components[++c].weight;
        const auto& comp = spec.components[c];
        for (int j = 0; j < spec.dim; ++j) {
            out(static_cast<Eigen::Index>(i), j) = comp.mean[j] + comp.sigma * rng.normal();
        }
        if (component_of) (*component_of)[i] = static_cast<int>(c);
    }
    return out;
}

GmmSpec shift_normal_spec(int dim) {
    GmmSpec s;
    s.dim = dim;
    s.role = GmmRole::Normal;
    for (double m : {-3.0, 0.0, 3.0}) s.components.push_back({1.0 / 3.0, Vector::Constant(dim, m), 1.0});
    // Exact thirds do not sum to 1 in binary; absorb the rounding in the last weight.
    s.components.back().weight = 1.0 - 2.0 * (1.0 / 3.0);
    return s;
}

GmmSpec shift_anomaly_spec(int dim) {
    GmmSpec s;
    s.dim = dim;
    s.role = GmmRole::Anomaly;
    for (double m : {-9.0, 9.0}) s.components.push_back({0.5, Vector::Constant(dim, m), 1.0});
    return s;
}

Dataset gmm_dataset(const GmmSpec& normal, std::size_t n_normal, const GmmSpec& anomaly, std::size_t n_anomaly,
                    std::uint64_t seed) {
    if (normal.dim != anomaly.dim) throw DimensionError("normal and anomaly mixtures differ in dimension");
    const Matrix xn = sample_gmm(normal, n_normal, seed);
    const Matrix xa = sample_gmm(anomaly, n_anomaly, seed + 1);
    Dataset d;
    d.feature_names = feature_names(normal.dim);
    d.X.resize(xn.rows() + xa.rows(), normal.dim);
    d.X.topRows(xn.rows()) = xn;
    d.X.bottomRows(xa.rows()) = xa;
    d.y.assign(n_normal, 0);
    d.y.insert(d.y.end(), n_anomaly, 1);
    d.source = "synthetic:gmm";
    return d;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Figure1Kind kind) {
    switch (kind) {
        case Figure1Kind::Ring: return "ring";
        case Figure1Kind::Moons: return "moons";
        case Figure1Kind::Clusters: return "clusters";
    }
    return "ring";
}

Dataset make_figure1_dataset(Figure1Kind kind, std::size_t n_normal, std::size_t n_anomaly, std::uint64_t seed) {
    if (n_normal < 1 || n_anomaly < 1) throw ConfigError("figure-1 datasets need at least one row per class");
    Rng rng(seed, Stream::Synthetic);
    Dataset d;
    d.feature_names = feature_names(2);
    d.X.resize(static_cast<Eigen::Index>(n_normal + n_anomaly), 2);
    d.source = "synthetic:" + std::string(to_string(kind));

    auto put = [&](std::size_t i, double x, double y) {
        d.X(static_cast<Eigen::Index>(i), 0) = x;
        d.X(static_cast<Eigen::Index>(i), 1) = y;
    };
    for (std::size_t i = 0; i < n_normal + n_anomaly; ++i) {
        const bool anomaly = i >= n_normal;
        switch (kind) {
            case Figure1Kind::Ring: {
                if (!anomaly) {
                    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
                    const double r = 1.0 + 0.05 * rng.normal();
                    put(i, r * std::cos(theta), r * std::sin(theta));
                } else {
                    const double sd = std::sqrt(0.1);
                    const double x = sd * rng.normal();
                    const double y = sd * rng.normal();
                    put(i, x, y);
                }
                break;
            }
            case Figure1Kind::Moons: {
                const double theta = rng.uniform(0.0, std::numbers::pi);
                const double nx = 0.1 * rng.normal();
                const double ny = 0.1 * rng.normal();
                if (!anomaly) {
                    put(i, std::cos(theta) + nx, std::sin(theta) + ny);
                } else {
                    put(i, 1.0 - std::cos(theta) + nx, 0.5 - std::sin(theta) + ny);
                }
                break;
            }
            case Figure1Kind::Clusters: {
                const double c = anomaly ? 2.0 : -2.0;
                const double x = c + 0.5 * rng.normal();
                const double y = c + 0.5 * rng.normal();
                put(i, x, y);
                break;
            }
        }
    }
    d.y.assign(n_normal, 0);
    d.y.insert(d.y.end(), n_anomaly, 1);
    return d;
}

// ---------------------------------------------------------------------------

InterpretabilityData make_interpretability_dataset(int d, std::uint64_t seed, std::size_t n_normal,
                                                   std::size_t n_per_component) {
    if (d < 3) throw ConfigError("interpretability dataset needs d >= 3, got " + std::to_string(d));
    Rng rng(seed, Stream::Synthetic);

    std::vector<std::vector<std::size_t>> shifted(3);
    for (std::size_t c = 0; c < 3; ++c) {
        std::vector<std::size_t> idx(static_cast<std::size_t>(d));
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        rng.shuffle(std::span(idx));
        shifted[c].assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(c + 1));
        std::sort(shifted[c].begin(), shifted[c].end());
    }

    const std::size_t n = n_normal + 3 * n_per_component;
    InterpretabilityData out;
    out.data.feature_names = feature_names(d);
    out.data.X.resize(static_cast<Eigen::Index>(n), d);
    out.data.y.assign(n, 0);
    out.truth.resize(n);
    out.data.source = "synthetic:interpretability";
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) out.data.X(static_cast<Eigen::Index>(i), j) = rng.normal();
        if (i < n_normal) continue;
        const std::size_t c = (i - n_normal) / n_per_component;
        for (std::size_t j : shifted[c]) {
            out.data.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += rng.uniform(15.0, 20.0);
        }
        out.data.y[i] = 1;
        out.truth[i] = shifted[c];
    }
    return out;
}

ExplanationScores explanation_metrics(const std::vector<std::vector<std::size_t>>& predicted,
                                      const std::vector<std::vector<std::size_t>>& truth) {
    if (predicted.size() != truth.size()) throw MetricError("explanation metrics: length mismatch");
    if (truth.empty()) throw MetricError("explanation metrics: no anomalies");
    double exact = 0.0;
    double jaccard = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i].empty()) throw MetricError("explanation metrics: empty truth set at anomaly " + std::to_string(i));
        const std::set<std::size_t> p(predicted[i].begin(), predicted[i].end());
        const std::set<std::size_t> t(truth[i].begin(), truth[i].end());
        std::size_t inter = 0;
        for (std::size_t j : p) inter += t.count(j);
        const std::size_t uni = p.size() + t.size() - inter;
        exact += p == t ? 1.0 : 0.0;
        jaccard += static_cast<double>(inter) / static_cast<double>(uni);
    }
    const double n = static_cast<double>(truth.size());
    return {exact / n, jaccard / n};
}

// ---------------------------------------------------------------------------

ExperimentConfig to_experiment(const StudyTraining& training, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.train.epochs = training.epochs;
    cfg.train.batch_size = training.batch_size;
    cfg.train.learning_rate = training.learning_rate;
    cfg.train.loss = training.loss;
    cfg.train.seed = seed;
    cfg.embed = training.embed;
    cfg.hidden = training.hidden;
    return cfg;
}

Vector mismatch_anomaly_mean(int dim, double offset) {
    Vector m(dim);
    for (int j = 0; j < dim; ++j) m[j] = j % 2 == 0 ? offset : -offset;
    return m;
}

std::vector<MismatchRow> mismatch_study(const std::vector<int>& dims, std::uint64_t seed, const MismatchConfig& cfg) {
    if (dims.empty()) throw ConfigError("mismatch study needs at least one dimension");
    std::vector<MismatchRow> rows;
    for (int d : dims) {
        GmmSpec anomaly;
        anomaly.dim = d;
        anomaly.role = GmmRole::Anomaly;
        anomaly.components.push_back({1.0, mismatch_anomaly_mean(d, cfg.anomaly_offset), 1.0});
        const Dataset data = gmm_dataset(shift_normal_spec(d), cfg.n_normal, anomaly, cfg.n_anomaly, seed);
        const auto run = run_experiment(data, to_experiment(cfg.training, seed));

        MismatchRow r;
        r.dim = d;
        r.auroc = run.auroc;
        r.auprc = run.auprc;
        for (std::size_t i = 0; i < run.test_y.size(); ++i) {
            (run.test_y[i] ? r.anomaly_scores : r.normal_scores).push_back(run.test_scores[i]);
        }
        r.normal_mean = mean(r.normal_scores);
        r.normal_median = median(r.normal_scores);
        r.anomaly_mean = mean(r.anomaly_scores);
        r.anomaly_median = median(r.anomaly_scores);
        r.normal_stderr = std_error(r.normal_scores);
        r.sigma_f = r.normal_mean / chi_mean(d, 1.0);
        r.chi_prediction = chi_mean(d, r.sigma_f);
        rows.push_back(std::move(r));
    }
    return rows;
}

InterpretabilityResult interpretability_study(int d, std::uint64_t seed, const InterpretabilityConfig& cfg) {
    const auto gen = make_interpretability_dataset(d, seed, cfg.n_normal, cfg.n_per_component);
    const auto run = run_experiment(gen.data, to_experiment(cfg.training, seed));

    const auto report = score(run.params, run.test_x, 1.0, true);
    std::vector<std::vector<std::size_t>> predicted;
    std::vector<std::vector<std::size_t>> truth;
    for (std::size_t i = 0; i < run.split.test.size(); ++i) {
        const auto& t = gen.truth[run.split.test[i]];
        if (t.empty()) continue;
        predicted.push_back(top_k_features(report.attributions->row(static_cast<Eigen::Index>(i)).transpose(), t.size()));
        truth.push_back(t);
    }

    InterpretabilityResult r;
    r.dim = d;
    r.explanation = explanation_metrics(predicted, truth);
    r.auroc = run.auroc;
    r.auprc = run.auprc;
    r.anomalies = truth.size();
    return r;
}

Figure1Result figure1_study(Figure1Kind kind, std::uint64_t seed, const StudyTraining& training, std::size_t n_normal,
                            std::size_t n_anomaly, std::vector<double> t_grid) {
    const Dataset data = make_figure1_dataset(kind, n_normal, n_anomaly, seed);
    Figure1Result r{run_experiment(data, to_experiment(training, seed)), std::move(t_grid), {}};
    for (double t : r.t_grid) {
        r.auroc_by_t.push_back(auroc(score(r.run.params, r.run.test_x, t).scores, r.run.test_y));
    }
    return r;
}

}  // namespace tccm
