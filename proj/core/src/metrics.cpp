#include "tccm/metrics.hpp"

#include "tccm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace tccm {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw MetricError("scores and labels differ in length (" + std::to_string(scores.size()) + " vs " +
                          std::to_string(labels.size()) + ")");
    }
    for (int l : labels) {
        if (l != 0 && l != 1) throw MetricError("labels must be 0 or 1");
    }
    for (double s : scores) {
        if (std::isnan(s)) throw MetricError("scores contain NaN");
    }
}

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

Moments moments(std::span<const double> xs) {
    Moments m;
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(xs.size());
    return m;
}

}  // namespace

double auroc(std::span<const double> scores, std::span<const int> labels) {
    check_inputs(scores, labels);
    const std::size_t n = scores.size();
    std::size_t pos = 0;
    for (int l : labels) pos += static_cast<std::size_t>(l);
    const std::size_t neg = n - pos;
    if (pos == 0 || neg == 0) throw MetricError("AUROC needs both normal and anomalous rows");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of average ranks (1-based) of the positives.
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] == 1) rank_sum += avg_rank;
        }
        i = j + 1;
    }
    const double p = static_cast<double>(pos);
    const double u = rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(neg));
}

double auprc(std::span<const double> scores, std::span<const int> labels) {
    check_inputs(scores, labels);
    const std::size_t n = scores.size();
    std::size_t pos = 0;
    for (int l : labels) pos += static_cast<std::size_t>(l);
    if (pos == 0) throw MetricError("AUPRC needs at least one anomalous row");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    double ap = 0.0;
    std::size_t tp = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (labels[order[r]] == 1) {
            ++tp;
            ap += static_cast<double>(tp) / static_cast<double>(r + 1);
        }
    }
    return ap / static_cast<double>(pos);
}

CsmReport csm(std::span<const double> scores, std::size_t k) {
    const std::size_t n = scores.size();
    if (k < 1 || k >= n) {
        throw MetricError("CSM needs 1 <= k < n, got k = " + std::to_string(k) + ", n = " + std::to_string(n));
    }
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const auto top = moments(std::span(sorted).first(k));
    const auto rest = moments(std::span(sorted).subspan(k));

    CsmReport r;
    r.k = k;
    r.mu_o = top.mean;
    r.sigma_o = std::sqrt(top.var);
    r.mu_i = rest.mean;
    r.sigma_i = std::sqrt(rest.var);
    const double denom = std::sqrt(top.var + rest.var);
    if (denom == 0.0) {
        r.infinite = true;
        r.t = std::numeric_limits<double>::infinity();
    } else {
        r.t = (top.mean - rest.mean) / denom;
    }
    return r;
}

EpochSelection select_from_scores(std::span<const int> candidate_epochs, std::span<const std::vector<double>> scores,
                                  std::size_t k) {
    if (candidate_epochs.empty()) throw ConfigError("epoch selection needs at least one candidate");
    if (candidate_epochs.size() != scores.size()) throw DimensionError("one score vector per candidate required");

    EpochSelection sel;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidate_epochs.size(); ++i) {
        EpochCandidate c{candidate_epochs[i], csm(scores[i], k)};
        // Strict comparison keeps the earliest (fewest epochs) on ties.
        if (sel.candidates.empty() || c.report.t > best) {
            best = c.report.t;
            sel.best_epochs = c.epochs;
        }
        sel.candidates.push_back(c);
    }
    return sel;
}

EpochSelection select_epochs(const Matrix& train_pool, const ModelParams& init, TrainConfig cfg,
                             std::vector<int> candidate_epochs, double assumed_rate) {
    if (candidate_epochs.empty()) throw ConfigError("epoch selection needs at least one candidate");
    std::sort(candidate_epochs.begin(), candidate_epochs.end());
    candidate_epochs.erase(std::unique(candidate_epochs.begin(), candidate_epochs.end()), candidate_epochs.end());
    if (candidate_epochs.front() < 1) throw ConfigError("candidate epochs must be >= 1");
    if (candidate_epochs.size() == 1) {
        return EpochSelection{candidate_epochs.front(), {}};
    }
    if (!(assumed_rate > 0.0 && assumed_rate < 1.0)) {
        throw ConfigError("assumed anomaly rate must be in (0, 1), got " + std::to_string(assumed_rate));
    }
    const auto n = static_cast<std::size_t>(train_pool.rows());
    if (n < 2) throw ConfigError("epoch selection needs at least 2 rows");
    const auto k = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(assumed_rate * static_cast<double>(n))), 1, n - 1);

    cfg.epochs = candidate_epochs.back();
    std::vector<std::vector<double>> scores;
    std::size_t next = 0;
    train(train_pool, init, cfg, [&](int epoch, double, const ModelParams& params) {
        if (next < candidate_epochs.size() && epoch == candidate_epochs[next]) {
            scores.push_back(score(params, train_pool, 1.0).scores);
            ++next;
        }
    });
    return select_from_scores(candidate_epochs, scores, k);
}

}  // namespace tccm
