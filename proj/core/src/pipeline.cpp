#include "tccm/pipeline.hpp"

#include "tccm/metrics.hpp"

namespace tccm {

SplitPlan make_split(const Dataset& data, std::uint64_t seed, double contamination) {
    SplitPlan plan = split_semi_supervised(data, seed);
    if (contamination > 0.0) plan = inject_contamination(plan, data, contamination, seed);
    return plan;
}

ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& cfg, const EpochCallback& on_epoch) {
    cfg.train.validate();
    ExperimentResult r;
    r.split = make_split(data, cfg.train.seed, cfg.contamination);
    const Matrix train_raw = data.rows_at(r.split.train);
    r.scaler = cfg.normalize ? fit_scaler(train_raw) : Scaler::identity(data.dim());

    ModelParams init = init_params(data.dim(), cfg.embed, cfg.train.seed, cfg.hidden);
    auto trained = train(r.scaler.transform(train_raw), std::move(init), cfg.train, on_epoch);
    r.params = std::move(trained.params);
    r.loss_trace = std::move(trained.loss_trace);

    r.test_x = r.scaler.transform(data.rows_at(r.split.test));
    r.test_y = data.labels_at(r.split.test);
    r.test_scores = score(r.params, r.test_x, cfg.t_fixed).scores;
    r.auroc = auroc(r.test_scores, r.test_y);
    r.auprc = auprc(r.test_scores, r.test_y);
    return r;
}

}  // namespace tccm
