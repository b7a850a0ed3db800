#include "cli.hpp"

#include "tccm/checkpoint.hpp"
#include "tccm/data.hpp"
#include "tccm/errors.hpp"
#include "tccm/metrics.hpp"
#include "tccm/pipeline.hpp"
#include "tccm/presets.hpp"
#include "tccm/robustness.hpp"
#include "tccm/synthetic.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace tccm::cli {

namespace {

namespace fs = std::filesystem;

// Shortest round-trip text, but always with a decimal point or exponent so
// that 1 prints as "1.0".
std::string number(double x) {
    std::string s = format_double(x);
    if (s.find_first_of(".eEna") == std::string::npos) s += ".0";
    return s;
}

std::string fixed10(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10f", x);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataFormatError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw DataFormatError("failed writing " + path.string());
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(std::string(flag) + ": cannot parse '" + item + "' as a number");
        }
    }
    if (values.empty()) throw ConfigError(std::string(flag) + ": empty list");
    return values;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
    std::vector<int> out;
    for (double v : parse_list(text, flag)) {
        if (v != static_cast<int>(v)) throw ConfigError(std::string(flag) + ": expected integers, got " + number(v));
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// Canonical text of everything that shapes training, hashed into the checkpoint.
std::string config_text(const ExperimentConfig& cfg, std::size_t batch) {
    std::ostringstream s;
    s << "epochs=" << cfg.train.epochs << ";batch=" << batch << ";lr=" << format_double(cfg.train.learning_rate)
      << ";loss=" << to_string(cfg.train.loss) << ";embed=" << to_string(cfg.embed.kind) << ':' << cfg.embed.dim
      << ";hidden=" << cfg.hidden << ";noise=" << cfg.train.noise_injection
      << ";interpolate=" << cfg.train.time_interpolation << ";normalize=" << cfg.normalize
      << ";contamination=" << format_double(cfg.contamination) << ";seed=" << cfg.train.seed;
    return s.str();
}

Dataset load_for_model(const Checkpoint& ckpt, const std::string& path) {
    Dataset data = load_csv(path);
    if (data.dim() != ckpt.params.input_dim) {
        throw DimensionError("--data has " + std::to_string(data.dim()) + " features, the model expects " +
                             std::to_string(ckpt.params.input_dim));
    }
    return data;
}

// Rows of `data` selected by --split: the held-out partition recorded by the
// checkpoint's seed and contamination, or every row.
std::vector<std::size_t> selected_rows(const Checkpoint& ckpt, const Dataset& data, const std::string& split) {
    if (split == "all") {
        std::vector<std::size_t> all(data.rows());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return all;
    }
    return make_split(data, ckpt.provenance.seed, ckpt.provenance.contamination).test;
}

struct TrainArgs {
    std::string data;
    std::string out;
    int epochs = 0;
    std::uint64_t seed = 0;
    std::size_t batch_size = 0;
    double lr = 0.005;
    int embed_dim = 128;
    std::string embed = "sinusoidal";
    std::string loss = "l2";
    bool noise = false;
    bool interpolate = false;
    bool no_normalize = false;
    double contamination = 0.0;
    double t_fixed = 1.0;
};

int cmd_train(const TrainArgs& a, bool epochs_given, bool batch_given, std::ostream& out) {
    const Dataset data = load_csv(a.data);
    const std::string stem = fs::path(a.data).stem().string();

    ExperimentConfig cfg;
    if (epochs_given) {
        cfg.train.epochs = a.epochs;
    } else if (auto e = published_epochs(stem)) {
        cfg.train.epochs = *e;
    } else {
        throw ConfigError("--epochs is required: no published default for dataset '" + stem + "'");
    }
    if (batch_given) cfg.train.batch_size = a.batch_size;
    cfg.train.learning_rate = a.lr;
    cfg.train.loss = parse_loss_kind(a.loss);
    cfg.train.noise_injection = a.noise;
    cfg.train.time_interpolation = a.interpolate;
    cfg.train.seed = a.seed;
    cfg.embed.kind = parse_embedding_kind(a.embed);
    cfg.embed.dim = a.embed_dim;
    cfg.embed.validate();
    cfg.normalize = !a.no_normalize;
    cfg.contamination = a.contamination;
    cfg.t_fixed = a.t_fixed;

    auto log = [&](int epoch, double loss, const ModelParams&) {
        out << "epoch=" << epoch << " loss=" << number(loss) << '\n';
    };
    ExperimentResult r = run_experiment(data, cfg, log);

    Checkpoint ckpt;
    ckpt.params = std::move(r.params);
    ckpt.scaler = r.scaler;
    ckpt.t_fixed = a.t_fixed;
    ckpt.provenance.seed = a.seed;
    ckpt.provenance.epochs = cfg.train.epochs;
    ckpt.provenance.dataset = a.data;
    ckpt.provenance.config_hash = fnv1a_hex(config_text(cfg, cfg.train.resolved_batch_size(r.split.train.size())));
    ckpt.provenance.loss = std::string(to_string(cfg.train.loss));
    ckpt.provenance.contamination = a.contamination;
    ckpt.provenance.normalize = cfg.normalize;
    ckpt.provenance.noise_injection = a.noise;
    ckpt.provenance.time_interpolation = a.interpolate;
    save_checkpoint(ckpt, a.out);

    out << "held_out auroc=" << number(r.auroc) << " auprc=" << number(r.auprc) << '\n';
    return kOk;
}

struct ScoreArgs {
    std::string model;
    std::string data;
    std::string out;
    double t_fixed = 1.0;
};

int cmd_score(const ScoreArgs& a, bool t_given, bool explain) {
    const Checkpoint ckpt = load_checkpoint(a.model);
    const Dataset data = load_for_model(ckpt, a.data);
    const double t = t_given ? a.t_fixed : ckpt.t_fixed;
    const ScoreReport report = score(ckpt.params, ckpt.scaler.transform(data.X), t, explain);

    std::ostringstream csv;
    csv << "row,score,label";
    if (explain) {
        for (const auto& name : data.feature_names) csv << ",attr_" << name;
    }
    csv << '\n';
    for (std::size_t i = 0; i < data.rows(); ++i) {
        csv << i << ',' << format_double(report.scores[i]) << ',' << data.y[i];
        if (explain) {
            const auto row = report.attributions->row(static_cast<Eigen::Index>(i));
            for (Eigen::Index j = 0; j < row.size(); ++j) csv << ',' << format_double(row[j]);
        }
        csv << '\n';
    }
    write_text(a.out, csv.str());
    return kOk;
}

struct EvalArgs {
    std::string scores;
    std::string model;
    std::string data;
    std::string split = "test";
    double t_fixed = 1.0;
};

int cmd_eval(const EvalArgs& a, bool t_given, std::ostream& out) {
    std::vector<double> scores;
    std::vector<int> labels;
    if (!a.scores.empty()) {
        const Dataset table = load_csv(a.scores);
        const auto it = std::find(table.feature_names.begin(), table.feature_names.end(), "score");
        if (it == table.feature_names.end()) throw DataFormatError("--scores file has no 'score' column");
        const auto col = static_cast<Eigen::Index>(it - table.feature_names.begin());
        for (Eigen::Index i = 0; i < table.X.rows(); ++i) scores.push_back(table.X(i, col));
        labels = table.y;
    } else {
        if (a.model.empty() || a.data.empty()) throw ConfigError("eval needs --scores, or --model with --data");
        const Checkpoint ckpt = load_checkpoint(a.model);
        const Dataset data = load_for_model(ckpt, a.data);
        const auto rows = selected_rows(ckpt, data, a.split);
        const double t = t_given ? a.t_fixed : ckpt.t_fixed;
        scores = score(ckpt.params, ckpt.scaler.transform(data.rows_at(rows)), t).scores;
        labels = data.labels_at(rows);
    }
    out << "auroc=" << number(auroc(scores, labels)) << " auprc=" << number(auprc(scores, labels)) << '\n';
    return kOk;
}

struct AttackArgs {
    std::string model;
    std::string data;
    std::string out;
    std::string mode;
    std::string split = "test";
    std::string epsilons;
    double step = 0.01;
    double t_fixed = 1.0;
};

int cmd_attack(const AttackArgs& a, bool t_given, std::ostream& out) {
    const Checkpoint ckpt = load_checkpoint(a.model);
    const Dataset data = load_for_model(ckpt, a.data);
    const auto rows = selected_rows(ckpt, data, a.split);

    AttackConfig cfg;
    cfg.mode = parse_attack_mode(a.mode);
    cfg.step_size = a.step;
    if (!a.epsilons.empty()) cfg.epsilons = parse_list(a.epsilons, "--epsilons");
    cfg.validate();
    const double t = t_given ? a.t_fixed : ckpt.t_fixed;

    const auto curve =
        attack_curve(ckpt.params, ckpt.scaler.transform(data.rows_at(rows)), data.labels_at(rows), cfg, t);
    write_text(a.out, format_curve_csv(curve));
    std::size_t violations = 0;
    for (const auto& p : curve) violations += p.certificate_violations;
    out << "points=" << curve.size() << " certificate_violations=" << violations << '\n';
    return kOk;
}

struct SynthArgs {
    std::string study;
    std::string out;
    std::uint64_t seed = 0;
    int epochs = 0;
    std::string dims;
};

std::string dataset_study(Figure1Kind kind, const SynthArgs& a, bool epochs_given, const fs::path& dir,
                          std::ostream& out) {
    StudyTraining training = figure1_training();
    if (epochs_given) training.epochs = a.epochs;
    const auto result = figure1_study(kind, a.seed, training);
    write_csv(make_figure1_dataset(kind, 2000, 200, a.seed), dir / (std::string(to_string(kind)) + ".csv"));

    std::ostringstream csv;
    csv << "t,auroc\n";
    for (std::size_t i = 0; i < result.t_grid.size(); ++i) {
        csv << format_double(result.t_grid[i]) << ',' << format_double(result.auroc_by_t[i]) << '\n';
        out << "t=" << number(result.t_grid[i]) << " auroc=" << number(result.auroc_by_t[i]) << '\n';
    }
    const auto [lo, hi] = std::minmax_element(result.auroc_by_t.begin(), result.auroc_by_t.end());
    out << "auroc_range=" << number(*hi - *lo) << '\n';
    return csv.str();
}

int cmd_synth(const SynthArgs& a, bool epochs_given, std::ostream& out) {
    const fs::path dir(a.out);
    fs::create_directories(dir);

    if (a.study == "ring" || a.study == "moons" || a.study == "clusters") {
        const Figure1Kind kind =
            a.study == "ring" ? Figure1Kind::Ring : (a.study == "moons" ? Figure1Kind::Moons : Figure1Kind::Clusters);
        write_text(dir / (a.study + "_t_sweep.csv"), dataset_study(kind, a, epochs_given, dir, out));
        return kOk;
    }

    if (a.study == "mismatch") {
        MismatchConfig cfg;
        if (epochs_given) cfg.training.epochs = a.epochs;
        const auto dims = a.dims.empty() ? std::vector<int>{2, 5, 10, 15, 20} : parse_int_list(a.dims, "--dims");
        const auto rows = mismatch_study(dims, a.seed, cfg);
        std::ostringstream table;
        std::ostringstream dump;
        table << "dim,auroc,auprc,normal_mean,normal_median,anomaly_mean,anomaly_median,sigma_f,chi_prediction\n";
        dump << "# dim group score\n";
        for (const auto& r : rows) {
            table << r.dim << ',' << format_double(r.auroc) << ',' << format_double(r.auprc) << ','
                  << format_double(r.normal_mean) << ',' << format_double(r.normal_median) << ','
                  << format_double(r.anomaly_mean) << ',' << format_double(r.anomaly_median) << ','
                  << format_double(r.sigma_f) << ',' << format_double(r.chi_prediction) << '\n';
            for (double s : r.normal_scores) dump << r.dim << " normal " << format_double(s) << '\n';
            for (double s : r.anomaly_scores) dump << r.dim << " anomaly " << format_double(s) << '\n';
            out << "dim=" << r.dim << " auroc=" << number(r.auroc) << " normal_median=" << number(r.normal_median)
                << " anomaly_median=" << number(r.anomaly_median) << '\n';
        }
        write_text(dir / "mismatch.csv", table.str());
        write_text(dir / "mismatch_scores.dat", dump.str());
        return kOk;
    }

    if (a.study == "interpretability") {
        InterpretabilityConfig cfg;
        if (epochs_given) cfg.training.epochs = a.epochs;
        const auto dims = a.dims.empty() ? std::vector<int>{5, 10, 15, 20, 25} : parse_int_list(a.dims, "--dims");
        std::ostringstream table;
        table << "dim,exact_match,jaccard,auroc,auprc\n";
        for (int d : dims) {
            const auto r = interpretability_study(d, a.seed, cfg);
            table << d << ',' << format_double(r.explanation.exact_match) << ',' << format_double(r.explanation.jaccard)
                  << ',' << format_double(r.auroc) << ',' << format_double(r.auprc) << '\n';
            out << "dim=" << d << " exact_match=" << number(r.explanation.exact_match)
                << " jaccard=" << number(r.explanation.jaccard) << " auroc=" << number(r.auroc)
                << " auprc=" << number(r.auprc) << '\n';
        }
        write_text(dir / "interpretability.csv", table.str());
        return kOk;
    }

    if (a.study == "theory") {
        std::ostringstream table;
        table << "d,chi_mean\n";
        for (int d = 1; d <= 25; ++d) {
            const double m = chi_mean(d, 1.0);
            table << d << ',' << format_double(m) << '\n';
            out << "d=" << d << " chi_mean=" << fixed10(m) << '\n';
        }
        write_text(dir / "theory.csv", table.str());

        std::ostringstream mc;
        mc << "d,lambda,mc_mean,stderr,central_mean\n";
        for (double lambda : {0.0, 1.0, 9.0}) {
            const auto est = noncentral_chi_mean_mc(5, lambda, 1000000, a.seed);
            mc << 5 << ',' << format_double(lambda) << ',' << format_double(est.estimate) << ','
               << format_double(est.stderr_) << ',' << format_double(chi_mean(5, 1.0)) << '\n';
            out << "d=5 lambda=" << number(lambda) << " mc_mean=" << fixed10(est.estimate)
                << " stderr=" << fixed10(est.stderr_) << '\n';
        }
        write_text(dir / "theory_noncentral.csv", mc.str());
        return kOk;
    }

    throw ConfigError("--study must be one of ring, moons, clusters, mismatch, interpretability, theory");
}

struct EpochSelectArgs {
    std::string data;
    std::string candidates;
    std::string out;
    double assumed_rate = 0.05;
    std::uint64_t seed = 0;
    std::size_t batch_size = 0;
    double lr = 0.005;
    std::string loss = "l2";
    bool no_normalize = false;
};

int cmd_epoch_select(const EpochSelectArgs& a, bool batch_given, std::ostream& out) {
    const Dataset data = load_csv(a.data);
    const auto candidates = parse_int_list(a.candidates, "--candidates");

    TrainConfig cfg;
    cfg.seed = a.seed;
    cfg.learning_rate = a.lr;
    cfg.loss = parse_loss_kind(a.loss);
    if (batch_given) cfg.batch_size = a.batch_size;

    const SplitPlan plan = split_semi_supervised(data, a.seed);
    const Matrix pool_raw = data.rows_at(plan.train);
    const Scaler scaler = a.no_normalize ? Scaler::identity(data.dim()) : fit_scaler(pool_raw);
    const ModelParams init = init_params(data.dim(), TimeEmbeddingConfig{}, a.seed);
    const EpochSelection sel = select_epochs(scaler.transform(pool_raw), init, cfg, candidates, a.assumed_rate);

    std::ostringstream csv;
    csv << "epochs,k,mu_o,sigma_o,mu_i,sigma_i,csm\n";
    for (const auto& c : sel.candidates) {
        const auto& r = c.report;
        csv << c.epochs << ',' << r.k << ',' << format_double(r.mu_o) << ',' << format_double(r.sigma_o) << ','
            << format_double(r.mu_i) << ',' << format_double(r.sigma_i) << ',' << format_double(r.t) << '\n';
        out << "epochs=" << c.epochs << " csm=" << number(r.t) << '\n';
    }
    if (!a.out.empty()) write_text(a.out, csv.str());
    out << "best_epochs=" << sel.best_epochs << '\n';
    return kOk;
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const NumericalError*>(&e)) return kNumerical;
    if (dynamic_cast<const DataFormatError*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
        dynamic_cast<const MetricError*>(&e)) {
        return kData;
    }
    return kConfig;
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-conditioned contraction matching for tabular anomaly detection", "tccm"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    const auto pos_int = CLI::Range(1, std::numeric_limits<int>::max());
    const auto unit = CLI::Range(0.0, 1.0);

    TrainArgs ta;
    auto* train_cmd = app.add_subcommand("train", "Train on the normal half of a labeled CSV and write a checkpoint");
    train_cmd->add_option("--data", ta.data, "Labeled CSV (header, numeric features, 0/1 'label' column)")->required();
    train_cmd->add_option("--out", ta.out, "Checkpoint path")->required();
    auto* epochs_opt =
        train_cmd->add_option("--epochs", ta.epochs, "Training epochs (default: published value for known datasets)")
            ->check(pos_int);
    train_cmd->add_option("--seed", ta.seed, "Seed for split, initialization and training");
    auto* batch_opt = train_cmd->add_option("--batch-size", ta.batch_size, "Minibatch size")
                          ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
    train_cmd->add_option("--lr", ta.lr, "Adam learning rate")->check(CLI::PositiveNumber);
    train_cmd->add_option("--embed-dim", ta.embed_dim, "Time embedding width (even)")->check(CLI::Range(2, 1 << 16));
    train_cmd->add_option("--embed", ta.embed, "Time embedding: sinusoidal, linear-sin or sinusoidal-mlp");
    train_cmd->add_option("--loss", ta.loss, "Row loss: l2 or mse");
    train_cmd->add_flag("--noise-injection", ta.noise, "Perturb inputs by t * N(0, I)");
    train_cmd->add_flag("--interpolate-time", ta.interpolate, "Train on t * z");
    train_cmd->add_flag("--no-normalize", ta.no_normalize, "Skip z-score normalization");
    train_cmd->add_option("--contamination", ta.contamination, "Fraction of anomalies injected into training")
        ->check(unit);
    train_cmd->add_option("--t-fixed", ta.t_fixed, "Default scoring time stored in the checkpoint")->check(unit);

    ScoreArgs sa;
    auto* score_cmd = app.add_subcommand("score", "Score every row of a CSV");
    auto* explain_cmd = app.add_subcommand("explain", "Score every row and add per-feature attributions");
    CLI::Option* score_t = nullptr;
    CLI::Option* explain_t = nullptr;
    for (auto* cmd : {score_cmd, explain_cmd}) {
        cmd->add_option("--model", sa.model, "Checkpoint path")->required();
        cmd->add_option("--data", sa.data, "Labeled CSV")->required();
        cmd->add_option("--out", sa.out, "Output CSV")->required();
        auto* t = cmd->add_option("--t-fixed", sa.t_fixed, "Scoring time in (0, 1]")->check(unit);
        (cmd == score_cmd ? score_t : explain_t) = t;
    }

    EvalArgs ea;
    auto* eval_cmd = app.add_subcommand("eval", "Print AUROC and AUPRC");
    auto* eval_scores = eval_cmd->add_option("--scores", ea.scores, "CSV with 'score' and 'label' columns");
    auto* eval_model = eval_cmd->add_option("--model", ea.model, "Checkpoint path");
    eval_cmd->add_option("--data", ea.data, "Labeled CSV")->needs(eval_model);
    eval_model->excludes(eval_scores);
    eval_cmd->add_option("--split", ea.split, "Rows to evaluate with --model: test or all")
        ->check(CLI::IsMember({"test", "all"}));
    auto* eval_t = eval_cmd->add_option("--t-fixed", ea.t_fixed, "Scoring time in (0, 1]")->check(unit);

    AttackArgs aa;
    auto* attack_cmd = app.add_subcommand("attack", "PGD attack curve over L-infinity budgets");
    attack_cmd->add_option("--model", aa.model, "Checkpoint path")->required();
    attack_cmd->add_option("--data", aa.data, "Labeled CSV")->required();
    attack_cmd->add_option("--mode", aa.mode, "fn (anomalies toward normal) or fp (normals toward anomalous)")
        ->required()
        ->check(CLI::IsMember({"fn", "fp"}));
    attack_cmd->add_option("--out", aa.out, "Curve CSV")->required();
    attack_cmd->add_option("--split", aa.split, "Rows to attack: test or all")->check(CLI::IsMember({"test", "all"}));
    attack_cmd->add_option("--epsilons", aa.epsilons, "Comma-separated budgets (default 0.1,0.2,...,3.0)");
    attack_cmd->add_option("--step", aa.step, "PGD step size")->check(CLI::PositiveNumber);
    auto* attack_t = attack_cmd->add_option("--t-fixed", aa.t_fixed, "Scoring time in (0, 1]")->check(unit);

    SynthArgs ya;
    auto* synth_cmd = app.add_subcommand("synth", "Run a synthetic study and write its tables");
    synth_cmd->add_option("--study", ya.study, "ring, moons, clusters, mismatch, interpretability or theory")
        ->required()
        ->check(CLI::IsMember({"ring", "moons", "clusters", "mismatch", "interpretability", "theory"}));
    synth_cmd->add_option("--out", ya.out, "Output directory")->required();
    synth_cmd->add_option("--seed", ya.seed, "Seed");
    auto* synth_epochs = synth_cmd->add_option("--epochs", ya.epochs, "Override training epochs")->check(pos_int);
    synth_cmd->add_option("--dims", ya.dims, "Comma-separated dimensions (mismatch, interpretability)");

    EpochSelectArgs xa;
    auto* select_cmd = app.add_subcommand("epoch-select", "Choose an epoch count by contrast score margin");
    select_cmd->add_option("--data", xa.data, "Labeled CSV (labels are not used)")->required();
    select_cmd->add_option("--candidates", xa.candidates, "Comma-separated epoch counts")->required();
    select_cmd->add_option("--assumed-rate", xa.assumed_rate, "Assumed anomaly rate for the top-k split")
        ->check(CLI::Range(0.0, 1.0));
    select_cmd->add_option("--seed", xa.seed, "Seed");
    auto* select_batch = select_cmd->add_option("--batch-size", xa.batch_size, "Minibatch size")
                             ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
    select_cmd->add_option("--lr", xa.lr, "Adam learning rate")->check(CLI::PositiveNumber);
    select_cmd->add_option("--loss", xa.loss, "Row loss: l2 or mse");
    select_cmd->add_flag("--no-normalize", xa.no_normalize, "Skip z-score normalization");
    select_cmd->add_option("--out", xa.out, "Optional CSV of per-candidate margins");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << one_line(e.what()) << '\n';
        const CLI::App* failed = &app;
        for (const auto* sub : app.get_subcommands({})) {
            if (sub->parsed() > 0) failed = sub;
        }
        err << failed->help();
        return kConfig;
    }

    try {
        if (*train_cmd) return cmd_train(ta, epochs_opt->count() > 0, batch_opt->count() > 0, out);
        if (*score_cmd) return cmd_score(sa, score_t->count() > 0, false);
        if (*explain_cmd) return cmd_score(sa, explain_t->count() > 0, true);
        if (*eval_cmd) return cmd_eval(ea, eval_t->count() > 0, out);
        if (*attack_cmd) return cmd_attack(aa, attack_t->count() > 0, out);
        if (*synth_cmd) return cmd_synth(ya, synth_epochs->count() > 0, out);
        if (*select_cmd) return cmd_epoch_select(xa, select_batch->count() > 0, out);
    } catch (const Error& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return exit_code_for(e);
    } catch (const fs::filesystem_error& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return kData;
    }
    return kConfig;
}

}  // namespace tccm::cli
