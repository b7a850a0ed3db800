#include "cli.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include "tccm/checkpoint.hpp"
#include "tccm/data.hpp"
#include "tccm/metrics.hpp"
#include "tccm/pipeline.hpp"
#include "tccm/presets.hpp"
#include "tccm/robustness.hpp"
#include "tccm/synthetic.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace tccm;
namespace fs = std::filesystem;

namespace {

void info(const char* fmt, auto... args) {
    std::printf("    ");
    std::printf(fmt, args...);
    std::printf("\n");
    std::fflush(stdout);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

bool small_datasets(double seconds_limit, const std::function<double()>& elapsed) {
    struct Target {
        const char* name;
        double auroc;
        double auprc;  // negative: not checked
    };
    const Target targets[] = {{"breastw", 0.990, 0.987},
                              {"Ionosphere", 0.976, 0.983},
                              {"WBC", 0.986, -1.0},
                              {"wine", 0.976, -1.0},
                              {"Pima", 0.735, -1.0}};
    bool ok = true;
    for (const Target& t : targets) {
        const Dataset data = load_csv(fs::path(TCCM_DATA_DIR) / (std::string(t.name) + ".csv"));
        ExperimentConfig cfg;
        cfg.train.epochs = published_epochs(t.name).value();
        std::vector<double> roc, prc;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            cfg.train.seed = seed;
            const ExperimentResult r = run_experiment(data, cfg);
            roc.push_back(r.auroc);
            prc.push_back(r.auprc);
        }
        const double mr = mean_of(roc), mp = mean_of(prc);
        const bool roc_ok = std::abs(mr - t.auroc) <= 0.03;
        const bool prc_ok = t.auprc < 0.0 || std::abs(mp - t.auprc) <= 0.05;
        ok = ok && roc_ok && prc_ok;
        if (t.auprc >= 0.0) {
            info("%-10s epochs=%-2d auroc=%.4f (target %.3f +-0.03)%s auprc=%.4f (target %.3f +-0.05)%s", t.name,
                 cfg.train.epochs, mr, t.auroc, roc_ok ? "" : " MISS", mp, t.auprc, prc_ok ? "" : " MISS");
        } else {
            info("%-10s epochs=%-2d auroc=%.4f (target %.3f +-0.03)%s auprc=%.4f", t.name, cfg.train.epochs, mr, t.auroc,
                 roc_ok ? "" : " MISS", mp);
        }
    }
    return ok && elapsed() < seconds_limit;
}

bool mismatch(double seconds_limit, const std::function<double()>& elapsed) {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        for (const MismatchRow& r : mismatch_study({2, 5, 10, 15, 20}, seed)) {
            const bool row_ok = r.auroc > 0.9 && r.anomaly_median > r.normal_median;
            ok = ok && row_ok;
            info("seed=%lu d=%-2d auroc=%.4f median normal=%.3f anomaly=%.3f%s", static_cast<unsigned long>(seed),
                 r.dim, r.auroc, r.normal_median, r.anomaly_median, row_ok ? "" : " MISS");
        }
    }
    return ok && elapsed() < seconds_limit;
}

bool interpretability(double seconds_limit, const std::function<double()>& elapsed) {
    bool ok = true;
    for (int d : {5, 10, 15, 20, 25}) {
        const InterpretabilityResult r = interpretability_study(d, 0);
        bool row_ok = std::abs(r.auroc - 1.0) <= 1e-6 && std::abs(r.auprc - 1.0) <= 1e-6;
        if (d <= 15) row_ok = row_ok && r.explanation.exact_match >= 0.99 && r.explanation.jaccard >= 0.99;
        else row_ok = row_ok && r.explanation.exact_match >= 0.98;
        ok = ok && row_ok;
        info("d=%-2d exact=%.4f jaccard=%.4f auroc=%.6f auprc=%.6f%s", d, r.explanation.exact_match,
             r.explanation.jaccard, r.auroc, r.auprc, row_ok ? "" : " MISS");
    }
    return ok && elapsed() < seconds_limit;
}

bool robustness(double seconds_limit, const std::function<double()>& elapsed) {
    AttackConfig fn;
    fn.mode = AttackMode::FalseNegative;
    AttackConfig fp;
    fp.mode = AttackMode::FalsePositive;
    fp.epsilons.clear();
    for (int k = 1; k <= 10; ++k) fp.epsilons.push_back(k / 10.0);
    const RobustnessResult r = robustness_study(2, 0, robustness_training(), fn, fp);
    info("lipschitz bound %.4f", r.lipschitz);

    bool ok = true;
    std::size_t violations = 0;
    for (const CurvePoint& p : r.false_negative) {
        const bool row_ok = p.auroc >= 1.0 - 1e-12 && p.auprc >= 1.0 - 1e-12;
        ok = ok && row_ok;
        violations += p.certificate_violations;
        info("fn eps=%.1f auroc=%.6f auprc=%.6f%s", p.epsilon, p.auroc, p.auprc, row_ok ? "" : " MISS");
    }
    for (const CurvePoint& p : r.false_positive) {
        const bool row_ok = p.auroc > 0.9;
        ok = ok && row_ok;
        violations += p.certificate_violations;
        info("fp eps=%.1f auroc=%.4f auprc=%.4f%s", p.epsilon, p.auroc, p.auprc, row_ok ? "" : " MISS");
    }
    info("certificate violations %zu", violations);
    return ok && elapsed() < seconds_limit;
}

bool theory() {
    const double d1 = chi_mean(1, 1.0), d2 = chi_mean(2, 1.0);
    const bool closed = std::abs(d1 - std::sqrt(2.0 / std::numbers::pi)) <= 1e-9 &&
                        std::abs(d2 - std::sqrt(std::numbers::pi / 2.0)) <= 1e-9;
    info("chi_mean d=1 %.15f d=2 %.15f", d1, d2);
    bool ok = closed;
    std::uint64_t seed = 100;
    for (int d : {2, 10}) {
        for (double lambda : {0.25, 1.0, 9.0}) {
            const McEstimate mc = noncentral_chi_mean_mc(d, lambda, 1000000, seed++);
            const double z = (mc.estimate - chi_mean(d, 1.0)) / mc.stderr_;
            ok = ok && z > 5.0;
            info("d=%-2d lambda=%.2f mc=%.6f central=%.6f excess=%.1f SE%s", d, lambda, mc.estimate, chi_mean(d, 1.0),
                 z, z > 5.0 ? "" : " MISS");
        }
    }
    return ok;
}

bool gradients() {
    Rng rng(2024);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 1 + static_cast<int>(rng.below(6));
        const ModelParams params = tccm::testing::random_params(rng, d, 8 + static_cast<int>(rng.below(12)), 6);
        const std::size_t rows = 2 + rng.below(10);
        const Matrix batch = tccm::testing::random_matrix(rng, static_cast<Eigen::Index>(rows), d);
        std::vector<double> t(rows);
        for (auto& v : t) v = rng.uniform();
        TrainConfig cfg;

        const auto lg = loss_and_gradient(params, batch, t, cfg);
        const std::vector<double> analytic = lg.gradient.flatten();
        const std::vector<double> point = params.flatten();
        ModelParams probe = params;
        const ScalarFn fn = [&](std::span<const double> flat) {
            probe.assign(flat);
            return loss(probe, batch, t, cfg);
        };
        GradCheckOptions opt;
        opt.piece = [&](std::span<const double> flat) {
            probe.assign(flat);
            Tape tape;
            record_loss(tape, probe, batch, t, cfg, nullptr, nullptr);
            return tape.piece_signature();
        };
        const GradCheckResult r = grad_check(fn, point, analytic, opt);
        worst = std::max(worst, r.max_relative_error);
        info("instance %2d d=%d params=%zu checked=%zu skipped=%zu max_rel=%.2e", rep, d, point.size(), r.checked,
             r.skipped, r.max_relative_error);
    }
    return worst < 1e-4;
}

bool lipschitz() {
    Rng rng(77);
    std::size_t violations = 0;
    for (int m = 0; m < 10; ++m) {
        const int d = 1 + static_cast<int>(rng.below(8));
        const ModelParams p = tccm::testing::random_params(rng, d, 16 + static_cast<int>(rng.below(48)), 8);
        const double bound = lipschitz_upper_bound(p) + 1.0;
        const double scale = rng.uniform(0.1, 5.0);
        const Matrix a = tccm::testing::random_matrix(rng, 10000, d, scale);
        Matrix b = a;
        for (Eigen::Index i = 0; i < b.rows(); ++i) {
            // mix near and far partners
            const double radius = i % 2 ? 1e-3 : scale;
            for (int j = 0; j < d; ++j) b(i, j) += radius * rng.normal();
        }
        const auto sa = score(p, a).scores;
        const auto sb = score(p, b).scores;
        std::size_t model_violations = 0;
        double tightest = 0.0;
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const double dist = (a.row(i) - b.row(i)).norm();
            const double gap = std::abs(sa[static_cast<std::size_t>(i)] - sb[static_cast<std::size_t>(i)]);
            if (gap > bound * dist * (1.0 + 1e-12) + 1e-14) ++model_violations;
            if (dist > 0.0) tightest = std::max(tightest, gap / (bound * dist));
        }
        violations += model_violations;
        info("model %d d=%d bound=%.4f worst ratio=%.4f violations=%zu", m, d, bound, tightest, model_violations);
    }
    return violations == 0;
}

bool t_insensitivity() {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Figure1Result r = figure1_study(Figure1Kind::Ring, seed, figure1_training());
        const auto [lo, hi] = std::minmax_element(r.auroc_by_t.begin(), r.auroc_by_t.end());
        const double range = *hi - *lo;
        ok = ok && range <= 0.05;
        info("seed=%lu auroc t=0.1..1.0 min=%.4f max=%.4f range=%.4f%s", static_cast<unsigned long>(seed), *lo, *hi,
             range, range <= 0.05 ? "" : " MISS");
    }
    return ok;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tccm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

bool determinism() {
    const fs::path ws = fs::temp_directory_path() / "tccm_acceptance";
    fs::remove_all(ws);
    fs::create_directories(ws);
    const std::string data = std::string(TCCM_DATA_DIR) + "/WBC.csv";
    bool ok = true;
    for (const char* s : {"0", "1"}) {
        const std::string tag = s;
        for (const char* run : {"a", "b"}) {
            const std::string stem = (ws / (tag + run)).string();
            ok = ok && cli({"train", "--data", data, "--epochs", "3", "--seed", s, "--out", stem + ".json"}) == 0;
            ok = ok && cli({"score", "--model", stem + ".json", "--data", data, "--out", stem + ".csv"}) == 0;
        }
        const bool models = slurp(ws / (tag + "a.json")) == slurp(ws / (tag + "b.json"));
        const bool scores = slurp(ws / (tag + "a.csv")) == slurp(ws / (tag + "b.csv"));
        save_checkpoint(load_checkpoint(ws / (tag + "a.json")), ws / (tag + "c.json"));
        const bool resave = slurp(ws / (tag + "a.json")) == slurp(ws / (tag + "c.json"));
        ok = ok && models && scores && resave;
        info("seed=%s identical checkpoints=%d identical score csv=%d save/load/save=%d", s, models, scores, resave);
    }
    fs::remove_all(ws);
    return ok;
}

bool metric_oracles() {
    Rng rng(10);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng.below(29);
        const auto y = tccm::testing::two_class_labels(rng, n);
        const auto s = tccm::testing::tied_scores(rng, n, rep % 3 == 0 ? 3 : 1000);
        worst = std::max(worst, std::abs(auroc(s, y) - tccm::testing::brute_auroc(s, y)));
        worst = std::max(worst, std::abs(auprc(s, y) - tccm::testing::brute_auprc(s, y)));
    }
    info("max deviation from enumeration %.3e", worst);
    return worst <= 1e-12;
}

struct Criterion {
    int id;
    const char* title;
    std::function<bool(const std::function<double()>&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "small-dataset AUROC/AUPRC within tolerance, under 300 s",
         [](auto& el) { return small_datasets(300.0, el); }},
        {2, "mismatch study AUROC > 0.9 and median ordering, under 180 s",
         [](auto& el) { return mismatch(180.0, el); }},
        {3, "interpretability ExactMatch/Jaccard and perfect detection, under 180 s",
         [](auto& el) { return interpretability(180.0, el); }},
        {4, "PGD robustness at d=2, under 300 s", [](auto& el) { return robustness(300.0, el); }},
        {5, "chi closed forms and non-central Monte Carlo excess", [](auto&) { return theory(); }},
        {6, "full-loss gradients against central differences", [](auto&) { return gradients(); }},
        {7, "Lipschitz score bound on 10 models x 10000 pairs", [](auto&) { return lipschitz(); }},
        {8, "ring AUROC range over scoring times <= 0.05", [](auto&) { return t_insensitivity(); }},
        {9, "identical score CSVs and byte-stable checkpoints", [](auto&) { return determinism(); }},
        {10, "AUROC/AUPRC against exhaustive enumeration", [](auto&) { return metric_oracles(); }},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (only != 0 && c.id != only) continue;
        std::printf("criterion %d: %s\n", c.id, c.title);
        std::fflush(stdout);
        const auto start = std::chrono::steady_clock::now();
        const std::function<double()> elapsed = [start] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        };
        bool pass = false;
        try {
            pass = c.run(elapsed);
        } catch (const std::exception& e) {
            info("exception: %s", e.what());
        }
        std::printf("%s criterion %d (%.1f s)\n", pass ? "PASS" : "FAIL", c.id, elapsed());
        std::fflush(stdout);
        failures += pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
