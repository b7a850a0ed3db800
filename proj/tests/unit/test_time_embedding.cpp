#include "tccm/errors.hpp"
#include "tccm/time_embedding.hpp"

#include <doctest.h>

#include <cmath>

using namespace tccm;

TEST_SUITE("time_embedding") {

TEST_CASE("t = 0 gives alternating zeros and ones") {
    TimeEmbeddingConfig cfg;
    cfg.dim = 4;
    const Vector e = embed(0.0, cfg);
    REQUIRE(e.size() == 4);
    CHECK(e[0] == 0.0);
    CHECK(e[1] == 1.0);
    CHECK(e[2] == 0.0);
    CHECK(e[3] == 1.0);
}

TEST_CASE("t = 1 with two dimensions") {
    TimeEmbeddingConfig cfg;
    cfg.dim = 2;
    const Vector e = embed(1.0, cfg);
    CHECK(e[0] == doctest::Approx(0.8414709848).epsilon(1e-10));
    CHECK(e[1] == doctest::Approx(0.5403023059).epsilon(1e-10));
}

TEST_CASE("t = 0.5 at the default width") {
    const TimeEmbeddingConfig cfg;
    REQUIRE(cfg.dim == 128);
    const Vector e = embed(0.5, cfg);
    CHECK(e[0] == doctest::Approx(0.4794255386).epsilon(1e-10));
    // last pair: frequency 1 / 10000^(126/128)
    const double freq = std::exp(-std::log(10000.0) * 126.0 / 128.0);
    CHECK(std::abs(e[126] - std::sin(0.5 * freq)) < 1e-15);
    CHECK(std::abs(e[127] - std::cos(0.5 * freq)) < 1e-15);
}

TEST_CASE("every pair lies on the unit circle") {
    for (int k = 0; k <= 100; ++k) {
        const double t = k / 100.0;
        const Vector e = sinusoidal_embedding(t, 64);
        for (int i = 0; i < 32; ++i) {
            CHECK(std::abs(e[2 * i]) <= 1.0);
            CHECK(std::abs(e[2 * i + 1]) <= 1.0);
            CHECK(std::abs(e[2 * i] * e[2 * i] + e[2 * i + 1] * e[2 * i + 1] - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("invalid configuration and domain") {
    TimeEmbeddingConfig cfg;
    cfg.dim = 5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(embed(0.5, cfg), ConfigError);
    cfg.dim = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    const TimeEmbeddingConfig ok;
    CHECK_THROWS_AS(embed(-0.01, ok), DomainError);
    CHECK_THROWS_AS(embed(1.01, ok), DomainError);
}

TEST_CASE("learnable variants need and use their weights") {
    Rng rng(3);
    for (auto kind : {EmbeddingKind::LinearSin, EmbeddingKind::SinusoidalMlp}) {
        TimeEmbeddingConfig cfg;
        cfg.kind = kind;
        cfg.dim = 8;
        cfg.mlp_hidden = 6;
        CHECK_THROWS(embed(0.5, cfg));
        const TimeEmbeddingParams p = init_embedding_params(cfg, rng);
        const Vector a = embed(0.25, cfg, p);
        CHECK(a.size() == 8);
        CHECK(a == embed(0.25, cfg, p));
        if (kind == EmbeddingKind::LinearSin) {
            for (int i = 0; i < 8; ++i) CHECK(std::abs(a[i] - std::sin(0.25 * p.w1(0, i) + p.b1[i])) < 1e-15);
        }
    }
}

TEST_CASE("batch embedding stacks single embeddings") {
    const TimeEmbeddingConfig cfg;
    const double ts[3] = {0.0, 0.3, 1.0};
    const Matrix m = embed_batch(ts, cfg);
    for (int r = 0; r < 3; ++r) CHECK(Vector(m.row(r).transpose()) == embed(ts[r], cfg));
}

TEST_CASE("kind names round-trip") {
    for (auto kind : {EmbeddingKind::Sinusoidal, EmbeddingKind::LinearSin, EmbeddingKind::SinusoidalMlp}) {
        CHECK(parse_embedding_kind(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_embedding_kind("fourier"), ConfigError);
}

}  // TEST_SUITE
