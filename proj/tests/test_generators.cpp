#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "support/helpers.hpp"
#include "synthbench/csv.hpp"
#include "synthbench/encoding.hpp"
#include "synthbench/errors.hpp"
#include "synthbench/generators.hpp"
#include "synthbench/metrics.hpp"
#include "synthbench/rng.hpp"
#include "synthbench/seed_data.hpp"

using namespace synthbench;

namespace {

GenTrainConfig quick(GenTrainConfig base, std::size_t epochs) {
    base.epochs = epochs;
    return base;
}

Table repeated_row_table(std::size_t n) {
    const auto one = parse_csv(helpers::table1_csv(), student_schema()).table;
    Table t(one.schema());
    for (std::size_t i = 0; i < n; ++i) t.append_row_from(one, 0);
    return t;
}

}  // namespace

TEST_CASE("normal quantile and cdf are mutual inverses") {
    for (double p : {1e-9, 1e-4, 0.01, 0.25, 0.5, 0.75, 0.99, 1.0 - 1e-4}) {
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
}

TEST_CASE("dae on a single repeated row memorizes it") {
    const auto t = repeated_row_table(64);
    const auto enc = fit_encoding(t);
    auto cfg = GenTrainConfig::dae_defaults();
    cfg.epochs = 60;
    const auto model = dae_fit(enc, cfg);
    CHECK(model.loss_history.back() < 1e-4);

    const auto gen = dae_generate(model, 10, 5);
    REQUIRE(gen.n_rows() == 10);
    for (std::size_t r = 0; r < gen.n_rows(); ++r) {
        CHECK(gen.rows_equal(r, t, 0));
    }
}

TEST_CASE("dae training loss decreases (mean of last 10 < mean of first 10)") {
    const auto t = seed_dataset(400, 42);
    const auto enc = fit_encoding(t);
    const auto model = dae_fit(enc, quick(GenTrainConfig::dae_defaults(), 30));
    const auto& h = model.loss_history;
    REQUIRE(h.size() == 30);
    const double first = std::accumulate(h.begin(), h.begin() + 10, 0.0) / 10.0;
    const double last = std::accumulate(h.end() - 10, h.end(), 0.0) / 10.0;
    CHECK(last < first);
    CHECK(model.loss_history.back() < model.loss_history.front());
}

TEST_CASE("dae generated tables satisfy schema invariants") {
    const auto t = seed_dataset(300, 7);
    const auto model = dae_fit(fit_encoding(t), quick(GenTrainConfig::dae_defaults(), 15));
    const auto gen = dae_generate(model, 123, 9);
    REQUIRE(gen.n_rows() == 123);
    gen.validate_cells();

    // determinism
    CHECK(to_csv(dae_generate(model, 50, 3)) == to_csv(dae_generate(model, 50, 3)));
    CHECK_THROWS_AS(dae_generate(model, 0, 1), DomainError);
}

TEST_CASE("dae with zero noise reproduces plain reconstructions") {
    const auto t = seed_dataset(200, 3);
    auto model = dae_fit(fit_encoding(t), quick(GenTrainConfig::dae_defaults(), 10));
    model.noise_sigma = 0.0;
    const auto a = dae_generate(model, 200, 1);
    const auto b = dae_generate(model, 200, 2);  // different seed, same output
    CHECK(a.equals(b));
}

TEST_CASE("vae KL term is non-negative every epoch and zero at (mu=0, logvar=0)") {
    const auto t = seed_dataset(400, 42);
    const auto model = vae_fit(fit_encoding(t), quick(GenTrainConfig::vae_defaults(), 25));
    for (double kl : model.kl_history) CHECK(kl >= -1e-12);

    // closed form at mu = 0, logvar = 0: 0.5 * (0 + 1 - 0 - 1) = 0 per dim
    const double kl0 = 0.5 * (0.0 + std::exp(0.0) - 0.0 - 1.0);
    CHECK(kl0 == 0.0);
}

TEST_CASE("vae training loss decreases and generation is deterministic") {
    const auto t = seed_dataset(400, 42);
    const auto model = vae_fit(fit_encoding(t), quick(GenTrainConfig::vae_defaults(), 30));
    const auto& h = model.loss_history;
    const double first = std::accumulate(h.begin(), h.begin() + 10, 0.0) / 10.0;
    const double last = std::accumulate(h.end() - 10, h.end(), 0.0) / 10.0;
    CHECK(last < first);

    const auto a = vae_generate(model, 77, 4);
    REQUIRE(a.n_rows() == 77);
    a.validate_cells();
    CHECK(to_csv(a) == to_csv(vae_generate(model, 77, 4)));
    CHECK_THROWS_AS(vae_generate(model, 0, 1), DomainError);
}

TEST_CASE("copula transform round-trips training data") {
    const auto t = seed_dataset(500, 7);
    const auto enc = fit_encoding(t);
    std::vector<CopulaMarginal> marginals;
    const Matrix z = copula_transform(enc, &marginals);
    const Matrix back = copula_inverse(z, marginals, enc.encodings);
    for (std::size_t i = 0; i < back.a.size(); ++i) {
        CHECK(back.a[i] == doctest::Approx(enc.data.a[i]).epsilon(1e-9));
    }
}

TEST_CASE("copula transform: median maps near zero, one-hot columns pass through") {
    const auto t = seed_dataset(501, 11);
    const auto enc = fit_encoding(t);
    std::vector<CopulaMarginal> marginals;
    const Matrix z = copula_transform(enc, &marginals);

    // one-hot/binary columns unchanged
    for (const auto& e : enc.encodings) {
        if (std::holds_alternative<StandardizedEnc>(e)) continue;
        const std::size_t off = std::holds_alternative<OneHotEnc>(e)
                                    ? std::get<OneHotEnc>(e).offset
                                    : std::get<BinaryEnc>(e).offset;
        for (std::size_t r = 0; r < z.rows; ++r) {
            CHECK(z.at(r, off) == enc.data.at(r, off));
        }
    }

    // the median observation of each marginal maps to ~0 (ties in the
    // integer-valued scores shift the midrank slightly)
    for (const auto& m : marginals) {
        const double median = m.sorted[m.sorted.size() / 2];
        CHECK(std::abs(m.to_normal(median)) < 0.1);
    }
}

TEST_CASE("copula scores of uniform input pass a KS test against N(0,1)") {
    // probability integral transform: ranks of any continuous sample map to
    // near-perfect normal scores
    Rng rng(13);
    std::vector<double> values(1000);
    for (auto& v : values) v = rng.uniform(0, 1);
    const auto t = helpers::one_col_table(values, 0, 1);
    const auto enc = fit_encoding(t);
    std::vector<CopulaMarginal> marginals;
    const Matrix z = copula_transform(enc, &marginals);

    const std::size_t col = enc.width() - 1;
    std::vector<double> scores(z.rows);
    for (std::size_t r = 0; r < z.rows; ++r) scores[r] = z.at(r, col);
    std::sort(scores.begin(), scores.end());
    double d = 0.0;
    const double n = static_cast<double>(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double f = normal_cdf(scores[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    // asymptotic one-sample critical value at alpha = 0.05
    CHECK(d < 1.358 / std::sqrt(n));
}

TEST_CASE("discriminator separates real data from a frozen random generator") {
    // trivially separable case: real copula-space rows (0/1 one-hot entries)
    // vs. fakes from an untrained generator (diffuse softmax values); one
    // epoch of discriminator-only training must reach > 0.95 accuracy
    const auto t = seed_dataset(2000, 42);
    const auto enc = fit_encoding(t);
    std::vector<CopulaMarginal> marginals;
    const Matrix real = copula_transform(enc, &marginals);
    const std::size_t d = real.cols;

    DenseNet frozen_g = make_dense_net({64, 128, 128, d},
                                       {Activation::Relu, Activation::Relu,
                                        Activation::SoftmaxGrouped},
                                       {0.0, 0.0, 0.0}, 987654);
    for (const auto& e : enc.encodings) {
        if (std::holds_alternative<OneHotEnc>(e)) {
            const auto& o = std::get<OneHotEnc>(e);
            frozen_g.segments.push_back({o.offset, o.levels, OutputSegment::Kind::Softmax});
        } else if (std::holds_alternative<BinaryEnc>(e)) {
            frozen_g.segments.push_back(
                {std::get<BinaryEnc>(e).offset, 1, OutputSegment::Kind::Sigmoid});
        } else {
            frozen_g.segments.push_back(
                {std::get<StandardizedEnc>(e).offset, 1, OutputSegment::Kind::Linear});
        }
    }

    DenseNet disc = make_dense_net({d, 128, 128, 1},
                                   {Activation::Relu, Activation::Relu, Activation::Sigmoid},
                                   {0.2, 0.2, 0.0}, 13579);
    AdamState opt = make_adam(disc, 1e-3);
    Rng rng(555);
    Rng shuffle_rng(556);
    const auto batches = make_batches(real.rows, 50, shuffle_rng);
    std::uint64_t step_seed = 9000;
    for (const auto& idx : batches) {
        Matrix x_real(idx.size(), d);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            std::copy(real.row(idx[i]), real.row(idx[i]) + d, x_real.row(i));
        }
        Matrix noise(idx.size(), 64);
        for (double& v : noise.a) v = rng.normal();
        const Matrix x_fake = forward(frozen_g, noise, false, 0);

        ForwardCache c_real, c_fake;
        const Matrix p_real = forward(disc, x_real, true, ++step_seed, &c_real);
        const Matrix p_fake = forward(disc, x_fake, true, ++step_seed, &c_fake);
        const double invB = 1.0 / static_cast<double>(idx.size());
        Matrix dp_real(p_real.rows, 1), dp_fake(p_fake.rows, 1);
        for (std::size_t i = 0; i < p_real.a.size(); ++i) {
            const double pc = std::clamp(p_real.a[i], 1e-12, 1.0 - 1e-12);
            dp_real.a[i] = 0.5 * (pc - 1.0) / (pc * (1.0 - pc)) * invB;
        }
        for (std::size_t i = 0; i < p_fake.a.size(); ++i) {
            const double pc = std::clamp(p_fake.a[i], 1e-12, 1.0 - 1e-12);
            dp_fake.a[i] = 0.5 * pc / (pc * (1.0 - pc)) * invB;
        }
        Gradients g_real, g_fake;
        backward(disc, c_real, dp_real, g_real);
        backward(disc, c_fake, dp_fake, g_fake);
        accumulate(g_real, g_fake);
        adam_step(opt, disc, g_real);
    }

    // evaluate on the full real matrix and an equal-size fresh fake batch
    Matrix noise(real.rows, 64);
    for (double& v : noise.a) v = rng.normal();
    const Matrix fake = forward(frozen_g, noise, false, 0);
    const Matrix p_real = forward(disc, real, false, 0);
    const Matrix p_fake = forward(disc, fake, false, 0);
    std::size_t correct = 0;
    for (double v : p_real.a) {
        if (v >= 0.5) ++correct;
    }
    for (double v : p_fake.a) {
        if (v < 0.5) ++correct;
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(2 * real.rows);
    CHECK(acc > 0.95);
}

TEST_CASE("copulagan generates schema-conformant, deterministic output") {
    const auto t = seed_dataset(300, 5);
    auto cfg = GenTrainConfig::copulagan_defaults();
    cfg.epochs = 5;
    const auto model = copulagan_fit(fit_encoding(t), cfg);
    const auto gen = copulagan_generate(model, 150, 8);
    REQUIRE(gen.n_rows() == 150);
    gen.validate_cells();
    CHECK(to_csv(gen) == to_csv(copulagan_generate(model, 150, 8)));
    CHECK_THROWS_AS(copulagan_generate(model, 0, 1), DomainError);

    // generator output: each one-hot group's softmax sums to 1
    Rng rng(3);
    Matrix noise(10, model.noise_dim);
    for (double& v : noise.a) v = rng.normal();
    const Matrix g = forward(model.generator, noise, false, 0);
    for (const auto& e : model.encodings) {
        if (!std::holds_alternative<OneHotEnc>(e)) continue;
        const auto& o = std::get<OneHotEnc>(e);
        for (std::size_t r = 0; r < g.rows; ++r) {
            double sum = 0.0;
            for (std::size_t l = 0; l < o.levels; ++l) sum += g.at(r, o.offset + l);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("gradient check passes for every generator architecture") {
    const auto t = seed_dataset(60, 17);
    const auto enc = fit_encoding(t);
    const std::size_t d = enc.width();
    Rng rng(23);
    Matrix x(8, d);
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t c = 0; c < d; ++c) x.at(r, c) = enc.data.at(r, c);
    }

    SUBCASE("dae encoder+decoder through MSE") {
        DenseNet encdr = make_dense_net({d, 64, 32}, {Activation::Relu, Activation::Relu},
                                        {0.2, 0.0}, 1);
        DenseNet decdr = make_dense_net({32, 64, d}, {Activation::Relu, Activation::Sigmoid},
                                        {0.2, 0.0}, 2);
        ForwardCache ec, dc;
        const Matrix z = forward(encdr, x, true, 42, &ec);
        const Matrix y = forward(decdr, z, true, 43, &dc);
        Matrix dl;
        mse_loss(y, x, &dl);
        Gradients gd, ge;
        const Matrix dz = backward(decdr, dc, dl, gd);
        backward(encdr, ec, dz, ge);

        auto loss_enc = [&]() {
            return mse_loss(forward(decdr, forward(encdr, x, true, 42), true, 43), x, nullptr);
        };
        CHECK(gradient_check(encdr, loss_enc, ge, 7, 400) < 1e-4);
        CHECK(gradient_check(decdr, loss_enc, gd, 8, 400) < 1e-4);
    }
}
