#include "synthbench/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synthbench/errors.hpp"

namespace synthbench {

// ---------------------------------------------------------------------------
// Normal CDF / quantile

double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244); }

// Wichura's PPND16 rational approximation (AS 241), |error| < 1e-15.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("normal_quantile: p must be in (0,1)");
    }
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                     67265.770927008700853) * r + 45921.953931549871457) * r +
                   13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545703 * r + 28729.085735721942674) * r +
                     39307.89580009271061) * r + 21213.794301586595867) * r +
                   5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                    0.24178072517745061177) * r + 1.27045825245236838258) * r +
                  3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                    0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                  0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                  0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                    1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                  0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

// ---------------------------------------------------------------------------
// RangeScaler

// Constant columns (scale == 0) map to 0.5, the sigmoid midpoint, and invert
// back to their single observed value.
RangeScaler RangeScaler::fit(const Matrix& m) {
    RangeScaler s;
    s.lo.assign(m.cols, 0.0);
    s.scale.assign(m.cols, 0.0);
    for (std::size_t c = 0; c < m.cols; ++c) {
        double mn = m.at(0, c), mx = m.at(0, c);
        for (std::size_t r = 1; r < m.rows; ++r) {
            mn = std::min(mn, m.at(r, c));
            mx = std::max(mx, m.at(r, c));
        }
        s.lo[c] = mn;
        s.scale[c] = mx - mn;
    }
    return s;
}

Matrix RangeScaler::apply(const Matrix& m) const {
    Matrix out = m;
    for (std::size_t r = 0; r < m.rows; ++r) {
        double* row = out.row(r);
        for (std::size_t c = 0; c < m.cols; ++c) {
            row[c] = scale[c] > 0.0 ? (row[c] - lo[c]) / scale[c] : 0.5;
        }
    }
    return out;
}

Matrix RangeScaler::invert(const Matrix& m) const {
    Matrix out = m;
    for (std::size_t r = 0; r < m.rows; ++r) {
        double* row = out.row(r);
        for (std::size_t c = 0; c < m.cols; ++c) {
            row[c] = scale[c] > 0.0 ? lo[c] + row[c] * scale[c] : lo[c];
        }
    }
    return out;
}

namespace {

Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
    Matrix out(rows.size(), m.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy(m.row(rows[i]), m.row(rows[i]) + m.cols, out.row(i));
    }
    return out;
}

void check_finite(double loss, std::size_t epoch, const char* what) {
    if (!std::isfinite(loss)) {
        throw TrainingDivergence(std::string(what) + ": non-finite loss at epoch " +
                                     std::to_string(epoch),
                                 epoch);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Denoising autoencoder

DAEModel dae_fit(const EncodedMatrix& matrix, const GenTrainConfig& cfg) {
    if (matrix.data.rows == 0) throw DomainError("dae_fit: empty matrix");
    const std::size_t d = matrix.width();

    DAEModel model;
    model.scaler = RangeScaler::fit(matrix.data);
    model.train_scaled = model.scaler.apply(matrix.data);
    model.encodings = matrix.encodings;
    model.schema = matrix.schema;
    model.encoder = make_dense_net({d, 64, 32}, {Activation::Relu, Activation::Relu},
                                   {0.2, 0.0}, derive_seed(cfg.seed, "dae-encoder"));
    model.decoder = make_dense_net({32, 64, d}, {Activation::Relu, Activation::Sigmoid},
                                   {0.2, 0.0}, derive_seed(cfg.seed, "dae-decoder"));

    AdamState opt_enc = make_adam(model.encoder, cfg.learning_rate);
    AdamState opt_dec = make_adam(model.decoder, cfg.learning_rate);

    Rng shuffle_rng(derive_seed(cfg.seed, "dae-shuffle"));
    std::uint64_t step_seed = derive_seed(cfg.seed, "dae-dropout");
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto batches = make_batches(model.train_scaled.rows, cfg.batch_size, shuffle_rng);
        double sse = 0.0;
        std::size_t count = 0;
        for (const auto& idx : batches) {
            const Matrix x = take_rows(model.train_scaled, idx);
            ForwardCache enc_cache, dec_cache;
            const Matrix z = forward(model.encoder, x, true, ++step_seed, &enc_cache);
            const Matrix y = forward(model.decoder, z, true, ++step_seed, &dec_cache);
            Matrix dloss;
            const double loss = mse_loss(y, x, &dloss);
            sse += loss * static_cast<double>(y.a.size());
            count += y.a.size();
            Gradients g_dec, g_enc;
            const Matrix dz = backward(model.decoder, dec_cache, dloss, g_dec);
            backward(model.encoder, enc_cache, dz, g_enc);
            adam_step(opt_dec, model.decoder, g_dec);
            adam_step(opt_enc, model.encoder, g_enc);
        }
        const double epoch_mse = sse / static_cast<double>(count);
        check_finite(epoch_mse, epoch, "dae_fit");
        model.loss_history.push_back(epoch_mse);
    }
    model.trained = true;
    return model;
}

Table dae_generate(const DAEModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("dae_generate: n must be >= 1");
    if (!model.trained) throw DomainError("dae_generate: model not trained");
    const std::size_t n_train = model.train_scaled.rows;
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i % n_train;  // cycled to n
    const Matrix x = take_rows(model.train_scaled, rows);
    Matrix z = forward(model.encoder, x, false, 0);
    Rng rng(derive_seed(seed, "dae-noise"));
    for (double& v : z.a) v += model.noise_sigma == 0.0 ? 0.0 : rng.normal(0.0, model.noise_sigma);
    const Matrix y = forward(model.decoder, z, false, 0);
    return decode_matrix(model.scaler.invert(y), model.encodings, model.schema, true, true);
}

// ---------------------------------------------------------------------------
// VAE

namespace {
// Fixed decoder variance for the Gaussian reconstruction term:
// recon = ||x - xhat||^2 / (2 * kVaeReconVar), summed over dims, mean over batch.
constexpr double kVaeReconVar = 0.1;
constexpr std::size_t kVaeHidden = 128;
}  // namespace

VAEModel vae_fit(const EncodedMatrix& matrix, const GenTrainConfig& cfg) {
    if (matrix.data.rows == 0) throw DomainError("vae_fit: empty matrix");
    const std::size_t d = matrix.width();

    VAEModel model;
    model.scaler = RangeScaler::fit(matrix.data);
    model.encodings = matrix.encodings;
    model.schema = matrix.schema;
    const Matrix X = model.scaler.apply(matrix.data);
    const std::size_t latent = model.latent_dim;

    model.encoder = make_dense_net(
        {d, kVaeHidden, kVaeHidden, 2 * latent},
        {Activation::Relu, Activation::Relu, Activation::Linear}, {0.0, 0.0, 0.0},
        derive_seed(cfg.seed, "vae-encoder"));
    model.decoder = make_dense_net(
        {latent, kVaeHidden, kVaeHidden, d},
        {Activation::Relu, Activation::Relu, Activation::Sigmoid}, {0.0, 0.0, 0.0},
        derive_seed(cfg.seed, "vae-decoder"));

    AdamState opt_enc = make_adam(model.encoder, cfg.learning_rate);
    AdamState opt_dec = make_adam(model.decoder, cfg.learning_rate);

    Rng shuffle_rng(derive_seed(cfg.seed, "vae-shuffle"));
    Rng eps_rng(derive_seed(cfg.seed, "vae-eps"));
    const double beta = model.kl_weight;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto batches = make_batches(X.rows, cfg.batch_size, shuffle_rng);
        double loss_sum = 0.0, kl_sum = 0.0;
        std::size_t n_samples = 0;
        for (const auto& idx : batches) {
            const Matrix x = take_rows(X, idx);
            const std::size_t B = x.rows;
            const double invB = 1.0 / static_cast<double>(B);

            ForwardCache enc_cache;
            const Matrix h = forward(model.encoder, x, true, 0, &enc_cache);
            Matrix mu(B, latent), logvar(B, latent), eps(B, latent), z(B, latent);
            for (std::size_t r = 0; r < B; ++r) {
                for (std::size_t c = 0; c < latent; ++c) {
                    mu.at(r, c) = h.at(r, c);
                    logvar.at(r, c) = h.at(r, latent + c);
                    eps.at(r, c) = eps_rng.normal();
                    z.at(r, c) = mu.at(r, c) + std::exp(0.5 * logvar.at(r, c)) * eps.at(r, c);
                }
            }

            ForwardCache dec_cache;
            const Matrix y = forward(model.decoder, z, true, 0, &dec_cache);

            // recon: sum over dims / (2 var), mean over batch
            double recon = 0.0;
            Matrix dy(B, d);
            const double rscale = 1.0 / (2.0 * kVaeReconVar);
            for (std::size_t i = 0; i < y.a.size(); ++i) {
                const double diff = y.a[i] - x.a[i];
                recon += diff * diff * rscale;
                dy.a[i] = 2.0 * diff * rscale * invB;
            }
            recon *= invB;

            // KL(q || N(0,I)) = 1/2 sum(mu^2 + e^lv - lv - 1), mean over batch
            double kl = 0.0;
            for (std::size_t i = 0; i < mu.a.size(); ++i) {
                kl += 0.5 * (mu.a[i] * mu.a[i] + std::exp(logvar.a[i]) - logvar.a[i] - 1.0);
            }
            kl *= invB;

            Gradients g_dec;
            const Matrix dz = backward(model.decoder, dec_cache, dy, g_dec);

            Matrix dh(B, 2 * latent);
            for (std::size_t r = 0; r < B; ++r) {
                for (std::size_t c = 0; c < latent; ++c) {
                    const double lv = logvar.at(r, c);
                    const double dmu = dz.at(r, c) + beta * mu.at(r, c) * invB;
                    const double dlv = dz.at(r, c) * eps.at(r, c) * 0.5 * std::exp(0.5 * lv) +
                                       beta * 0.5 * (std::exp(lv) - 1.0) * invB;
                    dh.at(r, c) = dmu;
                    dh.at(r, latent + c) = dlv;
                }
            }
            Gradients g_enc;
            backward(model.encoder, enc_cache, dh, g_enc);

            adam_step(opt_dec, model.decoder, g_dec);
            adam_step(opt_enc, model.encoder, g_enc);

            loss_sum += (recon + beta * kl) * static_cast<double>(B);
            kl_sum += kl * static_cast<double>(B);
            n_samples += B;
        }
        const double epoch_loss = loss_sum / static_cast<double>(n_samples);
        check_finite(epoch_loss, epoch, "vae_fit");
        model.loss_history.push_back(epoch_loss);
        model.kl_history.push_back(kl_sum / static_cast<double>(n_samples));
    }
    model.trained = true;
    return model;
}

Table vae_generate(const VAEModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("vae_generate: n must be >= 1");
    if (!model.trained) throw DomainError("vae_generate: model not trained");
    Rng rng(derive_seed(seed, "vae-sample"));
    Matrix z(n, model.latent_dim);
    for (double& v : z.a) v = rng.normal();
    const Matrix y = forward(model.decoder, z, false, 0);
    return decode_matrix(model.scaler.invert(y), model.encodings, model.schema, true, true);
}

// ---------------------------------------------------------------------------
// Copula transform

double CopulaMarginal::to_normal(double x) const {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), x);
    const double below = static_cast<double>(lo - sorted.begin());
    const double upto = static_cast<double>(hi - sorted.begin());
    const double midrank = 0.5 * (below + upto + 1.0);  // 1-based midrank among ties
    const double n = static_cast<double>(sorted.size());
    const double u = (midrank - 0.5) / n;  // Hazen plotting position
    return normal_quantile(std::clamp(u, 0.5 / n, 1.0 - 0.5 / n));
}

double CopulaMarginal::from_normal(double z) const {
    const double u = normal_cdf(z);
    const double n = static_cast<double>(sorted.size());
    if (n == 1.0) return sorted[0];
    if (u <= 0.5 / n) return sorted.front();
    if (u >= (n - 0.5) / n) return sorted.back();
    // linear interpolation between order statistics at Hazen positions
    const double pos = u * n - 0.5;  // position index k + t with p_k = (k+0.5)/n
    const auto k = static_cast<std::size_t>(pos);
    const double t = pos - static_cast<double>(k);
    if (k + 1 >= sorted.size()) return sorted.back();
    return sorted[k] + t * (sorted[k + 1] - sorted[k]);
}

Matrix copula_transform(const EncodedMatrix& matrix, std::vector<CopulaMarginal>* out) {
    Matrix z = matrix.data;
    std::vector<CopulaMarginal> marginals;
    for (const auto& enc : matrix.encodings) {
        if (!std::holds_alternative<StandardizedEnc>(enc)) continue;
        const std::size_t col = std::get<StandardizedEnc>(enc).offset;
        CopulaMarginal m;
        m.sorted.resize(matrix.data.rows);
        for (std::size_t r = 0; r < matrix.data.rows; ++r) m.sorted[r] = matrix.data.at(r, col);
        std::sort(m.sorted.begin(), m.sorted.end());
        for (std::size_t r = 0; r < matrix.data.rows; ++r) {
            z.at(r, col) = m.to_normal(matrix.data.at(r, col));
        }
        marginals.push_back(std::move(m));
    }
    if (out) *out = std::move(marginals);
    return z;
}

Matrix copula_inverse(const Matrix& z, const std::vector<CopulaMarginal>& marginals,
                      const std::vector<ColumnEnc>& encodings) {
    Matrix x = z;
    std::size_t mi = 0;
    for (const auto& enc : encodings) {
        if (!std::holds_alternative<StandardizedEnc>(enc)) continue;
        const std::size_t col = std::get<StandardizedEnc>(enc).offset;
        const CopulaMarginal& m = marginals.at(mi++);
        for (std::size_t r = 0; r < z.rows; ++r) {
            x.at(r, col) = m.from_normal(z.at(r, col));
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// CopulaGAN

namespace {
constexpr std::size_t kGanHidden = 128;
constexpr double kProbEps = 1e-12;

std::vector<OutputSegment> generator_segments(const std::vector<ColumnEnc>& encodings) {
    std::vector<OutputSegment> segs;
    for (const auto& enc : encodings) {
        if (std::holds_alternative<OneHotEnc>(enc)) {
            const auto& o = std::get<OneHotEnc>(enc);
            segs.push_back({o.offset, o.levels, OutputSegment::Kind::Softmax});
        } else if (std::holds_alternative<BinaryEnc>(enc)) {
            segs.push_back({std::get<BinaryEnc>(enc).offset, 1, OutputSegment::Kind::Sigmoid});
        } else {
            segs.push_back({std::get<StandardizedEnc>(enc).offset, 1, OutputSegment::Kind::Linear});
        }
    }
    return segs;
}

}  // namespace

CopulaGANModel copulagan_fit(const EncodedMatrix& matrix, const GenTrainConfig& cfg) {
    if (matrix.data.rows == 0) throw DomainError("copulagan_fit: empty matrix");
    const std::size_t d = matrix.width();

    CopulaGANModel model;
    model.encodings = matrix.encodings;
    model.schema = matrix.schema;
    const Matrix real = copula_transform(matrix, &model.marginals);

    model.generator = make_dense_net(
        {model.noise_dim, kGanHidden, kGanHidden, d},
        {Activation::Relu, Activation::Relu, Activation::SoftmaxGrouped}, {0.0, 0.0, 0.0},
        derive_seed(cfg.seed, "gan-generator"));
    model.generator.segments = generator_segments(matrix.encodings);
    model.discriminator = make_dense_net(
        {d, kGanHidden, kGanHidden, 1},
        {Activation::Relu, Activation::Relu, Activation::Sigmoid}, {0.2, 0.2, 0.0},
        derive_seed(cfg.seed, "gan-discriminator"));

    AdamState opt_g = make_adam(model.generator, cfg.learning_rate);
    AdamState opt_d = make_adam(model.discriminator, cfg.learning_rate);

    Rng shuffle_rng(derive_seed(cfg.seed, "gan-shuffle"));
    Rng noise_rng(derive_seed(cfg.seed, "gan-noise"));
    std::uint64_t step_seed = derive_seed(cfg.seed, "gan-dropout");

    auto sample_noise = [&](std::size_t rows) {
        Matrix z(rows, model.noise_dim);
        for (double& v : z.a) v = noise_rng.normal();
        return z;
    };

    // BCE on clamped probabilities; chained through the sigmoid the combined
    // gradient is (p - y) as with logits.
    auto bce = [](const Matrix& p, double label, Matrix* dp) {
        double loss = 0.0;
        if (dp) *dp = Matrix(p.rows, p.cols);
        const double invB = 1.0 / static_cast<double>(p.rows);
        for (std::size_t i = 0; i < p.a.size(); ++i) {
            const double pc = std::clamp(p.a[i], kProbEps, 1.0 - kProbEps);
            loss += -(label * std::log(pc) + (1.0 - label) * std::log(1.0 - pc));
            if (dp) dp->a[i] = (pc - label) / (pc * (1.0 - pc)) * invB;
        }
        return loss * invB;
    };

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto batches = make_batches(real.rows, cfg.batch_size, shuffle_rng);
        double d_loss_sum = 0.0, g_loss_sum = 0.0;
        for (const auto& idx : batches) {
            const Matrix x_real = take_rows(real, idx);
            const std::size_t B = x_real.rows;

            // --- discriminator step (1 per batch)
            const Matrix x_fake = forward(model.generator, sample_noise(B), false, 0);
            ForwardCache dc_real, dc_fake;
            const Matrix p_real = forward(model.discriminator, x_real, true, ++step_seed, &dc_real);
            const Matrix p_fake = forward(model.discriminator, x_fake, true, ++step_seed, &dc_fake);
            Matrix dp_real, dp_fake;
            const double d_loss =
                0.5 * (bce(p_real, 1.0, &dp_real) + bce(p_fake, 0.0, &dp_fake));
            for (double& v : dp_real.a) v *= 0.5;
            for (double& v : dp_fake.a) v *= 0.5;
            Gradients gd_real, gd_fake;
            backward(model.discriminator, dc_real, dp_real, gd_real);
            backward(model.discriminator, dc_fake, dp_fake, gd_fake);
            accumulate(gd_real, gd_fake);
            adam_step(opt_d, model.discriminator, gd_real);

            // --- generator step (non-saturating: minimize -log D(G(z)))
            ForwardCache gc, dc_gen;
            const Matrix x_gen = forward(model.generator, sample_noise(B), false, 0, &gc);
            const Matrix p_gen = forward(model.discriminator, x_gen, true, ++step_seed, &dc_gen);
            Matrix dp_gen;
            const double g_loss = bce(p_gen, 1.0, &dp_gen);
            Gradients gd_tmp, gg;
            const Matrix dx_gen = backward(model.discriminator, dc_gen, dp_gen, gd_tmp);
            backward(model.generator, gc, dx_gen, gg);
            adam_step(opt_g, model.generator, gg);

            d_loss_sum += d_loss;
            g_loss_sum += g_loss;
        }
        const double d_epoch = d_loss_sum / static_cast<double>(batches.size());
        const double g_epoch = g_loss_sum / static_cast<double>(batches.size());
        check_finite(d_epoch + g_epoch, epoch, "copulagan_fit");
        model.d_loss_history.push_back(d_epoch);
        model.g_loss_history.push_back(g_epoch);
    }
    model.trained = true;
    return model;
}

Table copulagan_generate(const CopulaGANModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("copulagan_generate: n must be >= 1");
    if (!model.trained) throw DomainError("copulagan_generate: model not trained");
    Rng rng(derive_seed(seed, "gan-sample"));
    Matrix z(n, model.noise_dim);
    for (double& v : z.a) v = rng.normal();
    Matrix g = forward(model.generator, z, false, 0);

    // Continuous columns back through the copula; categorical groups sampled
    // from the softmax probabilities (not argmax) so category diversity is
    // preserved; binary columns sampled Bernoulli(p).
    Matrix encoded = copula_inverse(g, model.marginals, model.encodings);
    for (const auto& enc : model.encodings) {
        if (std::holds_alternative<OneHotEnc>(enc)) {
            const auto& o = std::get<OneHotEnc>(enc);
            for (std::size_t r = 0; r < n; ++r) {
                const double u = rng.uniform01();
                double acc = 0.0;
                std::size_t pick = o.levels - 1;
                for (std::size_t l = 0; l < o.levels; ++l) {
                    acc += g.at(r, o.offset + l);
                    if (u < acc) {
                        pick = l;
                        break;
                    }
                }
                for (std::size_t l = 0; l < o.levels; ++l) {
                    encoded.at(r, o.offset + l) = l == pick ? 1.0 : 0.0;
                }
            }
        } else if (std::holds_alternative<BinaryEnc>(enc)) {
            const auto& b = std::get<BinaryEnc>(enc);
            for (std::size_t r = 0; r < n; ++r) {
                encoded.at(r, b.offset) = rng.uniform01() < g.at(r, b.offset) ? 1.0 : 0.0;
            }
        }
    }
    return decode_matrix(encoded, model.encodings, model.schema, true, true);
}

}  // namespace synthbench
