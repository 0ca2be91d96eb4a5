#pragma once

#include <cstdint>
#include <vector>

#include "synthbench/encoding.hpp"
#include "synthbench/nn.hpp"
#include "synthbench/schema.hpp"

namespace synthbench {

struct GenTrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    std::uint64_t seed = 42;
    double learning_rate = 1e-3;

    static GenTrainConfig dae_defaults() { return {100, 32, 42, 1e-3}; }
    static GenTrainConfig vae_defaults() { return {300, 500, 42, 1e-3}; }
    static GenTrainConfig copulagan_defaults() { return {300, 500, 42, 2e-4}; }
};

// Per-column affine remap of the standardized encoding onto [0,1] so the
// sigmoid-output autoencoders can reconstruct it; recorded for inversion.
struct RangeScaler {
    std::vector<double> lo;
    std::vector<double> scale;  // hi - lo; 0 marks a constant column (maps to 0.5)

    static RangeScaler fit(const Matrix& m);
    Matrix apply(const Matrix& m) const;
    Matrix invert(const Matrix& m) const;
};

// ---------------------------------------------------------------------------
// Denoising autoencoder: input -> 64(relu) -> dropout(0.2) -> 32(relu),
// mirrored decoder ending in sigmoid. Generation re-encodes training rows,
// perturbs latents with N(0, noise_sigma^2) and decodes.
struct DAEModel {
    DenseNet encoder;
    DenseNet decoder;
    std::size_t latent_dim = 32;
    double noise_sigma = 0.1;
    bool trained = false;

    RangeScaler scaler;
    Matrix train_scaled;  // retained for the encode step of generation
    std::vector<ColumnEnc> encodings;
    Schema schema;
    std::vector<double> loss_history;  // per-epoch reconstruction MSE
};

DAEModel dae_fit(const EncodedMatrix& matrix, const GenTrainConfig& cfg);
Table dae_generate(const DAEModel& model, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// VAE: encoder emits (mu, logvar) of latent_dim; reparameterized sampling;
// loss = sum-of-squares/(2*0.1) + beta * KL(q(z|x) || N(0,I)).
struct VAEModel {
    DenseNet encoder;  // d -> 128 -> 128 -> 2*latent_dim (linear head)
    DenseNet decoder;  // latent_dim -> 128 -> 128 -> d (sigmoid)
    std::size_t latent_dim = 32;
    double kl_weight = 1.0;
    bool trained = false;

    RangeScaler scaler;
    std::vector<ColumnEnc> encodings;
    Schema schema;
    std::vector<double> loss_history;
    std::vector<double> kl_history;  // per-epoch mean KL term
};

VAEModel vae_fit(const EncodedMatrix& matrix, const GenTrainConfig& cfg);
Table vae_generate(const VAEModel& model, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Gaussian copula marginal: sorted standardized sample, Hazen plotting
// positions (r - 0.5)/n for both directions.
struct CopulaMarginal {
    std::vector<double> sorted;

    double to_normal(double x) const;    // Phi^-1(empirical CDF)
    double from_normal(double z) const;  // empirical quantile of Phi(z)
};

struct CopulaGANModel {
    std::vector<CopulaMarginal> marginals;  // one per continuous column, in column order
    DenseNet generator;       // noise_dim -> 128 -> 128 -> data width (grouped head)
    DenseNet discriminator;   // data width -> 128 -> 128 -> 1 (sigmoid)
    std::size_t noise_dim = 64;
    bool trained = false;

    std::vector<ColumnEnc> encodings;
    Schema schema;
    std::vector<double> d_loss_history;
    std::vector<double> g_loss_history;
};

// Continuous columns of the encoded matrix mapped to normal scores; one-hot
// and binary columns pass through unchanged.
Matrix copula_transform(const EncodedMatrix& matrix, std::vector<CopulaMarginal>* out = nullptr);
// Inverse map using the fitted marginals (continuous columns only).
Matrix copula_inverse(const Matrix& z, const std::vector<CopulaMarginal>& marginals,
                      const std::vector<ColumnEnc>& encodings);

CopulaGANModel copulagan_fit(const EncodedMatrix& matrix, const GenTrainConfig& cfg);
Table copulagan_generate(const CopulaGANModel& model, std::size_t n, std::uint64_t seed);

// Standard-normal CDF and its inverse (Wichura-precision), shared with metrics.
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace synthbench
