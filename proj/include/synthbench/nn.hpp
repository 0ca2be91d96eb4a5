#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "synthbench/matrix.hpp"
#include "synthbench/rng.hpp"

namespace synthbench {

enum class Activation { Relu, Sigmoid, Linear, SoftmaxGrouped };

// Per-index output treatment for a SoftmaxGrouped head: softmax within each
// one-hot group, sigmoid on binary columns, identity elsewhere.
struct OutputSegment {
    enum class Kind { Softmax, Sigmoid, Linear };
    std::size_t offset = 0;
    std::size_t len = 0;
    Kind kind = Kind::Linear;
};

struct Layer {
    Matrix w;               // (in, out)
    std::vector<double> b;  // (out)
    Activation act = Activation::Linear;
    double dropout = 0.0;  // applied to this layer's output while training
};

struct DenseNet {
    std::vector<Layer> layers;
    std::vector<OutputSegment> segments;  // required iff last activation is SoftmaxGrouped

    std::size_t input_dim() const { return layers.front().w.rows; }
    std::size_t output_dim() const { return layers.back().w.cols; }
    std::size_t parameter_count() const;
};

// Glorot-uniform weights, zero biases.
DenseNet make_dense_net(const std::vector<std::size_t>& dims,
                        const std::vector<Activation>& acts,
                        const std::vector<double>& dropouts, std::uint64_t seed);

struct ForwardCache {
    Matrix input;
    std::vector<Matrix> pre;    // pre-activation per layer
    std::vector<Matrix> mask;   // inverted-dropout masks (empty matrices when unused)
    Matrix output;
    std::size_t net_layers = 0;  // for stale-cache detection
};

// Dropout is applied only when training=true, with inverted scaling
// 1/(1-rate) so inference needs no rescaling; masks are drawn from `seed`.
Matrix forward(const DenseNet& net, const Matrix& batch, bool training,
               std::uint64_t seed, ForwardCache* cache = nullptr);

struct Gradients {
    std::vector<Matrix> dw;
    std::vector<std::vector<double>> db;
};

// Exact reverse-mode gradients. output_grad is dLoss/d(output).
// Returns dLoss/d(input) so nets can be chained. Throws DomainError when the
// cache does not match the net.
Matrix backward(const DenseNet& net, const ForwardCache& cache,
                const Matrix& output_grad, Gradients& grads);

void accumulate(Gradients& into, const Gradients& from);
Gradients zero_gradients(const DenseNet& net);

struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<Matrix> mw, vw;
    std::vector<std::vector<double>> mb, vb;
};

AdamState make_adam(const DenseNet& net, double lr);
// Standard bias-corrected Adam update, in place.
void adam_step(AdamState& state, DenseNet& net, const Gradients& grads);

// Mean over all elements; fills grad (dLoss/dpred) when non-null.
double mse_loss(const Matrix& pred, const Matrix& target, Matrix* grad);

// Compares analytic gradients against central finite differences (h=1e-5) on
// up to max_params randomly selected parameters. loss_eval must be a
// deterministic function of the net parameters. Returns the max relative
// error |a - n| / max(|a|, |n|, 1e-6).
double gradient_check(DenseNet& net, const std::function<double()>& loss_eval,
                      const Gradients& analytic, std::uint64_t seed,
                      std::size_t max_params = 1000);

// Seeded-shuffle batch index lists; the last short batch is kept.
std::vector<std::vector<std::size_t>> make_batches(std::size_t n, std::size_t batch_size,
                                                   Rng& rng);

}  // namespace synthbench
