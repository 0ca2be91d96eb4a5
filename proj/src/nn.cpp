#include "synthbench/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synthbench/errors.hpp"

namespace synthbench {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void apply_activation(const DenseNet& net, std::size_t layer_idx, const Matrix& pre, Matrix& out) {
    const auto act = net.layers[layer_idx].act;
    out = pre;
    switch (act) {
        case Activation::Linear:
            break;
        case Activation::Relu:
            for (double& v : out.a) v = v > 0.0 ? v : 0.0;
            break;
        case Activation::Sigmoid:
            for (double& v : out.a) v = sigmoid(v);
            break;
        case Activation::SoftmaxGrouped: {
            for (const auto& seg : net.segments) {
                for (std::size_t r = 0; r < pre.rows; ++r) {
                    double* row = out.row(r);
                    switch (seg.kind) {
                        case OutputSegment::Kind::Linear:
                            break;
                        case OutputSegment::Kind::Sigmoid:
                            for (std::size_t j = 0; j < seg.len; ++j) {
                                row[seg.offset + j] = sigmoid(row[seg.offset + j]);
                            }
                            break;
                        case OutputSegment::Kind::Softmax: {
                            double mx = row[seg.offset];
                            for (std::size_t j = 1; j < seg.len; ++j) {
                                mx = std::max(mx, row[seg.offset + j]);
                            }
                            double sum = 0.0;
                            for (std::size_t j = 0; j < seg.len; ++j) {
                                row[seg.offset + j] = std::exp(row[seg.offset + j] - mx);
                                sum += row[seg.offset + j];
                            }
                            for (std::size_t j = 0; j < seg.len; ++j) {
                                row[seg.offset + j] /= sum;
                            }
                            break;
                        }
                    }
                }
            }
            break;
        }
    }
}

// dL/dpre from dL/dpost, using the recomputed activation values.
void activation_backward(const DenseNet& net, std::size_t layer_idx, const Matrix& pre,
                         const Matrix& dpost, Matrix& dpre) {
    const auto act = net.layers[layer_idx].act;
    switch (act) {
        case Activation::Linear:
            dpre = dpost;
            break;
        case Activation::Relu:
            dpre = dpost;
            for (std::size_t i = 0; i < pre.a.size(); ++i) {
                if (pre.a[i] <= 0.0) dpre.a[i] = 0.0;
            }
            break;
        case Activation::Sigmoid:
            dpre = dpost;
            for (std::size_t i = 0; i < pre.a.size(); ++i) {
                const double s = sigmoid(pre.a[i]);
                dpre.a[i] *= s * (1.0 - s);
            }
            break;
        case Activation::SoftmaxGrouped: {
            Matrix post;
            apply_activation(net, layer_idx, pre, post);
            dpre = dpost;
            for (const auto& seg : net.segments) {
                for (std::size_t r = 0; r < pre.rows; ++r) {
                    const double* y = post.row(r) + seg.offset;
                    const double* g = dpost.row(r) + seg.offset;
                    double* d = dpre.row(r) + seg.offset;
                    switch (seg.kind) {
                        case OutputSegment::Kind::Linear:
                            break;
                        case OutputSegment::Kind::Sigmoid:
                            for (std::size_t j = 0; j < seg.len; ++j) {
                                d[j] = g[j] * y[j] * (1.0 - y[j]);
                            }
                            break;
                        case OutputSegment::Kind::Softmax: {
                            double dot = 0.0;
                            for (std::size_t j = 0; j < seg.len; ++j) dot += g[j] * y[j];
                            for (std::size_t j = 0; j < seg.len; ++j) {
                                d[j] = y[j] * (g[j] - dot);
                            }
                            break;
                        }
                    }
                }
            }
            break;
        }
    }
}

}  // namespace

std::size_t DenseNet::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.w.a.size() + l.b.size();
    return n;
}

DenseNet make_dense_net(const std::vector<std::size_t>& dims, const std::vector<Activation>& acts,
                        const std::vector<double>& dropouts, std::uint64_t seed) {
    if (dims.size() < 2 || acts.size() != dims.size() - 1 || dropouts.size() != acts.size()) {
        throw DomainError("make_dense_net: inconsistent layer specification");
    }
    DenseNet net;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Layer layer;
        layer.w = Matrix(dims[l], dims[l + 1]);
        const double limit = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
        for (double& v : layer.w.a) v = rng.uniform(-limit, limit);
        layer.b.assign(dims[l + 1], 0.0);
        layer.act = acts[l];
        layer.dropout = dropouts[l];
        net.layers.push_back(std::move(layer));
    }
    return net;
}

Matrix forward(const DenseNet& net, const Matrix& batch, bool training, std::uint64_t seed,
               ForwardCache* cache) {
    if (batch.cols != net.input_dim()) {
        throw DomainError("forward: batch width does not match input dimension");
    }
    Rng rng(seed);
    Matrix x = batch;
    if (cache) {
        *cache = ForwardCache{};
        cache->input = batch;
        cache->net_layers = net.layers.size();
    }
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const Layer& layer = net.layers[l];
        Matrix pre = matmul(x, layer.w);
        for (std::size_t r = 0; r < pre.rows; ++r) {
            double* row = pre.row(r);
            for (std::size_t c = 0; c < pre.cols; ++c) row[c] += layer.b[c];
        }
        Matrix post;
        apply_activation(net, l, pre, post);
        Matrix mask;
        if (training && layer.dropout > 0.0) {
            mask = Matrix(post.rows, post.cols);
            const double keep_scale = 1.0 / (1.0 - layer.dropout);
            for (std::size_t i = 0; i < mask.a.size(); ++i) {
                mask.a[i] = rng.uniform01() < layer.dropout ? 0.0 : keep_scale;
                post.a[i] *= mask.a[i];
            }
        }
        if (cache) {
            cache->pre.push_back(std::move(pre));
            cache->mask.push_back(std::move(mask));
        }
        x = std::move(post);
    }
    if (cache) cache->output = x;
    return x;
}

Gradients zero_gradients(const DenseNet& net) {
    Gradients g;
    for (const auto& l : net.layers) {
        g.dw.emplace_back(l.w.rows, l.w.cols);
        g.db.emplace_back(l.b.size(), 0.0);
    }
    return g;
}

void accumulate(Gradients& into, const Gradients& from) {
    for (std::size_t l = 0; l < into.dw.size(); ++l) {
        for (std::size_t i = 0; i < into.dw[l].a.size(); ++i) into.dw[l].a[i] += from.dw[l].a[i];
        for (std::size_t i = 0; i < into.db[l].size(); ++i) into.db[l][i] += from.db[l][i];
    }
}

Matrix backward(const DenseNet& net, const ForwardCache& cache, const Matrix& output_grad,
                Gradients& grads) {
    if (cache.net_layers != net.layers.size() || cache.pre.size() != net.layers.size() ||
        cache.output.rows != output_grad.rows || cache.output.cols != output_grad.cols) {
        throw DomainError("backward: cache does not match net/output gradient");
    }
    grads = zero_gradients(net);
    Matrix dpost = output_grad;
    for (std::size_t li = net.layers.size(); li-- > 0;) {
        const Layer& layer = net.layers[li];
        if (cache.mask[li].a.size() == dpost.a.size() && !cache.mask[li].a.empty()) {
            for (std::size_t i = 0; i < dpost.a.size(); ++i) dpost.a[i] *= cache.mask[li].a[i];
        }
        Matrix dpre;
        activation_backward(net, li, cache.pre[li], dpost, dpre);
        const Matrix& layer_input = li == 0 ? cache.input : [&]() -> Matrix {
            Matrix post;
            apply_activation(net, li - 1, cache.pre[li - 1], post);
            if (!cache.mask[li - 1].a.empty()) {
                for (std::size_t i = 0; i < post.a.size(); ++i) post.a[i] *= cache.mask[li - 1].a[i];
            }
            return post;
        }();
        grads.dw[li] = matmul_tn(layer_input, dpre);
        for (std::size_t r = 0; r < dpre.rows; ++r) {
            const double* row = dpre.row(r);
            for (std::size_t c = 0; c < dpre.cols; ++c) grads.db[li][c] += row[c];
        }
        dpost = matmul_nt(dpre, layer.w);
    }
    return dpost;  // dLoss/dInput
}

AdamState make_adam(const DenseNet& net, double lr) {
    AdamState s;
    s.lr = lr;
    for (const auto& l : net.layers) {
        s.mw.emplace_back(l.w.rows, l.w.cols);
        s.vw.emplace_back(l.w.rows, l.w.cols);
        s.mb.emplace_back(l.b.size(), 0.0);
        s.vb.emplace_back(l.b.size(), 0.0);
    }
    return s;
}

void adam_step(AdamState& state, DenseNet& net, const Gradients& grads) {
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        auto update = [&](double& p, double g, double& m, double& v) {
            m = state.beta1 * m + (1.0 - state.beta1) * g;
            v = state.beta2 * v + (1.0 - state.beta2) * g * g;
            const double mhat = m / bc1;
            const double vhat = v / bc2;
            p -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        };
        auto& layer = net.layers[l];
        for (std::size_t i = 0; i < layer.w.a.size(); ++i) {
            update(layer.w.a[i], grads.dw[l].a[i], state.mw[l].a[i], state.vw[l].a[i]);
        }
        for (std::size_t i = 0; i < layer.b.size(); ++i) {
            update(layer.b[i], grads.db[l][i], state.mb[l][i], state.vb[l][i]);
        }
    }
}

double mse_loss(const Matrix& pred, const Matrix& target, Matrix* grad) {
    if (pred.rows != target.rows || pred.cols != target.cols) {
        throw DomainError("mse_loss: shape mismatch");
    }
    const double inv = 1.0 / static_cast<double>(pred.a.size());
    double loss = 0.0;
    if (grad) *grad = Matrix(pred.rows, pred.cols);
    for (std::size_t i = 0; i < pred.a.size(); ++i) {
        const double d = pred.a[i] - target.a[i];
        loss += d * d;
        if (grad) grad->a[i] = 2.0 * d * inv;
    }
    return loss * inv;
}

double gradient_check(DenseNet& net, const std::function<double()>& loss_eval,
                      const Gradients& analytic, std::uint64_t seed, std::size_t max_params) {
    struct ParamRef {
        std::size_t layer;
        bool bias;
        std::size_t idx;
    };
    std::vector<ParamRef> all;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        for (std::size_t i = 0; i < net.layers[l].w.a.size(); ++i) all.push_back({l, false, i});
        for (std::size_t i = 0; i < net.layers[l].b.size(); ++i) all.push_back({l, true, i});
    }
    Rng rng(seed);
    rng.shuffle(all);
    if (all.size() > max_params) all.resize(max_params);

    const double h = 1e-5;
    double max_rel = 0.0;
    for (const auto& p : all) {
        double& v = p.bias ? net.layers[p.layer].b[p.idx] : net.layers[p.layer].w.a[p.idx];
        const double saved = v;
        v = saved + h;
        const double lp = loss_eval();
        v = saved - h;
        const double lm = loss_eval();
        v = saved;
        const double numeric = (lp - lm) / (2.0 * h);
        const double a = p.bias ? analytic.db[p.layer][p.idx] : analytic.dw[p.layer].a[p.idx];
        const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t n, std::size_t batch_size,
                                                   Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start < n; start += batch_size) {
        const std::size_t end = std::min(n, start + batch_size);
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return batches;
}

}  // namespace synthbench
