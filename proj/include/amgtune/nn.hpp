#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "amgtune/pooling.hpp"
#include "amgtune/rng.hpp"

namespace amgtune {

struct ConvBlockSpec {
    int convs = 2;
    int filters = 8;
    int kernel = 3;
};

/// Network shape: convolution blocks (each ending in a 2x2 max-pool) over the
/// m x m x 4 image, then dense layers over the flattened features
/// concatenated with [theta, b1..b4, log n, p], then a scalar head clipped
/// to [0, 1]. Rectifier activations throughout.
struct ArchitectureSpec {
    int m = 32;
    int in_channels = 4;
    std::vector<ConvBlockSpec> blocks = {{2, 8, 3}, {2, 16, 3}};
    std::vector<int> dense_widths = {256, 64};
    static constexpr int aux_inputs = 7;  // theta, one-hot(4), log n, p

    void validate() const {
        if (m < 1) throw std::invalid_argument("architecture: m must be positive");
        int side = m;
        for (const auto& b : blocks) {
            if (b.kernel % 2 == 0) throw std::invalid_argument("architecture: kernels must be odd");
            if (b.convs < 1 || b.filters < 1)
                throw std::invalid_argument("architecture: block needs convs and filters");
            if (side % 2 != 0)
                throw std::invalid_argument("architecture: image side not divisible by the pools");
            side /= 2;
        }
        for (int w : dense_widths)
            if (w < 1) throw std::invalid_argument("architecture: dense widths must be positive");
    }

    int conv_out_side() const {
        int side = m;
        for (std::size_t i = 0; i < blocks.size(); ++i) side /= 2;
        return side;
    }
    int conv_out_channels() const { return blocks.empty() ? in_channels : blocks.back().filters; }
    int flat_size() const { return conv_out_side() * conv_out_side() * conv_out_channels(); }
    int head_input() const { return dense_widths.empty() ? flat_size() + aux_inputs : dense_widths.back(); }
};

/// One named parameter array.
struct ParamArray {
    std::string name;
    std::vector<int> shape;
    std::vector<double> value;

    std::size_t size() const { return value.size(); }
};

/// The cost surrogate F(V_hat, log n, p, theta, b) -> c in [0, 1].
/// Parameter order is fixed: per block b and conv l, convN.L.weight
/// [out][in][ky][kx] and convN.L.bias [out]; then denseN.weight [out][in] and
/// denseN.bias [out]; then head.weight [1][in], head.bias [1].
struct SurrogateModel {
    ArchitectureSpec spec;
    std::vector<ParamArray> params;
    int trained_epochs = 0;
    double best_val_mse = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;

    ParamArray& find(const std::string& name) {
        for (ParamArray& p : params)
            if (p.name == name) return p;
        throw std::out_of_range("no parameter named " + name);
    }
};

namespace nndetail {

inline std::size_t shape_size(const std::vector<int>& shape) {
    std::size_t s = 1;
    for (int d : shape) s *= static_cast<std::size_t>(d);
    return s;
}

} // namespace nndetail

inline SurrogateModel make_model(ArchitectureSpec spec, std::uint64_t seed) {
    spec.validate();
    SurrogateModel model;
    model.spec = spec;
    model.seed = seed;
    Rng rng(derive_seed(seed, "model-init"));
    auto add = [&](const std::string& name, std::vector<int> shape, double limit, double bias_fill) {
        ParamArray p;
        p.name = name;
        p.shape = std::move(shape);
        p.value.resize(nndetail::shape_size(p.shape));
        if (limit > 0.0)
            for (double& v : p.value) v = rng.uniform(-limit, limit);
        else
            for (double& v : p.value) v = bias_fill;
        model.params.push_back(std::move(p));
    };
    int in_c = spec.in_channels;
    for (std::size_t bi = 0; bi < spec.blocks.size(); ++bi) {
        const auto& blk = spec.blocks[bi];
        for (int l = 0; l < blk.convs; ++l) {
            int k = blk.kernel;
            double limit = std::sqrt(6.0 / (in_c * k * k + blk.filters * k * k));
            std::string base = "conv" + std::to_string(bi) + "." + std::to_string(l);
            add(base + ".weight", {blk.filters, in_c, k, k}, limit, 0.0);
            add(base + ".bias", {blk.filters}, 0.0, 0.0);
            in_c = blk.filters;
        }
    }
    int in_w = spec.flat_size() + ArchitectureSpec::aux_inputs;
    for (std::size_t di = 0; di < spec.dense_widths.size(); ++di) {
        int out_w = spec.dense_widths[di];
        double limit = std::sqrt(6.0 / (in_w + out_w));
        std::string base = "dense" + std::to_string(di);
        add(base + ".weight", {out_w, in_w}, limit, 0.0);
        add(base + ".bias", {out_w}, 0.0, 0.0);
        in_w = out_w;
    }
    // the head starts at the cost midpoint: zero weights and bias 0.5, so no
    // sample is born outside the clip where the gradient vanishes
    add("head.weight", {1, in_w}, 0.0, 0.0);
    add("head.bias", {1}, 0.0, 0.5);
    return model;
}

/// Activations cached by the forward pass for backpropagation.
struct ForwardContext {
    std::vector<std::vector<double>> conv_in;    // input of each conv (pre-im2col, plain maps)
    std::vector<std::vector<double>> conv_preact; // pre-ReLU outputs
    std::vector<std::vector<int>> pool_argmax;   // per block, flattened argmax indices
    std::vector<std::vector<double>> pool_out;   // per block outputs
    std::vector<std::vector<double>> dense_in;   // input of each dense layer
    std::vector<std::vector<double>> dense_preact;
    std::vector<double> head_in;
    double head_preact = 0.0;
    double output = 0.0;
};

namespace nndetail {

inline void conv2d_same(const std::vector<double>& in, int in_c, int side,
                        const std::vector<double>& w, const std::vector<double>& b, int out_c,
                        int k, std::vector<double>& out) {
    const int half = k / 2;
    out.assign(static_cast<std::size_t>(out_c) * side * side, 0.0);
    for (int o = 0; o < out_c; ++o) {
        double* op = out.data() + static_cast<std::size_t>(o) * side * side;
        for (int idx = 0; idx < side * side; ++idx) op[idx] = b[o];
        for (int i = 0; i < in_c; ++i) {
            const double* ip = in.data() + static_cast<std::size_t>(i) * side * side;
            const double* wp = w.data() + ((static_cast<std::size_t>(o) * in_c + i) * k) * k;
            for (int y = 0; y < side; ++y) {
                int ky0 = std::max(0, half - y), ky1 = std::min(k, side + half - y);
                for (int x = 0; x < side; ++x) {
                    int kx0 = std::max(0, half - x), kx1 = std::min(k, side + half - x);
                    double s = 0.0;
                    for (int ky = ky0; ky < ky1; ++ky) {
                        const double* row = ip + (y + ky - half) * side;
                        const double* wrow = wp + ky * k;
                        for (int kx = kx0; kx < kx1; ++kx) s += wrow[kx] * row[x + kx - half];
                    }
                    op[y * side + x] += s;
                }
            }
        }
    }
}

inline void maxpool2(const std::vector<double>& in, int c, int side, std::vector<double>& out,
                     std::vector<int>& argmax) {
    const int oside = side / 2;
    out.assign(static_cast<std::size_t>(c) * oside * oside, 0.0);
    argmax.assign(out.size(), 0);
    for (int ch = 0; ch < c; ++ch) {
        const double* ip = in.data() + static_cast<std::size_t>(ch) * side * side;
        for (int y = 0; y < oside; ++y)
            for (int x = 0; x < oside; ++x) {
                int base = (2 * y) * side + 2 * x;
                int cand[4] = {base, base + 1, base + side, base + side + 1};
                int best = cand[0];
                for (int t = 1; t < 4; ++t)
                    if (ip[cand[t]] > ip[best]) best = cand[t];
                std::size_t oidx = (static_cast<std::size_t>(ch) * oside + y) * oside + x;
                out[oidx] = ip[best];
                argmax[oidx] = ch * side * side + best;
            }
    }
}

} // namespace nndetail

/// Forward evaluation. The pooled tensor must be normalized and match the
/// architecture's m; theta lies in [0, 1] and b is a one-hot of size 4.
inline double forward(const SurrogateModel& model, const PooledTensor& v, double log_n, double p,
                      double theta, const std::array<double, 4>& b,
                      ForwardContext* ctx = nullptr) {
    const ArchitectureSpec& spec = model.spec;
    if (v.m != spec.m) throw std::invalid_argument("forward: pooled tensor size mismatch");
    if (!v.normalized) throw std::invalid_argument("forward: pooled tensor is not normalized");
    {
        int hot = 0;
        for (double x : b) hot += (x == 1.0);
        if (hot != 1) throw std::invalid_argument("forward: b must be a one-hot vector");
    }

    ForwardContext local;
    ForwardContext& c = ctx ? *ctx : local;
    c = ForwardContext{};

    std::vector<double> cur = v.data;
    int side = spec.m;
    int in_c = spec.in_channels;
    std::size_t pi = 0;
    for (std::size_t bi = 0; bi < spec.blocks.size(); ++bi) {
        const auto& blk = spec.blocks[bi];
        for (int l = 0; l < blk.convs; ++l) {
            const ParamArray& w = model.params[pi++];
            const ParamArray& bias = model.params[pi++];
            c.conv_in.push_back(cur);
            std::vector<double> out;
            nndetail::conv2d_same(cur, in_c, side, w.value, bias.value, blk.filters, blk.kernel,
                                  out);
            c.conv_preact.push_back(out);
            for (double& x : out) x = std::max(0.0, x);  // ReLU
            cur = std::move(out);
            in_c = blk.filters;
        }
        std::vector<double> pooled;
        std::vector<int> argmax;
        nndetail::maxpool2(cur, in_c, side, pooled, argmax);
        side /= 2;
        c.pool_argmax.push_back(std::move(argmax));
        c.pool_out.push_back(pooled);
        cur = std::move(pooled);
    }

    // concatenation order: flattened image, theta, b1..b4, log n, p
    cur.reserve(cur.size() + ArchitectureSpec::aux_inputs);
    cur.push_back(theta);
    for (double x : b) cur.push_back(x);
    cur.push_back(log_n);
    cur.push_back(p);

    for (std::size_t di = 0; di < spec.dense_widths.size(); ++di) {
        const ParamArray& w = model.params[pi++];
        const ParamArray& bias = model.params[pi++];
        int out_w = spec.dense_widths[di];
        int in_w = static_cast<int>(cur.size());
        c.dense_in.push_back(cur);
        std::vector<double> out(static_cast<std::size_t>(out_w));
        for (int o = 0; o < out_w; ++o) {
            double s = bias.value[o];
            const double* wrow = w.value.data() + static_cast<std::size_t>(o) * in_w;
            for (int i = 0; i < in_w; ++i) s += wrow[i] * cur[i];
            out[o] = s;
        }
        c.dense_preact.push_back(out);
        for (double& x : out) x = std::max(0.0, x);
        cur = std::move(out);
    }

    const ParamArray& hw = model.params[pi++];
    const ParamArray& hb = model.params[pi++];
    c.head_in = cur;
    double z = hb.value[0];
    for (std::size_t i = 0; i < cur.size(); ++i) z += hw.value[i] * cur[i];
    c.head_preact = z;
    c.output = std::clamp(z, 0.0, 1.0);
    return c.output;
}

/// Flattened convolutional features of one image; they do not depend on the
/// auxiliary inputs, so grid searches compute them once per matrix.
inline std::vector<double> forward_conv_features(const SurrogateModel& model,
                                                 const PooledTensor& v) {
    const ArchitectureSpec& spec = model.spec;
    if (v.m != spec.m) throw std::invalid_argument("forward: pooled tensor size mismatch");
    if (!v.normalized) throw std::invalid_argument("forward: pooled tensor is not normalized");
    std::vector<double> cur = v.data;
    int side = spec.m;
    int in_c = spec.in_channels;
    std::size_t pi = 0;
    std::vector<double> out;
    std::vector<int> argmax;
    for (const auto& blk : spec.blocks) {
        for (int l = 0; l < blk.convs; ++l) {
            const ParamArray& w = model.params[pi++];
            const ParamArray& bias = model.params[pi++];
            nndetail::conv2d_same(cur, in_c, side, w.value, bias.value, blk.filters, blk.kernel,
                                  out);
            for (double& x : out) x = std::max(0.0, x);
            cur = out;
            in_c = blk.filters;
        }
        nndetail::maxpool2(cur, in_c, side, out, argmax);
        side /= 2;
        cur = out;
    }
    return cur;
}

/// Dense tail on precomputed conv features; bit-identical to forward().
inline double forward_from_features(const SurrogateModel& model, std::vector<double> features,
                                    double log_n, double p, double theta,
                                    const std::array<double, 4>& b) {
    const ArchitectureSpec& spec = model.spec;
    std::size_t pi = 0;
    for (const auto& blk : spec.blocks) pi += 2 * static_cast<std::size_t>(blk.convs);
    std::vector<double>& cur = features;
    cur.reserve(cur.size() + ArchitectureSpec::aux_inputs);
    cur.push_back(theta);
    for (double x : b) cur.push_back(x);
    cur.push_back(log_n);
    cur.push_back(p);
    std::vector<double> next;
    for (int out_w : spec.dense_widths) {
        const ParamArray& w = model.params[pi++];
        const ParamArray& bias = model.params[pi++];
        const int in_w = static_cast<int>(cur.size());
        next.assign(static_cast<std::size_t>(out_w), 0.0);
        for (int o = 0; o < out_w; ++o) {
            double s = bias.value[o];
            const double* wrow = w.value.data() + static_cast<std::size_t>(o) * in_w;
            for (int i = 0; i < in_w; ++i) s += wrow[i] * cur[i];
            next[o] = std::max(0.0, s);
        }
        cur = next;
    }
    const ParamArray& hw = model.params[pi++];
    const ParamArray& hb = model.params[pi];
    double z = hb.value[0];
    for (std::size_t i = 0; i < cur.size(); ++i) z += hw.value[i] * cur[i];
    return std::clamp(z, 0.0, 1.0);
}

/// Gradient arrays matching the model's parameter list.
struct Gradients {
    std::vector<std::vector<double>> g;

    explicit Gradients(const SurrogateModel& model) {
        g.resize(model.params.size());
        for (std::size_t i = 0; i < g.size(); ++i) g[i].assign(model.params[i].size(), 0.0);
    }
    void clear() {
        for (auto& a : g) std::fill(a.begin(), a.end(), 0.0);
    }
};

/// Accumulates d(loss)/d(params) for one sample given d(loss)/d(output).
/// The clip passes the gradient through only on the open interval (0, 1).
inline void backward(const SurrogateModel& model, const ForwardContext& c, double dout,
                     Gradients& grads) {
    const ArchitectureSpec& spec = model.spec;
    if (!(c.head_preact > 0.0 && c.head_preact < 1.0)) dout = 0.0;
    if (dout == 0.0) return;

    std::size_t pi = model.params.size();
    // head
    {
        pi -= 2;
        const ParamArray& hw = model.params[pi];
        std::vector<double>& gw = grads.g[pi];
        std::vector<double>& gb = grads.g[pi + 1];
        gb[0] += dout;
        for (std::size_t i = 0; i < c.head_in.size(); ++i) gw[i] += dout * c.head_in[i];
        std::vector<double> dcur(c.head_in.size());
        for (std::size_t i = 0; i < c.head_in.size(); ++i) dcur[i] = dout * hw.value[i];

        // dense layers in reverse
        for (std::size_t di = spec.dense_widths.size(); di-- > 0;) {
            // ReLU
            for (std::size_t o = 0; o < dcur.size(); ++o)
                if (c.dense_preact[di][o] <= 0.0) dcur[o] = 0.0;
            pi -= 2;
            const ParamArray& w = model.params[pi];
            std::vector<double>& dgw = grads.g[pi];
            std::vector<double>& dgb = grads.g[pi + 1];
            const std::vector<double>& in = c.dense_in[di];
            std::vector<double> din(in.size(), 0.0);
            const int in_w = static_cast<int>(in.size());
            for (std::size_t o = 0; o < dcur.size(); ++o) {
                double d = dcur[o];
                if (d == 0.0) continue;
                dgb[o] += d;
                double* gwrow = dgw.data() + o * in_w;
                const double* wrow = w.value.data() + o * in_w;
                for (int i = 0; i < in_w; ++i) {
                    gwrow[i] += d * in[i];
                    din[i] += d * wrow[i];
                }
            }
            dcur = std::move(din);
        }

        // drop the auxiliary inputs, keep the image part
        dcur.resize(dcur.size() - ArchitectureSpec::aux_inputs);

        // conv blocks in reverse
        int conv_count = 0;
        for (const auto& blk : spec.blocks) conv_count += blk.convs;
        int side = spec.conv_out_side();
        for (std::size_t bi = spec.blocks.size(); bi-- > 0;) {
            const auto& blk = spec.blocks[bi];
            // un-pool: route gradients to the argmax positions
            const std::vector<int>& argmax = c.pool_argmax[bi];
            std::vector<double> dunpool(
                static_cast<std::size_t>(blk.filters) * (2 * side) * (2 * side), 0.0);
            for (std::size_t i = 0; i < dcur.size(); ++i) dunpool[argmax[i]] += dcur[i];
            dcur = std::move(dunpool);
            side *= 2;

            for (int l = blk.convs; l-- > 0;) {
                --conv_count;
                // ReLU on the conv output
                const std::vector<double>& pre = c.conv_preact[conv_count];
                for (std::size_t i = 0; i < dcur.size(); ++i)
                    if (pre[i] <= 0.0) dcur[i] = 0.0;
                pi -= 2;
                const ParamArray& w = model.params[pi];
                std::vector<double>& gw = grads.g[pi];
                std::vector<double>& gb = grads.g[pi + 1];
                const std::vector<double>& in = c.conv_in[conv_count];
                const int in_c = static_cast<int>(in.size()) / (side * side);
                const int k = blk.kernel, half = k / 2;
                std::vector<double> din(in.size(), 0.0);
                for (int o = 0; o < blk.filters; ++o) {
                    const double* dop = dcur.data() + static_cast<std::size_t>(o) * side * side;
                    for (int idx = 0; idx < side * side; ++idx) gb[o] += dop[idx];
                    for (int i = 0; i < in_c; ++i) {
                        const double* ip = in.data() + static_cast<std::size_t>(i) * side * side;
                        double* dip = din.data() + static_cast<std::size_t>(i) * side * side;
                        double* gwp = gw.data() + ((static_cast<std::size_t>(o) * in_c + i) * k) * k;
                        const double* wp =
                            w.value.data() + ((static_cast<std::size_t>(o) * in_c + i) * k) * k;
                        for (int y = 0; y < side; ++y) {
                            int ky0 = std::max(0, half - y), ky1 = std::min(k, side + half - y);
                            for (int x = 0; x < side; ++x) {
                                double d = dop[y * side + x];
                                if (d == 0.0) continue;
                                int kx0 = std::max(0, half - x), kx1 = std::min(k, side + half - x);
                                for (int ky = ky0; ky < ky1; ++ky) {
                                    const double* row = ip + (y + ky - half) * side;
                                    double* drow = dip + (y + ky - half) * side;
                                    double* gwrow = gwp + ky * k;
                                    const double* wrow = wp + ky * k;
                                    for (int kx = kx0; kx < kx1; ++kx) {
                                        gwrow[kx] += d * row[x + kx - half];
                                        drow[x + kx - half] += d * wrow[kx];
                                    }
                                }
                            }
                        }
                    }
                }
                dcur = std::move(din);
            }
        }
    }
}

} // namespace amgtune
