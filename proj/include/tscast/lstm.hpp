#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "tscast/errors.hpp"
#include "tscast/rng.hpp"
#include "tscast/scaler.hpp"
#include "tscast/split.hpp"
#include "tscast/window.hpp"

namespace tscast {

struct LstmConfig {
    std::size_t units = 50;
    double dropout = 0.2;
    std::size_t lookback = 50;
    std::size_t epochs = 100;
    double learning_rate = 1e-3;
    std::size_t batch_size = 32;
    std::uint64_t seed = 42;

    void validate() const {
        if (units < 1) throw Error("units must be >= 1");
        if (lookback < 1) throw Error("lookback must be >= 1");
        if (epochs < 1) throw Error("epochs must be >= 1");
        if (!(dropout >= 0.0 && dropout < 1.0)) throw Error("dropout must be in [0, 1)");
        if (!(learning_rate > 0.0)) throw Error("learning_rate must be positive");
        if (batch_size < 1) throw Error("batch_size must be >= 1");
    }
};

/// Single-layer LSTM weights. W is (4H) x (H+1) row-major with gate blocks
/// stacked in the fixed order i, f, o, g; column H multiplies the scalar
/// input, columns 0..H-1 the previous hidden state.
struct LstmWeights {
    std::size_t units = 0;
    std::vector<double> W;      // 4H * (H+1)
    std::vector<double> b;      // 4H
    std::vector<double> w_out;  // H
    double b_out = 0.0;
};

struct LstmState {
    std::vector<double> h;
    std::vector<double> c;

    explicit LstmState(std::size_t units = 0) : h(units, 0.0), c(units, 0.0) {}
};

struct GateCache {
    std::vector<double> i, f, o, g, c, h;
};

inline double mse(const std::vector<double>& pred, const std::vector<double>& actual) {
    if (pred.size() != actual.size() || pred.empty())
        throw ShapeError("mse needs two equal-length non-empty vectors");
    double s = 0.0;
    for (std::size_t k = 0; k < pred.size(); ++k) {
        const double e = pred[k] - actual[k];
        s += e * e;
    }
    return s / static_cast<double>(pred.size());
}

/// Glorot-uniform W per gate block, zero biases except the forget block at 1.
inline LstmWeights init_weights(const LstmConfig& config) {
    const std::size_t H = config.units;
    const std::size_t cols = H + 1;
    LstmWeights w;
    w.units = H;
    w.W.resize(4 * H * cols);
    w.b.assign(4 * H, 0.0);
    w.w_out.resize(H);

    Rng rng(config.seed);
    const double limit = std::sqrt(6.0 / static_cast<double>(cols + H));
    for (double& v : w.W) v = rng.uniform(-limit, limit);
    for (std::size_t j = 0; j < H; ++j) w.b[H + j] = 1.0;  // forget-gate block
    const double out_limit = std::sqrt(6.0 / static_cast<double>(H + 1));
    for (double& v : w.w_out) v = rng.uniform(-out_limit, out_limit);
    w.b_out = 0.0;
    return w;
}

namespace detail {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace detail

inline std::pair<LstmState, GateCache> forward_step(const LstmWeights& w, double x,
                                                    const LstmState& state) {
    const std::size_t H = w.units;
    if (state.h.size() != H || state.c.size() != H)
        throw ShapeError("state size does not match weights");
    const std::size_t cols = H + 1;

    GateCache cache;
    cache.i.resize(H);
    cache.f.resize(H);
    cache.o.resize(H);
    cache.g.resize(H);
    cache.c.resize(H);
    cache.h.resize(H);

    LstmState next(H);
    for (std::size_t j = 0; j < H; ++j) {
        double a_i = w.b[j], a_f = w.b[H + j], a_o = w.b[2 * H + j], a_g = w.b[3 * H + j];
        const double* wi = &w.W[j * cols];
        const double* wf = &w.W[(H + j) * cols];
        const double* wo = &w.W[(2 * H + j) * cols];
        const double* wg = &w.W[(3 * H + j) * cols];
        for (std::size_t k = 0; k < H; ++k) {
            const double hk = state.h[k];
            a_i += wi[k] * hk;
            a_f += wf[k] * hk;
            a_o += wo[k] * hk;
            a_g += wg[k] * hk;
        }
        a_i += wi[H] * x;
        a_f += wf[H] * x;
        a_o += wo[H] * x;
        a_g += wg[H] * x;

        const double i = detail::sigmoid(a_i);
        const double f = detail::sigmoid(a_f);
        const double o = detail::sigmoid(a_o);
        const double g = std::tanh(a_g);
        const double c = f * state.c[j] + i * g;
        const double h = o * std::tanh(c);
        cache.i[j] = i;
        cache.f[j] = f;
        cache.o[j] = o;
        cache.g[j] = g;
        cache.c[j] = c;
        cache.h[j] = h;
        next.c[j] = c;
        next.h[j] = h;
    }
    return {std::move(next), std::move(cache)};
}

/// Runs a lookback window from a zero state and reads out a scalar through the
/// dense layer. In training mode an inverted-dropout mask over the final
/// hidden vector is applied (survivors scaled by 1/(1-rate)); inference mode
/// passes mask = nullptr.
inline double forward_sequence(const LstmWeights& w, const std::vector<double>& window,
                               std::vector<GateCache>& caches,
                               const std::vector<double>* mask = nullptr, double dropout = 0.0) {
    const std::size_t H = w.units;
    if (mask && mask->size() != H) throw ShapeError("dropout mask size does not match units");
    caches.clear();
    caches.reserve(window.size());
    LstmState state(H);
    for (double x : window) {
        auto [next, cache] = forward_step(w, x, state);
        state = std::move(next);
        caches.push_back(std::move(cache));
    }
    const double keep = 1.0 - dropout;
    double y = w.b_out;
    for (std::size_t j = 0; j < H; ++j) {
        const double scale = mask ? (*mask)[j] / keep : 1.0;
        y += w.w_out[j] * state.h[j] * scale;
    }
    return y;
}

inline double predict_window(const LstmWeights& w, const std::vector<double>& window) {
    std::vector<GateCache> caches;
    return forward_sequence(w, window, caches);
}

struct LstmGradients {
    std::vector<double> W, b, w_out;
    double b_out = 0.0;

    explicit LstmGradients(std::size_t units = 0)
        : W(4 * units * (units + 1), 0.0), b(4 * units, 0.0), w_out(units, 0.0) {}
};

/// Exact batch-MSE gradients by backpropagation through time. `caches[s]` and
/// `preds[s]` must come from a forward_sequence over `windows[s]` with the
/// matching mask (or none).
inline LstmGradients backward(const LstmWeights& w, const std::vector<std::vector<double>>& windows,
                              const std::vector<double>& targets, const std::vector<double>& preds,
                              const std::vector<std::vector<GateCache>>& caches,
                              const std::vector<std::vector<double>>* masks = nullptr,
                              double dropout = 0.0) {
    const std::size_t H = w.units;
    const std::size_t n = windows.size();
    if (targets.size() != n || preds.size() != n || caches.size() != n || (masks && masks->size() != n))
        throw ShapeError("batch arrays must have equal lengths");
    const std::size_t cols = H + 1;
    const double keep = 1.0 - dropout;

    LstmGradients grad(H);
    std::vector<double> dh(H), dc(H), dh_prev(H), da(4 * H);

    for (std::size_t s = 0; s < n; ++s) {
        const auto& window = windows[s];
        const auto& cs = caches[s];
        if (cs.size() != window.size()) throw ShapeError("cache length does not match window");
        const double dpred = 2.0 * (preds[s] - targets[s]) / static_cast<double>(n);

        const auto& last_h = cs.back().h;
        for (std::size_t j = 0; j < H; ++j) {
            const double scale = masks ? (*masks)[s][j] / keep : 1.0;
            grad.w_out[j] += dpred * last_h[j] * scale;
            dh[j] = dpred * w.w_out[j] * scale;
            dc[j] = 0.0;
        }
        grad.b_out += dpred;

        for (std::size_t t = window.size(); t-- > 0;) {
            const auto& cache = cs[t];
            const double x = window[t];
            const std::vector<double>* h_prev = (t > 0) ? &cs[t - 1].h : nullptr;
            const std::vector<double>* c_prev = (t > 0) ? &cs[t - 1].c : nullptr;

            for (std::size_t j = 0; j < H; ++j) {
                const double tc = std::tanh(cache.c[j]);
                const double d_o = dh[j] * tc;
                const double dcj = dc[j] + dh[j] * cache.o[j] * (1.0 - tc * tc);
                const double d_i = dcj * cache.g[j];
                const double d_g = dcj * cache.i[j];
                const double d_f = dcj * (c_prev ? (*c_prev)[j] : 0.0);
                da[j] = d_i * cache.i[j] * (1.0 - cache.i[j]);
                da[H + j] = d_f * cache.f[j] * (1.0 - cache.f[j]);
                da[2 * H + j] = d_o * cache.o[j] * (1.0 - cache.o[j]);
                da[3 * H + j] = d_g * (1.0 - cache.g[j] * cache.g[j]);
                dc[j] = dcj * cache.f[j];
            }
            for (std::size_t r = 0; r < 4 * H; ++r) {
                const double dar = da[r];
                grad.b[r] += dar;
                double* gw = &grad.W[r * cols];
                if (h_prev) {
                    const double* hp = h_prev->data();
                    for (std::size_t k = 0; k < H; ++k) gw[k] += dar * hp[k];
                }
                gw[H] += dar * x;
            }
            for (std::size_t k = 0; k < H; ++k) {
                double acc = 0.0;
                for (std::size_t r = 0; r < 4 * H; ++r) acc += da[r] * w.W[r * cols + k];
                dh_prev[k] = acc;
            }
            dh.swap(dh_prev);
        }
    }
    return grad;
}

struct RmsPropState {
    std::vector<double> W, b, w_out;
    double b_out = 0.0;

    explicit RmsPropState(std::size_t units = 0)
        : W(4 * units * (units + 1), 0.0), b(4 * units, 0.0), w_out(units, 0.0) {}
};

/// v' = rho*v + (1-rho)*g^2; w' = w - lr*g/(sqrt(v') + eps).
inline void rmsprop_step(LstmWeights& weights, const LstmGradients& grads, RmsPropState& state,
                         double learning_rate, double rho = 0.9, double epsilon = 1e-7) {
    auto update = [&](double& w, double g, double& v) {
        v = rho * v + (1.0 - rho) * g * g;
        w -= learning_rate * g / (std::sqrt(v) + epsilon);
    };
    for (std::size_t k = 0; k < weights.W.size(); ++k) update(weights.W[k], grads.W[k], state.W[k]);
    for (std::size_t k = 0; k < weights.b.size(); ++k) update(weights.b[k], grads.b[k], state.b[k]);
    for (std::size_t k = 0; k < weights.w_out.size(); ++k)
        update(weights.w_out[k], grads.w_out[k], state.w_out[k]);
    update(weights.b_out, grads.b_out, state.b_out);
}

inline double gradient_norm(const LstmGradients& g) {
    double s = g.b_out * g.b_out;
    for (double v : g.W) s += v * v;
    for (double v : g.b) s += v * v;
    for (double v : g.w_out) s += v * v;
    return std::sqrt(s);
}

inline void clip_gradients(LstmGradients& g, double max_norm) {
    const double norm = gradient_norm(g);
    if (norm <= max_norm || norm == 0.0) return;
    const double scale = max_norm / norm;
    for (double& v : g.W) v *= scale;
    for (double& v : g.b) v *= scale;
    for (double& v : g.w_out) v *= scale;
    g.b_out *= scale;
}

struct EpochStats {
    double train_mse = 0.0;
    double val_mse = 0.0;
};

struct TrainedLstm {
    LstmConfig config;
    LstmWeights weights;
    MinMaxScaler scaler;
    std::vector<EpochStats> history;
    double runtime_seconds = 0.0;
};

namespace detail {

inline std::vector<double> batch_predict(const LstmWeights& w, const WindowSet& ws) {
    std::vector<double> preds(ws.size());
    for (std::size_t k = 0; k < ws.size(); ++k) preds[k] = predict_window(w, ws.inputs[k]);
    return preds;
}

}  // namespace detail

inline constexpr double kGradClipNorm = 5.0;

/// Mini-batch RMSProp training on lookback windows of the min-max-scaled
/// train split. Validation windows reuse the last `lookback` train values as
/// context so every validation point is predicted. History is on the scaled
/// scale.
inline TrainedLstm train(const DataSplit& data, const LstmConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t z = config.lookback;
    if (data.train.size() <= z)
        throw TooShortError("train split of length " + std::to_string(data.train.size()) +
                            " too short for lookback " + std::to_string(z));

    auto [scaled_train, scaler] = fit_rescale(data.train);
    const auto train_ws = make_windows(scaled_train.values, z);

    WindowSet val_ws;
    if (!data.validation.empty()) {
        std::vector<double> context(scaled_train.values.end() - static_cast<std::ptrdiff_t>(z),
                                    scaled_train.values.end());
        for (double v : data.validation.values) context.push_back(scaler.scale(v));
        val_ws = make_windows(context, z);
    }

    TrainedLstm model;
    model.config = config;
    model.scaler = scaler;
    model.weights = init_weights(config);

    RmsPropState opt(config.units);
    Rng rng(config.seed ^ 0x9e3779b97f4a7c15ull);

    std::vector<std::size_t> indices(train_ws.size());
    std::iota(indices.begin(), indices.end(), std::size_t{0});

    const bool use_dropout = config.dropout > 0.0;
    std::vector<std::vector<double>> batch_windows, batch_masks;
    std::vector<std::vector<GateCache>> batch_caches;
    std::vector<double> batch_targets, batch_preds;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates with the seeded generator
        for (std::size_t i = indices.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.below(i));
            std::swap(indices[i - 1], indices[j]);
        }

        for (std::size_t begin = 0; begin < indices.size(); begin += config.batch_size) {
            const std::size_t end = std::min(begin + config.batch_size, indices.size());
            const std::size_t n = end - begin;
            batch_windows.clear();
            batch_targets.clear();
            batch_preds.clear();
            batch_caches.assign(n, {});
            batch_masks.clear();
            for (std::size_t s = 0; s < n; ++s) {
                const std::size_t idx = indices[begin + s];
                batch_windows.push_back(train_ws.inputs[idx]);
                batch_targets.push_back(train_ws.targets[idx]);
                if (use_dropout) {
                    std::vector<double> mask(config.units);
                    for (double& v : mask) v = rng.bernoulli(config.dropout) ? 0.0 : 1.0;
                    batch_masks.push_back(std::move(mask));
                }
            }
            for (std::size_t s = 0; s < n; ++s) {
                const std::vector<double>* mask = use_dropout ? &batch_masks[s] : nullptr;
                batch_preds.push_back(forward_sequence(model.weights, batch_windows[s],
                                                       batch_caches[s], mask, config.dropout));
            }
            auto grads = backward(model.weights, batch_windows, batch_targets, batch_preds,
                                  batch_caches, use_dropout ? &batch_masks : nullptr,
                                  config.dropout);
            clip_gradients(grads, kGradClipNorm);
            rmsprop_step(model.weights, grads, opt, config.learning_rate);
        }

        EpochStats stats;
        stats.train_mse = mse(detail::batch_predict(model.weights, train_ws), train_ws.targets);
        stats.val_mse = val_ws.size()
                            ? mse(detail::batch_predict(model.weights, val_ws), val_ws.targets)
                            : std::numeric_limits<double>::quiet_NaN();
        if (!std::isfinite(stats.train_mse))
            throw DivergenceError(epoch, "training loss became non-finite");
        model.history.push_back(stats);
    }

    model.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return model;
}

/// One-step-ahead predictions from true history (period-to-point), aligned to
/// series[lookback..]; output in price units.
inline std::vector<double> predict_rolling(const TrainedLstm& model, const UnivariateSeries& series) {
    const std::size_t z = model.config.lookback;
    if (series.size() <= z)
        throw TooShortError("series of length " + std::to_string(series.size()) +
                            " too short for lookback " + std::to_string(z));
    const auto scaled = model.scaler.scale(series.values);
    const auto ws = make_windows(scaled, z);
    return model.scaler.unscale(detail::batch_predict(model.weights, ws));
}

/// Closed-loop recursive forecasting: each prediction re-enters the window.
/// `last_window` and the output are in price units.
inline std::vector<double> predict_future(const TrainedLstm& model,
                                          const std::vector<double>& last_window,
                                          std::size_t horizon) {
    if (horizon < 1) throw Error("horizon must be >= 1");
    if (last_window.size() != model.config.lookback)
        throw ShapeError("last_window must have exactly lookback values");
    std::vector<double> window = model.scaler.scale(last_window);
    std::vector<double> preds;
    preds.reserve(horizon);
    for (std::size_t i = 0; i < horizon; ++i) {
        const double y = predict_window(model.weights, window);
        preds.push_back(y);
        window.erase(window.begin());
        window.push_back(y);
    }
    return model.scaler.unscale(preds);
}

}  // namespace tscast
