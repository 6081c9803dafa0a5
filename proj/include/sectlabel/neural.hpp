#ifndef SECTLABEL_NEURAL_HPP
#define SECTLABEL_NEURAL_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "sectlabel/core.hpp"
#include "sectlabel/errors.hpp"
#include "sectlabel/tensor.hpp"

namespace sectlabel {

enum class Activation { None, Relu, Softmax };

template <typename S>
S sigmoid_scalar(S x) {
    return S(1) / (S(1) + std::exp(-x));
}

// Numerically stable softmax; normalization accumulates in double.
template <typename S>
Vec<S> softmax(const Vec<S>& logits) {
    Vec<S> out(logits.size());
    const S m = logits.maxCoeff();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - m);
        sum += static_cast<double>(out[i]);
    }
    for (Eigen::Index i = 0; i < logits.size(); ++i)
        out[i] = static_cast<S>(static_cast<double>(out[i]) / sum);
    return out;
}

inline double cross_entropy(const ProbVector& pred, int target) {
    return -std::log(std::max(pred[target], 1e-12));
}

template <typename S>
double cross_entropy(const Vec<S>& pred, int target) {
    return -std::log(std::max(static_cast<double>(pred[target]), 1e-12));
}

// Fully-connected layer, column-vector convention: out = act(W^T x + b).
// backward() takes dL/dout for None/Relu; for Softmax it takes the
// pre-activation gradient directly (probs - onehot), which is how the
// cross-entropy head is wired everywhere in this project.
template <typename S>
class Dense {
public:
    Dense() = default;
    Dense(int in, int out, Activation act) : act_(act) {
        W_ = Mat<S>::Zero(in, out);
        b_ = Mat<S>::Zero(out, 1);
        dW_ = Mat<S>::Zero(in, out);
        db_ = Mat<S>::Zero(out, 1);
    }

    void init(std::mt19937& rng) { glorot_init(W_, rng); }

    int in_dim() const { return static_cast<int>(W_.rows()); }
    int out_dim() const { return static_cast<int>(W_.cols()); }
    Activation activation() const { return act_; }
    Mat<S>& weights() { return W_; }
    Mat<S>& bias() { return b_; }
    const Mat<S>& weights() const { return W_; }
    const Mat<S>& bias() const { return b_; }

    // Stateless forward for inference; touches no caches.
    Vec<S> apply(const Vec<S>& x) const {
        Vec<S> pre = W_.transpose() * x + b_.col(0);
        switch (act_) {
            case Activation::None: return pre;
            case Activation::Relu: return pre.cwiseMax(S(0));
            case Activation::Softmax: return softmax(pre);
        }
        return pre;
    }

    Vec<S> forward(const Vec<S>& x) {
        x_ = x;
        pre_ = W_.transpose() * x + b_.col(0);
        switch (act_) {
            case Activation::None: out_ = pre_; break;
            case Activation::Relu: out_ = pre_.cwiseMax(S(0)); break;
            case Activation::Softmax: out_ = softmax(pre_); break;
        }
        return out_;
    }

    Vec<S> backward(const Vec<S>& dout) {
        Vec<S> dpre;
        switch (act_) {
            case Activation::None: dpre = dout; break;
            case Activation::Relu:
                dpre = dout;
                for (Eigen::Index i = 0; i < dpre.size(); ++i)
                    if (pre_[i] <= S(0)) dpre[i] = S(0);
                break;
            case Activation::Softmax: dpre = dout; break;  // caller supplies p - y
        }
        dW_ += x_ * dpre.transpose();
        db_.col(0) += dpre;
        return W_ * dpre;
    }

    void collect(const std::string& prefix, std::vector<ParamView<S>>& out) {
        out.push_back({prefix + "/W", W_.data(), dW_.data(), W_.rows(), W_.cols()});
        out.push_back({prefix + "/b", b_.data(), db_.data(), b_.rows(), b_.cols()});
    }

private:
    Mat<S> W_, b_, dW_, db_;
    Activation act_ = Activation::None;
    Vec<S> x_, pre_, out_;
};

// Single-direction LSTM over a [T x in] sequence, h_0 = c_0 = 0.
// Gates: i, f, o sigmoid; candidate g tanh; c_t = f*c_{t-1} + i*g;
// h_t = o * tanh(c_t). Keras-style init: glorot kernels, forget bias 1.
template <typename S>
class LstmCell {
public:
    LstmCell() = default;
    LstmCell(int in_dim, int units) : in_(in_dim), units_(units) {
        auto zeros_w = [&] { return Mat<S>::Zero(in_dim, units); };
        auto zeros_u = [&] { return Mat<S>::Zero(units, units); };
        auto zeros_b = [&] { return Mat<S>::Zero(units, 1); };
        Wi_ = zeros_w(); Wf_ = zeros_w(); Wo_ = zeros_w(); Wg_ = zeros_w();
        Ui_ = zeros_u(); Uf_ = zeros_u(); Uo_ = zeros_u(); Ug_ = zeros_u();
        bi_ = zeros_b(); bf_ = zeros_b(); bo_ = zeros_b(); bg_ = zeros_b();
        dWi_ = zeros_w(); dWf_ = zeros_w(); dWo_ = zeros_w(); dWg_ = zeros_w();
        dUi_ = zeros_u(); dUf_ = zeros_u(); dUo_ = zeros_u(); dUg_ = zeros_u();
        dbi_ = zeros_b(); dbf_ = zeros_b(); dbo_ = zeros_b(); dbg_ = zeros_b();
    }

    void init(std::mt19937& rng) {
        glorot_init(Wi_, rng); glorot_init(Wf_, rng); glorot_init(Wo_, rng); glorot_init(Wg_, rng);
        glorot_init(Ui_, rng); glorot_init(Uf_, rng); glorot_init(Uo_, rng); glorot_init(Ug_, rng);
        bf_.setConstant(S(1));  // forget-gate bias
    }

    int in_dim() const { return in_; }
    int units() const { return units_; }

    Mat<S> forward(const Mat<S>& x) {
        if (x.rows() < 1) throw DataError("empty sequence");
        if (x.cols() != in_) throw DataError("lstm input dim mismatch");
        const Eigen::Index T = x.rows();
        x_ = x;
        i_.resize(T, units_); f_.resize(T, units_); o_.resize(T, units_);
        g_.resize(T, units_); c_.resize(T, units_); h_.resize(T, units_);
        tanh_c_.resize(T, units_);

        RowVec<S> h_prev = RowVec<S>::Zero(units_);
        RowVec<S> c_prev = RowVec<S>::Zero(units_);
        for (Eigen::Index t = 0; t < T; ++t) {
            const RowVec<S> xt = x.row(t);
            RowVec<S> ai = xt * Wi_ + h_prev * Ui_ + bi_.transpose();
            RowVec<S> af = xt * Wf_ + h_prev * Uf_ + bf_.transpose();
            RowVec<S> ao = xt * Wo_ + h_prev * Uo_ + bo_.transpose();
            RowVec<S> ag = xt * Wg_ + h_prev * Ug_ + bg_.transpose();
            for (int u = 0; u < units_; ++u) {
                i_(t, u) = sigmoid_scalar(ai[u]);
                f_(t, u) = sigmoid_scalar(af[u]);
                o_(t, u) = sigmoid_scalar(ao[u]);
                g_(t, u) = std::tanh(ag[u]);
                c_(t, u) = f_(t, u) * c_prev[u] + i_(t, u) * g_(t, u);
                tanh_c_(t, u) = std::tanh(c_(t, u));
                h_(t, u) = o_(t, u) * tanh_c_(t, u);
            }
            h_prev = h_.row(t);
            c_prev = c_.row(t);
        }
        return h_;
    }

    // Stateless recurrence for inference; no caches written.
    Mat<S> apply(const Mat<S>& x) const {
        if (x.rows() < 1) throw DataError("empty sequence");
        if (x.cols() != in_) throw DataError("lstm input dim mismatch");
        const Eigen::Index T = x.rows();
        Mat<S> h(T, units_);
        RowVec<S> h_prev = RowVec<S>::Zero(units_);
        RowVec<S> c_prev = RowVec<S>::Zero(units_);
        for (Eigen::Index t = 0; t < T; ++t) {
            const RowVec<S> xt = x.row(t);
            const RowVec<S> ai = xt * Wi_ + h_prev * Ui_ + bi_.transpose();
            const RowVec<S> af = xt * Wf_ + h_prev * Uf_ + bf_.transpose();
            const RowVec<S> ao = xt * Wo_ + h_prev * Uo_ + bo_.transpose();
            const RowVec<S> ag = xt * Wg_ + h_prev * Ug_ + bg_.transpose();
            RowVec<S> ct(units_);
            for (int u = 0; u < units_; ++u) {
                const S i = sigmoid_scalar(ai[u]);
                const S f = sigmoid_scalar(af[u]);
                const S o = sigmoid_scalar(ao[u]);
                const S g = std::tanh(ag[u]);
                ct[u] = f * c_prev[u] + i * g;
                h(t, u) = o * std::tanh(ct[u]);
            }
            h_prev = h.row(t);
            c_prev = ct;
        }
        return h;
    }

    // dh: [T x units] gradient on the hidden sequence. Returns dx [T x in].
    Mat<S> backward(const Mat<S>& dh) {
        const Eigen::Index T = x_.rows();
        Mat<S> dx = Mat<S>::Zero(T, in_);
        RowVec<S> dh_rec = RowVec<S>::Zero(units_);
        RowVec<S> dc = RowVec<S>::Zero(units_);
        for (Eigen::Index t = T - 1; t >= 0; --t) {
            const RowVec<S> h_prev =
                t > 0 ? RowVec<S>(h_.row(t - 1)) : RowVec<S>::Zero(units_);
            const RowVec<S> c_prev =
                t > 0 ? RowVec<S>(c_.row(t - 1)) : RowVec<S>::Zero(units_);

            RowVec<S> dht = dh.row(t) + dh_rec;
            RowVec<S> dpre_i(units_), dpre_f(units_), dpre_o(units_), dpre_g(units_);
            for (int u = 0; u < units_; ++u) {
                const S i = i_(t, u), f = f_(t, u), o = o_(t, u), g = g_(t, u);
                const S tc = tanh_c_(t, u);
                const S do_u = dht[u] * tc;
                const S dc_u = dc[u] + dht[u] * o * (S(1) - tc * tc);
                dpre_o[u] = do_u * o * (S(1) - o);
                dpre_i[u] = dc_u * g * i * (S(1) - i);
                dpre_g[u] = dc_u * i * (S(1) - g * g);
                dpre_f[u] = dc_u * c_prev[u] * f * (S(1) - f);
                dc[u] = dc_u * f;
            }

            const RowVec<S> xt = x_.row(t);
            dWi_ += xt.transpose() * dpre_i; dUi_ += h_prev.transpose() * dpre_i;
            dWf_ += xt.transpose() * dpre_f; dUf_ += h_prev.transpose() * dpre_f;
            dWo_ += xt.transpose() * dpre_o; dUo_ += h_prev.transpose() * dpre_o;
            dWg_ += xt.transpose() * dpre_g; dUg_ += h_prev.transpose() * dpre_g;
            dbi_.col(0) += dpre_i.transpose(); dbf_.col(0) += dpre_f.transpose();
            dbo_.col(0) += dpre_o.transpose(); dbg_.col(0) += dpre_g.transpose();

            dx.row(t) = dpre_i * Wi_.transpose() + dpre_f * Wf_.transpose() +
                        dpre_o * Wo_.transpose() + dpre_g * Wg_.transpose();
            dh_rec = dpre_i * Ui_.transpose() + dpre_f * Uf_.transpose() +
                     dpre_o * Uo_.transpose() + dpre_g * Ug_.transpose();
        }
        return dx;
    }

    void collect(const std::string& prefix, std::vector<ParamView<S>>& out) {
        auto add = [&](const char* n, Mat<S>& v, Mat<S>& g) {
            out.push_back({prefix + "/" + n, v.data(), g.data(), v.rows(), v.cols()});
        };
        add("Wi", Wi_, dWi_); add("Wf", Wf_, dWf_); add("Wo", Wo_, dWo_); add("Wg", Wg_, dWg_);
        add("Ui", Ui_, dUi_); add("Uf", Uf_, dUf_); add("Uo", Uo_, dUo_); add("Ug", Ug_, dUg_);
        add("bi", bi_, dbi_); add("bf", bf_, dbf_); add("bo", bo_, dbo_); add("bg", bg_, dbg_);
    }

private:
    int in_ = 0, units_ = 0;
    Mat<S> Wi_, Wf_, Wo_, Wg_, Ui_, Uf_, Uo_, Ug_, bi_, bf_, bo_, bg_;
    Mat<S> dWi_, dWf_, dWo_, dWg_, dUi_, dUf_, dUo_, dUg_, dbi_, dbf_, dbo_, dbg_;
    Mat<S> x_, i_, f_, o_, g_, c_, h_, tanh_c_;
};

// Bidirectional wrapper: the backward direction runs the cell on the reversed
// sequence and reverses its output; directions are concatenated per timestep.
template <typename S>
class BiLstm {
public:
    BiLstm() = default;
    BiLstm(int in_dim, int units) : fw_(in_dim, units), bw_(in_dim, units) {}

    void init(std::mt19937& rng) {
        fw_.init(rng);
        bw_.init(rng);
    }

    int units() const { return fw_.units(); }
    int out_dim() const { return 2 * fw_.units(); }

    Mat<S> forward(const Mat<S>& x) {
        const Eigen::Index T = x.rows();
        const Mat<S> hf = fw_.forward(x);
        const Mat<S> hb = bw_.forward(x.colwise().reverse());
        Mat<S> out(T, 2 * fw_.units());
        out.leftCols(fw_.units()) = hf;
        out.rightCols(fw_.units()) = hb.colwise().reverse();
        return out;
    }

    Mat<S> backward(const Mat<S>& dout) {
        const Mat<S> dhf = dout.leftCols(fw_.units());
        const Mat<S> dhb = Mat<S>(dout.rightCols(fw_.units())).colwise().reverse();
        Mat<S> dx = fw_.backward(dhf);
        dx += Mat<S>(bw_.backward(dhb)).colwise().reverse();
        return dx;
    }

    Mat<S> apply(const Mat<S>& x) const {
        Mat<S> out(x.rows(), 2 * fw_.units());
        out.leftCols(fw_.units()) = fw_.apply(x);
        out.rightCols(fw_.units()) = Mat<S>(bw_.apply(x.colwise().reverse())).colwise().reverse();
        return out;
    }

    void collect(const std::string& prefix, std::vector<ParamView<S>>& out) {
        fw_.collect(prefix + "/fw", out);
        bw_.collect(prefix + "/bw", out);
    }

    LstmCell<S>& forward_cell() { return fw_; }
    LstmCell<S>& backward_cell() { return bw_; }

private:
    LstmCell<S> fw_, bw_;
};

// Columnwise max over timesteps. T = 0 is an error; the PAD-token convention
// guarantees every encoded sentence has at least one timestep.
template <typename S>
Vec<S> max_over_time(const Mat<S>& seq) {
    if (seq.rows() < 1) throw DataError("empty sequence");
    return seq.colwise().maxCoeff().transpose();
}

template <typename S>
Vec<S> mean_over_time(const Mat<S>& seq) {
    if (seq.rows() < 1) throw DataError("empty sequence");
    Vec<S> out(seq.cols());
    for (Eigen::Index j = 0; j < seq.cols(); ++j) {
        double sum = 0.0;  // 64-bit accumulation
        for (Eigen::Index t = 0; t < seq.rows(); ++t) sum += static_cast<double>(seq(t, j));
        out[j] = static_cast<S>(sum / static_cast<double>(seq.rows()));
    }
    return out;
}

template <typename S>
class MaxOverTime {
public:
    Vec<S> forward(const Mat<S>& seq) {
        if (seq.rows() < 1) throw DataError("empty sequence");
        T_ = seq.rows();
        argmax_.assign(static_cast<std::size_t>(seq.cols()), 0);
        Vec<S> out(seq.cols());
        for (Eigen::Index j = 0; j < seq.cols(); ++j) {
            Eigen::Index best = 0;
            for (Eigen::Index t = 1; t < seq.rows(); ++t)
                if (seq(t, j) > seq(best, j)) best = t;
            argmax_[static_cast<std::size_t>(j)] = best;
            out[j] = seq(best, j);
        }
        return out;
    }

    Mat<S> backward(const Vec<S>& dout) {
        Mat<S> dseq = Mat<S>::Zero(T_, dout.size());
        for (Eigen::Index j = 0; j < dout.size(); ++j)
            dseq(argmax_[static_cast<std::size_t>(j)], j) = dout[j];
        return dseq;
    }

private:
    std::vector<Eigen::Index> argmax_;
    Eigen::Index T_ = 0;
};

template <typename S>
class MeanOverTime {
public:
    Vec<S> forward(const Mat<S>& seq) {
        T_ = seq.rows();
        return mean_over_time(seq);
    }

    Mat<S> backward(const Vec<S>& dout) {
        Mat<S> dseq(T_, dout.size());
        for (Eigen::Index t = 0; t < T_; ++t)
            dseq.row(t) = dout.transpose() / static_cast<S>(T_);
        return dseq;
    }

private:
    Eigen::Index T_ = 0;
};

// Inverted dropout: survivors are scaled by 1/(1-rate) at train time so
// inference is the identity.
template <typename S>
class Dropout {
public:
    Dropout() = default;
    explicit Dropout(double rate) : rate_(rate) {
        if (rate < 0.0 || rate >= 1.0) throw DataError("dropout rate must be in [0,1)");
    }

    double rate() const { return rate_; }

    Vec<S> forward(const Vec<S>& x, bool training, std::mt19937* rng) {
        if (!training || rate_ == 0.0 || rng == nullptr) {
            mask_ = Vec<S>::Ones(x.size());
            return x;
        }
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const S scale = static_cast<S>(1.0 / (1.0 - rate_));
        mask_.resize(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            mask_[i] = (u(*rng) < rate_) ? S(0) : scale;
        return x.cwiseProduct(mask_);
    }

    Vec<S> backward(const Vec<S>& dout) const { return dout.cwiseProduct(mask_); }

private:
    double rate_ = 0.0;
    Vec<S> mask_;
};

struct TrainConfig {
    double learning_rate = 0.001;
    int max_epochs = 30;
    int patience = 5;
    int batch_size = 16;
    std::uint32_t seed = 0;          // parameter init + epoch shuffling
    std::uint32_t dropout_seed = 0;  // dropout mask stream
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double clip_norm = 5.0;
};

// Adam with bias correction. State tensors are allocated against the layout
// of params() at construction; step() rejects non-finite gradients, naming
// the offending tensor.
template <typename S>
class Adam {
public:
    Adam(const std::vector<ParamView<S>>& params, const TrainConfig& cfg) : cfg_(cfg) {
        if (!(cfg.learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
        for (const auto& p : params) {
            m_.emplace_back(static_cast<std::size_t>(p.size()), S(0));
            v_.emplace_back(static_cast<std::size_t>(p.size()), S(0));
        }
    }

    void step(const std::vector<ParamView<S>>& params) {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (std::size_t k = 0; k < params.size(); ++k) {
            const auto& p = params[k];
            for (Eigen::Index i = 0; i < p.size(); ++i) {
                const double g = static_cast<double>(p.grad[i]);
                if (!std::isfinite(g))
                    throw DataError("non-finite gradient in tensor '" + p.name + "'");
                auto& m = m_[k][static_cast<std::size_t>(i)];
                auto& v = v_[k][static_cast<std::size_t>(i)];
                m = static_cast<S>(cfg_.beta1 * static_cast<double>(m) + (1.0 - cfg_.beta1) * g);
                v = static_cast<S>(cfg_.beta2 * static_cast<double>(v) + (1.0 - cfg_.beta2) * g * g);
                const double mhat = static_cast<double>(m) / bc1;
                const double vhat = static_cast<double>(v) / bc2;
                p.value[i] -= static_cast<S>(cfg_.learning_rate * mhat /
                                             (std::sqrt(vhat) + cfg_.epsilon));
            }
        }
    }

    long steps() const { return t_; }

private:
    TrainConfig cfg_;
    std::vector<std::vector<S>> m_, v_;
    long t_ = 0;
};

// Convenience wrapper matching the one-shot optimizer contract.
template <typename S>
void adam_step(const std::vector<ParamView<S>>& params, Adam<S>& state) {
    state.step(params);
}

struct EpochStats {
    double train_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainHistory {
    std::vector<EpochStats> epochs;
    int best_epoch = 0;  // 1-based
    double best_val_accuracy = 0.0;
    int epochs_run() const { return static_cast<int>(epochs.size()); }
};

// Model concept: predict(ex) -> ProbVector (inference mode),
// train_example(ex, rng, use_dropout) -> loss while accumulating gradients,
// params() -> std::vector<ParamView<S>>.
template <typename Model, typename Example>
double dataset_accuracy(Model& model, const std::vector<Example>& data) {
    if (data.empty()) return 0.0;
    long correct = 0;
    for (const Example& ex : data)
        if (model.predict(ex).argmax() == ex.label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

// Early-stopped minibatch training. Epochs shuffle deterministically under
// cfg.seed; after each epoch validation accuracy is measured in inference
// mode; training stops once `patience` epochs pass without a new best, and
// the best epoch's parameters are restored. An empty validation set falls
// back to training accuracy as the stopping signal.
template <typename Model, typename Example>
TrainHistory train(Model& model, const std::vector<Example>& train_data,
                   const std::vector<Example>& val_data, const TrainConfig& cfg) {
    if (train_data.empty()) throw DataError("empty training set");
    if (cfg.patience > cfg.max_epochs)
        throw ConfigError("patience must not exceed max_epochs");
    if (cfg.batch_size < 1) throw ConfigError("batch_size must be >= 1");

    auto params = model.params();
    Adam<typename Model::Scalar> adam(params, cfg);

    std::mt19937 shuffle_rng(cfg.seed);
    std::mt19937 dropout_rng(cfg.dropout_seed);
    std::vector<std::size_t> order(train_data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainHistory history;
    auto best_snapshot = snapshot_params(params);
    history.best_val_accuracy = -1.0;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0.0;
        std::size_t pos = 0;
        while (pos < order.size()) {
            const std::size_t batch_end =
                std::min(order.size(), pos + static_cast<std::size_t>(cfg.batch_size));
            zero_grads(params);
            for (std::size_t k = pos; k < batch_end; ++k)
                loss_sum += static_cast<double>(
                    model.train_example(train_data[order[k]], dropout_rng, true));
            scale_grads(params, 1.0 / static_cast<double>(batch_end - pos));
            clip_gradients(params, cfg.clip_norm);
            adam.step(params);
            pos = batch_end;
        }

        EpochStats stats;
        stats.train_loss = loss_sum / static_cast<double>(train_data.size());
        stats.val_accuracy = val_data.empty() ? dataset_accuracy(model, train_data)
                                              : dataset_accuracy(model, val_data);
        history.epochs.push_back(stats);

        if (stats.val_accuracy > history.best_val_accuracy) {
            history.best_val_accuracy = stats.val_accuracy;
            history.best_epoch = epoch;
            best_snapshot = snapshot_params(params);
        } else if (epoch - history.best_epoch >= cfg.patience) {
            break;
        }
    }

    restore_params(params, best_snapshot);
    return history;
}

// Central-difference gradient verification on a random subset of parameter
// entries. Dropout is disabled on both paths. Meaningful only on the double
// instantiation of the model: float roundoff swamps the 1e-5 perturbation.
template <typename Model, typename Example>
double grad_check(Model& model, const std::vector<Example>& samples, double epsilon = 1e-5,
                  int entries_per_tensor = 4, std::uint32_t seed = 12345) {
    auto params = model.params();
    std::mt19937 unused_rng(0);

    zero_grads(params);
    for (const Example& ex : samples) model.train_example(ex, unused_rng, false);
    const auto analytic = [&] {
        std::vector<std::vector<double>> g;
        for (const auto& p : params) {
            std::vector<double> t(static_cast<std::size_t>(p.size()));
            for (Eigen::Index i = 0; i < p.size(); ++i) t[static_cast<std::size_t>(i)] = static_cast<double>(p.grad[i]);
            g.push_back(std::move(t));
        }
        return g;
    }();

    auto loss_at = [&]() {
        double total = 0.0;
        for (const Example& ex : samples) total += cross_entropy(model.predict(ex), ex.label);
        return total;
    };

    std::mt19937 pick(seed);
    double max_rel = 0.0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        const auto& p = params[k];
        if (p.size() == 0) continue;
        std::uniform_int_distribution<Eigen::Index> dist(0, p.size() - 1);
        const int n_checks = static_cast<int>(std::min<Eigen::Index>(p.size(), entries_per_tensor));
        for (int c = 0; c < n_checks; ++c) {
            const Eigen::Index i = dist(pick);
            const auto saved = p.value[i];
            p.value[i] = saved + static_cast<decltype(saved)>(epsilon);
            const double lp = loss_at();
            p.value[i] = saved - static_cast<decltype(saved)>(epsilon);
            const double lm = loss_at();
            p.value[i] = saved;
            const double numeric = (lp - lm) / (2.0 * epsilon);
            const double a = analytic[k][static_cast<std::size_t>(i)];
            const double rel = std::abs(a - numeric) /
                               std::max({std::abs(a), std::abs(numeric), 1e-8});
            max_rel = std::max(max_rel, rel);
        }
    }
    return max_rel;
}

} // namespace sectlabel

#endif
