#ifndef SECTLABEL_MODELS_HPP
#define SECTLABEL_MODELS_HPP

#include <array>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "sectlabel/core.hpp"
#include "sectlabel/embeddings.hpp"
#include "sectlabel/neural.hpp"
#include "sectlabel/preprocess.hpp"
#include "sectlabel/weak_labeler.hpp"

namespace sectlabel {

// Bumped whenever the feature layout below changes; model bundles refuse to
// load across versions.
constexpr int kLayoutFeatureVersion = 1;
constexpr int kLayoutFeatureCount = 17;

// Fixed feature order (0-based):
//   [0]  uppercase fraction of the raw sentence text
//   [1]  lowercase fraction
//   [2]  digit fraction
//   [3..8] relative position of the focus sentence to the first header of
//          Reason, History, Technique, Comparison, Findings, Impression:
//          (focus_index - header_index) / n_sentences, or 2.0 when absent
//   [9]  previous sentence ends with '.'      [10] previous ends with ':'
//   [11] current sentence ends with '.'       [12] current ends with ':'
//   [13] next sentence ends with '.'          [14] next ends with ':'
//          (missing neighbor => both flags 0)
//   [15] focus_index / max(n_sentences - 1, 1)
//   [16] 1 if the first token has letters and they are all uppercase
struct LayoutFeatures {
    std::array<float, kLayoutFeatureCount> values{};
};

struct LayoutOptions {
    // When false, features 0..2 are raw character counts instead of
    // fractions (ablation escape hatch; breaks the [0,1] range).
    bool normalize_counts = true;
};

LayoutFeatures extract_layout_features(const Report& report, int focus_index,
                                       const std::vector<HeaderHit>& headers,
                                       const LayoutOptions& opts = {});

// One training/inference instance: the focus sentence with its neighbor
// token sequences and layout features. Neighbors outside the report are the
// empty tokenization (single PAD id).
struct SentenceExample {
    std::vector<int> focus_ids;
    std::vector<int> prev_ids;
    std::vector<int> next_ids;
    std::array<float, kLayoutFeatureCount> layout{};
    int label = -1;  // 0..6, or -1 when unlabeled
};

std::vector<SentenceExample> make_examples(const Report& report, const Vocabulary& vocab,
                                           const RuleSet& rules,
                                           const LayoutOptions& opts = {},
                                           const std::vector<SectionLabel>* labels = nullptr);

struct FocusConfig {
    int lstm_units = 64;
    int fc1 = 100, fc2 = 30, fc3 = 16;
    double drop1 = 0.5, drop2 = 0.5, drop3 = 0.3;
};

struct SurroundingConfig {
    int focus_units = 64;
    int neighbor_units = 16;
    int fc1 = 50, fc2 = 10;
    double drop1 = 0.5, drop2 = 0.3;
};

struct LayoutConfig {
    int fc1 = 100, fc2 = 16;
    double drop1 = 0.5, drop2 = 0.5;
};

namespace detail {

template <typename S>
Vec<S> layout_input(const SentenceExample& ex) {
    Vec<S> x(kLayoutFeatureCount);
    for (int i = 0; i < kLayoutFeatureCount; ++i)
        x[i] = static_cast<S>(ex.layout[static_cast<std::size_t>(i)]);
    return x;
}

template <typename S>
ProbVector to_prob_vector(const Vec<S>& probs) {
    ProbVector out;
    for (int i = 0; i < kNumLabels; ++i) out[i] = static_cast<double>(probs[i]);
    return out;
}

} // namespace detail

// Encoder for the focus sentence alone: Bi-LSTM, max+mean pooling concat,
// then the 100-30-16 ReLU stack. Output is the 16-dim penultimate vector.
template <typename S>
class FocusBody {
public:
    using Scalar = S;

    FocusBody(std::shared_ptr<EmbeddingTable<S>> emb, const FocusConfig& cfg, std::mt19937& rng)
        : emb_(std::move(emb)),
          cfg_(cfg),
          lstm_(emb_->dim, cfg.lstm_units),
          fc1_(4 * cfg.lstm_units, cfg.fc1, Activation::Relu),
          fc2_(cfg.fc1, cfg.fc2, Activation::Relu),
          fc3_(cfg.fc2, cfg.fc3, Activation::Relu),
          do1_(cfg.drop1), do2_(cfg.drop2), do3_(cfg.drop3) {
        lstm_.init(rng);
        fc1_.init(rng);
        fc2_.init(rng);
        fc3_.init(rng);
    }

    int out_dim() const { return cfg_.fc3; }

    Vec<S> forward(const SentenceExample& ex, bool training, std::mt19937* rng) {
        ids_ = &ex.focus_ids;
        const Mat<S> h = lstm_.forward(emb_->embed(ex.focus_ids));
        Vec<S> enc(2 * lstm_.out_dim());
        enc << maxpool_.forward(h), meanpool_.forward(h);
        const Vec<S> a1 = do1_.forward(fc1_.forward(enc), training, rng);
        const Vec<S> a2 = do2_.forward(fc2_.forward(a1), training, rng);
        return do3_.forward(fc3_.forward(a2), training, rng);
    }

    void backward(const Vec<S>& dtop) {
        const Vec<S> d2 = fc3_.backward(do3_.backward(dtop));
        const Vec<S> d1 = fc2_.backward(do2_.backward(d2));
        const Vec<S> denc = fc1_.backward(do1_.backward(d1));
        const Eigen::Index half = lstm_.out_dim();
        Mat<S> dh = maxpool_.backward(denc.head(half));
        dh += meanpool_.backward(denc.tail(half));
        emb_->accumulate_grad(*ids_, lstm_.backward(dh));
    }

    Vec<S> infer(const SentenceExample& ex) const {
        const Mat<S> h = lstm_.apply(emb_->embed(ex.focus_ids));
        Vec<S> enc(2 * lstm_.out_dim());
        enc << max_over_time(h), mean_over_time(h);
        return fc3_.apply(fc2_.apply(fc1_.apply(enc)));
    }

    void collect(const std::string& prefix, std::vector<ParamView<S>>& out) {
        lstm_.collect(prefix + "/lstm", out);
        fc1_.collect(prefix + "/fc1", out);
        fc2_.collect(prefix + "/fc2", out);
        fc3_.collect(prefix + "/fc3", out);
    }

    EmbeddingTable<S>& embedding() { return *emb_; }

private:
    std::shared_ptr<EmbeddingTable<S>> emb_;
    FocusConfig cfg_;
    BiLstm<S> lstm_;
    MaxOverTime<S> maxpool_;
    MeanOverTime<S> meanpool_;
    Dense<S> fc1_, fc2_, fc3_;
    Dropout<S> do1_, do2_, do3_;
    const std::vector<int>* ids_ = nullptr;
};

// Focus + neighbor encoders (64/16/16-unit Bi-LSTMs, max pooling per branch,
// concatenated in focus/prev/next order) into the 50-10 stack.
template <typename S>
class SurroundingBody {
public:
    using Scalar = S;

    SurroundingBody(std::shared_ptr<EmbeddingTable<S>> emb, const SurroundingConfig& cfg,
                    std::mt19937& rng)
        : emb_(std::move(emb)),
          cfg_(cfg),
          focus_lstm_(emb_->dim, cfg.focus_units),
          prev_lstm_(emb_->dim, cfg.neighbor_units),
          next_lstm_(emb_->dim, cfg.neighbor_units),
          fc1_(2 * cfg.focus_units + 4 * cfg.neighbor_units, cfg.fc1, Activation::Relu),
          fc2_(cfg.fc1, cfg.fc2, Activation::Relu),
          do1_(cfg.drop1), do2_(cfg.drop2) {
        focus_lstm_.init(rng);
        prev_lstm_.init(rng);
        next_lstm_.init(rng);
        fc1_.init(rng);
        fc2_.init(rng);
    }

    int out_dim() const { return cfg_.fc2; }

    Vec<S> forward(const SentenceExample& ex, bool training, std::mt19937* rng) {
        ex_ = &ex;
        const Mat<S> hf = focus_lstm_.forward(emb_->embed(ex.focus_ids));
        const Mat<S> hp = prev_lstm_.forward(emb_->embed(ex.prev_ids));
        const Mat<S> hn = next_lstm_.forward(emb_->embed(ex.next_ids));
        Vec<S> enc(focus_lstm_.out_dim() + prev_lstm_.out_dim() + next_lstm_.out_dim());
        enc << focus_pool_.forward(hf), prev_pool_.forward(hp), next_pool_.forward(hn);
        const Vec<S> a1 = do1_.forward(fc1_.forward(enc), training, rng);
        return do2_.forward(fc2_.forward(a1), training, rng);
    }

    void backward(const Vec<S>& dtop) {
        const Vec<S> d1 = fc2_.backward(do2_.backward(dtop));
        const Vec<S> denc = fc1_.backward(do1_.backward(d1));
        Eigen::Index at = 0;
        const Vec<S> dmf = denc.segment(at, focus_lstm_.out_dim()); at += focus_lstm_.out_dim();
        const Vec<S> dmp = denc.segment(at, prev_lstm_.out_dim()); at += prev_lstm_.out_dim();
        const Vec<S> dmn = denc.segment(at, next_lstm_.out_dim());
        emb_->accumulate_grad(ex_->focus_ids, focus_lstm_.backward(focus_pool_.backward(dmf)));
        emb_->accumulate_grad(ex_->prev_ids, prev_lstm_.backward(prev_pool_.backward(dmp)));
        emb_->accumulate_grad(ex_->next_ids, next_lstm_.backward(next_pool_.backward(dmn)));
    }

    Vec<S> infer(const SentenceExample& ex) const {
        const Mat<S> hf = focus_lstm_.apply(emb_->embed(ex.focus_ids));
        const Mat<S> hp = prev_lstm_.apply(emb_->embed(ex.prev_ids));
        const Mat<S> hn = next_lstm_.apply(emb_->embed(ex.next_ids));
        Vec<S> enc(focus_lstm_.out_dim() + prev_lstm_.out_dim() + next_lstm_.out_dim());
        enc << max_over_time(hf), max_over_time(hp), max_over_time(hn);
        return fc2_.apply(fc1_.apply(enc));
    }

    void collect(const std::string& prefix, std::vector<ParamView<S>>& out) {
        focus_lstm_.collect(prefix + "/focus_lstm", out);
        prev_lstm_.collect(prefix + "/prev_lstm", out);
        next_lstm_.collect(prefix + "/next_lstm", out);
        fc1_.collect(prefix + "/fc1", out);
        fc2_.collect(prefix + "/fc2", out);
    }

    EmbeddingTable<S>& embedding() { return *emb_; }

private:
    std::shared_ptr<EmbeddingTable<S>> emb_;
    SurroundingConfig cfg_;
    BiLstm<S> focus_lstm_, prev_lstm_, next_lstm_;
    MaxOverTime<S> focus_pool_, prev_pool_, next_pool_;
    Dense<S> fc1_, fc2_;
    Dropout<S> do1_, do2_;
    const SentenceExample* ex_ = nullptr;
};

// Dense 100-16 stack over the 17 layout features.
template <typename S>
class LayoutBody {
public:
    using Scalar = S;

    LayoutBody(const LayoutConfig& cfg, std::mt19937& rng)
        : cfg_(cfg),
          fc1_(kLayoutFeatureCount, cfg.fc1, Activation::Relu),
          fc2_(cfg.fc1, cfg.fc2, Activation::Relu),
          do1_(cfg.drop1), do2_(cfg.drop2) {
        fc1_.init(rng);
        fc2_.init(rng);
    }

    int out_dim() const { return cfg_.fc2; }

    Vec<S> forward(const SentenceExample& ex, bool training, std::mt19937* rng) {
        const Vec<S> a1 = do1_.forward(fc1_.forward(detail::layout_input<S>(ex)), training, rng);
        return do2_.forward(fc2_.forward(a1), training, rng);
    }

    void backward(const Vec<S>& dtop) {
        fc1_.backward(do1_.backward(fc2_.backward(do2_.backward(dtop))));
    }

    Vec<S> infer(const SentenceExample& ex) const {
        return fc2_.apply(fc1_.apply(detail::layout_input<S>(ex)));
    }

    void collect(const std::string& prefix, std::vector<ParamView<S>>& out) {
        fc1_.collect(prefix + "/fc1", out);
        fc2_.collect(prefix + "/fc2", out);
    }

private:
    LayoutConfig cfg_;
    Dense<S> fc1_, fc2_;
    Dropout<S> do1_, do2_;
};

// Common head-plus-body classifier plumbing. predict() is const and touches
// no shared mutable state apart from layer forward caches inside infer()'s
// local copies of pooled values, so frozen models are safe to share across
// threads for inference.
template <typename Body>
class Classifier {
public:
    using S = typename Body::Scalar;
    using Scalar = S;

    template <typename... Args>
    Classifier(std::uint32_t seed, Args&&... args)
        : rng_(seed), body_(std::forward<Args>(args)..., rng_) {
        head_ = Dense<S>(body_.out_dim(), kNumLabels, Activation::Softmax);
        head_.init(rng_);
    }

    ProbVector predict(const SentenceExample& ex) const {
        return detail::to_prob_vector(head_.apply(body_.infer(ex)));
    }

    S train_example(const SentenceExample& ex, std::mt19937& dropout_rng, bool use_dropout = true) {
        const Vec<S> top = body_.forward(ex, use_dropout, use_dropout ? &dropout_rng : nullptr);
        const Vec<S> probs = head_.forward(top);
        const double loss = cross_entropy(probs, ex.label);
        Vec<S> dpre = probs;
        dpre[ex.label] -= S(1);
        body_.backward(head_.backward(dpre));
        return static_cast<S>(loss);
    }

    std::vector<ParamView<S>> params() {
        std::vector<ParamView<S>> out;
        body_.collect("body", out);
        head_.collect("head", out);
        if (embedding_ && embedding_->trainable)
            out.push_back(embedding_->param_view("embedding"));
        return out;
    }

    Body& body() { return body_; }
    const Body& body() const { return body_; }
    Dense<S>& head() { return head_; }

protected:
    std::mt19937 rng_;
    Body body_;
    Dense<S> head_;
    std::shared_ptr<EmbeddingTable<S>> embedding_;  // set by subclass when the body embeds
};

template <typename S>
class FocusModel : public Classifier<FocusBody<S>> {
public:
    FocusModel(std::shared_ptr<EmbeddingTable<S>> emb, const FocusConfig& cfg, std::uint32_t seed)
        : Classifier<FocusBody<S>>(seed, emb, cfg), config(cfg) {
        this->embedding_ = std::move(emb);
    }
    FocusConfig config;
};

template <typename S>
class SurroundingModel : public Classifier<SurroundingBody<S>> {
public:
    SurroundingModel(std::shared_ptr<EmbeddingTable<S>> emb, const SurroundingConfig& cfg,
                     std::uint32_t seed)
        : Classifier<SurroundingBody<S>>(seed, emb, cfg), config(cfg) {
        this->embedding_ = std::move(emb);
    }
    SurroundingConfig config;
};

template <typename S>
class LayoutModel : public Classifier<LayoutBody<S>> {
public:
    LayoutModel(const LayoutConfig& cfg, std::uint32_t seed)
        : Classifier<LayoutBody<S>>(seed, cfg), config(cfg) {}
    LayoutConfig config;
};

// Late-fusion baseline: the three bodies' penultimate vectors concatenated
// (16 + 10 + 16) into a single softmax head, trained end-to-end.
template <typename S>
class MergedModel {
public:
    using Scalar = S;

    MergedModel(std::shared_ptr<EmbeddingTable<S>> emb, const FocusConfig& fcfg,
                const SurroundingConfig& scfg, const LayoutConfig& lcfg, std::uint32_t seed)
        : rng_(seed),
          emb_(std::move(emb)),
          focus_(emb_, fcfg, rng_),
          surrounding_(emb_, scfg, rng_),
          layout_(lcfg, rng_),
          head_(fcfg.fc3 + scfg.fc2 + lcfg.fc2, kNumLabels, Activation::Softmax) {
        head_.init(rng_);
    }

    ProbVector predict(const SentenceExample& ex) const {
        Vec<S> top(head_.in_dim());
        top << focus_.infer(ex), surrounding_.infer(ex), layout_.infer(ex);
        return detail::to_prob_vector(head_.apply(top));
    }

    S train_example(const SentenceExample& ex, std::mt19937& dropout_rng, bool use_dropout = true) {
        std::mt19937* rng = use_dropout ? &dropout_rng : nullptr;
        const Vec<S> tf = focus_.forward(ex, use_dropout, rng);
        const Vec<S> ts = surrounding_.forward(ex, use_dropout, rng);
        const Vec<S> tl = layout_.forward(ex, use_dropout, rng);
        Vec<S> top(head_.in_dim());
        top << tf, ts, tl;
        const Vec<S> probs = head_.forward(top);
        const double loss = cross_entropy(probs, ex.label);
        Vec<S> dpre = probs;
        dpre[ex.label] -= S(1);
        const Vec<S> dtop = head_.backward(dpre);
        Eigen::Index at = 0;
        focus_.backward(dtop.segment(at, focus_.out_dim())); at += focus_.out_dim();
        surrounding_.backward(dtop.segment(at, surrounding_.out_dim())); at += surrounding_.out_dim();
        layout_.backward(dtop.segment(at, layout_.out_dim()));
        return static_cast<S>(loss);
    }

    std::vector<ParamView<S>> params() {
        std::vector<ParamView<S>> out;
        focus_.collect("focus_body", out);
        surrounding_.collect("surrounding_body", out);
        layout_.collect("layout_body", out);
        head_.collect("head", out);
        if (emb_->trainable) out.push_back(emb_->param_view("embedding"));
        return out;
    }

private:
    std::mt19937 rng_;
    std::shared_ptr<EmbeddingTable<S>> emb_;
    FocusBody<S> focus_;
    SurroundingBody<S> surrounding_;
    LayoutBody<S> layout_;
    Dense<S> head_;
};

} // namespace sectlabel

#endif
