#ifndef SECTLABEL_BASELINES_HPP
#define SECTLABEL_BASELINES_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sectlabel/core.hpp"

namespace sectlabel {

// Index/value pairs sorted by index; produced L2-normalized (or empty).
using SparseVector = std::vector<std::pair<int, double>>;

// Unigram TF-IDF over cleaned lowercased tokens, fit on the train split only.
// idf(t) = ln((1+N)/(1+df(t))) + 1; rows are L2-normalized; tokens unseen at
// fit time are ignored at transform time.
class TfidfVectorizer {
public:
    TfidfVectorizer() = default;

    static TfidfVectorizer fit(const std::vector<std::string>& sentences);

    SparseVector transform(const std::string& sentence) const;

    int dim() const { return static_cast<int>(tokens_.size()); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    const std::vector<double>& idf() const { return idf_; }

    // For bundle serialization.
    static TfidfVectorizer from_parts(std::vector<std::string> tokens, std::vector<double> idf);

private:
    std::vector<std::string> tokens_;
    std::vector<double> idf_;
    std::unordered_map<std::string, int> index_;
};

struct SvmConfig {
    double learning_rate = 0.01;
    int epochs = 200;
    double lambda = 1e-4;
    std::uint32_t seed = 0;
};

// One-vs-rest linear SVM trained by per-example subgradient descent on the
// weighted hinge loss with L2 decay. Per-sample weights follow the balanced
// rule: weight(k) = n_samples / (7 * count_k).
class LinearSvm {
public:
    LinearSvm() = default;

    static LinearSvm fit(const std::vector<SparseVector>& rows, const std::vector<int>& labels,
                         int dim, const SvmConfig& config);

    // Deterministic model selection over an L2 grid by validation accuracy
    // (ties break toward the smaller lambda).
    static LinearSvm fit_with_selection(const std::vector<SparseVector>& train_rows,
                                        const std::vector<int>& train_labels,
                                        const std::vector<SparseVector>& val_rows,
                                        const std::vector<int>& val_labels, int dim,
                                        const SvmConfig& base,
                                        const std::vector<double>& lambda_grid);

    int predict(const SparseVector& row) const;  // argmax margin, ties -> lowest code
    ScoreVector margins(const SparseVector& row) const;

    int dim() const { return dim_; }
    const std::vector<std::vector<double>>& weights() const { return w_; }
    const std::vector<double>& biases() const { return b_; }
    double selected_lambda() const { return lambda_; }

    static std::vector<double> balanced_class_weights(const std::vector<int>& labels);

    static LinearSvm from_parts(std::vector<std::vector<double>> w, std::vector<double> b,
                                double lambda);

private:
    int dim_ = 0;
    double lambda_ = 0.0;
    std::vector<std::vector<double>> w_;  // [7][dim]
    std::vector<double> b_;               // [7]
};

} // namespace sectlabel

#endif
