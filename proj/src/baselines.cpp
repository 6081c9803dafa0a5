#include "sectlabel/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "sectlabel/errors.hpp"
#include "sectlabel/preprocess.hpp"

namespace sectlabel {

namespace {

std::vector<std::string> unigrams(const std::string& sentence) {
    std::vector<std::string> out;
    std::string cleaned = clean_text(sentence);
    std::transform(cleaned.begin(), cleaned.end(), cleaned.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() && cleaned[i] == ' ') ++i;
        std::size_t j = i;
        while (j < cleaned.size() && cleaned[j] != ' ') ++j;
        if (j > i) out.push_back(cleaned.substr(i, j - i));
        i = j;
    }
    return out;
}

} // namespace

TfidfVectorizer TfidfVectorizer::fit(const std::vector<std::string>& sentences) {
    if (sentences.empty()) throw DataError("empty corpus for tf-idf fit");
    std::map<std::string, long> df;  // ordered: stable token ids
    for (const std::string& s : sentences) {
        std::set<std::string> seen;
        for (const std::string& tok : unigrams(s)) seen.insert(tok);
        for (const std::string& tok : seen) ++df[tok];
    }

    TfidfVectorizer v;
    const double n = static_cast<double>(sentences.size());
    for (const auto& [tok, count] : df) {
        v.index_.emplace(tok, static_cast<int>(v.tokens_.size()));
        v.tokens_.push_back(tok);
        v.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return v;
}

SparseVector TfidfVectorizer::transform(const std::string& sentence) const {
    std::map<int, double> tf;
    for (const std::string& tok : unigrams(sentence)) {
        auto it = index_.find(tok);
        if (it != index_.end()) tf[it->second] += 1.0;
    }
    SparseVector row;
    double sq = 0.0;
    for (const auto& [idx, count] : tf) {
        const double w = count * idf_[static_cast<std::size_t>(idx)];
        row.emplace_back(idx, w);
        sq += w * w;
    }
    if (sq > 0.0) {
        const double inv = 1.0 / std::sqrt(sq);
        for (auto& [idx, w] : row) w *= inv;
    }
    return row;
}

TfidfVectorizer TfidfVectorizer::from_parts(std::vector<std::string> tokens,
                                            std::vector<double> idf) {
    if (tokens.size() != idf.size()) throw DataError("tf-idf tokens/idf size mismatch");
    TfidfVectorizer v;
    v.tokens_ = std::move(tokens);
    v.idf_ = std::move(idf);
    for (std::size_t i = 0; i < v.tokens_.size(); ++i)
        v.index_.emplace(v.tokens_[i], static_cast<int>(i));
    return v;
}

std::vector<double> LinearSvm::balanced_class_weights(const std::vector<int>& labels) {
    std::array<long, kNumLabels> counts{};
    for (int y : labels) ++counts[static_cast<std::size_t>(y)];
    long present = 0;
    for (long c : counts)
        if (c > 0) ++present;
    // balanced rule over the classes actually present, so that
    // sum_k count_k * weight_k == n_samples; with all 7 classes present this
    // is n / (7 * count_k).
    std::vector<double> weights(kNumLabels, 0.0);
    for (int k = 0; k < kNumLabels; ++k)
        if (counts[static_cast<std::size_t>(k)] > 0)
            weights[static_cast<std::size_t>(k)] =
                static_cast<double>(labels.size()) /
                (static_cast<double>(present) *
                 static_cast<double>(counts[static_cast<std::size_t>(k)]));
    return weights;
}

LinearSvm LinearSvm::fit(const std::vector<SparseVector>& rows, const std::vector<int>& labels,
                         int dim, const SvmConfig& config) {
    if (rows.empty()) throw DataError("empty training set for svm");
    if (rows.size() != labels.size()) throw DataError("svm rows/labels size mismatch");
    std::set<int> classes(labels.begin(), labels.end());
    if (classes.size() < 2) throw DataError("svm training set has a single class");

    LinearSvm svm;
    svm.dim_ = dim;
    svm.lambda_ = config.lambda;
    svm.w_.assign(kNumLabels, std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    svm.b_.assign(kNumLabels, 0.0);

    const std::vector<double> class_weight = balanced_class_weights(labels);
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937 rng(config.seed);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t r : order) {
            const SparseVector& x = rows[r];
            const double cw = class_weight[static_cast<std::size_t>(labels[r])];
            for (int k = 0; k < kNumLabels; ++k) {
                auto& w = svm.w_[static_cast<std::size_t>(k)];
                const double y = labels[r] == k ? 1.0 : -1.0;
                double margin = svm.b_[static_cast<std::size_t>(k)];
                for (const auto& [idx, v] : x) margin += w[static_cast<std::size_t>(idx)] * v;
                // L2 decay on every visit, hinge subgradient when violated.
                const double decay = 1.0 - config.learning_rate * config.lambda;
                for (double& wi : w) wi *= decay;
                if (y * margin < 1.0) {
                    const double step = config.learning_rate * cw * y;
                    for (const auto& [idx, v] : x) w[static_cast<std::size_t>(idx)] += step * v;
                    svm.b_[static_cast<std::size_t>(k)] += step;
                }
            }
        }
    }
    return svm;
}

LinearSvm LinearSvm::fit_with_selection(const std::vector<SparseVector>& train_rows,
                                        const std::vector<int>& train_labels,
                                        const std::vector<SparseVector>& val_rows,
                                        const std::vector<int>& val_labels, int dim,
                                        const SvmConfig& base,
                                        const std::vector<double>& lambda_grid) {
    if (lambda_grid.empty()) return fit(train_rows, train_labels, dim, base);

    LinearSvm best;
    double best_acc = -1.0;
    for (double lambda : lambda_grid) {
        SvmConfig cfg = base;
        cfg.lambda = lambda;
        LinearSvm candidate = fit(train_rows, train_labels, dim, cfg);
        long correct = 0;
        for (std::size_t i = 0; i < val_rows.size(); ++i)
            if (candidate.predict(val_rows[i]) == val_labels[i]) ++correct;
        const double acc = val_rows.empty()
                               ? 0.0
                               : static_cast<double>(correct) / static_cast<double>(val_rows.size());
        if (acc > best_acc) {
            best_acc = acc;
            best = std::move(candidate);
        }
    }
    return best;
}

ScoreVector LinearSvm::margins(const SparseVector& row) const {
    ScoreVector out{};
    for (int k = 0; k < kNumLabels; ++k) {
        double margin = b_[static_cast<std::size_t>(k)];
        for (const auto& [idx, v] : row)
            margin += w_[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx)] * v;
        out[static_cast<std::size_t>(k)] = margin;
    }
    return out;
}

int LinearSvm::predict(const SparseVector& row) const {
    return argmax_score(margins(row));
}

LinearSvm LinearSvm::from_parts(std::vector<std::vector<double>> w, std::vector<double> b,
                                double lambda) {
    if (w.size() != kNumLabels || b.size() != kNumLabels)
        throw DataError("svm weights must have 7 rows");
    LinearSvm svm;
    svm.dim_ = w.empty() ? 0 : static_cast<int>(w.front().size());
    svm.lambda_ = lambda;
    svm.w_ = std::move(w);
    svm.b_ = std::move(b);
    return svm;
}

} // namespace sectlabel
