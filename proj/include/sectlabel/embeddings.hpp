#ifndef SECTLABEL_EMBEDDINGS_HPP
#define SECTLABEL_EMBEDDINGS_HPP

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sectlabel/errors.hpp"
#include "sectlabel/preprocess.hpp"
#include "sectlabel/tensor.hpp"

namespace sectlabel {

// Word-vector table aligned with a Vocabulary: row id = token id. Row 0 (PAD)
// is all zeros and never receives gradient, so it stays zero through training.
template <typename S>
struct EmbeddingTable {
    int dim = 0;
    bool trainable = false;
    Mat<S> vectors;  // [vocab_size x dim]
    Mat<S> grad;     // same shape; allocated when trainable

    static EmbeddingTable random_init(const Vocabulary& vocab, int dim, std::uint32_t seed,
                                      bool trainable = true) {
        if (dim <= 0) throw DataError("embedding dim must be positive");
        EmbeddingTable t;
        t.dim = dim;
        t.trainable = trainable;
        t.vectors = Mat<S>::Zero(vocab.size(), dim);
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> dist(-0.05, 0.05);
        for (int id = 1; id < vocab.size(); ++id)  // row 0 stays zero
            for (int j = 0; j < dim; ++j) t.vectors(id, j) = static_cast<S>(dist(rng));
        if (trainable) t.grad = Mat<S>::Zero(vocab.size(), dim);
        return t;
    }

    Mat<S> embed(const std::vector<int>& ids) const {
        Mat<S> out(static_cast<Eigen::Index>(ids.size()), dim);
        for (std::size_t t = 0; t < ids.size(); ++t) {
            if (ids[t] < 0 || ids[t] >= vectors.rows())
                throw DataError("token id out of embedding range: " + std::to_string(ids[t]));
            out.row(static_cast<Eigen::Index>(t)) = vectors.row(ids[t]);
        }
        return out;
    }

    // Scatter-add of the sequence gradient. PAD contributions are dropped so
    // the zero row is invariant under any number of updates.
    void accumulate_grad(const std::vector<int>& ids, const Mat<S>& dseq) {
        if (!trainable) return;
        for (std::size_t t = 0; t < ids.size(); ++t)
            if (ids[t] != kPadId)
                grad.row(ids[t]) += dseq.row(static_cast<Eigen::Index>(t));
    }

    ParamView<S> param_view(const std::string& name) {
        return {name, vectors.data(), trainable ? grad.data() : nullptr,
                vectors.rows(), vectors.cols()};
    }
};

template <typename S>
Mat<S> embed(const std::vector<int>& ids, const EmbeddingTable<S>& table) {
    return table.embed(ids);
}

// Standard text vector format: one `token v1 ... vd` line per token. Vocab
// tokens missing from the file get a seeded uniform vector in [-0.05, 0.05];
// UNK gets the mean of every vector the file provided; PAD stays zero.
template <typename S>
EmbeddingTable<S> load_embeddings(const std::string& path, const Vocabulary& vocab,
                                  std::uint32_t seed = 0) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read embedding file: " + path);

    EmbeddingTable<S> table;
    table.trainable = false;

    std::vector<char> seen(static_cast<std::size_t>(vocab.size()), 0);
    std::vector<double> mean;
    std::size_t loaded = 0;
    int dim = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string token;
        ss >> token;
        if (token.empty()) continue;
        std::vector<double> values;
        double v;
        while (ss >> v) values.push_back(v);
        if (dim < 0) {
            if (values.empty())
                throw FormatError(path + ":" + std::to_string(line_no) + ": no vector values");
            dim = static_cast<int>(values.size());
            table.dim = dim;
            table.vectors = Mat<S>::Zero(vocab.size(), dim);
            mean.assign(static_cast<std::size_t>(dim), 0.0);
        }
        if (static_cast<int>(values.size()) != dim)
            throw FormatError(path + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(dim) + " values, got " +
                              std::to_string(values.size()));
        ++loaded;
        for (int j = 0; j < dim; ++j) mean[static_cast<std::size_t>(j)] += values[static_cast<std::size_t>(j)];
        if (vocab.contains(token)) {
            const int id = vocab.id_of(token);
            if (id >= 2 && !seen[static_cast<std::size_t>(id)]) {
                for (int j = 0; j < dim; ++j)
                    table.vectors(id, j) = static_cast<S>(values[static_cast<std::size_t>(j)]);
                seen[static_cast<std::size_t>(id)] = 1;
            }
        }
    }
    if (dim < 0) throw FormatError(path + ": embedding file contains no vectors");

    // UNK = mean of all loaded vectors.
    for (int j = 0; j < dim; ++j)
        table.vectors(kUnkId, j) = static_cast<S>(mean[static_cast<std::size_t>(j)] / static_cast<double>(loaded));

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-0.05, 0.05);
    for (int id = 2; id < vocab.size(); ++id) {
        if (seen[static_cast<std::size_t>(id)]) continue;
        for (int j = 0; j < dim; ++j) table.vectors(id, j) = static_cast<S>(dist(rng));
    }
    return table;
}

} // namespace sectlabel

#endif
