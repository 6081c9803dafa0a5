#ifndef SECTLABEL_TENSOR_HPP
#define SECTLABEL_TENSOR_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sectlabel/errors.hpp"

namespace sectlabel {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <typename S>
using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;

// Named view over one parameter tensor and its gradient buffer. Layers own
// the storage; optimizers, serialization and grad checking walk these views.
template <typename S>
struct ParamView {
    std::string name;
    S* value = nullptr;
    S* grad = nullptr;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;

    Eigen::Index size() const { return rows * cols; }
};

template <typename S>
long param_count(const std::vector<ParamView<S>>& params) {
    long n = 0;
    for (const auto& p : params) n += static_cast<long>(p.size());
    return n;
}

template <typename S>
void zero_grads(const std::vector<ParamView<S>>& params) {
    for (const auto& p : params)
        for (Eigen::Index i = 0; i < p.size(); ++i) p.grad[i] = S(0);
}

template <typename S>
void set_params_zero(const std::vector<ParamView<S>>& params) {
    for (const auto& p : params)
        for (Eigen::Index i = 0; i < p.size(); ++i) p.value[i] = S(0);
}

template <typename S>
std::vector<std::vector<S>> snapshot_params(const std::vector<ParamView<S>>& params) {
    std::vector<std::vector<S>> snap;
    snap.reserve(params.size());
    for (const auto& p : params) snap.emplace_back(p.value, p.value + p.size());
    return snap;
}

template <typename S>
void restore_params(const std::vector<ParamView<S>>& params,
                    const std::vector<std::vector<S>>& snap) {
    if (snap.size() != params.size())
        throw DataError("parameter snapshot does not match the model");
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (static_cast<Eigen::Index>(snap[k].size()) != params[k].size())
            throw DataError("parameter snapshot shape mismatch for " + params[k].name);
        for (Eigen::Index i = 0; i < params[k].size(); ++i) params[k].value[i] = snap[k][static_cast<std::size_t>(i)];
    }
}

template <typename S>
void scale_grads(const std::vector<ParamView<S>>& params, double factor) {
    for (const auto& p : params)
        for (Eigen::Index i = 0; i < p.size(); ++i)
            p.grad[i] = static_cast<S>(static_cast<double>(p.grad[i]) * factor);
}

template <typename S>
double global_grad_norm(const std::vector<ParamView<S>>& params) {
    double sq = 0.0;  // 64-bit accumulation
    for (const auto& p : params)
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            const double g = static_cast<double>(p.grad[i]);
            sq += g * g;
        }
    return std::sqrt(sq);
}

// Returns the pre-clip norm.
template <typename S>
double clip_gradients(const std::vector<ParamView<S>>& params, double max_norm) {
    const double norm = global_grad_norm(params);
    if (max_norm > 0.0 && norm > max_norm) scale_grads(params, max_norm / norm);
    return norm;
}

// FNV-1a over the raw parameter bytes; used to assert base models stay
// frozen across stacker fine-tuning.
template <typename S>
std::uint64_t params_hash(const std::vector<ParamView<S>>& params) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& p : params) {
        const auto* bytes = reinterpret_cast<const unsigned char*>(p.value);
        const std::size_t n = static_cast<std::size_t>(p.size()) * sizeof(S);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    }
    return h;
}

template <typename S>
void fill_uniform(Mat<S>& m, std::mt19937& rng, double limit) {
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = static_cast<S>(dist(rng));
}

template <typename S>
void glorot_init(Mat<S>& m, std::mt19937& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    fill_uniform(m, rng, limit);
}

} // namespace sectlabel

#endif
