#ifndef SECTLABEL_GRAD_CHECK_SUITE_HPP
#define SECTLABEL_GRAD_CHECK_SUITE_HPP

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "sectlabel/models.hpp"

namespace sectlabel {

struct GradCheckCase {
    std::string name;
    double max_rel_error = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

namespace detail {

inline SentenceExample random_example(std::mt19937& rng, int vocab_size, int max_len) {
    std::uniform_int_distribution<int> len(1, max_len);
    std::uniform_int_distribution<int> id(0, vocab_size - 1);
    std::uniform_int_distribution<int> label(0, kNumLabels - 1);
    std::uniform_real_distribution<float> frac(0.0f, 1.0f);
    std::uniform_int_distribution<int> coin(0, 1);

    SentenceExample ex;
    auto fill = [&](std::vector<int>& ids) {
        const int n = len(rng);
        for (int i = 0; i < n; ++i) ids.push_back(id(rng));
    };
    fill(ex.focus_ids);
    fill(ex.prev_ids);
    fill(ex.next_ids);
    ex.layout[0] = frac(rng);
    ex.layout[1] = frac(rng);
    ex.layout[2] = frac(rng);
    for (int i = 3; i < 9; ++i)
        ex.layout[static_cast<std::size_t>(i)] = coin(rng) ? 2.0f : frac(rng) * 2.0f - 1.0f;
    for (int i = 9; i < 15; ++i) ex.layout[static_cast<std::size_t>(i)] = static_cast<float>(coin(rng));
    ex.layout[15] = frac(rng);
    ex.layout[16] = static_cast<float>(coin(rng));
    ex.label = label(rng);
    return ex;
}

inline std::shared_ptr<EmbeddingTable<double>> random_table(std::mt19937& rng, int vocab_size,
                                                            int dim) {
    auto table = std::make_shared<EmbeddingTable<double>>();
    table->dim = dim;
    table->trainable = true;
    table->vectors = Mat<double>::Zero(vocab_size, dim);
    table->grad = Mat<double>::Zero(vocab_size, dim);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int r = 1; r < vocab_size; ++r)
        for (int c = 0; c < dim; ++c) table->vectors(r, c) = u(rng);
    return table;
}

} // namespace detail

// Randomized gradient verification over double-precision instantiations of
// the real architectures: dense stacks (layout) against 1e-4, Bi-LSTM stacks
// (focus and surrounding, embeddings included) against 1e-3.
inline std::vector<GradCheckCase> run_grad_check_suite(int n_dense, int n_recurrent,
                                                       std::uint32_t seed) {
    std::vector<GradCheckCase> cases;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> small(3, 24);
    std::uniform_int_distribution<int> units(2, 12);
    std::uniform_int_distribution<int> dims(2, 8);
    std::uniform_int_distribution<int> n_samples(1, 3);

    for (int i = 0; i < n_dense; ++i) {
        LayoutConfig cfg;
        cfg.fc1 = small(rng);
        cfg.fc2 = small(rng);
        LayoutModel<double> model(cfg, rng());
        std::vector<SentenceExample> samples;
        const int n = n_samples(rng);
        for (int s = 0; s < n; ++s) samples.push_back(detail::random_example(rng, 8, 5));
        GradCheckCase c;
        c.name = "dense-" + std::to_string(i) + " (" + std::to_string(cfg.fc1) + "-" +
                 std::to_string(cfg.fc2) + ")";
        c.threshold = 1e-4;
        c.max_rel_error = grad_check(model, samples, 1e-5, 4, rng());
        c.passed = c.max_rel_error < c.threshold;
        cases.push_back(std::move(c));
    }

    for (int i = 0; i < n_recurrent; ++i) {
        const int vocab_size = 10;
        const int dim = dims(rng);
        auto table = detail::random_table(rng, vocab_size, dim);
        std::vector<SentenceExample> samples;
        const int n = n_samples(rng);
        for (int s = 0; s < n; ++s) samples.push_back(detail::random_example(rng, vocab_size, 6));

        GradCheckCase c;
        c.threshold = 1e-3;
        if (i % 2 == 0) {
            FocusConfig cfg;
            cfg.lstm_units = units(rng);
            cfg.fc1 = small(rng);
            cfg.fc2 = small(rng);
            cfg.fc3 = small(rng);
            FocusModel<double> model(table, cfg, rng());
            c.name = "bilstm-focus-" + std::to_string(i) + " (u" +
                     std::to_string(cfg.lstm_units) + ", d" + std::to_string(dim) + ")";
            c.max_rel_error = grad_check(model, samples, 1e-5, 4, rng());
        } else {
            SurroundingConfig cfg;
            cfg.focus_units = units(rng);
            cfg.neighbor_units = units(rng);
            cfg.fc1 = small(rng);
            cfg.fc2 = small(rng);
            SurroundingModel<double> model(table, cfg, rng());
            c.name = "bilstm-surrounding-" + std::to_string(i) + " (u" +
                     std::to_string(cfg.focus_units) + "/" + std::to_string(cfg.neighbor_units) +
                     ", d" + std::to_string(dim) + ")";
            c.max_rel_error = grad_check(model, samples, 1e-5, 4, rng());
        }
        c.passed = c.max_rel_error < c.threshold;
        cases.push_back(std::move(c));
    }
    return cases;
}

} // namespace sectlabel

#endif
