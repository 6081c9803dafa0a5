#ifndef SECTLABEL_BUNDLE_HPP
#define SECTLABEL_BUNDLE_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sectlabel/baselines.hpp"
#include "sectlabel/models.hpp"
#include "sectlabel/stacking.hpp"

namespace sectlabel {

// ---- binary tensor container ----
// magic "SLTNSR01" | u32 tensor count | per tensor:
//   u32 name length, name bytes (UTF-8),
//   u32 rows, u32 cols,
//   rows*cols little-endian 32-bit floats in row-major order.
struct NamedTensor {
    std::string name;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<float> data;  // row-major
};

void write_tensor_container(std::ostream& out, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> read_tensor_container(std::istream& in, const std::string& origin);

// ---- model bundle ----
// magic "SLBNDL01" | u64 JSON header length | JSON header | tensor container.
// The header carries the vocabulary, architecture configs, rules and flags;
// the container carries every parameter tensor. Loading refuses bundles whose
// layout-feature version differs from this build's.
struct ModelBundle {
    Vocabulary vocab;
    int embedding_dim = 0;
    bool embedding_trainable = false;

    FocusConfig focus_config;
    SurroundingConfig surrounding_config;
    LayoutConfig layout_config;
    LayoutOptions layout_options;
    RuleSet rules;

    std::unique_ptr<FocusModel<float>> focus;
    std::unique_ptr<SurroundingModel<float>> surrounding;
    std::unique_ptr<LayoutModel<float>> layout;
    std::unique_ptr<MergedModel<float>> merged;

    StackerModel stacker;
    TfidfVectorizer tfidf;
    LinearSvm svm;

    nlohmann::json meta;  // free-form provenance (seed, corpus, ...)

    void save(const std::string& path);
    static ModelBundle load(const std::string& path);

    // Combined hash over the four neural models' parameters; the stacker is
    // excluded so fine-tuning can assert the bases are untouched.
    std::uint64_t base_params_hash();
};

} // namespace sectlabel

#endif
