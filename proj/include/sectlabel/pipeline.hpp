#ifndef SECTLABEL_PIPELINE_HPP
#define SECTLABEL_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sectlabel/bundle.hpp"
#include "sectlabel/config.hpp"
#include "sectlabel/corpus_io.hpp"
#include "sectlabel/evaluation.hpp"

namespace sectlabel {

// Deterministic seed derivation so every component draws from its own stream.
std::uint32_t derive_seed(std::uint32_t master, std::string_view tag);

struct PipelineConfig {
    std::array<double, 3> ratios{0.8, 0.1, 0.1};  // train / stacking holdout / test
    double val_fraction = 0.1;                    // report-level early-stopping split
    int min_count = 1;
    int embedding_dim = 50;
    std::string embedding_path;      // empty -> random init, trained end-to-end
    int embedding_trainable = -1;    // -1 auto: frozen when loaded, trainable otherwise
    std::string rules = "mgb";       // header rules for layout features
    LayoutOptions layout_options;
    TrainConfig context_train;       // focus + surrounding (30 epochs, patience 5)
    TrainConfig layout_train;        // 600 epochs, patience 200
    TrainConfig merged_train;
    SvmConfig svm;
    std::vector<double> svm_lambda_grid{1e-5, 1e-4, 1e-3, 1e-2};
    StackerConfig stacker;
    std::uint32_t seed = 0;
    int threads = 3;

    PipelineConfig() {
        context_train.max_epochs = 30;
        context_train.patience = 5;
        merged_train = context_train;
        layout_train.max_epochs = 600;
        layout_train.patience = 200;
        layout_train.batch_size = 32;
    }
};

PipelineConfig pipeline_config_from(const Config& config);

enum class System {
    Stacking,
    Merged,
    Focus,
    Surrounding,
    Layout,
    Svm,
    RulesMgb,
    RulesMimic,
};

std::optional<System> parse_system(const std::string& name);
const char* to_string(System system);
const std::vector<System>& all_systems();

struct TrainOutcome {
    ModelBundle bundle;
    TrainHistory focus_history, surrounding_history, layout_history, merged_history;
    // Per-system metrics on the internal test split (empty when ratios leave
    // no test part).
    std::vector<std::pair<System, MetricsReport>> test_metrics;
};

// The full workflow: report-level splitting, vocabulary + embeddings, the
// three base models (on up to cfg.threads worker threads) plus the merged
// and SVM baselines, then the stacker on the holdout split.
TrainOutcome train_pipeline(const std::vector<LabeledReport>& corpus,
                            const PipelineConfig& cfg, std::ostream* log = nullptr);

// Per-sentence predicted label codes for one report under the given system.
// Rules systems ignore the bundle (it may be null for them).
std::vector<int> predict_labels(const ModelBundle* bundle, System system, const Report& report);

MetricsReport evaluate_system(const ModelBundle* bundle, System system,
                              const std::vector<LabeledReport>& data);

// Base-model probability triples for the stacker; labels_out receives the
// gold codes aligned with the returned rows.
std::vector<StackingInput> stacking_inputs(const ModelBundle& bundle,
                                           const std::vector<LabeledReport>& data,
                                           std::vector<int>* labels_out = nullptr);

// Report-level k-fold cross-validation of the stacking ensemble, retraining
// the full pipeline per fold. Deterministic under seed.
CrossValResult cross_validate(const std::vector<LabeledReport>& corpus,
                              const PipelineConfig& cfg, int k, std::uint32_t seed,
                              std::ostream* log = nullptr);

} // namespace sectlabel

#endif
