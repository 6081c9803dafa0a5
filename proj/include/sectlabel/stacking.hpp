#ifndef SECTLABEL_STACKING_HPP
#define SECTLABEL_STACKING_HPP

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "sectlabel/core.hpp"

namespace sectlabel {

constexpr int kStackingDim = 3 * kNumLabels;  // focus | surrounding | layout

// Concatenated base-model probabilities in fixed block order.
using StackingInput = std::array<double, kStackingDim>;

StackingInput make_stacking_input(const ProbVector& focus, const ProbVector& surrounding,
                                  const ProbVector& layout);

// One-vs-rest logistic regression over the 21 stacked probabilities:
// score_k = sigmoid(w_k . x + b_k), prediction = argmax_k (ties -> lowest
// label code).
struct StackerModel {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(kNumLabels, kStackingDim);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(kNumLabels);
    bool finetuned = false;
    std::string finetuned_dataset;
};

struct StackerConfig {
    double lambda = 1e-4;       // L2 on weights (bias unregularized)
    double learning_rate = 1.0; // safe: loss gradient is < 1-Lipschitz on probability blocks
    int max_iters = 5000;
    double grad_tol = 1e-6;
};

// Full-batch gradient descent per binary problem, from zero weights.
// Throws DataError on an empty or single-class holdout.
StackerModel fit_stacker(const std::vector<StackingInput>& inputs,
                         const std::vector<int>& labels, const StackerConfig& config = {});

// Continues gradient descent from the current weights on the new holdout
// only; base models are untouched by construction.
StackerModel finetune_stacker(const StackerModel& model,
                              const std::vector<StackingInput>& inputs,
                              const std::vector<int>& labels, const StackerConfig& config = {},
                              const std::string& dataset_id = "");

std::pair<SectionLabel, ScoreVector> predict_stacker(const StackerModel& model,
                                                     const StackingInput& input);

// Renormalized OvR scores, for reporting only (the decision rule stays argmax
// over raw sigmoid scores).
ProbVector normalize_scores(const ScoreVector& scores);

// 7x3 table of mean |weight| per (class, base-model block).
using WeightReport = std::array<std::array<double, 3>, kNumLabels>;
WeightReport ensemble_weight_report(const StackerModel& model);

std::string format_weight_report(const WeightReport& report);

} // namespace sectlabel

#endif
