#include "sectlabel/stacking.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "sectlabel/errors.hpp"

namespace sectlabel {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_inputs(const std::vector<StackingInput>& inputs, const std::vector<int>& labels) {
    if (inputs.empty()) throw DataError("degenerate stacking set: no rows");
    if (inputs.size() != labels.size())
        throw DataError("stacking inputs and labels differ in length");
    std::set<int> classes;
    for (int y : labels) {
        if (y < 0 || y >= kNumLabels)
            throw DataError("stacking label out of range: " + std::to_string(y));
        classes.insert(y);
    }
    if (classes.size() < 2) throw DataError("degenerate stacking set: single class");
    for (const StackingInput& x : inputs) {
        for (int block = 0; block < 3; ++block) {
            double sum = 0.0;
            for (int i = 0; i < kNumLabels; ++i) {
                const double v = x[static_cast<std::size_t>(block * kNumLabels + i)];
                if (!(v >= 0.0 && v <= 1.0))
                    throw DataError("stacking input entry outside [0,1]");
                sum += v;
            }
            if (std::abs(sum - 1.0) > 1e-6)
                throw DataError("stacking input block does not sum to 1");
        }
    }
}

// Minimizes mean logistic loss + (lambda/2)||w||^2 for one binary problem,
// starting from the weights passed in.
void descend_binary(const std::vector<StackingInput>& inputs, const std::vector<char>& positive,
                    const StackerConfig& cfg, Eigen::Ref<Eigen::RowVectorXd> w, double& b) {
    const auto n = static_cast<double>(inputs.size());
    Eigen::RowVectorXd grad_w(kStackingDim);
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        grad_w.setZero();
        double grad_b = 0.0;
        for (std::size_t r = 0; r < inputs.size(); ++r) {
            double z = b;
            for (int j = 0; j < kStackingDim; ++j)
                z += w[j] * inputs[r][static_cast<std::size_t>(j)];
            const double err = sigmoid(z) - (positive[r] ? 1.0 : 0.0);
            for (int j = 0; j < kStackingDim; ++j)
                grad_w[j] += err * inputs[r][static_cast<std::size_t>(j)];
            grad_b += err;
        }
        grad_w /= n;
        grad_b /= n;
        grad_w += cfg.lambda * w;

        const double norm = std::sqrt(grad_w.squaredNorm() + grad_b * grad_b);
        if (norm <= cfg.grad_tol) break;
        w -= cfg.learning_rate * grad_w;
        b -= cfg.learning_rate * grad_b;
    }
}

StackerModel fit_from(StackerModel model, const std::vector<StackingInput>& inputs,
                      const std::vector<int>& labels, const StackerConfig& cfg) {
    check_inputs(inputs, labels);
    for (int k = 0; k < kNumLabels; ++k) {
        std::vector<char> positive(inputs.size());
        for (std::size_t r = 0; r < inputs.size(); ++r) positive[r] = labels[r] == k ? 1 : 0;
        double b = model.b[k];
        descend_binary(inputs, positive, cfg, model.w.row(k), b);
        model.b[k] = b;
    }
    return model;
}

} // namespace

StackingInput make_stacking_input(const ProbVector& focus, const ProbVector& surrounding,
                                  const ProbVector& layout) {
    if (!focus.valid() || !surrounding.valid() || !layout.valid())
        throw DataError("stacking input built from an invalid probability vector");
    StackingInput x{};
    for (int i = 0; i < kNumLabels; ++i) {
        x[static_cast<std::size_t>(i)] = focus[i];
        x[static_cast<std::size_t>(kNumLabels + i)] = surrounding[i];
        x[static_cast<std::size_t>(2 * kNumLabels + i)] = layout[i];
    }
    return x;
}

StackerModel fit_stacker(const std::vector<StackingInput>& inputs,
                         const std::vector<int>& labels, const StackerConfig& config) {
    return fit_from(StackerModel{}, inputs, labels, config);
}

StackerModel finetune_stacker(const StackerModel& model,
                              const std::vector<StackingInput>& inputs,
                              const std::vector<int>& labels, const StackerConfig& config,
                              const std::string& dataset_id) {
    StackerModel tuned = fit_from(model, inputs, labels, config);
    tuned.finetuned = true;
    tuned.finetuned_dataset = dataset_id;
    return tuned;
}

std::pair<SectionLabel, ScoreVector> predict_stacker(const StackerModel& model,
                                                     const StackingInput& input) {
    ScoreVector scores{};
    for (int k = 0; k < kNumLabels; ++k) {
        double z = model.b[k];
        for (int j = 0; j < kStackingDim; ++j)
            z += model.w(k, j) * input[static_cast<std::size_t>(j)];
        scores[static_cast<std::size_t>(k)] = sigmoid(z);
    }
    return {label_from_code(argmax_score(scores)), scores};
}

ProbVector normalize_scores(const ScoreVector& scores) {
    double sum = 0.0;
    for (double s : scores) sum += s;
    ProbVector out;
    if (sum <= 0.0) return ProbVector::uniform();
    for (int i = 0; i < kNumLabels; ++i) out[i] = scores[static_cast<std::size_t>(i)] / sum;
    return out;
}

WeightReport ensemble_weight_report(const StackerModel& model) {
    WeightReport report{};
    for (int k = 0; k < kNumLabels; ++k)
        for (int block = 0; block < 3; ++block) {
            double sum = 0.0;
            for (int i = 0; i < kNumLabels; ++i)
                sum += std::abs(model.w(k, block * kNumLabels + i));
            report[static_cast<std::size_t>(k)][static_cast<std::size_t>(block)] =
                sum / kNumLabels;
        }
    return report;
}

std::string format_weight_report(const WeightReport& report) {
    std::ostringstream out;
    out << "class        focus  surrounding  layout\n";
    for (int k = 0; k < kNumLabels; ++k) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-11s %6.3f %12.3f %7.3f\n",
                      to_string(label_from_code(k)), report[static_cast<std::size_t>(k)][0],
                      report[static_cast<std::size_t>(k)][1], report[static_cast<std::size_t>(k)][2]);
        out << line;
    }
    return out.str();
}

} // namespace sectlabel
