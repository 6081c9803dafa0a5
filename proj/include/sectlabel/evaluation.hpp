#ifndef SECTLABEL_EVALUATION_HPP
#define SECTLABEL_EVALUATION_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "sectlabel/core.hpp"

namespace sectlabel {

struct ConfusionMatrix {
    // counts[true][predicted]
    std::array<std::array<long, kNumLabels>, kNumLabels> counts{};

    void add(int gold, int predicted);
    long total() const;
    long trace() const;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    long support = 0;
};

struct MetricsReport {
    ConfusionMatrix confusion;
    double accuracy = 0.0;
    double macro_f1 = 0.0;  // unweighted mean over all 7 classes, 0/0 -> 0
    std::array<ClassMetrics, kNumLabels> per_class{};
    // Row-normalized percentages; a nonzero row sums to 100 within 0.01.
    std::array<std::array<double, kNumLabels>, kNumLabels> percent{};
};

MetricsReport score(const std::vector<int>& predictions, const std::vector<int>& gold);

void print_report(std::ostream& out, const MetricsReport& report);
std::string report_to_json(const MetricsReport& report);

struct CrossValResult {
    int folds = 0;
    std::vector<double> fold_accuracy;
    std::vector<double> fold_macro_f1;
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0;  // population std
    double macro_f1_mean = 0.0;
    double macro_f1_std = 0.0;
};

// mean and population standard deviation
std::pair<double, double> mean_std(const std::vector<double>& values);

CrossValResult summarize_folds(const std::vector<double>& accuracy,
                               const std::vector<double>& macro_f1);

// "97.0% ± 0.2%"-style rendering.
std::string format_mean_std(double mean, double std);
std::string format_cross_val(const CrossValResult& result);
std::string cross_val_to_json(const CrossValResult& result);

} // namespace sectlabel

#endif
