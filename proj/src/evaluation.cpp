#include "sectlabel/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sectlabel/errors.hpp"

namespace sectlabel {

void ConfusionMatrix::add(int gold, int predicted) {
    if (gold < 0 || gold >= kNumLabels || predicted < 0 || predicted >= kNumLabels)
        throw DataError("confusion matrix label code out of range");
    ++counts[static_cast<std::size_t>(gold)][static_cast<std::size_t>(predicted)];
}

long ConfusionMatrix::total() const {
    long n = 0;
    for (const auto& row : counts)
        for (long c : row) n += c;
    return n;
}

long ConfusionMatrix::trace() const {
    long n = 0;
    for (int i = 0; i < kNumLabels; ++i)
        n += counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    return n;
}

MetricsReport score(const std::vector<int>& predictions, const std::vector<int>& gold) {
    if (predictions.size() != gold.size())
        throw DataError("predictions and gold labels differ in length");
    if (predictions.empty()) throw DataError("nothing to score");

    MetricsReport report;
    for (std::size_t i = 0; i < gold.size(); ++i)
        report.confusion.add(gold[i], predictions[i]);

    const auto& m = report.confusion.counts;
    report.accuracy = static_cast<double>(report.confusion.trace()) /
                      static_cast<double>(report.confusion.total());

    double f1_sum = 0.0;
    for (int k = 0; k < kNumLabels; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        long tp = m[ks][ks], fp = 0, fn = 0;
        for (int j = 0; j < kNumLabels; ++j) {
            if (j == k) continue;
            fp += m[static_cast<std::size_t>(j)][ks];
            fn += m[ks][static_cast<std::size_t>(j)];
        }
        ClassMetrics& c = report.per_class[ks];
        c.support = tp + fn;
        c.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        c.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        c.f1 = (c.precision + c.recall) > 0.0
                   ? 2.0 * c.precision * c.recall / (c.precision + c.recall)
                   : 0.0;
        f1_sum += c.f1;
    }
    report.macro_f1 = f1_sum / kNumLabels;

    for (int i = 0; i < kNumLabels; ++i) {
        const auto is = static_cast<std::size_t>(i);
        long row_total = 0;
        for (long c : m[is]) row_total += c;
        for (int j = 0; j < kNumLabels; ++j)
            report.percent[is][static_cast<std::size_t>(j)] =
                row_total > 0 ? 100.0 * static_cast<double>(m[is][static_cast<std::size_t>(j)]) /
                                    static_cast<double>(row_total)
                              : 0.0;
    }
    return report;
}

void print_report(std::ostream& out, const MetricsReport& report) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "accuracy %.4f  macro-F1 %.4f  (n=%ld)\n",
                  report.accuracy, report.macro_f1, report.confusion.total());
    out << buf;
    out << "\nper-class precision/recall/F1:\n";
    for (int k = 0; k < kNumLabels; ++k) {
        const auto& c = report.per_class[static_cast<std::size_t>(k)];
        std::snprintf(buf, sizeof(buf), "  %-11s P %.3f  R %.3f  F1 %.3f  (n=%ld)\n",
                      to_string(label_from_code(k)), c.precision, c.recall, c.f1, c.support);
        out << buf;
    }
    out << "\nconfusion matrix (rows = true, cols = predicted, %):\n            ";
    for (int j = 0; j < kNumLabels; ++j) {
        std::snprintf(buf, sizeof(buf), "%10.10s", to_string(label_from_code(j)));
        out << buf;
    }
    out << '\n';
    for (int i = 0; i < kNumLabels; ++i) {
        std::snprintf(buf, sizeof(buf), "  %-10s", to_string(label_from_code(i)));
        out << buf;
        for (int j = 0; j < kNumLabels; ++j) {
            std::snprintf(buf, sizeof(buf), "%10.1f",
                          report.percent[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            out << buf;
        }
        out << '\n';
    }
}

std::string report_to_json(const MetricsReport& report) {
    nlohmann::json j;
    j["accuracy"] = report.accuracy;
    j["macro_f1"] = report.macro_f1;
    j["total"] = report.confusion.total();
    for (int k = 0; k < kNumLabels; ++k) {
        const auto& c = report.per_class[static_cast<std::size_t>(k)];
        nlohmann::json cls;
        cls["precision"] = c.precision;
        cls["recall"] = c.recall;
        cls["f1"] = c.f1;
        cls["support"] = c.support;
        j["per_class"][to_string(label_from_code(k))] = cls;
    }
    for (int i = 0; i < kNumLabels; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j2 = 0; j2 < kNumLabels; ++j2)
            row.push_back(report.confusion.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j2)]);
        j["confusion"].push_back(row);
    }
    return j.dump(2);
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
    if (values.empty()) throw DataError("mean_std over empty vector");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

CrossValResult summarize_folds(const std::vector<double>& accuracy,
                               const std::vector<double>& macro_f1) {
    if (accuracy.size() != macro_f1.size()) throw DataError("fold metric lengths differ");
    CrossValResult r;
    r.folds = static_cast<int>(accuracy.size());
    r.fold_accuracy = accuracy;
    r.fold_macro_f1 = macro_f1;
    std::tie(r.accuracy_mean, r.accuracy_std) = mean_std(accuracy);
    std::tie(r.macro_f1_mean, r.macro_f1_std) = mean_std(macro_f1);
    return r;
}

std::string format_mean_std(double mean, double std) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f%% \xC2\xB1 %.1f%%", 100.0 * mean, 100.0 * std);
    return buf;
}

std::string format_cross_val(const CrossValResult& result) {
    std::ostringstream out;
    out << result.folds << "-fold cross-validation: accuracy "
        << format_mean_std(result.accuracy_mean, result.accuracy_std) << ", macro-F1 "
        << format_mean_std(result.macro_f1_mean, result.macro_f1_std);
    return out.str();
}

std::string cross_val_to_json(const CrossValResult& result) {
    nlohmann::json j;
    j["folds"] = result.folds;
    j["fold_accuracy"] = result.fold_accuracy;
    j["fold_macro_f1"] = result.fold_macro_f1;
    j["accuracy_mean"] = result.accuracy_mean;
    j["accuracy_std"] = result.accuracy_std;
    j["macro_f1_mean"] = result.macro_f1_mean;
    j["macro_f1_std"] = result.macro_f1_std;
    return j.dump(2);
}

} // namespace sectlabel
