// Copyright 2026 The TacticScan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tacticscan/error.hpp"

namespace tacticscan {

/// Rows are the true class, columns the prediction. Integer counts for a
/// single fold; double for entry-wise averages across folds.
template <typename Scalar>
struct BasicConfusionMatrix {
    using Counts = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    std::vector<std::string> labels;
    Counts counts;

    BasicConfusionMatrix() = default;
    explicit BasicConfusionMatrix(std::vector<std::string> class_labels)
        : labels(std::move(class_labels)),
          counts(Counts::Zero(static_cast<Eigen::Index>(labels.size()),
                              static_cast<Eigen::Index>(labels.size()))) {}

    std::size_t size() const { return labels.size(); }

    void add(std::size_t truth, std::size_t predicted, Scalar n = Scalar(1)) {
        counts(static_cast<Eigen::Index>(truth), static_cast<Eigen::Index>(predicted)) += n;
    }

    Scalar true_positives(std::size_t c) const {
        return counts(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
    }
    Scalar false_positives(std::size_t c) const {
        return counts.col(static_cast<Eigen::Index>(c)).sum() - true_positives(c);
    }
    Scalar false_negatives(std::size_t c) const {
        return counts.row(static_cast<Eigen::Index>(c)).sum() - true_positives(c);
    }
};

using ConfusionMatrix = BasicConfusionMatrix<std::int64_t>;
using AveragedConfusionMatrix = BasicConfusionMatrix<double>;

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

/// Harmonic mean of precision and recall; 0 when both are 0.
inline double f_measure(double precision, double recall) {
    return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

/// Per-class precision, recall and F; a zero denominator yields 0.
template <typename Scalar>
std::vector<ClassMetrics> prf(const BasicConfusionMatrix<Scalar>& m) {
    std::vector<ClassMetrics> out(m.size());
    for (std::size_t c = 0; c < m.size(); ++c) {
        const double tp = static_cast<double>(m.true_positives(c));
        const double fp = static_cast<double>(m.false_positives(c));
        const double fn = static_cast<double>(m.false_negatives(c));
        auto& r = out[c];
        r.precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
        r.recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
        r.f_measure = f_measure(r.precision, r.recall);
    }
    return out;
}

/// Entry-wise mean of per-fold matrices sharing one label set.
inline AveragedConfusionMatrix average(const std::vector<ConfusionMatrix>& folds) {
    if (folds.empty()) throw Error("average of no confusion matrices");
    AveragedConfusionMatrix out(folds.front().labels);
    for (const auto& f : folds) {
        if (f.labels != out.labels) throw Error("confusion matrices with different labels");
        out.counts += f.counts.template cast<double>();
    }
    out.counts /= static_cast<double>(folds.size());
    return out;
}

}  // namespace tacticscan
