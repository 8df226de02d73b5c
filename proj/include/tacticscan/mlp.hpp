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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "tacticscan/embedding.hpp"

namespace tacticscan {

inline constexpr int kMlpSchemaVersion = 1;

/// Numerically stable softmax of a logit vector (or of each column).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
softmax(const Eigen::MatrixBase<Derived>& logits) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> out =
        logits.eval();
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        auto col = out.col(c);
        col.array() = (col.array() - col.maxCoeff()).exp();
        col /= col.sum();
    }
    return out;
}

/// One hidden ReLU layer and a softmax output:
/// p = softmax(W2^T relu(W1^T x + b1) + b2).
struct MlpModel {
    Eigen::MatrixXd W1;  // D x H
    Eigen::VectorXd b1;  // H
    Eigen::MatrixXd W2;  // H x C
    Eigen::VectorXd b2;  // C
    std::vector<std::string> class_labels;
    std::string backend_name;

    std::size_t input_dim() const { return static_cast<std::size_t>(W1.rows()); }
    std::size_t hidden_units() const { return static_cast<std::size_t>(W1.cols()); }
    std::size_t classes() const { return static_cast<std::size_t>(W2.cols()); }

    /// Throws Error unless shapes agree, C >= 2 and every parameter is finite.
    void validate() const;
};

struct MlpGradients {
    Eigen::MatrixXd W1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd W2;
    Eigen::VectorXd b2;
    double loss = 0.0;
};

enum class Optimizer { Sgd, Adam };

struct TrainConfig {
    std::size_t epochs = 200;
    std::size_t batch_size = 16;
    double learning_rate = 1e-2;
    std::uint64_t seed = 42;
    std::size_t hidden_units = 32;
    Optimizer optimizer = Optimizer::Adam;

    /// Training the head alone on frozen representations.
    static TrainConfig head_only() { return {}; }
    /// Settings used when fine-tuning a full encoder: 10 epochs, batch 16, 2e-5.
    static TrainConfig fine_tune() { return {10, 16, 2e-5, 42, 32, Optimizer::Adam}; }
    /// "head-only" or "fine-tune".
    static TrainConfig preset(std::string_view name);

    void validate() const;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

/// Class probabilities for one input. Throws DimensionMismatch.
Eigen::VectorXd mlp_forward(const Eigen::Ref<const Eigen::VectorXd>& x, const MlpModel& model);

/// Mean cross-entropy and its gradients over the columns of X.
MlpGradients mlp_gradients(const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& X,
                           std::span<const std::size_t> labels);

double mlp_loss(const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& X,
                std::span<const std::size_t> labels);

/// Glorot-uniform weights, zero biases.
MlpModel mlp_init(std::size_t input_dim, std::size_t hidden_units,
                  std::vector<std::string> class_labels, std::uint64_t seed);

struct MlpTrainResult {
    MlpModel model;
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

/// Mini-batch training on mean cross-entropy with a seeded shuffle per
/// epoch. The returned parameters are those of the epoch with the lowest
/// full training loss, so final_loss <= initial_loss. Throws Error naming
/// any class without examples.
MlpTrainResult mlp_train(std::span<const EmbeddingVector> reps, std::span<const std::size_t> labels,
                         std::vector<std::string> class_labels, const TrainConfig& config,
                         std::string backend_name = {});

/// Largest relative error between analytic gradients and central finite
/// differences (step 1e-5) over every parameter, for one sample. The
/// relative error is |a - n| / max(|a|, |n|, 1e-6).
double mlp_grad_check(const MlpModel& model, const Eigen::Ref<const Eigen::VectorXd>& sample,
                      std::size_t label);

struct MlpPrediction {
    std::size_t index = 0;
    std::string label;
    double probability = 0.0;
    Eigen::VectorXd probabilities;
};

/// Argmax of the probabilities; ties go to the lowest class index.
MlpPrediction mlp_predict(const Eigen::Ref<const Eigen::VectorXd>& representation,
                          const MlpModel& model);

MlpPrediction mlp_predict(const TokenSequence& tokens, const EmbeddingBackend& backend,
                          const MlpModel& model, std::size_t window_size = kDefaultWindowSize);

void to_json(nlohmann::json& j, const MlpModel& m);
void from_json(const nlohmann::json& j, MlpModel& m);

}  // namespace tacticscan
