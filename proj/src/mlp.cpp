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

#include "tacticscan/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tacticscan/error.hpp"
#include "tacticscan/random.hpp"

namespace tacticscan {

namespace {

std::vector<double> row_major(const Eigen::MatrixXd& m) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    return out;
}

Eigen::MatrixXd from_row_major(const std::vector<double>& v, std::size_t rows, std::size_t cols,
                               const char* name) {
    if (v.size() != rows * cols)
        throw ParseError(std::string(name) + ": expected " + std::to_string(rows * cols) +
                         " values, got " + std::to_string(v.size()));
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r * cols + c];
    return m;
}

void check_input(const MlpModel& model, Eigen::Index rows) {
    if (rows != model.W1.rows())
        throw DimensionMismatch("input dimension " + std::to_string(rows) + " != model D " +
                                std::to_string(model.W1.rows()));
}

// Every parameter in a fixed order, for finite differences and optimizers.
template <typename Params, typename Fn>
void for_each_block(Params& p, Fn&& fn) {
    fn(p.W1.data(), p.W1.size());
    fn(p.b1.data(), p.b1.size());
    fn(p.W2.data(), p.W2.size());
    fn(p.b2.data(), p.b2.size());
}

}  // namespace

void MlpModel::validate() const {
    if (W1.cols() != b1.size() || W2.rows() != W1.cols() || W2.cols() != b2.size())
        throw Error("inconsistent MLP parameter shapes");
    if (W2.cols() < 2) throw Error("MLP needs at least two classes");
    if (class_labels.size() != static_cast<std::size_t>(W2.cols()))
        throw Error("MLP class label count does not match output layer");
    if (!W1.allFinite() || !b1.allFinite() || !W2.allFinite() || !b2.allFinite())
        throw Error("MLP parameters must be finite");
}

TrainConfig TrainConfig::preset(std::string_view name) {
    if (name == "head-only") return head_only();
    if (name == "fine-tune") return fine_tune();
    throw Error("unknown train preset '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
    if (epochs < 1) throw Error("epochs must be >= 1");
    if (batch_size < 1) throw Error("batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw Error("learning_rate must be > 0");
    if (hidden_units < 1) throw Error("hidden_units must be >= 1");
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
    j = nlohmann::json{{"epochs", c.epochs},
                       {"batch_size", c.batch_size},
                       {"learning_rate", c.learning_rate},
                       {"seed", c.seed},
                       {"hidden_units", c.hidden_units},
                       {"optimizer", c.optimizer == Optimizer::Adam ? "adam" : "sgd"}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.seed = j.value("seed", c.seed);
    c.hidden_units = j.value("hidden_units", c.hidden_units);
    if (j.contains("optimizer")) {
        const auto name = j["optimizer"].get<std::string>();
        if (name == "adam") c.optimizer = Optimizer::Adam;
        else if (name == "sgd") c.optimizer = Optimizer::Sgd;
        else throw Error("unknown optimizer '" + name + "'");
    }
    c.validate();
}

Eigen::VectorXd mlp_forward(const Eigen::Ref<const Eigen::VectorXd>& x, const MlpModel& model) {
    check_input(model, x.size());
    const Eigen::VectorXd hidden = (model.W1.transpose() * x + model.b1).cwiseMax(0.0);
    return softmax(model.W2.transpose() * hidden + model.b2);
}

MlpGradients mlp_gradients(const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& X,
                           std::span<const std::size_t> labels) {
    check_input(model, X.rows());
    const auto n = X.cols();
    if (static_cast<std::size_t>(n) != labels.size() || n == 0)
        throw Error("mlp_gradients: sample/label count mismatch");

    const Eigen::MatrixXd Z1 = (model.W1.transpose() * X).colwise() + model.b1;
    const Eigen::MatrixXd H = Z1.cwiseMax(0.0);
    const Eigen::MatrixXd P = softmax((model.W2.transpose() * H).colwise() + model.b2);

    MlpGradients g;
    Eigen::MatrixXd dZ2 = P;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto y = static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)]);
        g.loss -= std::log(std::max(P(y, i), std::numeric_limits<double>::min()));
        dZ2(y, i) -= 1.0;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    g.loss *= inv_n;
    dZ2 *= inv_n;

    g.W2 = H * dZ2.transpose();
    g.b2 = dZ2.rowwise().sum();
    const Eigen::MatrixXd dZ1 = ((model.W2 * dZ2).array() * (Z1.array() > 0.0).cast<double>()).matrix();
    g.W1 = X * dZ1.transpose();
    g.b1 = dZ1.rowwise().sum();
    return g;
}

double mlp_loss(const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& X,
                std::span<const std::size_t> labels) {
    check_input(model, X.rows());
    const Eigen::MatrixXd H = ((model.W1.transpose() * X).colwise() + model.b1).cwiseMax(0.0);
    const Eigen::MatrixXd P = softmax((model.W2.transpose() * H).colwise() + model.b2);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < X.cols(); ++i)
        loss -= std::log(std::max(P(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)]), i),
                                  std::numeric_limits<double>::min()));
    return loss / static_cast<double>(X.cols());
}

MlpModel mlp_init(std::size_t input_dim, std::size_t hidden_units,
                  std::vector<std::string> class_labels, std::uint64_t seed) {
    const auto D = static_cast<Eigen::Index>(input_dim);
    const auto H = static_cast<Eigen::Index>(hidden_units);
    const auto C = static_cast<Eigen::Index>(class_labels.size());
    Rng rng(seed);
    auto glorot = [&](Eigen::Index fan_in, Eigen::Index fan_out) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Eigen::MatrixXd m(fan_in, fan_out);
        // Filled column by column, matching Eigen's storage order.
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform_real(-limit, limit);
        return m;
    };
    MlpModel m;
    m.W1 = glorot(D, H);
    m.b1 = Eigen::VectorXd::Zero(H);
    m.W2 = glorot(H, C);
    m.b2 = Eigen::VectorXd::Zero(C);
    m.class_labels = std::move(class_labels);
    return m;
}

MlpTrainResult mlp_train(std::span<const EmbeddingVector> reps, std::span<const std::size_t> labels,
                         std::vector<std::string> class_labels, const TrainConfig& config,
                         std::string backend_name) {
    config.validate();
    if (reps.size() != labels.size()) throw Error("mlp_train: reps/labels size mismatch");
    if (class_labels.size() < 2) throw Error("mlp_train: need at least two classes");
    if (reps.empty()) throw Error("mlp_train: no training data");
    std::vector<std::size_t> counts(class_labels.size(), 0);
    for (auto y : labels) {
        if (y >= class_labels.size()) throw Error("mlp_train: label index out of range");
        ++counts[y];
    }
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] == 0) throw Error("mlp_train: class '" + class_labels[c] + "' has no examples");

    const auto D = reps.front().size();
    const auto n = static_cast<Eigen::Index>(reps.size());
    Eigen::MatrixXd X(D, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = reps[static_cast<std::size_t>(i)];
        if (r.size() != D) throw DimensionMismatch("mlp_train: inconsistent representation sizes");
        X.col(i) = r;
    }

    Rng rng(config.seed);
    MlpModel model = mlp_init(static_cast<std::size_t>(D), config.hidden_units,
                              std::move(class_labels), rng.next());
    model.backend_name = std::move(backend_name);

    MlpTrainResult result;
    result.initial_loss = mlp_loss(model, X, labels);
    result.final_loss = result.initial_loss;
    MlpModel best = model;

    // Adam state, one buffer per parameter block.
    MlpGradients m1{Eigen::MatrixXd::Zero(model.W1.rows(), model.W1.cols()),
                    Eigen::VectorXd::Zero(model.b1.size()),
                    Eigen::MatrixXd::Zero(model.W2.rows(), model.W2.cols()),
                    Eigen::VectorXd::Zero(model.b2.size()), 0.0};
    MlpGradients m2 = m1;
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::size_t step = 0;

    std::vector<std::size_t> order(reps.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Eigen::MatrixXd batch;
    std::vector<std::size_t> batch_labels;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            batch.resize(D, static_cast<Eigen::Index>(end - start));
            batch_labels.clear();
            for (std::size_t k = start; k < end; ++k) {
                batch.col(static_cast<Eigen::Index>(k - start)) = X.col(static_cast<Eigen::Index>(order[k]));
                batch_labels.push_back(labels[order[k]]);
            }
            MlpGradients g = mlp_gradients(model, batch, batch_labels);
            ++step;
            if (config.optimizer == Optimizer::Sgd) {
                model.W1 -= config.learning_rate * g.W1;
                model.b1 -= config.learning_rate * g.b1;
                model.W2 -= config.learning_rate * g.W2;
                model.b2 -= config.learning_rate * g.b2;
                continue;
            }
            const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
            auto update = [&](auto& param, auto& grad, auto& mom, auto& vel) {
                mom = beta1 * mom + (1.0 - beta1) * grad;
                vel = beta2 * vel + (1.0 - beta2) * grad.cwiseProduct(grad);
                param.array() -= config.learning_rate * (mom.array() / c1) /
                                 ((vel.array() / c2).sqrt() + eps);
            };
            update(model.W1, g.W1, m1.W1, m2.W1);
            update(model.b1, g.b1, m1.b1, m2.b1);
            update(model.W2, g.W2, m1.W2, m2.W2);
            update(model.b2, g.b2, m1.b2, m2.b2);
        }
        const double loss = mlp_loss(model, X, labels);
        if (loss < result.final_loss) {
            result.final_loss = loss;
            best = model;
        }
    }
    result.model = std::move(best);
    result.model.validate();
    return result;
}

double mlp_grad_check(const MlpModel& model, const Eigen::Ref<const Eigen::VectorXd>& sample,
                      std::size_t label) {
    const std::size_t labels[] = {label};
    const Eigen::MatrixXd X = sample;
    const MlpGradients analytic = mlp_gradients(model, X, labels);

    constexpr double h = 1e-5;
    MlpModel probe = model;
    MlpGradients numeric = analytic;
    std::vector<double*> probe_blocks;
    std::vector<double*> numeric_blocks;
    std::vector<Eigen::Index> sizes;
    for_each_block(probe, [&](double* p, Eigen::Index n) {
        probe_blocks.push_back(p);
        sizes.push_back(n);
    });
    for_each_block(numeric, [&](double* p, Eigen::Index) { numeric_blocks.push_back(p); });

    for (std::size_t b = 0; b < probe_blocks.size(); ++b) {
        for (Eigen::Index i = 0; i < sizes[b]; ++i) {
            double& w = probe_blocks[b][i];
            const double saved = w;
            w = saved + h;
            const double up = mlp_loss(probe, X, labels);
            w = saved - h;
            const double down = mlp_loss(probe, X, labels);
            w = saved;
            numeric_blocks[b][i] = (up - down) / (2.0 * h);
        }
    }

    double worst = 0.0;
    MlpGradients a = analytic;
    std::vector<const double*> analytic_blocks;
    for_each_block(a, [&](double* p, Eigen::Index) { analytic_blocks.push_back(p); });
    for (std::size_t b = 0; b < analytic_blocks.size(); ++b) {
        for (Eigen::Index i = 0; i < sizes[b]; ++i) {
            const double ga = analytic_blocks[b][i];
            const double gn = numeric_blocks[b][i];
            const double denom = std::max({std::abs(ga), std::abs(gn), 1e-6});
            worst = std::max(worst, std::abs(ga - gn) / denom);
        }
    }
    return worst;
}

MlpPrediction mlp_predict(const Eigen::Ref<const Eigen::VectorXd>& representation,
                          const MlpModel& model) {
    MlpPrediction out;
    out.probabilities = mlp_forward(representation, model);
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < out.probabilities.size(); ++c)
        if (out.probabilities[c] > out.probabilities[best]) best = c;
    out.index = static_cast<std::size_t>(best);
    out.label = model.class_labels.at(out.index);
    out.probability = out.probabilities[best];
    return out;
}

MlpPrediction mlp_predict(const TokenSequence& tokens, const EmbeddingBackend& backend,
                          const MlpModel& model, std::size_t window_size) {
    return mlp_predict(represent(tokens, backend, window_size), model);
}

void to_json(nlohmann::json& j, const MlpModel& m) {
    j = nlohmann::json{{"schema_version", kMlpSchemaVersion},
                       {"backend_name", m.backend_name},
                       {"D", m.input_dim()},
                       {"H", m.hidden_units()},
                       {"class_labels", m.class_labels},
                       {"W1", row_major(m.W1)},
                       {"b1", std::vector<double>(m.b1.data(), m.b1.data() + m.b1.size())},
                       {"W2", row_major(m.W2)},
                       {"b2", std::vector<double>(m.b2.data(), m.b2.data() + m.b2.size())}};
}

void from_json(const nlohmann::json& j, MlpModel& m) {
    const int version = j.at("schema_version").get<int>();
    if (version != kMlpSchemaVersion)
        throw ParseError("unsupported MLP schema_version " + std::to_string(version));
    const auto D = j.at("D").get<std::size_t>();
    const auto H = j.at("H").get<std::size_t>();
    m.backend_name = j.at("backend_name").get<std::string>();
    m.class_labels = j.at("class_labels").get<std::vector<std::string>>();
    const auto C = m.class_labels.size();
    m.W1 = from_row_major(j.at("W1").get<std::vector<double>>(), D, H, "W1");
    m.b1 = from_row_major(j.at("b1").get<std::vector<double>>(), H, 1, "b1");
    m.W2 = from_row_major(j.at("W2").get<std::vector<double>>(), H, C, "W2");
    m.b2 = from_row_major(j.at("b2").get<std::vector<double>>(), C, 1, "b2");
    m.validate();
}

}  // namespace tacticscan
