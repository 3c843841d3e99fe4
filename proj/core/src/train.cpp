// Copyright 2026 The qcnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcnn/train.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "qcnn/checkpoint.hpp"
#include "qcnn/errors.hpp"
#include "qcnn/grad.hpp"
#include "qcnn/report.hpp"

namespace qcnn::train {
namespace {

std::vector<double> widen(std::span<const float> v) {
    return {v.begin(), v.end()};
}

/// Forward-pass products kept for the backward sweep.
struct SampleWork {
    nn::HeadCache cache;
    std::vector<double> raw;
    std::vector<double> latent;
    std::optional<qsim::Statevector> state;
    nn::ClassVector logits{};
    double loss = 0.0;
    nn::ClassVector d_logits{};
    circuit::Readout d_readout{};
    grad::GradientVector grad;
    std::string error;
};

void forward_sample(const Model &model, const circuit::QcnnParams &qparams,
                    const nn::HeadParams &head, std::span<const double> feature,
                    std::size_t label, const data::ClassWeights &weights,
                    SampleWork &w) {
    w.raw = nn::project(feature, head, &w.cache);
    w.latent = nn::rescale_latent(w.raw);
    w.state.emplace(model.qcnn().run(w.latent, qparams));
    const circuit::Readout readout = model.qcnn().readout(*w.state);
    w.logits = nn::mlp_forward(readout, head, &w.cache);
    const nn::LossResult lr = nn::weighted_cross_entropy(w.logits, label, weights);
    w.loss = lr.loss;
    w.d_logits = lr.d_logits;
}

void quantum_backward(const Model &model, const circuit::QcnnParams &qparams,
                      GradMethod method, SampleWork &w) {
    if (method == GradMethod::Adjoint) {
        w.grad = grad::adjoint(model.qcnn(), w.latent, qparams, w.d_readout,
                               &*w.state);
    } else {
        w.grad = grad::parameter_shift(model.qcnn(), w.latent, qparams,
                                       w.d_readout);
    }
}

std::vector<double> latent_to_raw_grad(const SampleWork &w) {
    std::vector<double> d_raw(w.raw.size());
    for (std::size_t j = 0; j < d_raw.size(); ++j) {
        d_raw[j] = w.grad.d_latent[j] * nn::rescale_derivative(w.raw[j]);
    }
    return d_raw;
}

std::string batch_dump(std::size_t batch_index, std::span<const std::size_t> idx,
                       const data::FeatureSet &set,
                       std::span<const SampleWork> work) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite loss in batch " << batch_index << '\n';
    for (std::size_t s = 0; s < idx.size(); ++s) {
        const auto &rec = set.records[idx[s]];
        os << "  sample " << rec.id << " label "
           << data::label_name(rec.label) << " loss " << work[s].loss
           << " logits [";
        for (std::size_t c = 0; c < nn::kNumClasses; ++c) {
            os << (c ? ", " : "") << work[s].logits[c];
        }
        os << ']';
        if (!work[s].error.empty()) {
            os << " error: " << work[s].error;
        }
        os << '\n';
    }
    return os.str();
}

void check_compatible(const TrainConfig &a, const TrainConfig &b) {
    if (a.qubits != b.qubits) {
        throw ConfigError("checkpoint was trained with " +
                          std::to_string(b.qubits) + " qubits, config asks for " +
                          std::to_string(a.qubits));
    }
    if (a.batch != b.batch || a.n_max != b.n_max || a.seed != b.seed ||
        a.lr != b.lr || a.grad != b.grad || a.freeze_head != b.freeze_head) {
        throw ConfigError(
            "resume config differs from the checkpoint (batch, nmax, seed, lr, "
            "grad and freeze-head must match)");
    }
}

} // namespace

std::string_view grad_method_name(GradMethod m) {
    return m == GradMethod::Adjoint ? "adjoint" : "shift";
}

GradMethod parse_grad_method(std::string_view name) {
    if (name == "adjoint") {
        return GradMethod::Adjoint;
    }
    if (name == "shift") {
        return GradMethod::Shift;
    }
    throw ConfigError("unknown gradient method '" + std::string(name) +
                      "' (expected adjoint or shift)");
}

circuit::QcnnConfig TrainConfig::circuit_config() const {
    return circuit::QcnnConfig::for_qubits(qubits);
}

nn::HeadShape TrainConfig::head_shape(std::size_t feature_dim) const {
    nn::HeadShape s;
    s.feature_dim = feature_dim;
    s.latent = latent_dim();
    return s;
}

void TrainConfig::validate() const {
    if (qubits != 8 && qubits != 12) {
        throw ConfigError("qubits must be 8 or 12");
    }
    if (!(lr >= 0.0) || !std::isfinite(lr)) {
        throw ConfigError("learning rate must be finite and nonnegative");
    }
    if (batch == 0 || epochs == 0 || n_max == 0) {
        throw ConfigError("batch, epochs and nmax must be positive");
    }
    if (threads == 0) {
        throw ConfigError("threads must be positive");
    }
    augment.validate();
}

TrainState::TrainState(const TrainConfig &cfg, std::size_t feature_dim)
    : qparams(cfg.circuit_config()), head(cfg.head_shape(feature_dim)),
      adam_quantum(qparams.size(), nn::AdamConfig{.lr = cfg.lr}),
      adam_head(cfg.freeze_head ? head.size() - head.mlp_offset() : head.size(),
                nn::AdamConfig{.lr = cfg.lr}),
      rng(cfg.seed) {}

TrainState init_state(const TrainConfig &cfg, std::size_t feature_dim) {
    cfg.validate();
    TrainState st(cfg, feature_dim);
    st.head = nn::init_head(cfg.head_shape(feature_dim), st.rng);
    std::uniform_real_distribution<double> angle(-0.1, 0.1);
    for (auto &v : st.qparams.values()) {
        v = angle(st.rng);
    }
    return st;
}

Model::Model(const TrainConfig &cfg) : qcnn_(cfg.circuit_config()) {}

nn::ClassVector predict(const Model &model, const circuit::QcnnParams &qparams,
                        const nn::HeadParams &head,
                        std::span<const double> feature) {
    const auto latent = nn::rescale_latent(nn::project(feature, head));
    const auto state = model.qcnn().run(latent, qparams);
    return nn::mlp_forward(model.qcnn().readout(state), head);
}

double sample_loss(const Model &model, const circuit::QcnnParams &qparams,
                   const nn::HeadParams &head, std::span<const double> feature,
                   std::size_t label, const data::ClassWeights &weights) {
    return nn::weighted_cross_entropy(predict(model, qparams, head, feature),
                                      label, weights)
        .loss;
}

SampleGradient sample_gradient(const Model &model,
                               const circuit::QcnnParams &qparams,
                               const nn::HeadParams &head,
                               std::span<const double> feature,
                               std::size_t label,
                               const data::ClassWeights &weights,
                               GradMethod method) {
    SampleWork w;
    forward_sample(model, qparams, head, feature, label, weights, w);
    SampleGradient out{w.loss, w.logits, {}, nn::HeadParams(head.shape())};
    w.d_readout = nn::mlp_backward(w.cache, w.d_logits, head, out.d_head);
    quantum_backward(model, qparams, method, w);
    nn::project_backward(w.cache, latent_to_raw_grad(w), head, out.d_head);
    out.d_qparams = std::move(w.grad.d_params);
    return out;
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)> &fn) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto &t : pool) {
        t.join();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

EpochResult train_epoch(const Model &model, TrainState &state,
                        const data::FeatureSet &train,
                        const data::ClassWeights &weights,
                        const TrainConfig &cfg) {
    if (train.records.empty()) {
        throw ConfigError("training set is empty");
    }
    if (train.dim != state.head.shape().feature_dim) {
        throw ConfigError("training features have dim " +
                          std::to_string(train.dim) + ", model expects " +
                          std::to_string(state.head.shape().feature_dim));
    }
    const auto labels = train.labels();
    const auto plan =
        data::SamplerPlan::inverse_frequency(labels, cfg.n_max, state.rng());
    const auto order = data::weighted_sample(plan, labels);

    nn::HeadParams head_grad(state.head.shape());
    std::vector<double> q_grad(state.qparams.size());
    std::vector<SampleWork> work(cfg.batch);
    std::vector<std::vector<double>> features(cfg.batch);
    const std::size_t frozen = cfg.freeze_head ? state.head.mlp_offset() : 0;

    EpochResult res;
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
        const std::size_t b = std::min(cfg.batch, order.size() - start);
        const std::span<const std::size_t> idx(order.data() + start, b);
        for (std::size_t s = 0; s < b; ++s) {
            features[s] = widen(train.records[idx[s]].values);
            work[s].error.clear();
        }
        parallel_for(b, cfg.threads, [&](std::size_t s) {
            try {
                forward_sample(model, state.qparams, state.head, features[s],
                               data::index_of(train.records[idx[s]].label),
                               weights, work[s]);
            } catch (const NumericError &e) {
                work[s].loss = std::numeric_limits<double>::quiet_NaN();
                work[s].error = e.what();
            }
        });
        for (std::size_t s = 0; s < b; ++s) {
            if (!std::isfinite(work[s].loss)) {
                throw NumericError(batch_dump(start / cfg.batch, idx, train,
                                              {work.data(), b}));
            }
        }

        head_grad.fill(0.0);
        std::fill(q_grad.begin(), q_grad.end(), 0.0);
        for (std::size_t s = 0; s < b; ++s) {
            work[s].d_readout = nn::mlp_backward(work[s].cache, work[s].d_logits,
                                                 state.head, head_grad);
        }
        parallel_for(b, cfg.threads, [&](std::size_t s) {
            quantum_backward(model, state.qparams, cfg.grad, work[s]);
        });
        // Serial, in sample order, so the sum is independent of threads.
        for (std::size_t s = 0; s < b; ++s) {
            if (!cfg.freeze_head) {
                nn::project_backward(work[s].cache, latent_to_raw_grad(work[s]),
                                     state.head, head_grad);
            }
            for (std::size_t k = 0; k < q_grad.size(); ++k) {
                q_grad[k] += work[s].grad.d_params[k];
            }
            loss_sum += work[s].loss;
            if (metrics::argmax(work[s].logits) ==
                data::index_of(train.records[idx[s]].label)) {
                ++correct;
            }
        }
        const double inv = 1.0 / static_cast<double>(b);
        for (auto &g : q_grad) {
            g *= inv;
        }
        auto hg = head_grad.values();
        for (auto &g : hg) {
            g *= inv;
        }
        nn::adam_step(state.qparams.values(), q_grad, state.adam_quantum);
        nn::adam_step(state.head.values().subspan(frozen), hg.subspan(frozen),
                      state.adam_head);
        ++res.steps;
    }
    res.loss = loss_sum / static_cast<double>(order.size());
    res.accuracy =
        static_cast<double>(correct) / static_cast<double>(order.size());
    return res;
}

EvalResult evaluate(const Model &model, const TrainState &state,
                    const data::FeatureSet &set,
                    const data::ClassWeights &weights, std::size_t threads) {
    if (set.records.empty()) {
        throw ConfigError("evaluation set is empty");
    }
    if (set.dim != state.head.shape().feature_dim) {
        throw ConfigError("evaluation features have dim " +
                          std::to_string(set.dim) + ", model expects " +
                          std::to_string(state.head.shape().feature_dim));
    }
    const std::size_t n = set.records.size();
    std::vector<nn::ClassVector> logits(n);
    parallel_for(n, threads, [&](std::size_t i) {
        logits[i] = predict(model, state.qparams, state.head,
                            widen(set.records[i].values));
    });
    EvalResult out;
    metrics::Confusion conf{};
    double loss = 0.0;
    out.predictions.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t truth = data::index_of(set.records[i].label);
        out.predictions[i] = metrics::argmax(logits[i]);
        ++conf[truth][out.predictions[i]];
        loss += nn::weighted_cross_entropy(logits[i], truth, weights).loss;
    }
    out.loss = loss / static_cast<double>(n);
    out.metrics = metrics::compute_metrics(conf);
    if (out.metrics.micro_precision != out.metrics.accuracy ||
        out.metrics.micro_recall != out.metrics.accuracy) {
        throw NumericError("micro precision/recall disagree with accuracy");
    }
    return out;
}

FitResult fit(const TrainConfig &cfg, const data::FeatureSet &train,
              const data::FeatureSet &val, const data::FeatureSet &test,
              const FitOptions &options) {
    cfg.validate();
    for (const auto *set : {&train, &val, &test}) {
        if (set->records.empty()) {
            throw ConfigError("train, validation and test sets must be nonempty");
        }
        if (set->dim != train.dim) {
            throw ConfigError("feature dims differ between splits");
        }
    }
    const auto weights = data::class_weights(train.labels());
    const Model model(cfg);
    namespace fs = std::filesystem;
    fs::create_directories(options.out_dir);
    const fs::path best_path = options.out_dir / kBestCheckpoint;
    const fs::path last_path = options.out_dir / kLastCheckpoint;

    Checkpoint ckpt{cfg, train.dim, weights, TrainState(cfg, train.dim)};
    if (options.resume) {
        Checkpoint prev = load_checkpoint(*options.resume);
        check_compatible(cfg, prev.config);
        if (prev.feature_dim != train.dim) {
            throw ConfigError("checkpoint feature dim " +
                              std::to_string(prev.feature_dim) +
                              " does not match the feature files");
        }
        ckpt.state = std::move(prev.state);
        const fs::path prev_best = options.resume->parent_path() / kBestCheckpoint;
        if (ckpt.state.best_epoch > 0 && !fs::exists(best_path)) {
            if (!fs::exists(prev_best)) {
                throw std::runtime_error("best checkpoint missing next to " +
                                         options.resume->string());
            }
            fs::copy_file(prev_best, best_path);
        }
    } else {
        ckpt.state = init_state(cfg, train.dim);
    }
    TrainState &st = ckpt.state;

    FitResult result;
    while (st.epoch < cfg.epochs) {
        if (options.stop_after != 0 && st.epoch >= options.stop_after) {
            return result;
        }
        EpochResult er;
        try {
            er = train_epoch(model, st, train, weights, cfg);
        } catch (const NumericError &e) {
            report::write_text(options.out_dir / "nonfinite_batch.txt", e.what());
            throw;
        }
        const EvalResult ev = evaluate(model, st, val, weights, cfg.threads);
        ++st.epoch;
        EpochStats stats{st.epoch,       er.loss, er.accuracy, ev.loss,
                         ev.metrics.accuracy, er.steps};
        st.history.push_back(stats);
        if (stats.val_acc > st.best_val_acc) {
            st.best_val_acc = stats.val_acc;
            st.best_epoch = st.epoch;
            save_checkpoint(best_path, ckpt);
        }
        save_checkpoint(last_path, ckpt);
        if (options.on_epoch) {
            options.on_epoch(stats);
        }
    }

    const Checkpoint best = load_checkpoint(best_path);
    result.completed = true;
    result.best_epoch = st.best_epoch;
    result.test = evaluate(model, best.state, test, weights, cfg.threads);
    report::write_text(options.out_dir / report::kCurvesCsv,
                       report::curves_csv(st.history));
    report::write_text(options.out_dir / report::kConfusionCsv,
                       report::confusion_csv(result.test.metrics.confusion));
    report::write_text(options.out_dir / report::kMetricsJson,
                       report::metrics_json(result.test.metrics,
                                            result.test.loss, cfg,
                                            st.best_epoch));
    report::plot_curves(options.out_dir / report::kCurvesPng, st.history);
    report::plot_confusion(options.out_dir / report::kConfusionPng,
                           result.test.metrics.confusion);
    return result;
}

} // namespace qcnn::train
