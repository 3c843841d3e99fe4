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

#include "qcnn/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qcnn/checkpoint.hpp"
#include "qcnn/data.hpp"
#include "qcnn/errors.hpp"
#include "qcnn/imgproc.hpp"
#include "qcnn/report.hpp"
#include "qcnn/selftest.hpp"
#include "qcnn/train.hpp"

namespace qcnn::cli {
namespace {

namespace fs = std::filesystem;

void require_file(const fs::path &p, const char *what) {
    if (!fs::is_regular_file(p)) {
        throw ConfigError(std::string(what) + " not found: " + p.string());
    }
}

std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// ---------------------------------------------------------------- preprocess

struct PreprocessArgs {
    fs::path manifest;
    fs::path out;
    std::size_t compare = 0;
    bool force = false;
    std::size_t augment = 0;
    std::uint64_t seed = 0;
    img::PreprocessParams params;
    img::AugmentConfig aug;
};

fs::path output_path(const fs::path &out, const std::string &source,
                     const std::string &suffix = "") {
    fs::path rel(source);
    if (rel.is_absolute()) {
        rel = rel.filename();
    }
    // Strip leading ".." so outputs stay under `out`.
    fs::path clean;
    for (const auto &part : rel) {
        if (part != ".." && part != ".") {
            clean /= part;
        }
    }
    clean.replace_filename(clean.stem().string() + suffix + ".png");
    return out / clean;
}

int cmd_preprocess(const PreprocessArgs &a, std::ostream &out) {
    require_file(a.manifest, "manifest");
    a.aug.validate();
    const data::Manifest m = data::read_manifest(a.manifest);
    img::AugmentConfig aug = a.aug;
    aug.seed = a.seed;

    data::Manifest produced;
    std::vector<std::pair<const data::ManifestRecord *, std::string>> failures;
    std::size_t written = 0, skipped = 0, compared = 0;
    for (const auto &rec : m.records) {
        const fs::path dst = output_path(a.out, rec.path);
        const bool minority =
            rec.label == data::Label::Stone || rec.label == data::Label::Tumor;
        const std::size_t copies = minority ? a.augment : 0;
        std::vector<fs::path> aug_paths;
        for (std::size_t k = 0; k < copies; ++k) {
            aug_paths.push_back(
                output_path(a.out, rec.path, "_aug" + std::to_string(k)));
        }
        const bool want_compare = compared < a.compare;
        bool all_exist = fs::exists(dst);
        for (const auto &p : aug_paths) {
            all_exist = all_exist && fs::exists(p);
        }
        try {
            if (!all_exist || a.force || want_compare) {
                const img::Image raw = img::read_image(rec.path);
                const img::GrayImage fin = img::preprocess(raw, a.params);
                if (!fs::exists(dst) || a.force) {
                    img::write_png(dst, fin);
                    ++written;
                } else {
                    ++skipped;
                }
                for (std::size_t k = 0; k < copies; ++k) {
                    if (fs::exists(aug_paths[k]) && !a.force) {
                        ++skipped;
                        continue;
                    }
                    const std::string aug_id = rec.id + "#aug" + std::to_string(k);
                    auto rng = img::sample_stream(aug.seed, aug_id);
                    img::write_png(aug_paths[k], img::augment(fin, aug, rng));
                    ++written;
                }
                if (want_compare) {
                    const auto sheet =
                        img::comparison_sheet(img::to_grayscale(raw), a.params);
                    img::write_png(a.out / "compare" /
                                       output_path("", rec.id).filename(),
                                   sheet);
                    ++compared;
                }
            } else {
                skipped += 1 + copies;
            }
            produced.records.push_back({rec.id, dst.string(), rec.label});
            for (std::size_t k = 0; k < copies; ++k) {
                produced.records.push_back({rec.id + "#aug" + std::to_string(k),
                                            aug_paths[k].string(), rec.label});
            }
        } catch (const std::exception &e) {
            failures.emplace_back(&rec, e.what());
        }
    }
    data::write_manifest(a.out / "manifest.csv", produced);
    out << "preprocess: " << written << " written, " << skipped << " skipped, "
        << compared << " comparison sheets, " << failures.size() << " failed\n";
    if (!failures.empty()) {
        std::ofstream f(a.out / "failures.csv");
        f << "id,path,error\n";
        for (const auto &[rec, why] : failures) {
            f << rec->id << ',' << rec->path << ",\"" << why << "\"\n";
            out << "  failed: " << rec->path << ": " << why << '\n';
        }
        return kExitFailure;
    }
    return kExitOk;
}

// --------------------------------------------------------------------- split

int cmd_split(const fs::path &manifest, const fs::path &out_dir,
              const data::SplitRatios &ratios, std::uint64_t seed,
              std::ostream &out) {
    require_file(manifest, "manifest");
    const auto s = data::split(data::read_manifest(manifest), ratios, seed);
    data::write_manifest(out_dir / "train.csv", s.train);
    data::write_manifest(out_dir / "val.csv", s.val);
    data::write_manifest(out_dir / "test.csv", s.test);
    out << "split: train " << s.train.size() << ", val " << s.val.size()
        << ", test " << s.test.size() << '\n';
    return kExitOk;
}

// --------------------------------------------------------------------- synth

struct SynthArgs {
    fs::path out;
    std::uint32_t dim = 2048;
    std::size_t train_per_class = 2500;
    std::size_t eval_per_class = 300;
    double separation = 6.0;
    double sigma = 1.0;
    std::uint64_t seed = 0;
};

data::FeatureSet make_blobs(const std::vector<std::vector<double>> &centers,
                            std::size_t per_class, double sigma,
                            const std::string &prefix, std::mt19937_64 &rng) {
    data::FeatureSet set;
    set.dim = static_cast<std::uint32_t>(centers[0].size());
    std::normal_distribution<double> noise(0.0, sigma);
    for (std::size_t i = 0; i < per_class; ++i) {
        for (std::size_t c = 0; c < data::kNumClasses; ++c) {
            data::FeatureRecord r;
            r.id = prefix + "-" + std::to_string(c) + "-" + std::to_string(i);
            r.label = static_cast<data::Label>(c);
            r.values.resize(set.dim);
            for (std::size_t k = 0; k < set.dim; ++k) {
                r.values[k] = static_cast<float>(centers[c][k] + noise(rng));
            }
            set.records.push_back(std::move(r));
        }
    }
    return set;
}

int cmd_synth(const SynthArgs &a, std::ostream &out) {
    if (a.dim < data::kNumClasses || a.train_per_class == 0 ||
        a.eval_per_class == 0 || !(a.sigma > 0.0) || !(a.separation > 0.0)) {
        throw ConfigError(
            "synth needs dim >= 4, positive counts, sigma and separation");
    }
    std::mt19937_64 rng(a.seed);
    std::normal_distribution<double> g(0.0, 1.0);
    // Orthonormal directions (Gram-Schmidt), so every pair of centers is
    // exactly separation * sigma apart.
    std::vector<std::vector<double>> centers;
    for (std::size_t c = 0; c < data::kNumClasses; ++c) {
        std::vector<double> v(a.dim);
        for (auto &x : v) {
            x = g(rng);
        }
        for (const auto &u : centers) {
            double dot = 0.0;
            for (std::size_t k = 0; k < a.dim; ++k) {
                dot += v[k] * u[k];
            }
            for (std::size_t k = 0; k < a.dim; ++k) {
                v[k] -= dot * u[k];
            }
        }
        double norm = 0.0;
        for (const double x : v) {
            norm += x * x;
        }
        norm = std::sqrt(norm);
        for (auto &x : v) {
            x /= norm;
        }
        centers.push_back(std::move(v));
    }
    const double radius = a.separation * a.sigma / std::numbers::sqrt2;
    for (auto &u : centers) {
        for (auto &x : u) {
            x *= radius;
        }
    }
    data::write_features(a.out / "train.qcnf",
                         make_blobs(centers, a.train_per_class, a.sigma, "train", rng));
    data::write_features(a.out / "val.qcnf",
                         make_blobs(centers, a.eval_per_class, a.sigma, "val", rng));
    data::write_features(a.out / "test.qcnf",
                         make_blobs(centers, a.eval_per_class, a.sigma, "test", rng));
    out << "synth: wrote train/val/test feature files (dim " << a.dim
        << ") to " << a.out.string() << '\n';
    return kExitOk;
}

// --------------------------------------------------------------------- train

struct TrainArgs {
    fs::path train, val, test, out = "run";
    train::TrainConfig cfg;
    std::string grad = "adjoint";
    std::size_t latent = 0;
    std::string resume;
    std::size_t stop_after = 0;
};

int cmd_train(TrainArgs a, std::ostream &out) {
    a.cfg.grad = train::parse_grad_method(a.grad);
    a.cfg.validate();
    if (a.latent != 0 && a.latent != a.cfg.latent_dim()) {
        throw ConfigError("--latent " + std::to_string(a.latent) +
                          " conflicts with --qubits " +
                          std::to_string(a.cfg.qubits) + " (latent = qubits - 4)");
    }
    require_file(a.train, "training feature file");
    require_file(a.val, "validation feature file");
    require_file(a.test, "test feature file");
    if (!a.resume.empty()) {
        require_file(a.resume, "checkpoint");
    }
    const auto tr = data::read_features(a.train);
    const auto va = data::read_features(a.val);
    const auto te = data::read_features(a.test);

    train::FitOptions opt;
    opt.out_dir = a.out;
    if (!a.resume.empty()) {
        opt.resume = fs::path(a.resume);
    }
    opt.stop_after = a.stop_after;
    auto t0 = std::chrono::steady_clock::now();
    opt.on_epoch = [&](const train::EpochStats &s) {
        const auto t1 = std::chrono::steady_clock::now();
        out << "epoch " << s.epoch << '/' << a.cfg.epochs << "  train_loss "
            << fixed(s.train_loss) << "  train_acc " << fixed(s.train_acc)
            << "  val_loss " << fixed(s.val_loss) << "  val_acc "
            << fixed(s.val_acc) << "  steps " << s.steps << "  ("
            << fixed(std::chrono::duration<double>(t1 - t0).count(), 1)
            << " s)" << std::endl;
        t0 = t1;
    };
    const auto res = train::fit(a.cfg, tr, va, te, opt);
    if (!res.completed) {
        out << "stopped after epoch " << a.stop_after << "; resume from "
            << (a.out / train::kLastCheckpoint).string() << '\n';
        return kExitOk;
    }
    out << "best epoch " << res.best_epoch << "; test metrics:\n"
        << report::metrics_block(res.test.metrics);
    return kExitOk;
}

// ---------------------------------------------------------------------- eval

int cmd_eval(const fs::path &ckpt_path, const fs::path &features,
             const fs::path &out_dir, std::size_t qubits, std::size_t threads,
             std::ostream &out) {
    require_file(ckpt_path, "checkpoint");
    require_file(features, "feature file");
    const train::Checkpoint ck = train::load_checkpoint(ckpt_path);
    if (qubits != 0 && qubits != ck.config.qubits) {
        throw ConfigError("--qubits " + std::to_string(qubits) +
                          " does not match the checkpoint (" +
                          std::to_string(ck.config.qubits) + " qubits)");
    }
    const auto set = data::read_features(features);
    if (set.dim != ck.feature_dim) {
        throw ConfigError("feature dim " + std::to_string(set.dim) +
                          " does not match the checkpoint (" +
                          std::to_string(ck.feature_dim) + ")");
    }
    const train::Model model(ck.config);
    const auto ev = train::evaluate(model, ck.state, set, ck.class_weights,
                                    std::max<std::size_t>(threads, 1));
    report::write_text(out_dir / report::kMetricsJson,
                       report::metrics_json(ev.metrics, ev.loss, ck.config,
                                            ck.state.best_epoch));
    report::write_text(out_dir / report::kConfusionCsv,
                       report::confusion_csv(ev.metrics.confusion));
    out << report::metrics_block(ev.metrics);
    return kExitOk;
}

// ------------------------------------------------------------------ selftest

int cmd_selftest(const std::string &fault, std::ostream &out) {
    selftest::Faults faults;
    if (fault == "gate-typo") {
        faults.gate_typo = true;
    } else if (!fault.empty()) {
        throw ConfigError("unknown fault '" + fault + "'");
    }
    const auto results = selftest::run(faults);
    std::vector<std::string> failed;
    double total = 0.0;
    for (const auto &r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail
            << " [" << fixed(r.seconds, 2) << " s]\n";
        total += r.seconds;
        if (!r.passed) {
            failed.push_back(r.name);
        }
    }
    out << results.size() - failed.size() << '/' << results.size()
        << " checks passed in " << fixed(total, 2) << " s\n";
    if (!failed.empty()) {
        out << "failed:";
        for (const auto &f : failed) {
            out << ' ' << f;
        }
        out << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

void add_config(CLI::App *sub) {
    sub->add_option("--config", "key = value file; keys mirror flag names")
        ->configurable(false);
}

// CLI11 only reads config files attached to the root app, so subcommand
// files are applied here. Values given on the command line win.
void apply_config(CLI::App *sub) {
    const CLI::Option *opt = sub->get_option_no_throw("--config");
    if (opt == nullptr || opt->count() == 0) {
        return;
    }
    const std::string file = opt->as<std::string>();
    if (!fs::is_regular_file(file)) {
        throw CLI::FileError::Missing(file);
    }
    for (const auto &item : CLI::ConfigINI().from_file(file)) {
        if (item.name == "++" || item.name == "--") {
            continue;
        }
        if (!item.parents.empty() &&
            !(item.parents.size() == 1 && item.parents[0] == sub->get_name())) {
            throw CLI::ConfigError::Extras(item.fullname());
        }
        CLI::Option *o = sub->get_option_no_throw("--" + item.name);
        if (o == nullptr || !o->get_configurable() || o == opt) {
            throw CLI::ConfigError::Extras(item.fullname());
        }
        if (o->count() > 0) {
            continue;
        }
        o->add_result(item.inputs);
        o->run_callback();
    }
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
    CLI::App app{"Hybrid quantum-classical QCNN for 4-class kidney CT", "qcnn"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    PreprocessArgs pre;
    auto *p = app.add_subcommand("preprocess",
                                 "Grayscale, NLM denoise, CLAHE and shift images");
    p->add_option("--manifest", pre.manifest, "CSV with id,path,label")->required();
    p->add_option("--out", pre.out, "Output directory")->required();
    p->add_option("--compare", pre.compare, "Emit N 4-panel comparison sheets");
    p->add_flag("--force", pre.force, "Overwrite existing outputs");
    p->add_option("--augment", pre.augment,
                  "Augmented copies per Stone/Tumor row");
    p->add_option("--seed", pre.seed, "Augmentation seed");
    p->add_option("--nlm-h", pre.params.nlm.h, "NLM filter strength");
    p->add_option("--clahe-clip", pre.params.clahe.clip_limit, "CLAHE clip limit");
    p->add_option("--shift", pre.params.shift, "Brightness shift");
    p->add_option("--aug-rotation", pre.aug.rotation_degrees, "Max rotation (deg)");
    p->add_option("--aug-flip", pre.aug.flip_probability, "Flip probability");
    p->add_option("--aug-crop-min", pre.aug.crop_scale_min, "Min crop area");
    p->add_option("--aug-crop-max", pre.aug.crop_scale_max, "Max crop area");
    p->add_option("--aug-zoom-out", pre.aug.zoom_out_max, "Max zoom-out factor");
    add_config(p);

    fs::path split_manifest, split_out;
    data::SplitRatios ratios;
    std::uint64_t split_seed = 0;
    auto *s = app.add_subcommand("split", "Stratified train/val/test split");
    s->add_option("--manifest", split_manifest, "CSV with id,path,label")->required();
    s->add_option("--out", split_out, "Output directory")->required();
    s->add_option("--train", ratios.train, "Training fraction");
    s->add_option("--val", ratios.val, "Validation fraction");
    s->add_option("--test", ratios.test, "Test fraction");
    s->add_option("--seed", split_seed, "Shuffle seed");
    add_config(s);

    SynthArgs syn;
    auto *y = app.add_subcommand("synth", "Write Gaussian-blob feature files");
    y->add_option("--out", syn.out, "Output directory")->required();
    y->add_option("--dim", syn.dim, "Feature dimension");
    y->add_option("--per-class", syn.train_per_class, "Training samples per class");
    y->add_option("--eval-per-class", syn.eval_per_class,
                  "Validation and test samples per class");
    y->add_option("--separation", syn.separation,
                  "Distance between centers, in units of sigma");
    y->add_option("--sigma", syn.sigma, "Per-coordinate noise");
    y->add_option("--seed", syn.seed, "Generator seed");
    add_config(y);

    TrainArgs ta;
    auto *t = app.add_subcommand("train", "Train the hybrid model");
    t->add_option("--train", ta.train, "Training feature file")->required();
    t->add_option("--val", ta.val, "Validation feature file")->required();
    t->add_option("--test", ta.test, "Test feature file")->required();
    t->add_option("--out", ta.out, "Report and checkpoint directory");
    t->add_option("--qubits", ta.cfg.qubits, "8 or 12");
    t->add_option("--latent", ta.latent, "Latent size (must equal qubits - 4)");
    t->add_option("--lr", ta.cfg.lr, "Adam learning rate");
    t->add_option("--batch", ta.cfg.batch, "Batch size");
    t->add_option("--epochs", ta.cfg.epochs, "Epochs");
    t->add_option("--nmax", ta.cfg.n_max, "Draws per class per epoch");
    t->add_option("--seed", ta.cfg.seed, "Seed");
    t->add_flag("--freeze-head", ta.cfg.freeze_head,
                "Keep the projection head fixed");
    t->add_option("--grad", ta.grad, "adjoint or shift");
    t->add_option("--threads", ta.cfg.threads, "Worker cap");
    t->add_option("--resume", ta.resume, "Checkpoint to continue from");
    t->add_option("--stop-after", ta.stop_after,
                  "Stop once this many epochs are done");
    add_config(t);

    fs::path ev_ckpt, ev_features, ev_out = ".";
    std::size_t ev_qubits = 0, ev_threads = 1;
    auto *e = app.add_subcommand("eval", "Evaluate a checkpoint");
    e->add_option("--checkpoint", ev_ckpt, "Checkpoint JSON")->required();
    e->add_option("--features", ev_features, "Feature file")->required();
    e->add_option("--out", ev_out, "Directory for metrics.json/confusion.csv");
    e->add_option("--qubits", ev_qubits, "Expected qubit count");
    e->add_option("--threads", ev_threads, "Worker cap");
    add_config(e);

    std::string fault;
    auto *st = app.add_subcommand("selftest", "Run the embedded oracle suite");
    st->add_option("--inject-fault", fault, "Negative control: gate-typo");

    std::vector<std::string> argv_store{"qcnn"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &a : argv_store) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        for (auto *sub : app.get_subcommands()) {
            apply_config(sub);
        }
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &pe) {
        err << "usage error: " << pe.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*p) {
            return cmd_preprocess(pre, out);
        }
        if (*s) {
            return cmd_split(split_manifest, split_out, ratios, split_seed, out);
        }
        if (*y) {
            return cmd_synth(syn, out);
        }
        if (*t) {
            return cmd_train(ta, out);
        }
        if (*e) {
            return cmd_eval(ev_ckpt, ev_features, ev_out, ev_qubits, ev_threads,
                            out);
        }
        return cmd_selftest(fault, out);
    } catch (const CheckpointError &ce) {
        err << "error: invalid checkpoint at " << ce.pointer() << ": "
            << ce.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError &ce) {
        err << "error: " << ce.what() << '\n';
        return kExitUsage;
    } catch (const UsageError &ue) {
        err << "error: " << ue.what() << '\n';
        return kExitUsage;
    } catch (const FormatError &fe) {
        err << "error: " << fe.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &ex) {
        err << "error: " << ex.what() << '\n';
        return kExitFailure;
    }
}

} // namespace qcnn::cli
