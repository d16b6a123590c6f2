#include "lifetrack/continual.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "lifetrack/errors.hpp"

namespace lifetrack {

std::string method_name(TrainMethod m) {
    switch (m) {
        case TrainMethod::non_ll: return "non_ll";
        case TrainMethod::ll_no_me: return "ll_no_me";
        case TrainMethod::ll_me: return "ll_me";
    }
    return "?";
}

TrainMethod method_from_name(const std::string& name) {
    if (name == "non_ll") return TrainMethod::non_ll;
    if (name == "ll_no_me") return TrainMethod::ll_no_me;
    if (name == "ll_me") return TrainMethod::ll_me;
    throw ConfigError("unknown method: " + name);
}

EpisodicMemory::EpisodicMemory(Mode mode, double eta, std::string eval_id,
                               std::size_t reservoir_per_task)
    : mode_(mode), eta_(eta), eval_id_(std::move(eval_id)),
      reservoir_per_task_(reservoir_per_task) {}

void EpisodicMemory::save_csv(const std::string& file) const {
    std::ofstream out(file);
    if (!out) throw IoError("cannot open " + file);
    out << "# eta = " << eta_ << ", eval_id = " << eval_id_ << ", mode = "
        << (mode_ == Mode::curated ? "curated" : "reservoir") << "\n";
    out << "task_id,x_ref,y_ref,vx,vy,r,a\n";
    char buf[220];
    for (const auto& e : entries_) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", e.task_id,
                      e.sample.s[0], e.sample.s[1], e.sample.s[2], e.sample.s[3], e.sample.s[4],
                      e.sample.a);
        out << buf;
    }
}

double sim(const StateVec& a, const StateVec& b) {
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double eval_fn(const StateVec& /*s*/, double a, const std::string& eval_id) {
    if (eval_id == "steer_effort") return a * a;
    throw UnknownEvalId("unknown eval id: " + eval_id);
}

CurationReport memory_update_curated(EpisodicMemory& memory, const std::vector<Sample>& dataset,
                                     const Normalizer& norm, int task_id) {
    CurationReport report;
    auto& entries = memory.mutable_entries();
    const double eta = memory.eta();
    for (const Sample& cand : dataset) {
        StateVec cn = norm.apply(cand.s);
        // neighborhood: stored entries within eta of the candidate
        std::vector<std::size_t> neighbors;
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (sim(cn, norm.apply(entries[i].sample.s)) <= eta) neighbors.push_back(i);

        if (neighbors.empty()) {
            entries.push_back({cand, task_id});
            report.inserted += 1;
            continue;
        }

        // keep the best-scoring member of {candidate} + neighbors, ties
        // broken toward the incumbent stored entry
        double cand_score = eval_fn(cn, cand.a, memory.eval_id());
        std::size_t best_idx = neighbors[0];
        double best_score = eval_fn(norm.apply(entries[best_idx].sample.s),
                                    entries[best_idx].sample.a, memory.eval_id());
        for (std::size_t i = 1; i < neighbors.size(); ++i) {
            double sc = eval_fn(norm.apply(entries[neighbors[i]].sample.s),
                                entries[neighbors[i]].sample.a, memory.eval_id());
            if (sc < best_score) {
                best_score = sc;
                best_idx = neighbors[i];
            }
        }
        if (cand_score < best_score) {
            // candidate wins: remove all neighbors, insert candidate
            for (auto it = neighbors.rbegin(); it != neighbors.rend(); ++it)
                entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(*it));
            entries.push_back({cand, task_id});
            report.replacements += 1;
        } else {
            // incumbent wins: drop the other neighbors, reject the candidate
            for (auto it = neighbors.rbegin(); it != neighbors.rend(); ++it)
                if (*it != best_idx)
                    entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(*it));
            report.rejected += 1;
        }
    }
    return report;
}

void memory_update_reservoir(EpisodicMemory& memory, const std::vector<Sample>& dataset,
                             int task_id, Rng& rng) {
    std::size_t budget = memory.reservoir_per_task();
    auto& entries = memory.mutable_entries();
    if (dataset.size() <= budget) {
        for (const Sample& sm : dataset) entries.push_back({sm, task_id});
        return;
    }
    // uniform subset without replacement (partial Fisher-Yates on indices)
    std::vector<std::size_t> idx(dataset.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < budget; ++i) {
        std::size_t j = i + rng.uniform_index(idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(budget);
    std::sort(idx.begin(), idx.end());  // keep time order within the task
    for (std::size_t i : idx) entries.push_back({dataset[i], task_id});
}

std::vector<Sample> sample_memory_batch(const EpisodicMemory& memory, std::size_t n, Rng& rng) {
    if (memory.empty()) throw EmptyMemory();
    const auto& entries = memory.entries();
    std::vector<Sample> out;
    out.reserve(n);
    if (entries.size() < n) {
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(entries[rng.uniform_index(entries.size())].sample);
        return out;
    }
    std::vector<std::size_t> idx(entries.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + rng.uniform_index(idx.size() - i);
        std::swap(idx[i], idx[j]);
        out.push_back(entries[idx[i]].sample);
    }
    return out;
}

GradientVector agem_project(const GradientVector& g, const GradientVector& g_ref) {
    if (g.size() != g_ref.size()) throw LengthMismatch("gradient dims differ");
    double ref_sq = g_ref.dot(g_ref);
    if (ref_sq < 1e-12) return g;
    double inner = g.dot(g_ref);
    if (inner >= 0.0) return g;
    GradientVector out = g;
    double coef = inner / ref_sq;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= coef * g_ref.v[i];
    return out;
}

TaskTrainStats train_task(PolicyNet& net, const Normalizer& norm, OptimizerState& opt,
                          EpisodicMemory& memory, const std::vector<Sample>& train_samples,
                          int task_id, const TrainerConfig& cfg) {
    if (train_samples.empty()) throw EmptyData("empty task dataset");
    const bool lifelong = cfg.method != TrainMethod::non_ll;
    TaskTrainStats stats;

    Rng shuffle_rng = Rng(cfg.seed).split(0x5u ^ static_cast<std::uint64_t>(task_id));
    Rng mem_rng = Rng(cfg.seed).split(0x9u ^ static_cast<std::uint64_t>(task_id));

    std::vector<Sample> mem_eval;
    if (lifelong && !memory.empty()) {
        mem_eval.reserve(memory.size());
        for (const auto& e : memory.entries()) mem_eval.push_back(e.sample);
        stats.memory_loss_before = mse_loss(net, norm, mem_eval);
    }

    std::vector<std::size_t> order(train_samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<Sample> batch;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.minibatch) {
            batch.clear();
            std::size_t end = std::min(start + cfg.minibatch, order.size());
            for (std::size_t i = start; i < end; ++i) batch.push_back(train_samples[order[i]]);

            auto [loss, g] = backward(net, norm, batch);
            epoch_loss += loss;
            n_batches += 1;
            stats.total_steps += 1;

            if (lifelong && !memory.empty()) {
                std::vector<Sample> mem_batch =
                    sample_memory_batch(memory, cfg.memory_batch, mem_rng);
                auto [mem_loss, g_ref] = backward(net, norm, mem_batch);
                (void)mem_loss;
                double inner = g.dot(g_ref);
                if (inner < 0.0) {
                    g = agem_project(g, g_ref);
                    stats.projected_steps += 1;
                }
            }
            apply_gradient(net, opt, g);
        }
        stats.epoch_train_loss.push_back(epoch_loss / static_cast<double>(n_batches));
    }

    // Per-step projection only rules out first-order conflict with the
    // sampled memory gradient; across a whole task the memory-set loss can
    // still drift upward (curvature, sampling noise, adaptive step scaling).
    // Restore it with a short corrective descent on the memory set, with the
    // corrective gradient projected so it does not undo the task just
    // learned.
    if (!mem_eval.empty()) {
        const double target = 1.02 * stats.memory_loss_before;
        const int max_steps = 600;
        Rng fix_rng = Rng(cfg.seed).split(0x21u ^ static_cast<std::uint64_t>(task_id));
        OptimizerState fix = OptimizerState::make(opt.method, cfg.lr, net.param_count());
        double cur = mse_loss(net, norm, mem_eval);
        while (cur > target && stats.corrective_steps < max_steps) {
            auto [mem_loss, g_mem] = backward(net, norm, mem_eval);
            (void)mem_loss;
            // protect the new task while there is still projection headroom
            if (stats.corrective_steps < max_steps / 2) {
                batch.clear();
                std::size_t bs = std::min(cfg.minibatch, train_samples.size());
                for (std::size_t i = 0; i < bs; ++i)
                    batch.push_back(train_samples[fix_rng.uniform_index(train_samples.size())]);
                auto [task_loss, g_task] = backward(net, norm, batch);
                (void)task_loss;
                g_mem = agem_project(g_mem, g_task);
            }
            apply_gradient(net, fix, g_mem);
            stats.corrective_steps += 1;
            cur = mse_loss(net, norm, mem_eval);
        }
    }

    // memory update after the task's epochs
    if (cfg.method == TrainMethod::ll_me) {
        memory_update_curated(memory, train_samples, norm, task_id);
    } else if (cfg.method == TrainMethod::ll_no_me) {
        Rng res_rng = Rng(cfg.seed).split(0x11u ^ static_cast<std::uint64_t>(task_id));
        memory_update_reservoir(memory, train_samples, task_id, res_rng);
    }
    stats.memory_size_after = memory.size();
    if (!mem_eval.empty()) stats.memory_loss_after = mse_loss(net, norm, mem_eval);
    return stats;
}

}  // namespace lifetrack
