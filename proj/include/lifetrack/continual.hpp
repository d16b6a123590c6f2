#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lifetrack/experience.hpp"
#include "lifetrack/policy.hpp"
#include "lifetrack/rng.hpp"

namespace lifetrack {

enum class TrainMethod { non_ll, ll_no_me, ll_me };

std::string method_name(TrainMethod m);
TrainMethod method_from_name(const std::string& name);

struct MemoryEntry {
    Sample sample;
    int task_id = -1;
};

// Episodic memory M. Curated mode keeps stored states pairwise farther than
// eta (squared distance in normalized state space) and resolves conflicts by
// the evaluation score; reservoir mode keeps a random per-task subset.
class EpisodicMemory {
public:
    enum class Mode { curated, reservoir };

    EpisodicMemory(Mode mode, double eta, std::string eval_id = "steer_effort",
                   std::size_t reservoir_per_task = 256);

    Mode mode() const { return mode_; }
    double eta() const { return eta_; }
    const std::string& eval_id() const { return eval_id_; }
    std::size_t reservoir_per_task() const { return reservoir_per_task_; }
    const std::vector<MemoryEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::vector<MemoryEntry>& mutable_entries() { return entries_; }

    void save_csv(const std::string& file) const;

private:
    Mode mode_;
    double eta_;
    std::string eval_id_;
    std::size_t reservoir_per_task_;
    std::vector<MemoryEntry> entries_;
};

// Squared Euclidean distance between (already normalized) states.
double sim(const StateVec& a, const StateVec& b);

// Lower is better. Default "steer_effort" scores a^2.
double eval_fn(const StateVec& s, double a, const std::string& eval_id);

struct CurationReport {
    std::size_t inserted = 0;
    std::size_t replacements = 0;
    std::size_t rejected = 0;
};

// Threshold/evaluation curation over the candidate stream in dataset order.
// Candidates and stored entries are compared in normalized state space.
CurationReport memory_update_curated(EpisodicMemory& memory, const std::vector<Sample>& dataset,
                                     const Normalizer& norm, int task_id);

void memory_update_reservoir(EpisodicMemory& memory, const std::vector<Sample>& dataset,
                             int task_id, Rng& rng);

// Uniform without replacement; with replacement when memory is smaller
// than n.
std::vector<Sample> sample_memory_batch(const EpisodicMemory& memory, std::size_t n, Rng& rng);

// AGEM projection: g unchanged when it does not conflict with g_ref,
// otherwise the component along g_ref is removed.
GradientVector agem_project(const GradientVector& g, const GradientVector& g_ref);

struct TrainerConfig {
    TrainMethod method = TrainMethod::ll_me;
    int epochs = 30;
    std::size_t minibatch = 64;
    std::size_t memory_batch = 256;  // for g_ref
    double lr = 1e-3;
    OptimizerState::Method optimizer = OptimizerState::Method::adam;
    std::uint64_t seed = 0;
};

struct TaskTrainStats {
    std::vector<double> epoch_train_loss;
    std::size_t projected_steps = 0;
    std::size_t total_steps = 0;
    std::size_t corrective_steps = 0;  // post-task memory-restoration steps
    std::size_t memory_size_after = 0;
    double memory_loss_before = -1.0;  // l(pi, M) before/after this task; -1 when no memory
    double memory_loss_after = -1.0;
};

// One task of the continual curriculum; updates net, optimizer and memory
// in place.
TaskTrainStats train_task(PolicyNet& net, const Normalizer& norm, OptimizerState& opt,
                          EpisodicMemory& memory, const std::vector<Sample>& train_samples,
                          int task_id, const TrainerConfig& cfg);

}  // namespace lifetrack
