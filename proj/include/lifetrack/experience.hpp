#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lifetrack/geometry.hpp"
#include "lifetrack/policy.hpp"
#include "lifetrack/vehicle.hpp"

namespace lifetrack {

struct TrajectoryRecord {
    double t = 0.0;
    VehicleState state;        // state at time t (before this period's step)
    double delta_cmd = 0.0;    // raw command issued at t
    double delta_applied = 0.0;  // post rate-limit/saturation steering the plant received
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    std::string section_id;
    double v_ref = 0.0;
    std::string expert_id;
    std::uint64_t seed = 0;
    bool blowup = false;       // simulator reported numeric blowup
    double max_dev = 0.0;      // max |e_lat| against the commanded reference
};

struct TaskKey {
    std::string section_id;
    double v_ref = 0.0;

    std::string label() const;
    bool operator==(const TaskKey& o) const {
        return section_id == o.section_id && v_ref == o.v_ref;
    }
};

struct TaskDataset {
    std::vector<Sample> samples;
    TaskKey key;
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;

    std::vector<Sample> train_set() const;
    std::vector<Sample> test_set() const;
};

// A steering controller queried once per control period.
using Controller = std::function<double(const VehicleState&, const ReferencePath&)>;

// Closed-loop episode on the track's reference path at constant v_ref from a
// path-aligned start pose. Failures are recorded in metadata, not thrown.
Trajectory collect_episode(const Controller& expert, const ReferencePath& path,
                           const std::string& section_id, double v_ref,
                           const VehicleParams& params, const SimConfig& cfg,
                           std::uint64_t seed, double start_offset = 0.0);

bool episode_failed(const Trajectory& traj, double dev_threshold);

// Experience processing: the driven trajectory becomes the reference path,
// so every emitted sample is perfect-tracking knowledge. The action is the
// plant-applied steering.
TaskDataset process_experience(const Trajectory& traj, double lookahead, double ds = 0.1);

struct SegmentationReport {
    std::vector<std::string> warnings;
};

// Group processed samples by (section, v_ref), 80/20 train/test split by
// seeded shuffle. Episode order within a group is preserved.
std::vector<TaskDataset> segment_tasks(const std::vector<Trajectory>& episodes, double lookahead,
                                       double dev_threshold, std::uint64_t split_seed,
                                       SegmentationReport* report = nullptr);

void write_trajectory_csv(const std::string& file, const Trajectory& traj);
void write_dataset_csv(const std::string& file, const TaskDataset& ds);

}  // namespace lifetrack
