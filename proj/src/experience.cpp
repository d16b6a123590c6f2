#include "lifetrack/experience.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "lifetrack/errors.hpp"
#include "lifetrack/rng.hpp"

namespace lifetrack {

std::string TaskKey::label() const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_v%g", section_id.c_str(), v_ref);
    return buf;
}

std::vector<Sample> TaskDataset::train_set() const {
    std::vector<Sample> out;
    out.reserve(train_idx.size());
    for (std::size_t i : train_idx) out.push_back(samples[i]);
    return out;
}

std::vector<Sample> TaskDataset::test_set() const {
    std::vector<Sample> out;
    out.reserve(test_idx.size());
    for (std::size_t i : test_idx) out.push_back(samples[i]);
    return out;
}

Trajectory collect_episode(const Controller& expert, const ReferencePath& path,
                           const std::string& section_id, double v_ref,
                           const VehicleParams& params, const SimConfig& cfg,
                           std::uint64_t seed, double start_offset) {
    Trajectory traj;
    traj.section_id = section_id;
    traj.v_ref = v_ref;
    traj.seed = seed;

    PathPoint start = path.at_arc_length(0.0);
    VehicleState state;
    state.psi = start.psi;
    state.x = start.x - start_offset * std::sin(start.psi);
    state.y = start.y + start_offset * std::cos(start.psi);
    state.vx = v_ref;

    const double abort_dev = 5.0;
    double t = 0.0;
    // stop short of the final sample so preview/projection stay well posed
    const double s_end = path.length() - 2.5;
    while (true) {
        ProjectionResult proj = project_to_path(path, state.x, state.y);
        traj.max_dev = std::max(traj.max_dev, std::abs(proj.e_lat));
        if (proj.s_star >= s_end || std::abs(proj.e_lat) > abort_dev) break;
        if (t > 1.5 * path.length() / std::max(v_ref, 0.5)) break;  // stuck guard

        double cmd;
        try {
            cmd = expert(state, path);
        } catch (const Error&) {
            traj.blowup = true;
            break;
        }
        VehicleState next;
        try {
            next = step_dynamic(state, cmd, v_ref, params, cfg);
        } catch (const NumericBlowup&) {
            traj.blowup = true;
            break;
        }
        traj.records.push_back({t, state, cmd, next.delta});
        state = next;
        t += cfg.dt;
    }
    return traj;
}

bool episode_failed(const Trajectory& traj, double dev_threshold) {
    if (traj.blowup) return true;
    return traj.max_dev > dev_threshold;
}

TaskDataset process_experience(const Trajectory& traj, double lookahead, double ds) {
    if (traj.records.size() < 2) throw TrajectoryTooShort();

    std::vector<Waypoint> driven;
    driven.reserve(traj.records.size());
    for (const auto& rec : traj.records) driven.push_back({rec.state.x, rec.state.y});
    if (driven.size() < 4) throw TrajectoryTooShort();
    ReferencePath driven_path = build_path(driven, ds);

    TaskDataset out;
    out.key = {traj.section_id, traj.v_ref};
    for (const auto& rec : traj.records) {
        Pose2D pose{rec.state.x, rec.state.y, rec.state.psi};
        ProjectionResult proj = project_to_path(driven_path, rec.state.x, rec.state.y);
        if (proj.s_star + lookahead > driven_path.length()) break;  // trailing records dropped
        PreviewPoint pp = preview_point(driven_path, pose, lookahead);
        Sample sm;
        sm.s = {pp.x_ref, pp.y_ref, rec.state.vx, rec.state.vy, rec.state.r};
        sm.a = rec.delta_applied;
        out.samples.push_back(sm);
    }
    if (out.samples.empty()) throw TrajectoryTooShort("no record has enough driven arc length ahead");
    return out;
}

std::vector<TaskDataset> segment_tasks(const std::vector<Trajectory>& episodes, double lookahead,
                                       double dev_threshold, std::uint64_t split_seed,
                                       SegmentationReport* report) {
    // keyed groups in first-seen order
    std::vector<TaskDataset> groups;
    auto find_group = [&](const TaskKey& key) -> TaskDataset& {
        for (auto& g : groups)
            if (g.key == key) return g;
        groups.push_back({});
        groups.back().key = key;
        return groups.back();
    };

    std::map<std::string, int> failed_counts;
    for (const auto& ep : episodes) {
        TaskKey key{ep.section_id, ep.v_ref};
        if (episode_failed(ep, dev_threshold)) {
            failed_counts[key.label()] += 1;
            continue;
        }
        TaskDataset processed = process_experience(ep, lookahead);
        TaskDataset& g = find_group(key);
        g.samples.insert(g.samples.end(), processed.samples.begin(), processed.samples.end());
    }

    std::vector<TaskDataset> out;
    for (auto& g : groups) {
        if (g.samples.empty()) {
            if (report) report->warnings.push_back("task " + g.key.label() + " empty, dropped");
            continue;
        }
        std::vector<std::size_t> idx(g.samples.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        Rng rng(split_seed ^ std::hash<std::string>{}(g.key.label()));
        rng.shuffle(idx);
        std::size_t n_train = (idx.size() * 8) / 10;
        if (n_train == 0) n_train = idx.size() > 1 ? idx.size() - 1 : 1;
        g.train_idx.assign(idx.begin(), idx.begin() + n_train);
        g.test_idx.assign(idx.begin() + n_train, idx.end());
        out.push_back(std::move(g));
    }
    if (report)
        for (const auto& [label, count] : failed_counts)
            report->warnings.push_back("task " + label + ": " + std::to_string(count) +
                                       " failed episode(s) dropped");
    return out;
}

void write_trajectory_csv(const std::string& file, const Trajectory& traj) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot open " + file);
    out << "t,x,y,psi,vx,vy,r,delta_cmd,delta_applied\n";
    char buf[256];
    for (const auto& rec : traj.records) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      rec.t, rec.state.x, rec.state.y, rec.state.psi, rec.state.vx, rec.state.vy,
                      rec.state.r, rec.delta_cmd, rec.delta_applied);
        out << buf;
    }
    std::ofstream meta(file + ".meta");
    meta << "section = " << traj.section_id << "\n"
         << "v_ref = " << traj.v_ref << "\n"
         << "expert = " << traj.expert_id << "\n"
         << "seed = " << traj.seed << "\n"
         << "failed = " << (traj.blowup ? 1 : 0) << "\n";
}

void write_dataset_csv(const std::string& file, const TaskDataset& ds) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot open " + file);
    out << "x_ref,y_ref,vx,vy,r,a\n";
    char buf[200];
    for (const auto& sm : ds.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", sm.s[0], sm.s[1],
                      sm.s[2], sm.s[3], sm.s[4], sm.a);
        out << buf;
    }
    std::ofstream meta(file + ".meta");
    meta << "section = " << ds.key.section_id << "\n"
         << "v_ref = " << ds.key.v_ref << "\n"
         << "n_samples = " << ds.samples.size() << "\n";
}

}  // namespace lifetrack
