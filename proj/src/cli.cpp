#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lifetrack/errors.hpp"
#include "lifetrack/harness.hpp"

namespace fs = std::filesystem;

namespace lifetrack {

namespace {

ExperimentConfig load_config(const std::string& config_file, std::uint64_t seed, bool seed_set,
                             const std::string& out_dir) {
    ExperimentConfig cfg;
    if (!config_file.empty()) cfg = experiment_config_from_file(config_file);
    if (seed_set) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    return cfg;
}

int cmd_tracks(const std::string& out_dir) {
    fs::create_directories(fs::path(out_dir));
    for (const char* sec : {"S1", "S2", "S3"}) {
        TrackSpec spec = track_preset(sec);
        std::ofstream cfg_out((fs::path(out_dir) / (std::string(sec) + ".cfg")).string());
        cfg_out << track_spec_to_config(spec);
        write_waypoints_csv((fs::path(out_dir) / (std::string(sec) + ".csv")).string(),
                            generate_track(spec));
        std::printf("wrote %s/%s.{csv,cfg}\n", out_dir.c_str(), sec);
    }
    return 0;
}

int cmd_collect(const ExperimentConfig& cfg, const std::string& expert_id) {
    const fs::path out(cfg.out_dir);
    for (const char* sub : {"tracks", "episodes", "datasets"}) fs::create_directories(out / sub);

    Rng root(cfg.seed);
    Rng collect_rng = root.split(1);
    std::map<std::string, ReferencePath> paths;
    for (const auto& sec : cfg.train_sections) {
        TrackSpec spec = track_preset(sec);
        std::vector<Waypoint> wps = generate_track(spec);
        write_waypoints_csv((out / "tracks" / (sec + ".csv")).string(), wps);
        paths.emplace(sec, build_path(wps, 0.1));
    }

    Controller expert;
    if (expert_id == "mpc") {
        expert = [&cfg](const VehicleState& st, const ReferencePath& p) {
            return mpc_control(st, p, cfg.mpc, cfg.vehicle);
        };
    } else if (expert_id == "pp") {
        expert = [&cfg](const VehicleState& st, const ReferencePath& p) {
            return pure_pursuit(st, p, std::max(cfg.lookahead, 0.8 * st.vx), cfg.vehicle);
        };
    } else {
        std::fprintf(stderr, "unknown expert: %s (expected pp or mpc)\n", expert_id.c_str());
        return 1;
    }

    std::vector<Trajectory> episodes;
    for (const auto& sec : cfg.train_sections) {
        for (double v : cfg.velocity_grid) {
            for (int rep = 0; rep < cfg.repetitions; ++rep) {
                std::uint64_t ep_seed = collect_rng.next_u64();
                double offset = rep == 0 ? 0.0 : Rng(ep_seed).uniform(-0.3, 0.3);
                Trajectory traj = collect_episode(expert, paths.at(sec), sec, v, cfg.vehicle,
                                                  cfg.sim, ep_seed, offset);
                traj.expert_id = expert_id;
                char name[96];
                std::snprintf(name, sizeof(name), "%s_v%g_r%d.csv", sec.c_str(), v, rep);
                write_trajectory_csv((out / "episodes" / name).string(), traj);
                std::printf("episode %s: %zu records, max_dev %.3f m%s\n", name,
                            traj.records.size(), traj.max_dev,
                            episode_failed(traj, cfg.dev_threshold) ? " [failed]" : "");
                episodes.push_back(std::move(traj));
            }
        }
    }

    SegmentationReport report;
    std::vector<TaskDataset> tasks = segment_tasks(episodes, cfg.lookahead, cfg.dev_threshold,
                                                   root.split(3).next_u64(), &report);
    for (const auto& task : tasks)
        write_dataset_csv((out / "datasets" / (task.key.label() + ".csv")).string(), task);
    for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("%zu task dataset(s) written to %s/datasets\n", tasks.size(), cfg.out_dir.c_str());
    return 0;
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& model_file) {
    auto [net, norm] = PolicyNet::load(model_file);
    TrackSpec spec = track_preset(cfg.test_section);
    ReferencePath path = build_path(generate_track(spec), 0.1);
    RolloutReport rep = rollout_closed_loop(net, norm, path, cfg.test_v_ref, cfg.vehicle, cfg.sim,
                                            cfg.lookahead);
    std::printf("rollout on %s at %g m/s: completed=%d mean_dev=%.4f m max_dev=%.4f m "
                "mean|delta|=%.4f rad smoothness=%.5f rad/step\n",
                cfg.test_section.c_str(), cfg.test_v_ref, rep.completed ? 1 : 0, rep.mean_dev,
                rep.max_dev, rep.mean_abs_delta, rep.steer_smoothness);
    return rep.completed ? 0 : 2;
}

int cmd_plot(const std::string& out_dir) {
    // rebuild the SVG charts from previously written metric CSVs
    ExperimentResults results;
    for (const char* name : {"non_ll", "ll_no_me", "ll_me"}) {
        fs::path em = fs::path(out_dir) / "metrics" / (std::string("eval_matrix_") + name + ".csv");
        fs::path ro = fs::path(out_dir) / "metrics" / (std::string("rollouts_") + name + ".csv");
        if (!fs::exists(em)) continue;
        MethodResults mr;
        mr.method = method_from_name(name);
        std::ifstream in(em.string());
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 'k') continue;
            std::istringstream ss(line);
            std::string cell;
            std::vector<double> vals;
            while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
            if (vals.size() < 2) continue;
            mr.eval_matrix.B.push_back(vals[1]);
            mr.eval_matrix.b.push_back({vals.begin() + 2, vals.end()});
        }
        if (fs::exists(ro)) {
            std::ifstream rin(ro.string());
            std::getline(rin, line);  // header
            while (std::getline(rin, line)) {
                std::istringstream ss(line);
                std::string cell;
                std::vector<double> vals;
                while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
                if (vals.size() < 6) continue;
                RolloutReport r;
                r.mean_dev = vals[1];
                r.max_dev = vals[2];
                r.mean_abs_delta = vals[3];
                r.steer_smoothness = vals[4];
                r.completed = vals[5] != 0.0;
                mr.rollouts.push_back(r);
            }
        }
        results.per_method.push_back(std::move(mr));
    }
    fs::path base = fs::path(out_dir) / "metrics" / "baselines.csv";
    if (fs::exists(base)) {
        std::ifstream bin(base.string());
        std::string line;
        std::getline(bin, line);
        while (std::getline(bin, line)) {
            std::istringstream ss(line);
            std::string name, cell;
            std::getline(ss, name, ',');
            std::vector<double> vals;
            while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
            if (vals.size() < 5) continue;
            RolloutReport r;
            r.mean_dev = vals[0];
            r.max_dev = vals[1];
            r.mean_abs_delta = vals[2];
            r.steer_smoothness = vals[3];
            r.completed = vals[4] != 0.0;
            if (name == "pp") results.pp_baseline = r;
            if (name == "mpc") results.mpc_baseline = r;
        }
    }
    for (const auto& f : emit_plots(results, out_dir)) std::printf("wrote %s\n", f.c_str());
    return 0;
}

}  // namespace

int cli(int argc, char** argv) {
    CLI::App app{"lifetrack: continual-learning path-tracking workbench"};
    app.require_subcommand(1);

    std::string config_file, out_dir, model_file, expert_id = "mpc";
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_file, "experiment config file (key = value)")
        ->each([](const std::string&) {});
    app.add_option("--seed", seed, "root random seed")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--out", out_dir, "output directory");

    auto* sub_tracks = app.add_subcommand("tracks", "emit built-in track presets");
    auto* sub_collect = app.add_subcommand("collect", "collect expert driving episodes");
    sub_collect->add_option("--expert", expert_id, "expert controller: pp or mpc");
    auto* sub_train = app.add_subcommand("train", "collect data and train all method arms");
    auto* sub_eval = app.add_subcommand("eval", "closed-loop rollout of a saved model");
    sub_eval->add_option("--model", model_file, "model file")->required();
    auto* sub_run = app.add_subcommand("run", "full experiment pipeline");
    auto* sub_plot = app.add_subcommand("plot", "regenerate plots from a results directory");

    if (argc <= 1) {
        std::cerr << app.help();
        return 1;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        int code = app.exit(e, msg, msg);
        std::cerr << msg.str();
        return code == 0 ? 0 : 1;
    }

    try {
        if (sub_tracks->parsed()) return cmd_tracks(out_dir.empty() ? "tracks" : out_dir);
        ExperimentConfig cfg = load_config(config_file, seed, seed_set, out_dir);
        if (sub_collect->parsed()) return cmd_collect(cfg, expert_id);
        if (sub_eval->parsed()) return cmd_eval(cfg, model_file);
        if (sub_plot->parsed()) return cmd_plot(cfg.out_dir);
        if (sub_train->parsed() || sub_run->parsed()) {
            ExperimentResults results = run_experiment(cfg);
            const auto& final_B = results.per_method;
            for (const auto& mr : final_B) {
                std::printf("%s: final B_k = %.6g, final rollout max_dev = %.4f m (completed=%d)\n",
                            method_name(mr.method).c_str(), mr.eval_matrix.B.back(),
                            mr.rollouts.back().max_dev, mr.rollouts.back().completed ? 1 : 0);
            }
            std::printf("pp baseline max_dev = %.4f m, mpc baseline max_dev = %.4f m\n",
                        results.pp_baseline.max_dev, results.mpc_baseline.max_dev);
            std::printf("results written to %s\n", cfg.out_dir.c_str());
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}

}  // namespace lifetrack
