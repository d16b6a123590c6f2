#include "lifetrack/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lifetrack/errors.hpp"
#include "lifetrack/rng.hpp"

namespace fs = std::filesystem;

namespace lifetrack {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

void eval_matrix_update(EvalMatrix& matrix, const PolicyNet& net, const Normalizer& norm,
                        const std::vector<std::vector<Sample>>& test_sets) {
    if (test_sets.empty()) throw MissingTestSet();
    std::vector<double> row;
    row.reserve(test_sets.size());
    double sum = 0.0;
    for (const auto& ts : test_sets) {
        if (ts.empty()) throw MissingTestSet();
        double b = mse_loss(net, norm, ts);
        row.push_back(b);
        sum += b;
    }
    matrix.B.push_back(sum / static_cast<double>(row.size()));
    matrix.b.push_back(std::move(row));
}

void EvalMatrix::save_csv(const std::string& file, const std::string& method) const {
    std::ofstream out(file);
    if (!out) throw IoError("cannot open " + file);
    out << "# method = " << method << "\n";
    out << "k,B_k,b_kj...\n";
    for (std::size_t k = 0; k < b.size(); ++k) {
        out << (k + 1) << "," << fmt(B[k]);
        for (double v : b[k]) out << "," << fmt(v);
        out << "\n";
    }
}

namespace {

RolloutReport rollout_common(const std::function<double(const VehicleState&)>& control,
                             const ReferencePath& path, double v_ref,
                             const VehicleParams& params, const SimConfig& cfg,
                             Trajectory* traj_out) {
    RolloutReport rep;
    VehicleState state;
    PathPoint start = path.at_arc_length(0.0);
    state.x = start.x;
    state.y = start.y;
    state.psi = start.psi;
    state.vx = v_ref;

    const double abort_dev = 5.0;
    const double s_end = path.length() - 2.5;
    double t = 0.0;
    double dev_sum = 0.0, delta_sum = 0.0, ddelta_sum = 0.0;
    std::size_t n = 0;
    double prev_delta = 0.0;

    Trajectory traj;
    traj.v_ref = v_ref;
    while (true) {
        ProjectionResult proj = project_to_path(path, state.x, state.y);
        double dev = std::abs(proj.e_lat);
        rep.max_dev = std::max(rep.max_dev, dev);
        if (dev > abort_dev) break;
        if (proj.s_star >= s_end) {
            rep.completed = true;
            break;
        }
        if (t > 2.0 * path.length() / std::max(v_ref, 0.5)) break;

        double cmd;
        try {
            cmd = control(state);
        } catch (const Error&) {
            break;
        }
        VehicleState next;
        try {
            next = step_dynamic(state, cmd, v_ref, params, cfg);
        } catch (const NumericBlowup&) {
            break;
        }
        dev_sum += dev;
        delta_sum += std::abs(next.delta);
        ddelta_sum += std::abs(next.delta - prev_delta);
        prev_delta = next.delta;
        n += 1;
        traj.records.push_back({t, state, cmd, next.delta});
        state = next;
        t += cfg.dt;
    }
    if (n > 0) {
        rep.mean_dev = dev_sum / static_cast<double>(n);
        rep.mean_abs_delta = delta_sum / static_cast<double>(n);
        rep.steer_smoothness = ddelta_sum / static_cast<double>(n);
    }
    if (traj_out) *traj_out = std::move(traj);
    return rep;
}

}  // namespace

RolloutReport rollout_closed_loop(const PolicyNet& net, const Normalizer& norm,
                                  const ReferencePath& path, double v_ref,
                                  const VehicleParams& params, const SimConfig& cfg,
                                  double lookahead, Trajectory* traj_out) {
    auto control = [&](const VehicleState& state) {
        Pose2D pose{state.x, state.y, state.psi};
        PreviewPoint pp = preview_point(path, pose, lookahead);
        StateVec s{pp.x_ref, pp.y_ref, state.vx, state.vy, state.r};
        double delta = net.forward(norm, s);
        return std::clamp(delta, -params.delta_max, params.delta_max);
    };
    return rollout_common(control, path, v_ref, params, cfg, traj_out);
}

RolloutReport rollout_controller(const Controller& controller, const ReferencePath& path,
                                 double v_ref, const VehicleParams& params, const SimConfig& cfg,
                                 Trajectory* traj_out) {
    auto control = [&](const VehicleState& state) { return controller(state, path); };
    return rollout_common(control, path, v_ref, params, cfg, traj_out);
}

void ExperimentConfig::validate() const {
    if (velocity_grid.empty()) throw ConfigError("empty velocity grid");
    for (double v : velocity_grid)
        if (v < 3.0 || v > 15.0) throw ConfigError("collection velocity outside [3, 15] m/s");
    for (const auto& sec : train_sections)
        if (sec == test_section)
            throw ConfigError("test section " + test_section + " must not be in the curriculum");
    if (train_sections.empty()) throw ConfigError("no training sections");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (lookahead <= 0.0) throw ConfigError("lookahead must be positive");
    if (methods.empty()) throw ConfigError("no methods configured");
}

ExperimentConfig experiment_config_from_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file);
    ExperimentConfig cfg;
    std::string line;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    auto split_list = [&](const std::string& val) {
        std::vector<std::string> out;
        std::istringstream ss(val);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(trim(item));
        return out;
    };
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key == "train_sections") {
            cfg.train_sections = split_list(val);
        } else if (key == "test_section") {
            cfg.test_section = val;
        } else if (key == "velocities") {
            cfg.velocity_grid.clear();
            for (const auto& s : split_list(val)) cfg.velocity_grid.push_back(std::stod(s));
        } else if (key == "methods") {
            cfg.methods.clear();
            for (const auto& s : split_list(val)) cfg.methods.push_back(method_from_name(s));
        } else if (key == "repetitions") {
            cfg.repetitions = std::stoi(val);
        } else if (key == "lookahead") {
            cfg.lookahead = std::stod(val);
        } else if (key == "dev_threshold") {
            cfg.dev_threshold = std::stod(val);
        } else if (key == "eta") {
            cfg.eta = std::stod(val);
        } else if (key == "test_v_ref") {
            cfg.test_v_ref = std::stod(val);
        } else if (key == "epochs") {
            cfg.epochs = std::stoi(val);
        } else if (key == "minibatch") {
            cfg.minibatch = std::stoul(val);
        } else if (key == "memory_batch") {
            cfg.memory_batch = std::stoul(val);
        } else if (key == "lr") {
            cfg.lr = std::stod(val);
        } else if (key == "optimizer") {
            if (val == "sgd")
                cfg.optimizer = OptimizerState::Method::sgd;
            else if (val == "adam")
                cfg.optimizer = OptimizerState::Method::adam;
            else
                throw ConfigError("unknown optimizer: " + val);
        } else if (key == "seed") {
            cfg.seed = std::stoull(val);
        } else if (key == "out") {
            cfg.out_dir = val;
        } else if (key == "mpc.horizon_steps") {
            cfg.mpc.horizon_steps = std::stoi(val);
        } else if (key == "mpc.q_ey") {
            cfg.mpc.q_ey = std::stod(val);
        } else if (key == "mpc.q_epsi") {
            cfg.mpc.q_epsi = std::stod(val);
        } else if (key == "mpc.r_delta") {
            cfg.mpc.r_delta = std::stod(val);
        } else if (key == "mpc.r_ddelta") {
            cfg.mpc.r_ddelta = std::stod(val);
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    return cfg;
}

namespace {

std::string config_digest(const ExperimentConfig& cfg) {
    std::ostringstream ss;
    for (const auto& s : cfg.train_sections) ss << s << ";";
    ss << cfg.test_section << ";";
    for (double v : cfg.velocity_grid) ss << v << ";";
    ss << cfg.repetitions << ";" << cfg.lookahead << ";" << cfg.dev_threshold << ";" << cfg.eta
       << ";" << cfg.test_v_ref << ";" << cfg.epochs << ";" << cfg.minibatch << ";"
       << cfg.memory_batch << ";" << cfg.lr << ";"
       << (cfg.optimizer == OptimizerState::Method::sgd ? "sgd" : "adam") << ";" << cfg.seed;
    for (auto m : cfg.methods) ss << ";" << method_name(m);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(ss.str())));
    return buf;
}

}  // namespace

ExperimentResults run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResults results;

    const fs::path out(cfg.out_dir);
    for (const char* sub : {"tracks", "episodes", "datasets", "models", "metrics", "plots"})
        fs::create_directories(out / sub);
    auto declare = [&](const fs::path& p) { results.output_files.push_back(p.string()); };

    Rng root(cfg.seed);
    Rng collect_rng = root.split(1);
    Rng init_rng = root.split(2);

    // tracks
    std::map<std::string, ReferencePath> paths;
    std::vector<std::string> all_sections = cfg.train_sections;
    all_sections.push_back(cfg.test_section);
    for (const auto& sec : all_sections) {
        TrackSpec spec = track_preset(sec);
        std::vector<Waypoint> wps = generate_track(spec);
        fs::path f = out / "tracks" / (sec + ".csv");
        write_waypoints_csv(f.string(), wps);
        declare(f);
        paths.emplace(sec, build_path(wps, 0.1));
    }

    // collection with the MPC expert
    Controller mpc_expert = [&cfg](const VehicleState& st, const ReferencePath& p) {
        return mpc_control(st, p, cfg.mpc, cfg.vehicle);
    };
    std::vector<Trajectory> episodes;
    for (const auto& sec : cfg.train_sections) {
        for (double v : cfg.velocity_grid) {
            for (int rep = 0; rep < cfg.repetitions; ++rep) {
                std::uint64_t ep_seed = collect_rng.next_u64();
                double offset = rep == 0 ? 0.0 : Rng(ep_seed).uniform(-0.3, 0.3);
                Trajectory traj = collect_episode(mpc_expert, paths.at(sec), sec, v, cfg.vehicle,
                                                  cfg.sim, ep_seed, offset);
                traj.expert_id = "mpc";
                char name[96];
                std::snprintf(name, sizeof(name), "%s_v%g_r%d.csv", sec.c_str(), v, rep);
                fs::path f = out / "episodes" / name;
                write_trajectory_csv(f.string(), traj);
                declare(f);
                episodes.push_back(std::move(traj));
            }
        }
    }

    // task segmentation, curriculum order: velocities low -> high,
    // sections interleaved within each velocity
    SegmentationReport seg_report;
    std::vector<TaskDataset> groups =
        segment_tasks(episodes, cfg.lookahead, cfg.dev_threshold, root.split(3).next_u64(),
                      &seg_report);
    for (double v : cfg.velocity_grid) {
        for (const auto& sec : cfg.train_sections) {
            TaskKey key{sec, v};
            auto it = std::find_if(groups.begin(), groups.end(),
                                   [&](const TaskDataset& g) { return g.key == key; });
            if (it == groups.end()) continue;  // all episodes failed, warned above
            results.tasks.push_back(std::move(*it));
            groups.erase(it);
        }
    }
    if (results.tasks.empty()) throw EmptyData("no surviving tasks after filtering");
    for (const auto& task : results.tasks) {
        fs::path f = out / "datasets" / (task.key.label() + ".csv");
        write_dataset_csv(f.string(), task);
        declare(f);
    }

    // frozen normalizer, fitted on the curriculum data
    results.normalizer = fit_normalizer(results.tasks);

    std::vector<std::vector<Sample>> test_sets;
    for (const auto& task : results.tasks) test_sets.push_back(task.test_set());

    const ReferencePath& test_path = paths.at(cfg.test_section);
    std::uint64_t net_init_seed = init_rng.next_u64();

    for (TrainMethod method : cfg.methods) {
        MethodResults mr;
        mr.method = method;

        Rng net_rng(net_init_seed);  // identical init across arms
        PolicyNet net = PolicyNet::random_init(net_rng);
        OptimizerState opt = OptimizerState::make(cfg.optimizer, cfg.lr, net.param_count());
        EpisodicMemory memory(method == TrainMethod::ll_no_me ? EpisodicMemory::Mode::reservoir
                                                              : EpisodicMemory::Mode::curated,
                              cfg.eta, "steer_effort", cfg.memory_batch);

        TrainerConfig tcfg;
        tcfg.method = method;
        tcfg.epochs = cfg.epochs;
        tcfg.minibatch = cfg.minibatch;
        tcfg.memory_batch = cfg.memory_batch;
        tcfg.lr = cfg.lr;
        tcfg.optimizer = cfg.optimizer;
        tcfg.seed = root.split(100 + static_cast<std::uint64_t>(method)).next_u64();

        for (std::size_t t = 0; t < results.tasks.size(); ++t) {
            TaskTrainStats stats = train_task(net, results.normalizer, opt, memory,
                                              results.tasks[t].train_set(),
                                              static_cast<int>(t), tcfg);
            mr.task_stats.push_back(stats);
            std::vector<std::vector<Sample>> seen(test_sets.begin(),
                                                  test_sets.begin() + static_cast<long>(t) + 1);
            eval_matrix_update(mr.eval_matrix, net, results.normalizer, seen);
            mr.rollouts.push_back(rollout_closed_loop(net, results.normalizer, test_path,
                                                      cfg.test_v_ref, cfg.vehicle, cfg.sim,
                                                      cfg.lookahead));
        }

        fs::path model_f = out / "models" / (method_name(method) + ".txt");
        net.save(model_f.string(), results.normalizer);
        declare(model_f);
        if (method != TrainMethod::non_ll) {
            fs::path mem_f = out / "models" / ("memory_" + method_name(method) + ".csv");
            memory.save_csv(mem_f.string());
            declare(mem_f);
        }

        fs::path em_f = out / "metrics" / ("eval_matrix_" + method_name(method) + ".csv");
        mr.eval_matrix.save_csv(em_f.string(), method_name(method));
        declare(em_f);

        fs::path ro_f = out / "metrics" / ("rollouts_" + method_name(method) + ".csv");
        {
            std::ofstream ro(ro_f.string());
            ro << "task,mean_dev,max_dev,mean_abs_delta,steer_smoothness,completed\n";
            for (std::size_t t = 0; t < mr.rollouts.size(); ++t) {
                const auto& r = mr.rollouts[t];
                ro << (t + 1) << "," << fmt(r.mean_dev) << "," << fmt(r.max_dev) << ","
                   << fmt(r.mean_abs_delta) << "," << fmt(r.steer_smoothness) << ","
                   << (r.completed ? 1 : 0) << "\n";
            }
        }
        declare(ro_f);

        fs::path ts_f = out / "metrics" / ("train_stats_" + method_name(method) + ".csv");
        {
            std::ofstream ts(ts_f.string());
            ts << "task,final_train_loss,projected_steps,total_steps,corrective_steps,"
                  "memory_size,memory_loss_before,memory_loss_after\n";
            for (std::size_t t = 0; t < mr.task_stats.size(); ++t) {
                const auto& s = mr.task_stats[t];
                ts << (t + 1) << "," << fmt(s.epoch_train_loss.back()) << "," << s.projected_steps
                   << "," << s.total_steps << "," << s.corrective_steps << ","
                   << s.memory_size_after << "," << fmt(s.memory_loss_before) << ","
                   << fmt(s.memory_loss_after) << "\n";
            }
        }
        declare(ts_f);

        results.per_method.push_back(std::move(mr));
    }

    // classical baselines, evaluated once
    Controller pp_baseline = [&cfg](const VehicleState& st, const ReferencePath& p) {
        // speed-scaled lookahead keeps pure pursuit stable at test speed
        double ld = std::max(cfg.lookahead, 0.8 * st.vx);
        return pure_pursuit(st, p, ld, cfg.vehicle);
    };
    results.pp_baseline =
        rollout_controller(pp_baseline, test_path, cfg.test_v_ref, cfg.vehicle, cfg.sim);
    Controller mpc_baseline = [&cfg](const VehicleState& st, const ReferencePath& p) {
        return mpc_control(st, p, cfg.mpc, cfg.vehicle);
    };
    results.mpc_baseline =
        rollout_controller(mpc_baseline, test_path, cfg.test_v_ref, cfg.vehicle, cfg.sim);

    fs::path base_f = out / "metrics" / "baselines.csv";
    {
        std::ofstream bf(base_f.string());
        bf << "baseline,mean_dev,max_dev,mean_abs_delta,steer_smoothness,completed\n";
        auto line = [&](const char* name, const RolloutReport& r) {
            bf << name << "," << fmt(r.mean_dev) << "," << fmt(r.max_dev) << ","
               << fmt(r.mean_abs_delta) << "," << fmt(r.steer_smoothness) << ","
               << (r.completed ? 1 : 0) << "\n";
        };
        line("pp", results.pp_baseline);
        line("mpc", results.mpc_baseline);
    }
    declare(base_f);

    for (const auto& f : emit_plots(results, cfg.out_dir)) results.output_files.push_back(f);

    fs::path warn_f = out / "warnings.txt";
    {
        std::ofstream wf(warn_f.string());
        for (const auto& w : seg_report.warnings) wf << w << "\n";
    }

    fs::path manifest = out / "manifest.txt";
    {
        std::ofstream mf(manifest.string());
        mf << "seed = " << cfg.seed << "\n";
        mf << "config_hash = " << config_digest(cfg) << "\n";
        for (const auto& f : results.output_files) mf << f << "\n";
    }
    results.output_files.push_back(manifest.string());
    return results;
}

namespace {

// minimal polyline chart writer
void write_svg_chart(const std::string& file, const std::string& title,
                     const std::vector<std::pair<std::string, std::vector<double>>>& series,
                     const std::vector<std::pair<std::string, double>>& hlines) {
    const double W = 640, H = 400, ml = 60, mr = 20, mt = 40, mb = 40;
    double ymax = 1e-12, xmax = 1.0;
    for (const auto& [name, ys] : series) {
        xmax = std::max(xmax, static_cast<double>(ys.size()));
        for (double y : ys) ymax = std::max(ymax, y);
    }
    for (const auto& [name, y] : hlines) ymax = std::max(ymax, y);
    ymax *= 1.05;

    const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b"};
    std::ofstream out(file);
    if (!out) throw IoError("cannot open " + file);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
        << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
        << H - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";
    auto px = [&](double x) { return ml + (W - ml - mr) * (x / xmax); };
    auto py = [&](double y) { return H - mb - (H - mt - mb) * (y / ymax); };
    int ci = 0;
    for (const auto& [name, ys] : series) {
        if (!ys.empty()) {
            out << "<polyline fill=\"none\" stroke=\"" << colors[ci % 5]
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < ys.size(); ++i)
                out << px(static_cast<double>(i + 1)) << "," << py(ys[i]) << " ";
            out << "\"/>\n";
        }
        out << "<text x=\"" << W - mr - 140 << "\" y=\"" << mt + 16 * (ci + 1)
            << "\" font-size=\"12\" fill=\"" << colors[ci % 5] << "\">" << name << "</text>\n";
        ++ci;
    }
    for (const auto& [name, y] : hlines) {
        out << "<line x1=\"" << ml << "\" y1=\"" << py(y) << "\" x2=\"" << W - mr << "\" y2=\""
            << py(y) << "\" stroke=\"" << colors[ci % 5] << "\" stroke-dasharray=\"6,4\"/>\n";
        out << "<text x=\"" << W - mr - 140 << "\" y=\"" << mt + 16 * (ci + 1)
            << "\" font-size=\"12\" fill=\"" << colors[ci % 5] << "\">" << name << "</text>\n";
        ++ci;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", ymax);
    out << "<text x=\"" << ml - 6 << "\" y=\"" << mt << "\" text-anchor=\"end\" font-size=\"11\">"
        << buf << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << H - mb
        << "\" text-anchor=\"end\" font-size=\"11\">0</text>\n";
    out << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 16
        << "\" text-anchor=\"end\" font-size=\"11\">task " << static_cast<int>(xmax)
        << "</text>\n";
    out << "</svg>\n";
}

}  // namespace

std::vector<std::string> emit_plots(const ExperimentResults& results, const std::string& out_dir) {
    fs::path plots = fs::path(out_dir) / "plots";
    fs::create_directories(plots);
    std::vector<std::string> files;

    fs::path csv = plots / "summary.csv";
    {
        std::ofstream out(csv.string());
        out << "method,task,metric,value\n";
        for (const auto& mr : results.per_method) {
            const std::string name = method_name(mr.method);
            for (std::size_t k = 0; k < mr.eval_matrix.B.size(); ++k)
                out << name << "," << (k + 1) << ",B_k," << fmt(mr.eval_matrix.B[k]) << "\n";
            for (std::size_t k = 0; k < mr.rollouts.size(); ++k) {
                out << name << "," << (k + 1) << ",max_dev," << fmt(mr.rollouts[k].max_dev)
                    << "\n";
                out << name << "," << (k + 1) << ",mean_dev," << fmt(mr.rollouts[k].mean_dev)
                    << "\n";
            }
        }
        auto base = [&](const char* name, const RolloutReport& r) {
            out << name << ",0,max_dev," << fmt(r.max_dev) << "\n";
            out << name << ",0,mean_dev," << fmt(r.mean_dev) << "\n";
        };
        base("pp", results.pp_baseline);
        base("mpc", results.mpc_baseline);
    }
    files.push_back(csv.string());

    std::vector<std::pair<std::string, std::vector<double>>> bk_series, dev_series;
    for (const auto& mr : results.per_method) {
        bk_series.push_back({method_name(mr.method), mr.eval_matrix.B});
        std::vector<double> devs;
        for (const auto& r : mr.rollouts) devs.push_back(r.max_dev);
        dev_series.push_back({method_name(mr.method), devs});
    }
    fs::path bk_svg = plots / "avg_mse.svg";
    write_svg_chart(bk_svg.string(), "Average test MSE B_k vs tasks learned", bk_series, {});
    files.push_back(bk_svg.string());

    std::vector<std::pair<std::string, double>> hlines;
    if (!results.per_method.empty()) {
        hlines.push_back({"pp", results.pp_baseline.max_dev});
        hlines.push_back({"mpc", results.mpc_baseline.max_dev});
    }
    fs::path dev_svg = plots / "max_dev.svg";
    write_svg_chart(dev_svg.string(), "Max lateral deviation on test section", dev_series, hlines);
    files.push_back(dev_svg.string());
    return files;
}

}  // namespace lifetrack
