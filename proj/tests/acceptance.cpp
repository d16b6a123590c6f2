// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier end-to-end checks than the unit tests; expected to run
// in well under twenty minutes on a desktop machine.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lifetrack/continual.hpp"
#include "lifetrack/errors.hpp"
#include "lifetrack/experience.hpp"
#include "lifetrack/experts.hpp"
#include "lifetrack/harness.hpp"
#include "lifetrack/policy.hpp"
#include "lifetrack/rng.hpp"

using namespace lifetrack;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Timer {
public:
    Timer() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

void report(const char* id, const char* title, bool ok, double secs, const std::string& detail) {
    std::printf("%-3s %-34s %s  (%.1f s)%s%s\n", id, title, ok ? "PASS" : "FAIL", secs,
                detail.empty() ? "" : "  -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::vector<Waypoint> circle_waypoints(double radius, int n) {
    std::vector<Waypoint> wps;
    for (int i = 0; i <= n; ++i) {
        double a = 2.0 * 3.14159265358979323846 * i / n;
        wps.push_back({radius * std::sin(a), radius * (1.0 - std::cos(a))});
    }
    return wps;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p.string(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------- A1

void a1_projection() {
    Timer timer;
    Rng rng(0xA1);
    const std::size_t dims[] = {2, 10, 4801};
    bool ok = true;
    std::string detail;
    for (int trial = 0; trial < 10000 && ok; ++trial) {
        std::size_t n = dims[trial % 3];
        GradientVector g, ref;
        g.v.resize(n);
        ref.v.resize(n);
        for (auto& v : g.v) v = rng.normal();
        for (auto& v : ref.v) v = rng.normal();
        GradientVector out = agem_project(g, ref);
        double inner = g.dot(ref);
        if (inner < 0.0) {
            double resid = std::abs(out.dot(ref));
            if (resid > 1e-9 * g.norm() * ref.norm()) {
                ok = false;
                detail = "residual too large after projection";
            }
            double coef = inner / ref.dot(ref);
            for (std::size_t i = 0; i < n && ok; ++i) {
                double expect = g.v[i] - coef * ref.v[i];
                if (std::abs(out.v[i] - expect) > 1e-12 * std::max(1.0, std::abs(expect))) {
                    ok = false;
                    detail = "closed-form mismatch";
                }
            }
        } else {
            for (std::size_t i = 0; i < n && ok; ++i)
                if (out.v[i] != g.v[i]) {
                    ok = false;
                    detail = "non-conflicting gradient was modified";
                }
        }
    }
    double secs = timer.seconds();
    if (secs >= 10.0) {
        ok = false;
        detail = "runtime budget exceeded";
    }
    report("A1", "gradient projection", ok, secs, detail);
}

// ---------------------------------------------------------------- A2

void a2_gradient_check() {
    Timer timer;
    Rng rng(0xA2);
    Normalizer norm;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        PolicyNet net = PolicyNet::random_init(rng);
        std::vector<Sample> batch;
        std::size_t bs = 1 + rng.uniform_index(4);
        for (std::size_t i = 0; i < bs; ++i) {
            Sample sm;
            for (double& v : sm.s) v = rng.uniform(-1.5, 1.5);
            sm.a = rng.uniform(-0.4, 0.4);
            batch.push_back(sm);
        }
        auto [loss, g] = backward(net, norm, batch);
        (void)loss;
        const double h = 1e-6;
        for (std::size_t i = 0; i < net.param_count(); ++i) {
            PolicyNet plus = net, minus = net;
            plus.params()[i] += h;
            minus.params()[i] -= h;
            double fd = (mse_loss(plus, norm, batch) - mse_loss(minus, norm, batch)) / (2.0 * h);
            double rel = std::abs(fd - g.v[i]) / std::max(1.0, std::abs(g.v[i]));
            worst = std::max(worst, rel);
        }
    }
    double secs = timer.seconds();
    bool ok = worst <= 1e-6 && secs < 60.0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max rel err %.2e", worst);
    report("A2", "analytic vs numeric gradient", ok, secs, buf);
}

// ---------------------------------------------------------------- A3

// independent restatement of the curation rule, used as an oracle
struct OracleEntry {
    Sample sample;
    int task_id;
};

std::vector<OracleEntry> oracle_curate(std::vector<OracleEntry> stored,
                                       const std::vector<Sample>& stream, const Normalizer& norm,
                                       double eta, int task_id) {
    for (const Sample& cand : stream) {
        StateVec cz = norm.apply(cand.s);
        std::vector<OracleEntry> near, far;
        for (const auto& e : stored) {
            if (sim(cz, norm.apply(e.sample.s)) <= eta)
                near.push_back(e);
            else
                far.push_back(e);
        }
        if (near.empty()) {
            stored.push_back({cand, task_id});
            continue;
        }
        const OracleEntry* champion = &near.front();
        for (const auto& e : near)
            if (eval_fn(norm.apply(e.sample.s), e.sample.a, "steer_effort") <
                eval_fn(norm.apply(champion->sample.s), champion->sample.a, "steer_effort"))
                champion = &e;
        double champ_score =
            eval_fn(norm.apply(champion->sample.s), champion->sample.a, "steer_effort");
        if (eval_fn(cz, cand.a, "steer_effort") < champ_score) {
            far.push_back({cand, task_id});
        } else {
            far.push_back(*champion);
        }
        stored = std::move(far);
    }
    return stored;
}

void a3_curation() {
    Timer timer;
    bool ok = true;
    std::string detail;
    Rng rng(0xA3);
    for (int stream_id = 0; stream_id < 500 && ok; ++stream_id) {
        double eta = rng.uniform(0.05, 0.6);
        EpisodicMemory mem(EpisodicMemory::Mode::curated, eta);
        EpisodicMemory mem2(EpisodicMemory::Mode::curated, eta);
        Normalizer norm;  // candidates generated directly in normalized space
        std::vector<OracleEntry> oracle;
        int bursts = 1 + static_cast<int>(rng.uniform_index(4));
        Rng replay = rng;  // identical candidate stream for the determinism run
        for (int task = 0; task < bursts; ++task) {
            std::vector<Sample> stream;
            std::size_t n = 5 + rng.uniform_index(60);
            for (std::size_t i = 0; i < n; ++i) {
                Sample sm;
                for (double& v : sm.s) v = rng.uniform(-1.2, 1.2);
                sm.a = rng.uniform(-0.5, 0.5);
                stream.push_back(sm);
            }
            memory_update_curated(mem, stream, norm, task);
            oracle = oracle_curate(std::move(oracle), stream, norm, eta, task);
        }
        // determinism: replay the identical stream into a second memory
        for (int task = 0; task < bursts; ++task) {
            std::vector<Sample> stream;
            std::size_t n = 5 + replay.uniform_index(60);
            for (std::size_t i = 0; i < n; ++i) {
                Sample sm;
                for (double& v : sm.s) v = replay.uniform(-1.2, 1.2);
                sm.a = replay.uniform(-0.5, 0.5);
                stream.push_back(sm);
            }
            memory_update_curated(mem2, stream, norm, task);
        }
        rng = replay;

        const auto& entries = mem.entries();
        // pairwise spacing strictly above eta
        for (std::size_t i = 0; i < entries.size() && ok; ++i)
            for (std::size_t j = i + 1; j < entries.size() && ok; ++j)
                if (sim(norm.apply(entries[i].sample.s), norm.apply(entries[j].sample.s)) <= eta) {
                    ok = false;
                    detail = "stored states closer than eta";
                }
        // exact agreement with the independent oracle
        if (ok && entries.size() != oracle.size()) {
            ok = false;
            detail = "oracle size mismatch";
        }
        if (ok) {
            // both keep first-processed order of surviving entries? order may
            // differ; compare as multisets keyed by full content
            auto key = [](const StateVec& s, double a, int t) {
                std::ostringstream os;
                os.precision(17);
                for (double v : s) os << v << ",";
                os << a << "," << t;
                return os.str();
            };
            std::vector<std::string> lhs, rhs;
            for (const auto& e : entries) lhs.push_back(key(e.sample.s, e.sample.a, e.task_id));
            for (const auto& e : oracle) rhs.push_back(key(e.sample.s, e.sample.a, e.task_id));
            std::sort(lhs.begin(), lhs.end());
            std::sort(rhs.begin(), rhs.end());
            if (lhs != rhs) {
                ok = false;
                detail = "oracle content mismatch";
            }
        }
        // determinism
        if (ok && (mem2.size() != entries.size())) {
            ok = false;
            detail = "rerun size differs";
        }
        for (std::size_t i = 0; ok && i < entries.size(); ++i)
            if (mem2.entries()[i].sample.s != entries[i].sample.s ||
                mem2.entries()[i].sample.a != entries[i].sample.a) {
                ok = false;
                detail = "rerun not bit-identical";
            }
    }
    report("A3", "memory curation invariants", ok, timer.seconds(), detail);
}

// ---------------------------------------------------------------- A4

void a4_experience() {
    Timer timer;
    bool ok = true;
    std::string detail;
    VehicleParams params;
    SimConfig sim_cfg;
    MpcConfig mpc;
    Controller expert = [&](const VehicleState& st, const ReferencePath& p) {
        return mpc_control(st, p, mpc, params);
    };
    const char* sections[] = {"S1", "S2", "S3"};
    Rng rng(0xA4);
    std::size_t total_samples = 0;
    for (int ep = 0; ep < 20 && ok; ++ep) {
        ReferencePath path = build_path(generate_track(track_preset(sections[ep % 3])), 0.1);
        double v = 4.0 + (ep % 5) * 2.0;
        double offset = (ep < 3) ? 0.0 : rng.uniform(-0.3, 0.3);
        Trajectory traj =
            collect_episode(expert, path, sections[ep % 3], v, params, sim_cfg,
                            static_cast<std::uint64_t>(ep + 1), offset);
        TaskDataset ds;
        try {
            ds = process_experience(traj, 2.0);
        } catch (const TrajectoryTooShort&) {
            ok = false;
            detail = "episode too short to process";
            break;
        }
        std::vector<Waypoint> driven;
        for (const auto& rec : traj.records) driven.push_back({rec.state.x, rec.state.y});
        ReferencePath driven_path = build_path(driven, 0.1);
        for (std::size_t k = 0; k < ds.samples.size() && ok; ++k) {
            const auto& rec = traj.records[k];
            const auto& sm = ds.samples[k];
            if (sm.a != rec.delta_applied) {
                ok = false;
                detail = "action not bitwise equal to applied steering";
                break;
            }
            double c = std::cos(rec.state.psi), s = std::sin(rec.state.psi);
            double gx = rec.state.x + sm.s[0] * c - sm.s[1] * s;
            double gy = rec.state.y + sm.s[0] * s + sm.s[1] * c;
            if (std::abs(project_to_path(driven_path, gx, gy).e_lat) > 1e-6) {
                ok = false;
                detail = "preview point off the driven path";
            }
        }
        total_samples += ds.samples.size();
    }
    if (ok && total_samples < 1000) {
        ok = false;
        detail = "suspiciously few samples";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu samples checked", total_samples);
    report("A4", "experience zero-error property", ok, timer.seconds(),
           ok ? std::string(buf) : detail);
}

// ------------------------------------------------------- A5 / A6 / A7

struct CurriculumOutcome {
    ExperimentResults results;
    double run_seconds = 0.0;
    bool ran = false;
};

CurriculumOutcome run_full_curriculum() {
    CurriculumOutcome out;
    Timer timer;
    ExperimentConfig cfg;  // defaults: S2+S3 x {3,6,9,12,15}, all methods
    cfg.out_dir = (fs::temp_directory_path() / "lifetrack_accept_full").string();
    fs::remove_all(cfg.out_dir);
    try {
        out.results = run_experiment(cfg);
        out.ran = true;
    } catch (const std::exception& e) {
        std::printf("curriculum run threw: %s\n", e.what());
    }
    out.run_seconds = timer.seconds();
    fs::remove_all(cfg.out_dir);
    return out;
}

const MethodResults* find_method(const ExperimentResults& r, TrainMethod m) {
    for (const auto& mr : r.per_method)
        if (mr.method == m) return &mr;
    return nullptr;
}

void a5_forgetting(const CurriculumOutcome& run) {
    bool ok = run.ran;
    std::string detail = ok ? "" : "curriculum run failed";
    double b_non = 0.0, b_nome = 0.0, b_me = 0.0;
    if (ok) {
        const auto* non_ll = find_method(run.results, TrainMethod::non_ll);
        const auto* no_me = find_method(run.results, TrainMethod::ll_no_me);
        const auto* me = find_method(run.results, TrainMethod::ll_me);
        ok = non_ll && no_me && me && run.results.tasks.size() >= 10 &&
             !non_ll->eval_matrix.B.empty();
        if (ok) {
            b_non = non_ll->eval_matrix.B.back();
            b_nome = no_me->eval_matrix.B.back();
            b_me = me->eval_matrix.B.back();
            ok = b_non > b_nome && b_non > b_me;
        }
        char buf[128];
        std::snprintf(buf, sizeof(buf), "B_K non_ll %.3e, ll_no_me %.3e, ll_me %.3e", b_non,
                      b_nome, b_me);
        detail = buf;
    }
    bool in_budget = run.run_seconds < 600.0;
    if (!in_budget) detail += " (runtime budget exceeded)";
    report("A5", "forgetting ordering", ok && in_budget, run.run_seconds, detail);
}

void a6_constraint(const CurriculumOutcome& run) {
    bool ok = run.ran;
    std::string detail = ok ? "" : "curriculum run failed";
    double worst_ratio = 0.0;
    if (ok) {
        for (TrainMethod m : {TrainMethod::ll_no_me, TrainMethod::ll_me}) {
            const auto* mr = find_method(run.results, m);
            if (!mr) {
                ok = false;
                detail = "method missing";
                break;
            }
            for (const auto& st : mr->task_stats) {
                if (st.memory_loss_before < 0.0) continue;  // no memory yet
                double ratio = st.memory_loss_after / std::max(st.memory_loss_before, 1e-300);
                worst_ratio = std::max(worst_ratio, ratio);
                if (st.memory_loss_after > 1.05 * st.memory_loss_before) ok = false;
            }
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "worst post/pre memory-loss ratio %.4f", worst_ratio);
        detail = buf;
    }
    report("A6", "memory loss preserved", ok, 0.0, detail);
}

void a7_adaptation(const CurriculumOutcome& run) {
    bool ok = run.ran;
    std::string detail = ok ? "" : "curriculum run failed";
    if (ok) {
        const auto* me = find_method(run.results, TrainMethod::ll_me);
        ok = me && !me->rollouts.empty();
        if (ok) {
            const RolloutReport& final_ro = me->rollouts.back();
            const RolloutReport& pp = run.results.pp_baseline;
            ok = final_ro.completed && pp.completed &&
                 final_ro.max_dev <= 1.1 * pp.max_dev;
            char buf[128];
            std::snprintf(buf, sizeof(buf), "ll_me max dev %.3f m vs pure pursuit %.3f m%s",
                          final_ro.max_dev, pp.max_dev,
                          (ok && final_ro.max_dev < pp.max_dev) ? " (stretch met)" : "");
            detail = buf;
        } else {
            detail = "ll_me rollouts missing";
        }
    }
    bool in_budget = run.run_seconds < 900.0;
    if (!in_budget) detail += " (runtime budget exceeded)";
    report("A7", "held-out closed-loop adaptation", ok && in_budget, run.run_seconds, detail);
}

// ---------------------------------------------------------------- A8

void a8_latency() {
    Timer timer;
    Rng rng(0xA8);
    PolicyNet net = PolicyNet::random_init(rng);
    Normalizer norm;
    StateVec s{2.0, 0.05, 10.0, 0.01, 0.002};
    volatile double sink = 0.0;
    Timer inner;
    const int n = 10000;
    for (int i = 0; i < n; ++i) sink = sink + net.forward(norm, s);
    double mean_ms = inner.seconds() * 1000.0 / n;
    (void)sink;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "mean %.4f ms per call", mean_ms);
    report("A8", "inference latency", mean_ms < 1.1, timer.seconds(), buf);
}

// ---------------------------------------------------------------- A9

double qp_cost(const QpProblem& p, const std::vector<double>& x) {
    double c = 0.0;
    const std::size_t n = p.dim();
    for (std::size_t i = 0; i < n; ++i) {
        double hx = 0.0;
        for (std::size_t j = 0; j < n; ++j) hx += p.H[i * n + j] * x[j];
        c += 0.5 * x[i] * hx + p.f[i] * x[i];
    }
    return c;
}

std::vector<double> grid_refine_oracle(const QpProblem& p, int grid_points) {
    const std::size_t n = p.dim();
    std::vector<int> idx(n, 0);
    std::vector<double> x(n), best(n);
    double best_cost = 1e300;
    while (true) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = p.lo[i] + (p.hi[i] - p.lo[i]) * idx[i] / (grid_points - 1);
        double c = qp_cost(p, x);
        if (c < best_cost) {
            best_cost = c;
            best = x;
        }
        std::size_t k = 0;
        while (k < n && ++idx[k] == grid_points) idx[k++] = 0;
        if (k == n) break;
    }
    x = best;
    for (int sweep = 0; sweep < 500; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) {
            double hii = p.H[i * n + i];
            if (hii <= 0.0) continue;
            double g = p.f[i];
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) g += p.H[i * n + j] * x[j];
            x[i] = std::min(p.hi[i], std::max(p.lo[i], -g / hii));
        }
    }
    return x;
}

void a9_controller_oracles() {
    Timer timer;
    bool ok = true;
    std::string detail;
    VehicleParams params;

    const double R = 40.0;
    ReferencePath circle = build_path(circle_waypoints(R, 200), 0.1);
    PathPoint p = circle.at_arc_length(50.0);
    VehicleState s;
    s.x = p.x;
    s.y = p.y;
    s.psi = p.psi;
    s.vx = 5.0;
    double delta = pure_pursuit(s, circle, 2.0, params);
    double expect = std::atan(params.wheelbase() / R);
    if (std::abs(delta - expect) > 0.02 * std::abs(expect)) {
        ok = false;
        detail = "pure pursuit off the circle law";
    }

    MpcConfig cfg;
    cfg.horizon_steps = 2;
    ReferencePath path = build_path(circle_waypoints(25.0, 160), 0.1);
    Rng rng(0xA9);
    double worst = 0.0;
    for (int trial = 0; trial < 25 && ok; ++trial) {
        PathPoint q = path.at_arc_length(rng.uniform(10.0, 60.0));
        VehicleState st;
        st.x = q.x + rng.uniform(-0.5, 0.5);
        st.y = q.y + rng.uniform(-0.5, 0.5);
        st.psi = q.psi + rng.uniform(-0.1, 0.1);
        st.vx = rng.uniform(5.0, 12.0);
        st.vy = rng.uniform(-0.3, 0.3);
        st.r = rng.uniform(-0.2, 0.2);
        QpProblem qp = build_mpc_qp(st, path, cfg, params);
        auto u = solve_box_qp(qp, 1e-8);
        auto u_oracle = grid_refine_oracle(qp, 21);
        worst = std::max(worst, std::abs(u[0] - u_oracle[0]));
        if (worst > 1e-4) {
            ok = false;
            detail = "mpc first control off the grid oracle";
        }
    }
    if (ok) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "pp err %.4f rad, mpc worst gap %.2e rad",
                      std::abs(delta - expect), worst);
        detail = buf;
    }
    report("A9", "controller oracles", ok, timer.seconds(), detail);
}

// ---------------------------------------------------------------- A10

void a10_determinism() {
    Timer timer;
    bool ok = true;
    std::string detail;
    ExperimentConfig cfg;
    cfg.train_sections = {"S3"};
    cfg.velocity_grid = {6.0, 9.0, 12.0};
    cfg.epochs = 6;
    cfg.seed = 2024;

    std::vector<std::string> runs;
    for (int i = 0; i < 2 && ok; ++i) {
        cfg.out_dir =
            (fs::temp_directory_path() / ("lifetrack_accept_det" + std::to_string(i))).string();
        fs::remove_all(cfg.out_dir);
        try {
            run_experiment(cfg);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("run threw: ") + e.what();
        }
        runs.push_back(cfg.out_dir);
    }
    if (ok) {
        std::size_t compared = 0;
        for (const auto& entry : fs::directory_iterator(fs::path(runs[0]) / "metrics")) {
            if (entry.path().extension() != ".csv") continue;
            fs::path other = fs::path(runs[1]) / "metrics" / entry.path().filename();
            if (!fs::exists(other)) {
                ok = false;
                detail = "rerun missing " + entry.path().filename().string();
                break;
            }
            if (slurp(entry.path()) != slurp(other)) {
                ok = false;
                detail = entry.path().filename().string() + " differs between runs";
                break;
            }
            ++compared;
        }
        if (ok && compared == 0) {
            ok = false;
            detail = "no metric CSVs emitted";
        }
        if (ok) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%zu metric files byte-identical", compared);
            detail = buf;
        }
    }
    for (const auto& d : runs) fs::remove_all(d);
    report("A10", "rerun determinism", ok, timer.seconds(), detail);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n----------------\n");
    a1_projection();
    a2_gradient_check();
    a3_curation();
    a4_experience();
    CurriculumOutcome run = run_full_curriculum();
    a5_forgetting(run);
    a6_constraint(run);
    a7_adaptation(run);
    a8_latency();
    a9_controller_oracles();
    a10_determinism();
    std::printf("----------------\n%s (%d failure%s)\n", g_failures == 0 ? "ALL PASS" : "FAILED",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
