#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lifetrack/continual.hpp"
#include "lifetrack/experience.hpp"
#include "lifetrack/experts.hpp"
#include "lifetrack/geometry.hpp"
#include "lifetrack/harness.hpp"
#include "lifetrack/policy.hpp"
#include "lifetrack/rng.hpp"
#include "lifetrack/vehicle.hpp"

namespace py = pybind11;
using namespace lifetrack;

PYBIND11_MODULE(_lifetrack, m) {
    m.doc() = "continual-learning path-tracking workbench";

    // ---- geometry ------------------------------------------------------
    py::class_<Waypoint>(m, "Waypoint")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return Waypoint{x, y}; }), py::arg("x"),
             py::arg("y"))
        .def_readwrite("x", &Waypoint::x)
        .def_readwrite("y", &Waypoint::y);

    py::class_<Pose2D>(m, "Pose2D")
        .def(py::init([](double x, double y, double psi) { return Pose2D{x, y, psi}; }),
             py::arg("x"), py::arg("y"), py::arg("psi"))
        .def_readwrite("x", &Pose2D::x)
        .def_readwrite("y", &Pose2D::y)
        .def_readwrite("psi", &Pose2D::psi);

    py::class_<PathPoint>(m, "PathPoint")
        .def_readonly("x", &PathPoint::x)
        .def_readonly("y", &PathPoint::y)
        .def_readonly("s", &PathPoint::s)
        .def_readonly("psi", &PathPoint::psi)
        .def_readonly("kappa", &PathPoint::kappa);

    py::class_<PreviewPoint>(m, "PreviewPoint")
        .def_readonly("x_ref", &PreviewPoint::x_ref)
        .def_readonly("y_ref", &PreviewPoint::y_ref);

    py::class_<ProjectionResult>(m, "ProjectionResult")
        .def_readonly("s_star", &ProjectionResult::s_star)
        .def_readonly("e_lat", &ProjectionResult::e_lat)
        .def_readonly("e_psi", &ProjectionResult::e_psi);

    py::class_<ReferencePath>(m, "ReferencePath")
        .def_property_readonly("length", &ReferencePath::length)
        .def_property_readonly("kappa_max", &ReferencePath::kappa_max)
        .def("at_arc_length", &ReferencePath::at_arc_length)
        .def("__len__", [](const ReferencePath& p) { return p.points().size(); });

    py::class_<TrackSpec>(m, "TrackSpec")
        .def(py::init<>())
        .def_readwrite("seed", &TrackSpec::seed)
        .def_readwrite("length", &TrackSpec::length)
        .def_readwrite("section_id", &TrackSpec::section_id)
        .def_readwrite("perturb_amplitude", &TrackSpec::perturb_amplitude);

    m.def("normalize_angle", &normalize_angle);
    m.def("build_path", &build_path, py::arg("waypoints"), py::arg("ds") = 0.1);
    m.def("project_to_path",
          py::overload_cast<const ReferencePath&, double, double>(&project_to_path));
    m.def("project_to_path",
          py::overload_cast<const ReferencePath&, const Pose2D&>(&project_to_path));
    m.def("preview_point", &preview_point);
    m.def("generate_track", &generate_track);
    m.def("track_preset", &track_preset);

    // ---- vehicle -------------------------------------------------------
    py::class_<VehicleParams>(m, "VehicleParams")
        .def(py::init<>())
        .def_readwrite("m", &VehicleParams::m)
        .def_readwrite("iz", &VehicleParams::Iz)
        .def_readwrite("lf", &VehicleParams::lf)
        .def_readwrite("lr", &VehicleParams::lr)
        .def_readwrite("cf", &VehicleParams::Cf)
        .def_readwrite("cr", &VehicleParams::Cr)
        .def_readwrite("delta_max", &VehicleParams::delta_max)
        .def_readwrite("delta_rate_max", &VehicleParams::delta_rate_max)
        .def("wheelbase", &VehicleParams::wheelbase);

    py::class_<VehicleState>(m, "VehicleState")
        .def(py::init<>())
        .def_readwrite("x", &VehicleState::x)
        .def_readwrite("y", &VehicleState::y)
        .def_readwrite("psi", &VehicleState::psi)
        .def_readwrite("vx", &VehicleState::vx)
        .def_readwrite("vy", &VehicleState::vy)
        .def_readwrite("r", &VehicleState::r)
        .def_readwrite("delta", &VehicleState::delta);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("dt", &SimConfig::dt)
        .def_readwrite("substeps", &SimConfig::substeps)
        .def_readwrite("vx_lag_tau", &SimConfig::vx_lag_tau);

    m.def("step_dynamic", &step_dynamic);
    m.def("step_kinematic", &step_kinematic);

    // ---- experts -------------------------------------------------------
    py::class_<MpcConfig>(m, "MpcConfig")
        .def(py::init<>())
        .def_readwrite("horizon_steps", &MpcConfig::horizon_steps)
        .def_readwrite("dt", &MpcConfig::dt)
        .def_readwrite("q_ey", &MpcConfig::q_ey)
        .def_readwrite("q_epsi", &MpcConfig::q_epsi)
        .def_readwrite("r_delta", &MpcConfig::r_delta)
        .def_readwrite("r_ddelta", &MpcConfig::r_ddelta);

    m.def("pure_pursuit", &pure_pursuit);
    m.def("mpc_control", &mpc_control);

    // ---- policy --------------------------------------------------------
    py::class_<Normalizer>(m, "Normalizer")
        .def(py::init<>())
        .def_readwrite("shift", &Normalizer::shift)
        .def_readwrite("scale", &Normalizer::scale)
        .def("apply", &Normalizer::apply);

    py::class_<PolicyNet>(m, "PolicyNet")
        .def(py::init<>())
        .def_static("random_init",
                    [](std::uint64_t seed) {
                        Rng rng(seed);
                        return PolicyNet::random_init(rng);
                    },
                    py::arg("seed"))
        .def_property_readonly("param_count", &PolicyNet::param_count)
        .def("forward", &PolicyNet::forward)
        .def("save", &PolicyNet::save)
        .def_static("load", &PolicyNet::load);

    py::class_<Sample>(m, "Sample")
        .def(py::init<>())
        .def(py::init([](const StateVec& s, double a) { return Sample{s, a}; }), py::arg("s"),
             py::arg("a"))
        .def_readwrite("s", &Sample::s)
        .def_readwrite("a", &Sample::a);

    m.def("mse_loss", &mse_loss);
    m.def("backward", [](const PolicyNet& net, const Normalizer& norm,
                         const std::vector<Sample>& batch) {
        auto [loss, g] = backward(net, norm, batch);
        return py::make_tuple(loss, g.v);
    });

    // ---- continual -----------------------------------------------------
    m.def("agem_project", [](const std::vector<double>& g, const std::vector<double>& ref) {
        GradientVector gv, rv;
        gv.v = g;
        rv.v = ref;
        return agem_project(gv, rv).v;
    });
    m.def("sim", &sim);
    m.def("eval_fn", &eval_fn);

    py::class_<EpisodicMemory>(m, "EpisodicMemory")
        .def(py::init([](const std::string& mode, double eta) {
                 return EpisodicMemory(mode == "reservoir" ? EpisodicMemory::Mode::reservoir
                                                           : EpisodicMemory::Mode::curated,
                                       eta);
             }),
             py::arg("mode") = "curated", py::arg("eta") = 0.25)
        .def("__len__", &EpisodicMemory::size)
        .def("save_csv", &EpisodicMemory::save_csv)
        .def("samples", [](const EpisodicMemory& mem) {
            std::vector<Sample> out;
            for (const auto& e : mem.entries()) out.push_back(e.sample);
            return out;
        });

    m.def("memory_update_curated", &memory_update_curated);

    py::class_<CurationReport>(m, "CurationReport")
        .def_readonly("inserted", &CurationReport::inserted)
        .def_readonly("replacements", &CurationReport::replacements)
        .def_readonly("rejected", &CurationReport::rejected);

    // ---- experience & harness -----------------------------------------
    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("section_id", &Trajectory::section_id)
        .def_readonly("v_ref", &Trajectory::v_ref)
        .def_readonly("blowup", &Trajectory::blowup)
        .def_readonly("max_dev", &Trajectory::max_dev)
        .def("__len__", [](const Trajectory& t) { return t.records.size(); });

    py::class_<TaskDataset>(m, "TaskDataset")
        .def_property_readonly("samples", [](const TaskDataset& d) { return d.samples; })
        .def("train_set", &TaskDataset::train_set)
        .def("test_set", &TaskDataset::test_set);

    m.def("collect_episode", &collect_episode, py::arg("expert"), py::arg("path"),
          py::arg("section_id"), py::arg("v_ref"), py::arg("params"), py::arg("cfg"),
          py::arg("seed"), py::arg("start_offset") = 0.0);
    m.def("process_experience", &process_experience, py::arg("trajectory"), py::arg("lookahead"),
          py::arg("ds") = 0.1);
    m.def("fit_normalizer", &fit_normalizer);

    py::class_<RolloutReport>(m, "RolloutReport")
        .def_readonly("mean_dev", &RolloutReport::mean_dev)
        .def_readonly("max_dev", &RolloutReport::max_dev)
        .def_readonly("mean_abs_delta", &RolloutReport::mean_abs_delta)
        .def_readonly("completed", &RolloutReport::completed);

    m.def("rollout_closed_loop", &rollout_closed_loop, py::arg("net"), py::arg("norm"),
          py::arg("path"), py::arg("v_ref"), py::arg("params"), py::arg("cfg"),
          py::arg("lookahead"), py::arg("traj_out") = nullptr);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("train_sections", &ExperimentConfig::train_sections)
        .def_readwrite("test_section", &ExperimentConfig::test_section)
        .def_readwrite("velocity_grid", &ExperimentConfig::velocity_grid)
        .def_readwrite("epochs", &ExperimentConfig::epochs)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir)
        .def("validate", &ExperimentConfig::validate);

    m.def("run_experiment", &run_experiment);
}
