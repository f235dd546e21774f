#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "escom/allocation.hpp"
#include "escom/com_estimator.hpp"
#include "escom/harness.hpp"

namespace py = pybind11;
using namespace escom;

namespace {

ScenarioConfig config_from_overrides(const std::map<std::string, std::string>& overrides) {
    ScenarioConfig cfg = default_config();
    KeyValueMap kv(overrides.begin(), overrides.end());
    apply_overrides(cfg, kv);
    cfg.validate();
    return cfg;
}

py::dict summary_to_dict(const RunSummary& s) {
    py::dict d;
    d["termination"] = to_string(s.termination);
    d["end_time"] = s.end_time;
    if (s.convergence_time)
        d["convergence_time"] = *s.convergence_time;
    else
        d["convergence_time"] = py::none();
    d["final_com_est"] = s.final_com_est;
    d["com_truth"] = s.com_truth;
    d["max_abs_roll"] = s.max_abs_roll;
    d["max_abs_pitch"] = s.max_abs_pitch;
    d["transport_max_abs_roll"] = s.transport_max_abs_roll;
    d["transport_max_abs_pitch"] = s.transport_max_abs_pitch;
    d["transport_rms_tracking_error"] = s.transport_rms_tracking_error;
    d["rms_position_error"] = s.rms_position_error;
    d["any_servo_cmd_saturated"] = s.any_servo_cmd_saturated;
    d["any_thrust_saturated"] = s.any_thrust_saturated;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fully-actuated cargo multirotor simulation and ESC-based CoM estimation";

    py::class_<VehicleParams>(m, "VehicleParams")
        .def(py::init<>())
        .def_readwrite("mass", &VehicleParams::mass)
        .def_readwrite("inertia", &VehicleParams::inertia)
        .def_readwrite("arm_length_r", &VehicleParams::arm_length_r)
        .def_readwrite("servo_offset_l", &VehicleParams::servo_offset_l)
        .def_readwrite("yaw_thrust_ratio_xi", &VehicleParams::yaw_thrust_ratio_xi)
        .def_readwrite("com_true", &VehicleParams::com_true)
        .def_readwrite("gravity_g", &VehicleParams::gravity_g)
        .def_readwrite("servo_angle_limit", &VehicleParams::servo_angle_limit)
        .def_readwrite("thrust_min", &VehicleParams::thrust_min)
        .def_readwrite("thrust_max", &VehicleParams::thrust_max)
        .def("validate", &VehicleParams::validate);

    py::class_<ActuatorCommand>(m, "ActuatorCommand")
        .def(py::init<>())
        .def_readwrite("thrusts", &ActuatorCommand::thrusts)
        .def_readwrite("servo_angles", &ActuatorCommand::servo_angles);

    py::class_<Wrench>(m, "Wrench")
        .def(py::init<>())
        .def_readwrite("torque", &Wrench::torque)
        .def_readwrite("force", &Wrench::force);

    m.def("net_force", &net_force, py::arg("cmd"));
    m.def(
        "thruster_force_vectors",
        [](const ActuatorCommand& cmd) {
            auto v = thruster_force_vectors(cmd);
            return std::vector<Vec3>(v.begin(), v.end());
        },
        py::arg("cmd"));
    m.def("torque_mapping_matrix", &torque_mapping_matrix, py::arg("com"),
          py::arg("servo_angles"), py::arg("params"));
    m.def("body_wrench", &body_wrench, py::arg("cmd"), py::arg("com"), py::arg("params"));
    m.def("full_mapping_matrix", &full_mapping_matrix, py::arg("com"), py::arg("servo_angles"),
          py::arg("params"));

    m.def(
        "allocate",
        [](const Wrench& w, const Vec3& com_est, const Vec2& measured_servo,
           const VehicleParams& params) {
            const AllocationResult r = allocate(w, com_est, measured_servo, params);
            py::dict d;
            d["thrusts"] = r.command.thrusts;
            d["servo_angles"] = r.command.servo_angles;
            d["ok"] = r.status == AllocationStatus::Ok;
            d["thrust_saturated"] = r.thrust_saturated;
            d["servo_saturated"] = r.servo_saturated;
            d["mapping_condition"] = r.mapping_condition;
            return d;
        },
        py::arg("wrench_des"), py::arg("com_est"), py::arg("measured_servo"), py::arg("params"));

    py::class_<DitherConfig>(m, "DitherConfig")
        .def(py::init<>())
        .def_readwrite("a1", &DitherConfig::a1)
        .def_readwrite("a2", &DitherConfig::a2)
        .def_readwrite("w1", &DitherConfig::w1)
        .def_readwrite("w2", &DitherConfig::w2);

    m.def("dither", &dither, py::arg("t"), py::arg("cfg"));
    m.def(
        "validate_stability",
        [](double g1, double g2, double w_lowpass, const DitherConfig& d, double delta_max) {
            const StabilityReport r = validate_stability(g1, g2, w_lowpass, d, delta_max);
            py::dict out;
            out["ok"] = r.ok;
            out["delta_implied"] = r.delta_implied;
            out["b_eig_real_slow"] = r.b_eig_real_slow;
            out["b_eig_real_fast"] = r.b_eig_real_fast;
            out["violations"] = r.violations;
            return out;
        },
        py::arg("g1"), py::arg("g2"), py::arg("w_lowpass"), py::arg("dither"),
        py::arg("delta_max") = 0.35);

    m.def(
        "composite_com",
        [](const VehicleParams& p, double payload_mass, const Vec3& attach) {
            PayloadConfig pl;
            pl.mass = payload_mass;
            pl.attach_position = attach;
            const CompositeBody c = composite_com(p, pl);
            py::dict d;
            d["mass"] = c.mass;
            d["com"] = c.com;
            d["inertia"] = c.inertia;
            return d;
        },
        py::arg("empty_params"), py::arg("payload_mass"), py::arg("attach_position"));

    m.def("default_config_params", [] { return default_config().vehicle; });

    m.def(
        "run_scenario",
        [](const std::map<std::string, std::string>& overrides, const std::string& out_dir) {
            const ScenarioConfig cfg = config_from_overrides(overrides);
            const RunLog log = run_scenario(cfg);
            if (!out_dir.empty()) emit_outputs(log, cfg, out_dir);
            return summary_to_dict(log.summary);
        },
        py::arg("overrides") = std::map<std::string, std::string>{}, py::arg("out_dir") = "",
        "Run a scenario from dotted-key config overrides; returns the run summary.");
}
