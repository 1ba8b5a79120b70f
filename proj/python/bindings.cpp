#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "khorbits/archive.hpp"
#include "khorbits/commands.hpp"
#include "khorbits/config.hpp"
#include "khorbits/dynamics.hpp"
#include "khorbits/integrator.hpp"
#include "khorbits/optimizer.hpp"
#include "khorbits/sampling.hpp"
#include "khorbits/scan.hpp"
#include "khorbits/shooting.hpp"
#include "khorbits/symmetry.hpp"

namespace py = pybind11;
using namespace khorbits;

namespace {

py::array_t<double> states_array(const Trajectory& t) {
    py::array_t<double> out({t.size(), static_cast<std::size_t>(6)});
    auto buf = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Vec6 v = t.states[i].to_array();
        for (std::size_t j = 0; j < 6; ++j) buf(i, j) = v[j];
    }
    return out;
}

py::array_t<double> times_array(const Trajectory& t) {
    py::array_t<double> out(t.size());
    auto buf = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < t.size(); ++i) buf(i) = t.time_at(i);
    return out;
}

/// Positions-only trajectory from an (n, 3) or (n, 6) array, for feeding
/// externally generated curves to the symmetry tools.
Trajectory trajectory_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr,
                                 double dt_sample, double t0) {
    const auto buf = arr.unchecked<2>();
    if (buf.shape(1) != 3 && buf.shape(1) != 6)
        throw std::invalid_argument("expected an (n, 3) or (n, 6) array");
    Trajectory t;
    t.t0 = t0;
    t.dt_sample = dt_sample;
    t.states.resize(static_cast<std::size_t>(buf.shape(0)));
    for (py::ssize_t i = 0; i < buf.shape(0); ++i) {
        PhaseState& s = t.states[static_cast<std::size_t>(i)];
        s.x = buf(i, 0);
        s.y = buf(i, 1);
        s.z = buf(i, 2);
        if (buf.shape(1) == 6) {
            s.px = buf(i, 3);
            s.py = buf(i, 4);
            s.pz = buf(i, 5);
        }
    }
    return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "closed-orbit search for the Kepler problem on the Heisenberg group";

    py::register_exception<SingularityError>(m, "SingularityError");
    py::register_exception<DegenerateSignalError>(m, "DegenerateSignalError");
    py::register_exception<AmbiguousTypeError>(m, "AmbiguousTypeError");

    py::class_<PhaseState>(m, "PhaseState")
        .def(py::init<>())
        .def(py::init([](double x, double y, double z, double px, double py_, double pz) {
                 return PhaseState{x, y, z, px, py_, pz};
             }),
             py::arg("x"), py::arg("y"), py::arg("z"), py::arg("px"), py::arg("py"), py::arg("pz"))
        .def_readwrite("x", &PhaseState::x)
        .def_readwrite("y", &PhaseState::y)
        .def_readwrite("z", &PhaseState::z)
        .def_readwrite("px", &PhaseState::px)
        .def_readwrite("py", &PhaseState::py)
        .def_readwrite("pz", &PhaseState::pz)
        .def("__repr__", [](const PhaseState& s) {
            std::ostringstream os;
            os << "PhaseState(x=" << s.x << ", y=" << s.y << ", z=" << s.z << ", px=" << s.px
               << ", py=" << s.py << ", pz=" << s.pz << ")";
            return os.str();
        });

    py::class_<ConservedSet>(m, "ConservedSet")
        .def_readonly("h", &ConservedSet::h)
        .def_readonly("p_theta", &ConservedSet::p_theta)
        .def_readonly("j", &ConservedSet::j);

    m.def("rho", &rho, py::arg("s"));
    m.def("hamiltonian", &hamiltonian, py::arg("s"));
    m.def("grad_hamiltonian", &grad_hamiltonian, py::arg("s"));
    m.def("conserved", &conserved, py::arg("s"));
    m.def("dilate", &dilate, py::arg("s"), py::arg("lam"));

    py::class_<ReducedIC>(m, "ReducedIC")
        .def(py::init([](double px, double py_, int branch) {
                 return ReducedIC{px, py_, branch};
             }),
             py::arg("px"), py::arg("py"), py::arg("branch") = +1)
        .def_readwrite("px", &ReducedIC::px)
        .def_readwrite("py", &ReducedIC::py)
        .def_readwrite("branch", &ReducedIC::branch);

    m.attr("PX_BOUND") = kPxBound;
    m.def("embed", &embed, py::arg("ic"));
    m.def(
        "embed", [](double px, double py_) { return embed({px, py_, +1}); }, py::arg("px"),
        py::arg("py"));

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("t0", &Trajectory::t0)
        .def_readonly("dt_sample", &Trajectory::dt_sample)
        .def_readonly("collided", &Trajectory::collided)
        .def_readonly("rho_min", &Trajectory::rho_min)
        .def("__len__", &Trajectory::size)
        .def_property_readonly("states", &states_array)
        .def_property_readonly("times", &times_array)
        .def("duration", &Trajectory::duration)
        .def("state_at", &Trajectory::state_at, py::arg("t"));

    m.def("trajectory_from_array", &trajectory_from_array, py::arg("positions"),
          py::arg("dt_sample"), py::arg("t0") = 0.0);

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init<>())
        .def_readwrite("delta", &IntegratorConfig::delta)
        .def_readwrite("omega", &IntegratorConfig::omega)
        .def_readwrite("record_stride", &IntegratorConfig::record_stride);

    m.def(
        "integrate",
        [](const PhaseState& s0, double duration, const IntegratorConfig& icfg, double rho_abort,
           bool record_conserved) {
            IntegrateOptions opts;
            opts.rho_abort = rho_abort;
            opts.record_conserved = record_conserved;
            return integrate(s0, duration, icfg, opts);
        },
        py::arg("s0"), py::arg("duration"), py::arg("config") = IntegratorConfig{},
        py::arg("rho_abort") = 0.0, py::arg("record_conserved") = false);

    py::class_<ObjectiveValue>(m, "ObjectiveValue")
        .def_readonly("value", &ObjectiveValue::value)
        .def_readonly("t_star", &ObjectiveValue::t_star);

    py::enum_<AbortReason>(m, "AbortReason")
        .value("timeout", AbortReason::timeout)
        .value("collision", AbortReason::collision)
        .value("escape", AbortReason::escape);

    py::class_<ShootingConfig>(m, "ShootingConfig")
        .def(py::init<>())
        .def_readwrite("threshold", &ShootingConfig::threshold)
        .def_readwrite("t_init", &ShootingConfig::t_init)
        .def_readwrite("t_max", &ShootingConfig::t_max)
        .def_readwrite("warmup_frac", &ShootingConfig::warmup_frac)
        .def_readwrite("escape_radius", &ShootingConfig::escape_radius)
        .def_readwrite("collision_rho", &ShootingConfig::collision_rho)
        .def_readwrite("j_tol", &ShootingConfig::j_tol);

    py::class_<AssessOutcome>(m, "AssessOutcome")
        .def_property_readonly("is_candidate", &AssessOutcome::is_candidate)
        .def_property_readonly("reason",
                               [](const AssessOutcome& o) -> std::optional<AbortReason> {
                                   if (o.status == AssessOutcome::Status::abortive) return o.reason;
                                   return std::nullopt;
                               })
        .def_readonly("duration", &AssessOutcome::duration)
        .def_readonly("objective", &AssessOutcome::objective)
        .def_readonly("trajectory", &AssessOutcome::trajectory);

    m.def("assess", &assess, py::arg("s0"), py::arg("integrator") = IntegratorConfig{},
          py::arg("shooting") = ShootingConfig{});

    py::class_<SymmetryType>(m, "SymmetryType")
        .def(py::init([](int j, int k) { return SymmetryType{j, k}; }), py::arg("j"), py::arg("k"))
        .def_readonly("j", &SymmetryType::j)
        .def_readonly("k", &SymmetryType::k)
        .def("value", &SymmetryType::value)
        .def("__eq__", [](const SymmetryType& a, const SymmetryType& b) { return a == b; })
        .def("__lt__", [](const SymmetryType& a, const SymmetryType& b) { return a < b; })
        .def("__hash__", [](const SymmetryType& t) { return t.j * 64 + t.k; })
        .def("__repr__", [](const SymmetryType& t) { return t.str(); });

    m.def("reduced", &reduced, py::arg("j"), py::arg("k"));
    m.def("detect_order", &detect_order, py::arg("trajectory"));
    m.def("detect_type", &detect_type, py::arg("trajectory"));
    m.def("verify_symmetry", &verify_symmetry, py::arg("trajectory"), py::arg("type"));
    m.def("resample_period", &resample_period, py::arg("trajectory"), py::arg("period"),
          py::arg("n"));
    m.def("farey_sequence", &farey_sequence, py::arg("order"));
    m.def("farey_reversed", &farey_reversed, py::arg("order"));

    py::class_<OptimizerConfig>(m, "OptimizerConfig")
        .def(py::init<>())
        .def_readwrite("outer_radius", &OptimizerConfig::outer_radius)
        .def_readwrite("inner_radius", &OptimizerConfig::inner_radius)
        .def_readwrite("iterations", &OptimizerConfig::iterations)
        .def_readwrite("seed", &OptimizerConfig::seed)
        .def_readwrite("closure_tol", &OptimizerConfig::closure_tol);

    py::class_<OrbitResult>(m, "OrbitResult")
        .def_readonly("initial", &OrbitResult::initial)
        .def_readonly("objective", &OrbitResult::objective)
        .def_readonly("period", &OrbitResult::period)
        .def_readonly("symmetry", &OrbitResult::symmetry)
        .def_readonly("history", &OrbitResult::history)
        .def_readonly("duration_used", &OrbitResult::duration_used)
        .def_readonly("failed", &OrbitResult::failed)
        .def_readonly("abort_reason", &OrbitResult::abort_reason)
        .def_readonly("eval_count", &OrbitResult::eval_count)
        .def_property_readonly("closed", &OrbitResult::closed);

    m.def("optimize", &optimize, py::arg("start"), py::arg("config") = OptimizerConfig{},
          py::arg("integrator") = IntegratorConfig{}, py::arg("shooting") = ShootingConfig{},
          py::arg("duration") = 0.0);

    py::class_<Config>(m, "Config")
        .def(py::init<>())
        .def_readwrite("integrator", &Config::integrator)
        .def_readwrite("shooting", &Config::shooting)
        .def_readwrite("optimizer", &Config::optimizer)
        .def_static("parse", &parse_config, py::arg("text"))
        .def("serialize", [](const Config& c) { return serialize(c); });

    m.def("refine_and_classify", &refine_and_classify, py::arg("start"),
          py::arg("config") = Config{}, py::arg("seed") = 0);
}
