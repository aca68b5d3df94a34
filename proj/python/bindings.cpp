#include "tsf/cli.hpp"
#include "tsf/error.hpp"
#include "tsf/grid.hpp"
#include "tsf/harness.hpp"
#include "tsf/io.hpp"
#include "tsf/navier_stokes.hpp"
#include "tsf/spectral.hpp"
#include "tsf/stokes.hpp"
#include "tsf/viscosity.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace tsf;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using RArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Coefficient arrays: a scalar field is an n-dimensional cube of side 2m+1 indexed by
// (xi_1 + m, ..., xi_n + m); a vector field prepends a component axis of length n.

bool looks_real(const ScalarField& g) {
    double scale = 0.0;
    for (const auto& c : g.coeffs()) scale = std::max(scale, std::abs(c));
    return g.hermitian_defect() <= 1e-13 * std::max(scale, 1e-300);
}

int side_to_m(py::ssize_t side) {
    if (side < 1 || side % 2 == 0) throw InvalidArgument("coefficient axes must have odd length 2m+1");
    return static_cast<int>((side - 1) / 2);
}

ScalarField scalar_from(const CArray& a, int n, int m) {
    const Lattice lat = make_lattice(n, m);
    if (static_cast<std::size_t>(a.size()) != lat.size())
        throw DimensionMismatch("coefficient array size does not match the lattice");
    std::vector<cplx> c(a.data(), a.data() + a.size());
    ScalarField g(lat, std::move(c), false);
    g.set_real(looks_real(g));
    return g;
}

ScalarField to_scalar(const CArray& a) {
    const int n = static_cast<int>(a.ndim());
    if (n < 1 || n > 3) throw InvalidArgument("scalar coefficient arrays must have 1 to 3 axes");
    for (int k = 1; k < n; ++k)
        if (a.shape(k) != a.shape(0)) throw InvalidArgument("scalar coefficient arrays must be cubes");
    return scalar_from(a, n, side_to_m(a.shape(0)));
}

VectorField to_vector(const CArray& a) {
    const int n = static_cast<int>(a.ndim()) - 1;
    if (n < 1 || a.shape(0) != n) throw InvalidArgument("vector coefficient arrays have shape (n, 2m+1, ...)");
    for (int k = 2; k <= n; ++k)
        if (a.shape(k) != a.shape(1)) throw InvalidArgument("vector coefficient arrays must be cubes per component");
    const int m = side_to_m(a.shape(1));
    const auto block = static_cast<py::ssize_t>(make_lattice(n, m).size());
    std::vector<ScalarField> comps;
    for (int k = 0; k < n; ++k) {
        CArray part({block});
        std::copy(a.data() + k * block, a.data() + (k + 1) * block, part.mutable_data());
        comps.push_back(scalar_from(part, n, m));
    }
    return VectorField(std::move(comps));
}

std::vector<py::ssize_t> cube_shape(const Lattice& lat, bool vector) {
    std::vector<py::ssize_t> shape;
    if (vector) shape.push_back(lat.dim());
    for (int k = 0; k < lat.dim(); ++k) shape.push_back(lat.side());
    return shape;
}

CArray from_scalar(const ScalarField& g) {
    CArray out(cube_shape(g.lattice(), false));
    std::copy(g.coeffs().begin(), g.coeffs().end(), out.mutable_data());
    return out;
}

CArray from_vector(const VectorField& u) {
    CArray out(cube_shape(u.lattice(), true));
    cplx* dst = out.mutable_data();
    for (const auto& c : u.components()) dst = std::copy(c.coeffs().begin(), c.coeffs().end(), dst);
    return out;
}

bool is_vector_array(const CArray& a) {
    if (a.ndim() < 2) return false;
    for (py::ssize_t k = 1; k < a.ndim(); ++k)
        if (a.shape(k) != a.shape(0)) return true;
    return false;
}

ViscosityTensor to_tensor(const RArray& a) {
    const int n = static_cast<int>(a.ndim() == 4 ? a.shape(0) : 0);
    if (a.ndim() != 4 || n < 2 || n > 3 || a.shape(1) != n || a.shape(2) != n || a.shape(3) != n)
        throw InvalidArgument("viscosity tensors have shape (n, n, n, n) indexed [k, j, alpha, beta]");
    return ViscosityTensor(n, std::vector<double>(a.data(), a.data() + a.size()));
}

RArray from_tensor(const ViscosityTensor& t) {
    const py::ssize_t n = t.dim();
    RArray out({n, n, n, n});
    std::copy(t.entries().begin(), t.entries().end(), out.mutable_data());
    return out;
}

py::dict constants_dict(const EstimateConstants& k) {
    py::dict d;
    d["c_uf"] = k.c_uf;
    d["c_ug"] = k.c_ug;
    d["c_pf"] = k.c_pf;
    d["c_pg"] = k.c_pg;
    return d;
}

py::dict stokes_report(const StokesSolveReport& r) {
    py::dict d;
    d["max_residual"] = r.max_residual;
    d["max_divergence"] = r.max_divergence;
    d["min_velocity_slack"] = r.min_velocity_slack;
    d["min_pressure_slack"] = r.min_pressure_slack;
    d["estimate_violations"] = r.estimate_violations;
    d["worst_mode"] = r.worst_mode;
    d["constants"] = constants_dict(r.constants);
    d["ellipticity"] = r.ellipticity;
    d["tensor_norm"] = r.tensor_norm;
    if (r.global) {
        py::dict g;
        g["s"] = r.global->s;
        g["velocity_lhs"] = r.global->velocity_lhs;
        g["velocity_rhs"] = r.global->velocity_rhs;
        g["pressure_lhs"] = r.global->pressure_lhs;
        g["pressure_rhs"] = r.global->pressure_rhs;
        g["holds"] = r.global->holds;
        d["global"] = g;
    } else {
        d["global"] = py::none();
    }
    d["warnings"] = r.warnings;
    return d;
}

py::dict ns_report(const NSSolveReport& r) {
    py::dict d;
    d["status"] = to_string(r.status);
    d["iterations"] = r.iterations;
    d["final_residual"] = r.final_residual;
    d["m0_bound"] = r.m0_bound;
    d["velocity_h1"] = r.velocity_h1;
    d["within_m0"] = r.within_m0;
    d["max_divergence"] = r.max_divergence;
    d["energy_product"] = r.energy_product;
    py::list history;
    for (const auto& h : r.history) history.append(py::make_tuple(h.iteration, h.omega, h.residual, h.accepted));
    d["history"] = history;
    d["warnings"] = r.warnings;
    return d;
}

RandomFieldOptions field_options(double decay, double amplitude, bool divergence_free) {
    RandomFieldOptions o;
    o.decay = decay;
    o.amplitude = amplitude;
    o.divergence_free = divergence_free;
    return o;
}

} // namespace

PYBIND11_MODULE(_tsf, m) {
    m.doc() = "Spectral Stokes and Navier-Stokes solvers with anisotropic viscosity on the flat torus";

    auto base = py::register_exception<Error>(m, "TsfError", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
    py::register_exception<NotRealField>(m, "NotRealField", base.ptr());
    py::register_exception<NotElliptic>(m, "NotElliptic", base.ptr());
    py::register_exception<ZeroMode>(m, "ZeroMode", base.ptr());
    py::register_exception<SingularSymbol>(m, "SingularSymbol", base.ptr());
    py::register_exception<TooFewShells>(m, "TooFewShells", base.ptr());
    py::register_exception<UnknownSuite>(m, "UnknownSuite", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    m.def(
        "lattice_modes",
        [](int n, int mm) {
            const Lattice lat = make_lattice(n, mm);
            py::array_t<int> out({static_cast<py::ssize_t>(lat.size()), static_cast<py::ssize_t>(n)});
            int* dst = out.mutable_data();
            for (std::size_t i = 0; i < lat.size(); ++i) dst = std::copy(lat.mode(i).begin(), lat.mode(i).end(), dst);
            return out;
        },
        py::arg("n"), py::arg("m"), "Integer wave vectors in canonical (row-major) order.");

    m.def("isotropic_tensor", [](double lam, double mu, int n) { return from_tensor(make_isotropic(lam, mu, n)); },
          py::arg("lam"), py::arg("mu"), py::arg("n"));
    m.def("random_elliptic_tensor", [](std::uint64_t seed, int n) { return from_tensor(random_elliptic_tensor(seed, n)); },
          py::arg("seed"), py::arg("n"));
    m.def("symmetry_violations", [](const RArray& a) { return check_symmetry(to_tensor(a)); }, py::arg("tensor"));
    m.def("ellipticity_constant", [](const RArray& a) { return ellipticity_constant(to_tensor(a)); },
          py::arg("tensor"));
    m.def("tensor_norm", [](const RArray& a) { return tensor_norm(to_tensor(a)); }, py::arg("tensor"));
    m.def("estimate_constants", [](const RArray& a) { return constants_dict(estimate_constants(validate(to_tensor(a)))); },
          py::arg("tensor"));

    m.def(
        "random_scalar_field",
        [](std::uint64_t seed, int n, int mm, double decay, double amplitude) {
            return from_scalar(random_scalar_field(seed, make_lattice(n, mm), field_options(decay, amplitude, false)));
        },
        py::arg("seed"), py::arg("n"), py::arg("m"), py::arg("decay") = 3.0, py::arg("amplitude") = 1.0);
    m.def(
        "random_vector_field",
        [](std::uint64_t seed, int n, int mm, double decay, double amplitude, bool divergence_free) {
            return from_vector(
                random_vector_field(seed, make_lattice(n, mm), field_options(decay, amplitude, divergence_free)));
        },
        py::arg("seed"), py::arg("n"), py::arg("m"), py::arg("decay") = 3.0, py::arg("amplitude") = 1.0,
        py::arg("divergence_free") = false);

    m.def(
        "sobolev_norm",
        [](const CArray& a, double s) {
            return is_vector_array(a) ? sobolev_norm(to_vector(a), s) : sobolev_norm(to_scalar(a), s);
        },
        py::arg("field"), py::arg("s"));
    m.def("gradient", [](const CArray& g) { return from_vector(gradient(to_scalar(g))); }, py::arg("g"));
    m.def("divergence", [](const CArray& u) { return from_scalar(divergence(to_vector(u))); }, py::arg("u"));
    m.def("leray_project", [](const CArray& u) { return from_vector(leray_project(to_vector(u))); }, py::arg("u"));
    m.def(
        "to_grid",
        [](const CArray& g, int points) {
            const GridSamples s = grid_transform(to_scalar(g), points);
            CArray out(std::vector<py::ssize_t>(static_cast<std::size_t>(s.dim), s.points));
            std::copy(s.values.begin(), s.values.end(), out.mutable_data());
            return out;
        },
        py::arg("g"), py::arg("points"), "Samples at x = i / points, axis k indexing x_{k+1}.");

    m.def(
        "apply_stokes_operator",
        [](const RArray& a, const CArray& u, const CArray& p) {
            return from_vector(stokes_operator(validate(to_tensor(a)), to_vector(u), to_scalar(p)));
        },
        py::arg("tensor"), py::arg("u"), py::arg("p"));
    m.def(
        "solve_stokes",
        [](const RArray& a, const CArray& f, std::optional<CArray> g, std::optional<double> s, bool project_mean) {
            const VectorField ff = to_vector(f);
            const ScalarField gg = g ? to_scalar(*g) : ScalarField::zeros(ff.lattice());
            StokesOptions o;
            o.s = s;
            o.project_mean = project_mean;
            const StokesSolution sol = solve_stokes(validate(to_tensor(a)), ff, gg, o);
            return py::make_tuple(from_vector(sol.u), from_scalar(sol.p), stokes_report(sol.report));
        },
        py::arg("tensor"), py::arg("f"), py::arg("g") = py::none(), py::arg("s") = 1.0,
        py::arg("project_mean") = true, "Returns (u, p, report).");

    m.def(
        "advection",
        [](const CArray& w, std::optional<int> output_m, bool dealias) {
            return from_vector(advection(to_vector(w), output_m, dealias));
        },
        py::arg("w"), py::arg("output_m") = py::none(), py::arg("dealias") = true);
    m.def(
        "advection_bruteforce",
        [](const CArray& w, std::optional<int> output_m) { return from_vector(advection_bruteforce(to_vector(w), output_m)); },
        py::arg("w"), py::arg("output_m") = py::none());
    m.def(
        "picard_solve",
        [](const RArray& a, const CArray& f, double omega, double tol, int max_iter, bool dealias,
           const std::string& initial) {
            NSSolveOptions o;
            o.omega = omega;
            o.tolerance = tol;
            o.max_iterations = max_iter;
            o.dealias = dealias;
            if (initial == "zero")
                o.initial = InitialGuess::zero;
            else if (initial != "stokes")
                throw InvalidArgument("initial must be 'zero' or 'stokes'");
            const NSSolution sol = picard_solve(validate(to_tensor(a)), to_vector(f), o);
            return py::make_tuple(from_vector(sol.u), from_scalar(sol.p), ns_report(sol.report));
        },
        py::arg("tensor"), py::arg("f"), py::arg("omega") = 1.0, py::arg("tol") = 1e-10, py::arg("max_iter") = 100,
        py::arg("dealias") = true, py::arg("initial") = "stokes", "Returns (u, p, report).");
    m.def(
        "regularity_slope",
        [](const CArray& a, double threshold) {
            const DecayFit fit =
                is_vector_array(a) ? regularity_slope(to_vector(a), threshold) : regularity_slope(to_scalar(a), threshold);
            return py::make_tuple(fit.slope, fit.sobolev_index);
        },
        py::arg("field"), py::arg("threshold") = 0.0);

    m.def(
        "manufacture",
        [](const CArray& u, const CArray& p, const RArray& a, bool nonlinear) {
            const ManufacturedProblem mp = manufacture(to_vector(u), to_scalar(p), validate(to_tensor(a)), nonlinear);
            py::dict d;
            d["u"] = from_vector(mp.u_star);
            d["p"] = from_scalar(mp.p_star);
            d["f"] = from_vector(mp.f);
            d["g"] = from_scalar(mp.g);
            return d;
        },
        py::arg("u"), py::arg("p"), py::arg("tensor"), py::arg("nonlinear") = false);
    m.def("suite_names", &suite_names);
    m.def(
        "run_suite",
        [](const std::vector<std::string>& names, std::uint64_t seed, int n, int mm, int draws) {
            py::list out;
            for (const auto& c : run_suite(names, seed, {n, mm, draws}).cases) {
                py::dict d;
                d["suite"] = c.suite;
                d["name"] = c.name;
                d["passed"] = c.passed;
                d["value"] = c.value;
                d["threshold"] = c.threshold;
                out.append(d);
            }
            return out;
        },
        py::arg("names") = std::vector<std::string>{"all"}, py::arg("seed") = 0, py::arg("n") = 2, py::arg("m") = 8,
        py::arg("draws") = 50);

    m.def(
        "read_spf",
        [](const std::string& path) {
            const auto comps = io::read_spf(path);
            if (comps.size() == 1 && comps.front().lattice().dim() > 1) return from_scalar(comps.front());
            return from_vector(VectorField(comps));
        },
        py::arg("path"));
    m.def(
        "write_spf",
        [](const std::string& path, const CArray& a) {
            if (is_vector_array(a))
                io::write_spf(path, to_vector(a));
            else
                io::write_spf(path, to_scalar(a));
        },
        py::arg("path"), py::arg("field"));

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"tsf"};
            full.insert(full.end(), args.begin(), args.end());
            std::ostringstream out, err;
            const int rc = cli::run(full, out, err);
            return py::make_tuple(rc, out.str(), err.str());
        },
        py::arg("args"), "Runs a tsf command in-process; returns (exit_code, stdout, stderr).");
}
