// Python bindings for the main operations: matrices cross the boundary as
// complex numpy arrays, polynomials as complex coefficient sequences.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "opshift/deriv.hpp"
#include "opshift/experiments.hpp"
#include "opshift/schatten.hpp"
#include "opshift/ssf.hpp"

namespace py = pybind11;
using namespace opshift;
using numlin::Complex;
using numlin::ComplexMatrix;
using numlin::ContractionPair;
using numlin::SpectralUnitary;

namespace {

ComplexMatrix matrix_from_array(const py::array_t<Complex>& arr) {
    if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1))
        throw std::invalid_argument("expected a square 2-D complex array");
    const int d = static_cast<int>(arr.shape(0));
    ComplexMatrix m(d);
    auto r = arr.unchecked<2>();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            m(i, j) = r(i, j);
    return m;
}

py::array_t<Complex> matrix_to_array(const ComplexMatrix& m) {
    py::array_t<Complex> arr({m.dim(), m.dim()});
    auto w = arr.mutable_unchecked<2>();
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j)
            w(i, j) = m(i, j);
    return arr;
}

poly::Polynomial poly_from_list(const std::vector<Complex>& coeffs) {
    return poly::Polynomial(std::vector<Complex>(coeffs));
}

ContractionPair pair_from_arrays(const py::array_t<Complex>& u0, const py::array_t<Complex>& v) {
    return ContractionPair(matrix_from_array(u0), matrix_from_array(v));
}

} // namespace

PYBIND11_MODULE(_opshift, m) {
    m.doc() = "operator derivatives, multiple operator integrals, and spectral shift "
              "functions for contraction pairs";

    py::class_<SpectralUnitary>(m, "SpectralUnitary")
        .def_property_readonly("dim", &SpectralUnitary::dim)
        .def_property_readonly("group_count", &SpectralUnitary::group_count)
        .def("eigenvalue", &SpectralUnitary::eigenvalue, py::arg("group"))
        .def("matrix", [](const SpectralUnitary& u) { return matrix_to_array(u.to_matrix()); })
        .def("power", [](const SpectralUnitary& u, int k) { return matrix_to_array(u.power(k)); },
             py::arg("k"))
        .def("projection",
             [](const SpectralUnitary& u, int g) { return matrix_to_array(u.projection(g)); },
             py::arg("group"));

    m.def("random_unitary", &numlin::random_unitary, py::arg("dim"), py::arg("seed"));
    m.def(
        "discretize_unitary",
        [](const SpectralUnitary& u, int grid) { return numlin::discretize_unitary(u, grid); },
        py::arg("u"), py::arg("grid_size"));

    m.def(
        "random_contraction_pair",
        [](int dim, std::uint64_t seed, double p, double target, bool unitary_u0) {
            numlin::ContractionPairOptions opts;
            opts.unitary_u0 = unitary_u0;
            const auto pair = numlin::random_contraction_pair(dim, seed, p, target, opts);
            return py::make_tuple(matrix_to_array(pair.u0), matrix_to_array(pair.v));
        },
        py::arg("dim"), py::arg("seed"), py::arg("schatten_p"), py::arg("target_norm"),
        py::arg("unitary_u0") = false);

    m.def(
        "schatten_norm",
        [](const py::array_t<Complex>& x, double p) {
            return numlin::schatten_norm(matrix_from_array(x), p);
        },
        py::arg("x"), py::arg("p"));
    m.def("hermitian_eigenvalues", [](const py::array_t<Complex>& h) {
        return numlin::hermitian_eigenvalues(matrix_from_array(h));
    });
    m.def("singular_values", [](const py::array_t<Complex>& x) {
        return numlin::singular_values(matrix_from_array(x));
    });

    m.def(
        "sup_norm_circle",
        [](const std::vector<Complex>& f) { return poly::sup_norm_circle(poly_from_list(f)); },
        py::arg("coefficients"));
    m.def(
        "divided_difference",
        [](const std::vector<Complex>& f, const std::vector<Complex>& nodes) {
            return poly::divided_difference(poly_from_list(f), nodes);
        },
        py::arg("coefficients"), py::arg("nodes"));
    m.def(
        "eval_phi",
        [](int order, const std::vector<Complex>& h, int mm, int kk,
           const std::vector<Complex>& nodes) {
            return poly::eval_phi({order, poly_from_list(h), mm, kk}, nodes);
        },
        py::arg("order"), py::arg("h"), py::arg("m"), py::arg("k"), py::arg("nodes"));
    m.def("diagonal_constant", &poly::diagonal_constant, py::arg("n"), py::arg("m"), py::arg("k"));

    m.def(
        "derivative_poly_path",
        [](const py::array_t<Complex>& u0, const py::array_t<Complex>& v,
           const std::vector<Complex>& f, int n, double t0) {
            return matrix_to_array(
                deriv::derivative_poly_path(pair_from_arrays(u0, v), poly_from_list(f), n, t0));
        },
        py::arg("u0"), py::arg("v"), py::arg("f"), py::arg("n"), py::arg("t0") = 0.0);
    m.def(
        "derivative_moi",
        [](const SpectralUnitary& u0, const py::array_t<Complex>& v, const std::vector<Complex>& f,
           int n) {
            return matrix_to_array(deriv::derivative_moi(u0, matrix_from_array(v),
                                                         poly_from_list(f), n));
        },
        py::arg("u0"), py::arg("v"), py::arg("f"), py::arg("n"));
    m.def(
        "trace_identity_check",
        [](const py::array_t<Complex>& u0, const py::array_t<Complex>& v,
           const std::vector<Complex>& f, int n, double t0) {
            return deriv::trace_identity_check(pair_from_arrays(u0, v), poly_from_list(f), n, t0);
        },
        py::arg("u0"), py::arg("v"), py::arg("f"), py::arg("n"), py::arg("t0"));
    m.def(
        "taylor_remainder",
        [](const py::array_t<Complex>& u0, const py::array_t<Complex>& v,
           const std::vector<Complex>& f, int n) {
            return matrix_to_array(
                deriv::taylor_remainder(pair_from_arrays(u0, v), poly_from_list(f), n));
        },
        py::arg("u0"), py::arg("v"), py::arg("f"), py::arg("n"));
    m.def(
        "remainder_via_integral",
        [](const py::array_t<Complex>& u0, const py::array_t<Complex>& v,
           const std::vector<Complex>& f, int n) {
            return matrix_to_array(
                deriv::remainder_via_integral(pair_from_arrays(u0, v), poly_from_list(f), n));
        },
        py::arg("u0"), py::arg("v"), py::arg("f"), py::arg("n"));

    m.def(
        "reconstruct_ssf",
        [](const py::array_t<Complex>& u0, const py::array_t<Complex>& v, int n, int K) {
            return ssf::reconstruct_ssf(pair_from_arrays(u0, v), n, K).coeffs;
        },
        py::arg("u0"), py::arg("v"), py::arg("n"), py::arg("K"));
    m.def(
        "verify_trace_formula",
        [](const py::array_t<Complex>& u0, const py::array_t<Complex>& v,
           const std::vector<Complex>& f, int n, int K) {
            return ssf::verify_trace_formula(pair_from_arrays(u0, v), n, poly_from_list(f), K);
        },
        py::arg("u0"), py::arg("v"), py::arg("f"), py::arg("n"), py::arg("K"));
    m.def(
        "pairing",
        [](const std::vector<Complex>& f, const std::vector<Complex>& coeffs, int order) {
            ssf::SSFSeries s;
            s.order = order;
            s.coeffs = coeffs;
            return ssf::pairing(poly_from_list(f), s);
        },
        py::arg("f"), py::arg("coefficients"), py::arg("order") = 1);
    m.def(
        "l1_estimate",
        [](const std::vector<Complex>& coeffs, int grid, int order) {
            ssf::SSFSeries s;
            s.order = order;
            s.coeffs = coeffs;
            return ssf::l1_estimate(s, grid);
        },
        py::arg("coefficients"), py::arg("grid_points") = 4096, py::arg("order") = 1);

    m.def(
        "random_midpoint_pair",
        [](int dim, std::uint64_t seed) {
            const auto pair = cli::random_midpoint_pair(dim, seed);
            return py::make_tuple(matrix_to_array(pair.u0), matrix_to_array(pair.v));
        },
        py::arg("dim"), py::arg("seed"));
    m.def(
        "random_unitary_pair",
        [](int dim, std::uint64_t seed, double p, double target) {
            const auto up = numlin::random_unitary_pair(dim, seed, p, target);
            return py::make_tuple(up.u0_spectral, matrix_to_array(up.pair.u0),
                                  matrix_to_array(up.pair.v));
        },
        py::arg("dim"), py::arg("seed"), py::arg("schatten_p"), py::arg("target_norm"));
}
