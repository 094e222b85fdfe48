#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "rt/corona/bench.hpp"
#include "rt/corona/fft.hpp"
#include "rt/corona/model.hpp"
#include "rt/corona/optimize.hpp"
#include "rt/dsl.hpp"
#include "rt/rt.hpp"

namespace py = pybind11;
using namespace rt;

namespace {

Dims dims_of(const py::array& a) {
  Dims d(a.shape(), a.shape() + a.ndim());
  if (d.empty()) d = {1, 1};
  if (d.size() == 1) d.push_back(1);
  return d;
}

// numpy (any layout) -> column-major Array of the matching kind.
Array to_array(const py::array& in) {
  const auto kind = in.dtype().kind();
  if (kind == 'b') {
    auto f = py::array_t<bool, py::array::f_style | py::array::forcecast>::ensure(in);
    std::vector<std::uint8_t> v(f.data(), f.data() + f.size());
    return Array::booleans(dims_of(f), std::move(v));
  }
  if (kind == 'c') {
    auto f = py::array_t<cplx, py::array::f_style | py::array::forcecast>::ensure(in);
    return Array(dims_of(f), std::vector<cplx>(f.data(), f.data() + f.size()));
  }
  auto f = py::array_t<double, py::array::f_style | py::array::forcecast>::ensure(in);
  if (!f) throw py::type_error("expected a numeric array");
  return Array(dims_of(f), std::vector<double>(f.data(), f.data() + f.size()));
}

template <class T, class S>
py::array fortran_copy(const Dims& dims, std::span<const S> src) {
  std::vector<py::ssize_t> shape(dims.begin(), dims.end()), strides(dims.size());
  py::ssize_t s = sizeof(T);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    strides[k] = s;
    s *= static_cast<py::ssize_t>(dims[k]);
  }
  py::array_t<T> out(shape, strides);
  T* dst = out.mutable_data();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = static_cast<T>(src[k]);
  return out;
}

py::array to_numpy(const Array& a) {
  switch (a.kind()) {
    case Kind::boolean:
      return fortran_copy<bool>(a.dims(), a.view<std::uint8_t>());
    case Kind::real:
      return fortran_copy<double>(a.dims(), a.view<double>());
    case Kind::complex:
      break;
  }
  return fortran_copy<cplx>(a.dims(), a.view<cplx>());
}

corona::RealField field_of(const py::array& in, std::size_t& M, std::size_t& N) {
  auto f = py::array_t<double, py::array::f_style | py::array::forcecast>::ensure(in);
  if (!f || f.ndim() != 2) throw py::value_error("expected a 2-D image");
  M = f.shape(0);
  N = f.shape(1);
  return corona::RealField(f.data(), f.data() + f.size());
}

corona::MaskField mask_of(const py::array& in, std::size_t M, std::size_t N) {
  auto f = py::array_t<bool, py::array::f_style | py::array::forcecast>::ensure(in);
  if (!f || f.ndim() != 2 || std::size_t(f.shape(0)) != M || std::size_t(f.shape(1)) != N)
    throw py::value_error("mask must match the image shape");
  return corona::MaskField(f.data(), f.data() + f.size());
}

template <class Field>
py::array image(const Field& f, std::size_t M, std::size_t N, std::size_t pages = 1) {
  using T = typename Field::value_type;
  Dims d{M, N};
  if (pages > 1) d.push_back(pages);
  if constexpr (std::is_same_v<T, std::uint8_t>)
    return fortran_copy<bool>(d, std::span<const T>(f.data(), f.size()));
  else
    return fortran_copy<T>(d, std::span<const T>(f.data(), f.size()));
}

py::object value_to_py(const dsl::Value& v) {
  if (std::holds_alternative<bool>(v)) return py::bool_(std::get<bool>(v));
  return py::cast(std::get<Tensor>(v));
}

std::vector<Tensor> tensors(const py::sequence& seq) { return seq.cast<std::vector<Tensor>>(); }

}  // namespace

PYBIND11_MODULE(rtensor, m) {
  m.doc() = "Dual-variant index tensors with pagewise products and divisions.";

  py::register_exception<Error>(m, "RtError", PyExc_RuntimeError);
  py::register_exception<DimMismatchError>(m, "DimMismatchError", PyExc_ValueError);
  py::register_exception<SingularPageError>(m, "SingularPageError", PyExc_ArithmeticError);
  py::register_exception<UnknownIndexError>(m, "UnknownIndexError", PyExc_KeyError);
  py::register_exception<dsl::SyntaxError>(m, "SyntaxError", PyExc_SyntaxError);

  py::class_<Index>(m, "Index")
      .def(py::init(&Index::fresh), "A new true-variant index.")
      .def_static("fresh_many", &Index::fresh_many)
      .def_property_readonly("id", &Index::id)
      .def_property_readonly("variant", &Index::variant)
      .def("__invert__", &Index::complement)
      .def("same_id", &Index::same_id)
      .def("as_true", &Index::as_true)
      .def("as_false", &Index::as_false)
      .def(py::self == py::self)
      .def(py::self != py::self)
      .def("__hash__", [](const Index& h) { return std::hash<Index>{}(h); })
      .def("__repr__", [](const Index& h) { return "Index(" + h.debug_string() + ")"; });

  py::class_<Tensor>(m, "Tensor")
      .def(py::init([](const py::array& entries, std::optional<std::vector<Index>> idx) {
             // Without indices every trailing dimension gets a fresh one.
             if (!idx) return Tensor::from_array(to_array(entries)).first;
             return Tensor(to_array(entries), std::move(*idx));
           }),
           py::arg("entries"), py::arg("indices") = py::none())
      .def_static("from_array", [](const py::array& a) { return Tensor::from_array(to_array(a)); })
      .def_property_readonly("entries", [](const Tensor& t) { return to_numpy(t.entries()); })
      .def_property_readonly("indices", &Tensor::indices)
      .def_property_readonly("degree", &Tensor::degree)
      .def_property_readonly("tensor_dims", &Tensor::tensor_dims)
      .def("__call__", [](const Tensor& t, py::args subs) { return reindex(t, subs.cast<std::vector<Index>>()); })
      .def("__mul__", [](const Tensor& a, const Tensor& b) { return a * b; })
      .def("__add__", [](const Tensor& a, const Tensor& b) { return a + b; })
      .def("__sub__", [](const Tensor& a, const Tensor& b) { return a - b; })
      .def("__neg__", [](const Tensor& a) { return -a; })
      .def("__lt__", [](const Tensor& a, const Tensor& b) { return a < b; })
      .def("__le__", [](const Tensor& a, const Tensor& b) { return a <= b; })
      .def("__gt__", [](const Tensor& a, const Tensor& b) { return a > b; })
      .def("__ge__", [](const Tensor& a, const Tensor& b) { return a >= b; })
      .def("__and__", [](const Tensor& a, const Tensor& b) { return a & b; })
      .def("__or__", [](const Tensor& a, const Tensor& b) { return a | b; })
      .def("__repr__", [](const Tensor& t) {
        std::ostringstream s;
        s << "Tensor(degree " << t.degree() << ", " << dims_string(t.entries().dims()) << ")";
        return s.str();
      });

  m.def("product", &product);
  m.def("solve_left", &solve_left, "a \\ b");
  m.def("solve_right", &solve_right, "b / a");
  m.def("simplify", &simplify);
  m.def("reindex", &reindex);
  m.def("permute", &permute);
  m.def("sum", &rt::sum);
  m.def("times", &times);
  m.def("rdivide", &rdivide);
  m.def("power", &power);
  m.def("equal", &operator==, "Entrywise ==");
  m.def("equal_all", [](const py::sequence& s) {
    const auto v = tensors(s);
    return equal_all(std::span<const Tensor>(v));
  });
  m.def("transpose", &page_transpose);
  m.def("ctranspose", &page_ctranspose);
  m.def("trace", &page_trace);
  m.def("diag", &page_diag);
  m.def("concat", [](const Index& where, const py::sequence& s) {
    const auto v = tensors(s);
    return concat(where, std::span<const Tensor>(v));
  });
  m.def("hcat", [](const py::sequence& s) {
    const auto v = tensors(s);
    return concat(MatrixAxis::cols, std::span<const Tensor>(v));
  });
  m.def("vcat", [](const py::sequence& s) {
    const auto v = tensors(s);
    return concat(MatrixAxis::rows, std::span<const Tensor>(v));
  });

  py::enum_<UnaryOp>(m, "UnaryOp")
      .value("neg", UnaryOp::neg)
      .value("conj", UnaryOp::conj)
      .value("logical_not", UnaryOp::logical_not)
      .value("abs", UnaryOp::abs)
      .value("log", UnaryOp::log)
      .value("exp", UnaryOp::exp)
      .value("round", UnaryOp::round)
      .value("step", UnaryOp::step)
      .value("real", UnaryOp::real)
      .value("imag", UnaryOp::imag);
  m.def("unary", &ewise_unary, py::arg("op"), py::arg("t"), py::arg("precision") = 0);

  m.def(
      "eval",
      [](const std::string& text, std::uint64_t seed, const py::dict& tensors) {
        dsl::Environment env(seed);
        for (auto [k, v] : tensors) env.set(k.cast<std::string>(), v.cast<Tensor>());
        dsl::Value out;
        for (const auto& s : dsl::parse_program(text)) out = dsl::execute(s, env);
        return value_to_py(out);
      },
      py::arg("text"), py::arg("seed") = 0, py::arg("tensors") = py::dict(),
      "Runs DSL statements and returns the last value.");

  m.def("fft2", [](const py::array& x) { return to_numpy(corona::fft2(to_array(x))); });
  m.def("ifft2", [](const py::array& y) { return to_numpy(corona::ifft2(to_array(y))); });

  py::module_ c = m.def_submodule("corona", "Coronagraph phase-retrieval demo.");
  c.def(
      "make_scene",
      [](std::size_t M, std::size_t N, std::uint64_t seed) {
        const auto s = corona::make_scene(M, N, seed);
        py::dict d;
        d["source"] = image(s.source, M, N);
        d["truth"] = image(s.truth, M, N);
        d["phase"] = image(s.phase, M, N);
        d["aberrated"] = image(s.aberrated, M, N);
        d["occulter"] = image(s.occulter, M, N);
        return d;
      },
      py::arg("M"), py::arg("N"), py::arg("seed") = 7);
  c.def(
      "sse",
      [](const py::array& phi, const py::array& aberrated, const py::array& occulter) {
        std::size_t M, N, Mp, Np;
        const auto xa = field_of(aberrated, M, N);
        const auto ph = field_of(phi, Mp, Np);
        if (Mp != M || Np != N) throw py::value_error("phase must match the image shape");
        const auto r = corona::sse(ph, xa, mask_of(occulter, M, N), M, N, true);
        return py::make_tuple(r.sse, image(r.gradient, M, N), image(r.corrected, M, N));
      },
      "Returns (E, gradient, corrected image).");
  c.def("hess_mult", [](const py::array& corrected, const py::array& directions, const py::array& occulter) {
    std::size_t M, N;
    const auto xt = field_of(corrected, M, N);
    auto d = py::array_t<double, py::array::f_style | py::array::forcecast>::ensure(directions);
    if (!d || d.ndim() < 2 || std::size_t(d.shape(0)) != M || std::size_t(d.shape(1)) != N)
      throw py::value_error("directions must be M x N (x P)");
    const std::size_t P = d.ndim() == 3 ? d.shape(2) : 1;
    const corona::RealField dirs(d.data(), d.data() + d.size());
    return image(corona::hess_mult(xt, dirs, P, mask_of(occulter, M, N), M, N), M, N, P);
  });
  c.def(
      "optimize",
      [](const py::array& aberrated, const py::array& occulter, std::size_t max_iter, double grad_tol) {
        std::size_t M, N;
        auto xa = field_of(aberrated, M, N);
        const corona::Problem problem(M, N, std::move(xa), mask_of(occulter, M, N));
        corona::OptOptions opts;
        opts.max_iter = max_iter;
        opts.grad_tol = grad_tol;
        corona::OptReport r;
        {
          py::gil_scoped_release release;
          r = corona::optimize(problem, opts);
        }
        py::dict d;
        d["iterations"] = r.iterations;
        d["sse"] = r.sse;
        d["grad_norms"] = r.grad_norms;
        d["stop_reason"] = r.stop_reason;
        d["phase"] = image(r.phase, M, N);
        d["corrected"] = image(r.corrected, M, N);
        return d;
      },
      py::arg("aberrated"), py::arg("occulter"), py::arg("max_iter") = 200, py::arg("grad_tol") = 1e-12);
}
