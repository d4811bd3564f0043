#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "omega_sieve/arith.hpp"
#include "omega_sieve/certificates.hpp"
#include "omega_sieve/cli.hpp"
#include "omega_sieve/decomposition.hpp"
#include "omega_sieve/errors.hpp"
#include "omega_sieve/estimates.hpp"
#include "omega_sieve/pipeline.hpp"
#include "omega_sieve/prime_table.hpp"
#include "omega_sieve/sieve_constants.hpp"

namespace py = pybind11;
using namespace omega_sieve;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Explicit sieve verification kernels";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
  py::register_exception<VerificationFailure>(m, "VerificationFailure", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<PrimeTable>(m, "PrimeTable")
      .def(py::init<std::uint64_t>(), py::arg("limit"))
      .def_property_readonly("limit", &PrimeTable::limit)
      .def("__len__", &PrimeTable::size)
      .def("__contains__", &PrimeTable::contains)
      .def("count", &PrimeTable::count, py::arg("x"))
      .def("select", &PrimeTable::select, py::arg("i"))
      .def("next_prime", &PrimeTable::next_prime, py::arg("n"))
      .def("prev_prime", &PrimeTable::prev_prime, py::arg("x"))
      .def("primes_in", &PrimeTable::primes_in, py::arg("lo"), py::arg("hi"));

  m.def("simple_sieve", &simple_sieve, py::arg("limit"));
  m.def("max_prime_gap", [](std::uint64_t limit) { return to_python(to_json(max_prime_gap(limit), limit)); },
        py::arg("limit"));

  m.def("is_prime", &is_prime_u64, py::arg("n"));
  m.def("factorize", &factorize, py::arg("n"));
  m.def("big_omega", [](std::uint64_t n) { return big_omega(n).omega_big; }, py::arg("n"));
  m.def("tau_k_squarefree", &tau_k_squarefree, py::arg("d"), py::arg("k"));
  m.def("g_value", [](std::uint64_t d) {
    const Rational r = g_value(d);
    return py::make_tuple(r.num, r.den);
  }, py::arg("d"));

  m.def("prime_reciprocal_sum", [](double z) {
    const PrimeTable t(static_cast<std::uint64_t>(std::ceil(z)) + 1);
    return prime_reciprocal_sum(z, SumMode::exact, &t).value;
  }, py::arg("z"));
  m.def("interval_reciprocal_bound", [](double w, double z) { return interval_reciprocal_bound(w, z).value; },
        py::arg("w"), py::arg("z"));

  m.def("verify_k", [] { return to_python(to_json(verify_K())); });
  m.def("verify_constants", [](double s) { return to_python(to_json(verify_constants(s))); }, py::arg("s") = 18.4);
  m.def("v_product", [](double z) {
    const PrimeTable t(static_cast<std::uint64_t>(std::ceil(z)) + 1);
    return v_product(z, ProductMode::exact, &t).value();
  }, py::arg("z"));
  m.def("main_sieve_factor", &main_sieve_factor, py::arg("s"), py::arg("k"));
  m.def("min_level_exponent", &min_level_exponent, py::arg("k"));
  m.def("remainder_constant", &remainder_constant, py::arg("alpha"), py::arg("s"));
  m.def("optimize_alpha", &optimize_alpha, py::arg("s"));
  m.def("remainder_exact_small", &remainder_exact_small, py::arg("z"), py::arg("log_d"));
  m.def("rankin_remainder_log", [](double z, double log_d, double delta) {
    const PrimeTable t(static_cast<std::uint64_t>(std::ceil(z)) + 1);
    return rankin_remainder_log(z, log_d, delta, t).value;
  }, py::arg("z"), py::arg("log_d"), py::arg("delta"));

  m.def("check_case3", [](double log10_n) { return to_python(to_json(check_case3(log10_n))); }, py::arg("log10_n"));
  m.def("run_case2", [](double q_max, unsigned threads) {
    py::list certs;
    Case2Options opts;
    opts.threads = threads;
    const SieveParams params;
    const Case2Summary s = run_case2(q_max, params, [&](const IntervalCertificate& c) {
      certs.append(to_python(to_json(c)));
    }, opts);
    return py::make_tuple(certs, to_python(to_json(s, params, q_max)));
  }, py::arg("q_max"), py::arg("threads") = 1);

  m.def("sifted_count_exact", &sifted_count_exact, py::arg("N"), py::arg("z"));
  m.def("r_d_residual", [](std::uint64_t n, std::uint64_t d) {
    const Residual r = r_d_residual(n, d);
    py::dict out;
    out["count"] = r.count;
    out["expected"] = r.expected;
    out["r"] = r.r;
    out["admissible"] = r.admissible;
    out["tau"] = r.tau;
    return out;
  }, py::arg("N"), py::arg("d"));
  m.def("min_omega_decomposition", [](std::uint64_t n) {
    const SmallestFactorTable spf(n + 1);
    return to_python(to_json(min_omega_decomposition(n, spf)));
  }, py::arg("N"));
  m.def("primegap_witness", [](std::uint64_t n, std::uint64_t mult, unsigned K) {
    const PrimeTable t(std::max<std::uint64_t>((n - 1) / mult + 1, 3));
    return to_python(to_json(primegap_witness(n, mult, K, t)));
  }, py::arg("N"), py::arg("m") = 1, py::arg("K") = 13);
  m.def("scan_range", [](std::uint64_t lo, std::uint64_t hi, unsigned target, unsigned threads) {
    return to_python(to_json(scan_range(lo, hi, target, threads)));
  }, py::arg("lo"), py::arg("hi"), py::arg("target") = 21, py::arg("threads") = 1);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    std::vector<std::string> argv{"omega-sieve"};
    argv.insert(argv.end(), args.begin(), args.end());
    const int code = run_cli(argv, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
