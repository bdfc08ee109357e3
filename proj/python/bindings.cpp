#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zdforge/equilibrium.hpp"
#include "zdforge/evaluation.hpp"
#include "zdforge/io.hpp"
#include "zdforge/scenarios.hpp"
#include "zdforge/zd.hpp"

namespace py = pybind11;
using namespace zdforge;

namespace {

std::vector<MemoryOneStrategy> profile_from_pairs(
    const std::vector<std::pair<std::vector<double>, double>>& raw) {
  std::vector<MemoryOneStrategy> out;
  out.reserve(raw.size());
  for (const auto& [probs, init] : raw) {
    MemoryOneStrategy s;
    s.probs = probs;
    s.init_prob = init;
    out.push_back(std::move(s));
  }
  return out;
}

py::dict gap_to_dict(const GapReport& r) {
  py::dict d;
  d["sse_value"] = r.sse_value;
  d["zd_value"] = r.zd_value;
  d["gap"] = r.gap;
  d["gamma_minus"] = r.gamma_minus;
  d["gamma_plus"] = r.gamma_plus;
  d["witness"] = r.witness == '+' ? "plus" : "minus";
  d["heuristic"] = r.heuristic;
  d["follower_tables_differ"] = r.follower_tables_differ;
  return d;
}

}  // namespace

PYBIND11_MODULE(zdforge, m) {
  m.doc() = "Equalizer strategy synthesis and Stackelberg comparison for "
            "discounted repeated two-action games";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnsupportedSizeError>(m, "UnsupportedSizeError", PyExc_ValueError);
  py::register_exception<EmptyRegionError>(m, "EmptyRegionError", PyExc_RuntimeError);
  py::register_exception<InfeasibleEqualizerError>(m, "InfeasibleEqualizerError",
                                                   PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  py::class_<PayoffTable>(m, "PayoffTable")
      .def(py::init<>())
      .def_readwrite("act1", &PayoffTable::act1)
      .def_readwrite("act2", &PayoffTable::act2);

  py::class_<GameSpec>(m, "GameSpec")
      .def(py::init<>())
      .def_readwrite("n", &GameSpec::n)
      .def_readwrite("delta", &GameSpec::delta)
      .def_readwrite("tables", &GameSpec::tables)
      .def_readwrite("initial_probs", &GameSpec::initial_probs)
      .def("state_count", &GameSpec::state_count)
      .def("validate", &GameSpec::validate)
      .def("to_json", [](const GameSpec& g) { return game_to_json(g); })
      .def_static("from_json", [](const std::string& text) { return parse_game_json(text); });

  // generators
  m.def("gen_pgg", &gen_pgg, py::arg("n"), py::arg("r"), py::arg("c"), py::arg("delta"));
  m.def("gen_snowdrift", &gen_snowdrift, py::arg("n"), py::arg("b"), py::arg("c"),
        py::arg("delta"));
  m.def("gen_async_pgg", &gen_async_pgg, py::arg("shares"), py::arg("r"), py::arg("c"),
        py::arg("delta"));
  m.def("gen_async_snowdrift", &gen_async_snowdrift, py::arg("benefits"), py::arg("c"),
        py::arg("delta"));
  m.def("gen_security", &gen_security, py::arg("n"), py::arg("seed"), py::arg("delta"));
  m.def("gen_uav_random", &gen_uav_random, py::arg("n"), py::arg("theta"), py::arg("seed"),
        py::arg("delta") = 0.9);
  m.def("gen_mtd_random", &gen_mtd_random, py::arg("seed"), py::arg("delta"));

  // evaluation
  m.def(
      "analytic_utility",
      [](const GameSpec& g, const std::vector<std::pair<std::vector<double>, double>>& profile) {
        return analytic_utility(g, profile_from_pairs(profile)).utilities;
      },
      py::arg("game"), py::arg("strategies"),
      "Exact discounted utilities; strategies are (probs, init_prob) pairs");
  m.def(
      "determinant_utility",
      [](const GameSpec& g, const std::vector<std::pair<std::vector<double>, double>>& profile,
         int player) { return determinant_utility(g, profile_from_pairs(profile), player); },
      py::arg("game"), py::arg("strategies"), py::arg("player"));
  m.def(
      "simulate_returns",
      [](const GameSpec& g, const std::vector<std::pair<std::vector<double>, double>>& profile,
         int horizon, std::uint64_t seed) {
        return simulate(g, profile_from_pairs(profile), horizon, seed).discounted_returns;
      },
      py::arg("game"), py::arg("strategies"), py::arg("horizon"), py::arg("seed"));

  // equalizer synthesis
  m.def(
      "gamma_interval",
      [](const GameSpec& g, const std::vector<double>& omega, double leader_init)
          -> py::object {
        auto iv = gamma_interval(g, omega, leader_init);
        if (!iv) return py::none();
        return py::make_tuple(iv->first, iv->second);
      },
      py::arg("game"), py::arg("omega"), py::arg("leader_init") = 0.0,
      "Enforceable (gamma_minus, gamma_plus) or None when no equalizer exists");
  m.def(
      "synthesize_equalizer",
      [](const GameSpec& g, const std::vector<double>& omega, double gamma, double phi,
         double leader_init) {
        EqualizerSpec spec;
        spec.omega = omega;
        spec.gamma = gamma;
        spec.phi = phi;
        spec.leader_init = leader_init;
        MemoryOneStrategy s = synthesize_equalizer(g, spec);
        return py::make_tuple(s.probs, s.init_prob);
      },
      py::arg("game"), py::arg("omega"), py::arg("gamma"), py::arg("phi"),
      py::arg("leader_init") = 0.0);
  m.def(
      "phi_range_for_gamma",
      [](const GameSpec& g, const std::vector<double>& omega, double leader_init,
         double gamma) -> py::object {
        auto r = phi_range_for_gamma(g, omega, leader_init, gamma);
        if (!r) return py::none();
        return py::make_tuple(r->first, r->second);
      },
      py::arg("game"), py::arg("omega"), py::arg("leader_init"), py::arg("gamma"));
  m.def(
      "verify_enforcement",
      [](const GameSpec& g, const std::vector<double>& omega, double gamma, double phi,
         double leader_init, const std::pair<std::vector<double>, double>& zd, int trials,
         std::uint64_t seed) {
        EqualizerSpec spec;
        spec.omega = omega;
        spec.gamma = gamma;
        spec.phi = phi;
        spec.leader_init = leader_init;
        MemoryOneStrategy s;
        s.probs = zd.first;
        s.init_prob = zd.second;
        return verify_enforcement(g, spec, s, trials, seed);
      },
      py::arg("game"), py::arg("omega"), py::arg("gamma"), py::arg("phi"),
      py::arg("leader_init"), py::arg("zd"), py::arg("trials"), py::arg("seed"));
  m.def("lambda_closed_form_check", &lambda_closed_form_check, py::arg("game"), py::arg("phi"));

  // equilibrium
  m.def(
      "sse_solve",
      [](const GameSpec& g, double tie_tol) {
        SseResult r = sse_solve(g, tie_tol);
        py::dict d;
        d["leader_probs"] = r.leader.probs;
        d["leader_init"] = r.leader.init_prob;
        std::vector<std::uint32_t> codes;
        for (const PureStrategy& s : r.followers) codes.push_back(s.code);
        d["follower_codes"] = codes;
        d["leader_value"] = r.leader_value;
        d["certificates"] = r.certificates;
        d["heuristic"] = r.heuristic;
        return d;
      },
      py::arg("game"), py::arg("tie_tol") = 1e-9);
  m.def(
      "best_zd_value",
      [](const GameSpec& g, const std::vector<double>& omega, double tie_tol) {
        ZdBest b = best_zd_value(g, omega, tie_tol);
        py::dict d;
        d["value"] = b.value;
        d["witness"] = b.witness == '+' ? "plus" : "minus";
        d["gamma_minus"] = b.gamma_minus;
        d["gamma_plus"] = b.gamma_plus;
        d["plus_value"] = b.plus_value;
        d["minus_value"] = b.minus_value;
        d["interior_beats_extremes"] = b.interior_beats_extremes;
        return d;
      },
      py::arg("game"), py::arg("omega"), py::arg("tie_tol") = 1e-9);
  m.def(
      "gap_report",
      [](const GameSpec& g, const std::vector<double>& omega, double tie_tol) {
        return gap_to_dict(gap_report(g, omega, tie_tol));
      },
      py::arg("game"), py::arg("omega"), py::arg("tie_tol") = 1e-9);
}
