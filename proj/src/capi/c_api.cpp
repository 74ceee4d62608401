#include "pmpqoc/pmpqoc.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pmpqoc/algebra/lie.hpp"
#include "pmpqoc/analytic/grushin.hpp"
#include "pmpqoc/analytic/spin.hpp"
#include "pmpqoc/analytic/warmup.hpp"
#include "pmpqoc/core/builtins.hpp"
#include "pmpqoc/core/errors.hpp"
#include "pmpqoc/dynamics/lindblad.hpp"
#include "pmpqoc/dynamics/propagate.hpp"
#include "pmpqoc/existence/chattering.hpp"
#include "pmpqoc/existence/filippov.hpp"
#include "pmpqoc/grape/grape.hpp"
#include "pmpqoc/pmp/arcs.hpp"
#include "pmpqoc/pmp/shooting.hpp"

using json = nlohmann::ordered_json;
using namespace pmpqoc;

struct pq_scenario {
  Scenario scenario;
  std::string json_text;
};

struct pq_result {
  std::string json_text;
  bool converged = true;
  std::vector<std::pair<std::string, std::string>> tables;
};

namespace {

thread_local std::string last_error;

constexpr const char* kSchema = "pmp-qoc/1";

pq_status fail(pq_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

// Runs body, translating exceptions into status codes.
template <class F>
pq_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const ParseError& e) {
    return fail(PQ_ERR_PARSE, e.what());
  } catch (const ValidationError& e) {
    return fail(PQ_ERR_VALIDATION, e.what());
  } catch (const NumericError& e) {
    return fail(PQ_ERR_NUMERIC, e.what());
  } catch (const ArgumentError& e) {
    return fail(PQ_ERR_INVALID_ARGUMENT, e.what());
  } catch (const IoError& e) {
    return fail(PQ_ERR_IO, e.what());
  } catch (const json::exception& e) {
    return fail(PQ_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return fail(PQ_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PQ_ERR_INTERNAL, "unknown exception");
  }
}

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const CVec& v, Representation rep) {
  if (is_real(rep)) return to_json(Vec(v.real()));
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}

json header(std::string_view command) {
  json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["version"] = PMPQOC_VERSION;
  return j;
}

pq_result* make_result(const json& j, bool converged = true) {
  auto* r = new pq_result;
  r->json_text = j.dump(2);
  r->converged = converged;
  return r;
}

void add_table(pq_result* r, std::string name, const CsvTable& t) { r->tables.emplace_back(std::move(name), t.to_string()); }

template <class... Args>
pq_status need(Args... ptrs) {
  return ((ptrs != nullptr) && ...) ? PQ_OK : fail(PQ_ERR_INVALID_ARGUMENT, "null argument");
}

Mat row_major(const double* data, size_t rows, size_t cols) {
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows; ++i)
    for (size_t k = 0; k < cols; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = data[i * cols + k];
  return m;
}

// Spherical chart x1 = sin t cos f, x2 = cos t, x3 = sin t sin f on real S^2 systems.
json spherical_covector(const Vec& q, const Vec& p) {
  const double th = std::acos(std::clamp(q(1), -1.0, 1.0));
  const double ph = std::atan2(q(2), q(0));
  const Vec dth{{std::cos(th) * std::cos(ph), -std::sin(th), std::cos(th) * std::sin(ph)}};
  const Vec dph{{-std::sin(th) * std::sin(ph), 0.0, std::sin(th) * std::cos(ph)}};
  return {{"theta", th}, {"phi", ph}, {"p_theta", p.dot(dth)}, {"p_phi", p.dot(dph)}};
}

CsvTable extremal_table(const pmp::Extremal& ex) {
  CsvTable t;
  const auto n = ex.q.front().size();
  const auto m = ex.controls.rows();
  t.header.push_back("t");
  for (Eigen::Index i = 0; i < n; ++i) t.header.push_back("q_" + std::to_string(i + 1));
  for (Eigen::Index i = 0; i < n; ++i) t.header.push_back("p_" + std::to_string(i + 1));
  for (Eigen::Index j = 0; j < m; ++j) t.header.push_back("u_" + std::to_string(j + 1));
  for (Eigen::Index j = 0; j < m; ++j) t.header.push_back("phi_" + std::to_string(j + 1));
  t.header.push_back("H");
  for (int k = 0; k <= ex.grid.n_steps(); ++k) {
    std::vector<double> row{ex.grid.node(k)};
    for (Eigen::Index i = 0; i < n; ++i) row.push_back(ex.q[k](i));
    for (Eigen::Index i = 0; i < n; ++i) row.push_back(ex.p[k](i));
    for (Eigen::Index j = 0; j < m; ++j) row.push_back(ex.controls(j, k));
    for (Eigen::Index j = 0; j < m; ++j) row.push_back(ex.phi(j, k));
    row.push_back(ex.hamiltonian[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable control_table(const ControlLaw& c) {
  CsvTable t;
  t.header.push_back("t");
  for (int j = 0; j < c.channels(); ++j) t.header.push_back("u_" + std::to_string(j + 1));
  for (int k = 0; k < c.grid().n_steps(); ++k) {
    std::vector<double> row{c.grid().node(k)};
    for (int j = 0; j < c.channels(); ++j) row.push_back(c.values()(j, k));
    t.rows.push_back(std::move(row));
  }
  return t;
}

json arcs_json(const analytic::SpinSynthesis& s) {
  json a = json::array();
  for (const auto& arc : s.arcs)
    a.push_back({{"type", arc.type == analytic::SpinArcType::Bang ? "bang" : "singular"},
                 {"control", arc.control},
                 {"duration", arc.duration}});
  return a;
}

CsvTable spin_table(const analytic::SpinSynthesis& s, int n) {
  CsvTable t{{"t", "x", "y", "z", "u"}, {}};
  for (const auto& smp : analytic::spin_sample(s, n)) t.rows.push_back({smp.t, smp.q(0), smp.q(1), smp.q(2), smp.u});
  return t;
}

json spin_json(const analytic::SpinSynthesis& s) {
  return {{"delta", s.delta},
          {"omega", s.omega},
          {"problem", analytic::to_string(s.problem)},
          {"arcs", arcs_json(s)},
          {"switch_times", s.switch_times()},
          {"total_duration", s.total_duration()},
          {"endpoint", to_json(analytic::spin_endpoint(s, Vec::Unit(3, 2)))}};
}

pq_status synth_grushin(const pq_synth_options& o, pq_result** out) {
  const auto sol = analytic::grushin_solution(o.n1, o.n2, o.p_theta0);
  json j = header("synthesize");
  j["problem"] = "grushin";
  const auto end = sol.trajectory(sol.T);
  j["solution"] = {{"n1", sol.n1},  {"n2", sol.n2},         {"a", sol.a},
                   {"p_theta0", sol.p_theta0}, {"T", sol.T}, {"cost", sol.T},
                   {"endpoint", {end[0], end[1], end[2]}},
                   {"covector", to_json(analytic::grushin_covector(sol.a, sol.p_theta0))}};
  json fam = json::array();
  for (int n2 : {0, -1})
    for (int pt : {1, -1}) {
      const auto s = analytic::grushin_solution(1, n2, pt);
      const auto e = s.trajectory(s.T);
      fam.push_back({{"a", s.a}, {"p_theta0", pt}, {"T", s.T}, {"cost", s.T}, {"endpoint", {e[0], e[1], e[2]}}});
    }
  j["optimal_family"] = fam;
  CsvTable t{{"t", "x1", "x2", "x3", "u1", "u2"}, {}};
  for (int k = 0; k <= o.samples; ++k) {
    const double tk = sol.T * k / o.samples;
    const auto x = sol.trajectory(tk);
    const auto u = sol.controls(tk);
    t.rows.push_back({tk, x[0], x[1], x[2], u[0], u[1]});
  }
  *out = make_result(j);
  add_table(*out, "trajectory", t);
  return PQ_OK;
}

pq_status synth_spin(bool p1, const pq_synth_options& o, pq_result** out) {
  json j = header("synthesize");
  j["problem"] = p1 ? "spin-p1" : "spin-p2";
  const auto kind = p1 ? analytic::SpinProblem::P1 : analytic::SpinProblem::P2;
  const auto s = p1 ? analytic::spin_p1(o.delta, o.symmetric != 0) : analytic::spin_p2(o.delta);
  j["synthesis"] = spin_json(s);
  std::vector<std::pair<std::string, CsvTable>> tables{{"trajectory", spin_table(s, o.samples)}};
  if (p1) {
    const auto v = analytic::spin_p1(o.delta, o.symmetric == 0);
    j["symmetric_variant"] = spin_json(v);
    tables.emplace_back("trajectory_variant", spin_table(v, o.samples));
  }
  if (o.competitor_grid > 0) {
    const auto rep = analytic::spin_competitors(o.delta, kind, o.competitor_grid);
    json fams = json::array();
    for (const auto& f : rep.families)
      fams.push_back({{"family", f.name}, {"found", f.found}, {"durations", f.durations}, {"total", f.total}});
    j["competitors"] = {{"synthesized", rep.synthesized}, {"families", fams}, {"synthesized_is_best", rep.synthesized_is_best}};
  }
  *out = make_result(j);
  for (auto& [name, t] : tables) add_table(*out, name, t);
  return PQ_OK;
}

pq_status synth_warmup(const pq_synth_options& o, pq_result** out) {
  const double u = analytic::warmup_energy_optimal(o.T);
  const double tmin = analytic::warmup_time_optimal(o.u_max);
  json j = header("synthesize");
  j["problem"] = "warmup";
  j["energy_optimal"] = {{"T", o.T}, {"u", u}, {"energy", u * u * o.T}, {"theta_T", analytic::warmup_theta(u, o.T)}};
  j["time_optimal"] = {{"u_max", o.u_max}, {"T_min", tmin}, {"theta_T", analytic::warmup_theta(o.u_max, tmin)}};
  CsvTable t{{"t", "theta", "u"}, {}};
  for (int k = 0; k <= o.samples; ++k) {
    const double tk = o.T * k / o.samples;
    t.rows.push_back({tk, analytic::warmup_theta(u, tk), u});
  }
  *out = make_result(j);
  add_table(*out, "trajectory", t);
  return PQ_OK;
}

}  // namespace

extern "C" {

const char* pq_version(void) { return PMPQOC_VERSION; }

const char* pq_status_string(pq_status status) {
  switch (status) {
    case PQ_OK: return "ok";
    case PQ_ERR_PARSE: return "parse error";
    case PQ_ERR_VALIDATION: return "validation error";
    case PQ_ERR_NUMERIC: return "numeric error";
    case PQ_ERR_NOT_CONVERGED: return "not converged";
    case PQ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PQ_ERR_IO: return "i/o error";
    case PQ_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* pq_last_error(void) { return last_error.c_str(); }

size_t pq_builtin_count(void) { return builtin_names().size(); }

const char* pq_builtin_name(size_t index) {
  static const std::vector<std::string> names = builtin_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

static pq_status wrap_scenario(Scenario s, pq_scenario** out) {
  std::string text = serialize_scenario(s);
  *out = new pq_scenario{std::move(s), std::move(text)};
  return PQ_OK;
}

pq_status pq_scenario_from_json(const char* json_text, pq_scenario** out) {
  if (need(json_text, out) != PQ_OK) return PQ_ERR_INVALID_ARGUMENT;
  return guarded([&] { return wrap_scenario(parse_scenario(json_text), out); });
}

pq_status pq_scenario_from_file(const char* path, pq_scenario** out) {
  if (need(path, out) != PQ_OK) return PQ_ERR_INVALID_ARGUMENT;
  return guarded([&] { return wrap_scenario(load_scenario(path), out); });
}

pq_status pq_scenario_builtin(const char* name, pq_scenario** out) {
  if (need(name, out) != PQ_OK) return PQ_ERR_INVALID_ARGUMENT;
  return guarded([&] { return wrap_scenario(builtin_scenario(name), out); });
}

const char* pq_scenario_json(const pq_scenario* s) { return s ? s->json_text.c_str() : nullptr; }
const char* pq_scenario_name(const pq_scenario* s) { return s ? s->scenario.name.c_str() : nullptr; }

int pq_scenario_channels(const pq_scenario* s) {
  if (!s) return -1;
  const auto& sc = s->scenario;
  return sc.is_lindblad() ? sc.lindblad().hamiltonian().channels() : sc.bilinear().channels();
}

int pq_scenario_steps(const pq_scenario* s) { return s ? s->scenario.time.steps : -1; }

void pq_scenario_free(pq_scenario* s) { delete s; }

const char* pq_result_json(const pq_result* r) { return r ? r->json_text.c_str() : nullptr; }
int pq_result_converged(const pq_result* r) { return r && r->converged ? 1 : 0; }
size_t pq_result_table_count(const pq_result* r) { return r ? r->tables.size() : 0; }

const char* pq_result_table_name(const pq_result* r, size_t i) {
  return r && i < r->tables.size() ? r->tables[i].first.c_str() : nullptr;
}

const char* pq_result_table_csv(const pq_result* r, size_t i) {
  return r && i < r->tables.size() ? r->tables[i].second.c_str() : nullptr;
}

void pq_result_free(pq_result* r) { delete r; }

pq_status pq_check(const pq_scenario* scenario, const char* mode, int samples, uint64_t seed, pq_result** out) {
  if (need(scenario, out) != PQ_OK) return PQ_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const BilinearSystem& sys = scenario->scenario.bilinear();
    algebra::ControllabilityMode m;
    if (mode == nullptr)
      m = sys.drift().norm() == 0.0 ? algebra::ControllabilityMode::Driftless : algebra::ControllabilityMode::Drifted;
    else if (std::string_view(mode) == "drifted")
      m = algebra::ControllabilityMode::Drifted;
    else if (std::string_view(mode) == "driftless")
      m = algebra::ControllabilityMode::Driftless;
    else
      throw ArgumentError("mode must be 'drifted' or 'driftless'");
    const auto rep = algebra::check_controllability(sys, m, samples, seed, scenario->scenario.tolerances.rank);
    json j = header("check");
    j["scenario"] = scenario->scenario.name;
    j["mode"] = m == algebra::ControllabilityMode::Drifted ? "drifted" : "driftless";
    j["algebra_dimension"] = rep.algebra_dimension;
    j["algebra_name"] = rep.algebra_name;
    j["full_special_algebra"] = rep.full_special_algebra;
    j["manifold_dimension"] = rep.manifold_dimension;
    j["drift_recurrent"] = rep.drift_recurrent;
    j["samples"] = rep.samples;
    j["min_rank"] = rep.min_rank;
    j["controllable"] = rep.controllable;
    j["rule"] = rep.rule;
    *out = make_result(j);
    CsvTable t{{"sample", "min_singular_value"}, {}};
    for (std::size_t i = 0; i < rep.min_singular_values.size(); ++i)
      t.rows.push_back({static_cast<double>(i), rep.min_singular_values[i]});
    add_table(*out, "rank_samples", t);
    return PQ_OK;
  });
}

pq_status pq_exists(const pq_scenario* scenario, pq_result** out) {
  if (need(scenario, out) != PQ_OK) return PQ_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const auto r = existence::check_filippov(scenario->scenario);
    json j = header("exists");
    j["scenario"] = scenario->scenario.name;
    j["verdict"] = existence::to_string(r.verdict);
    j["checks"] = {
        {"u_compact", {{"holds", r.u_compact}, {"reason", r.u_compact_reason}}},
        {"velocity_set_convex", {{"holds", r.velocity_set_convex}, {"reason", r.convexity_witness}}},
        {"augmented_convex", {{"holds", r.augmented_convex}, {"reason", r.augmented_rule}}},
        {"solutions_global", {{"holds", r.solutions_global}, {"reason", r.global_reason}}},
    };
    *out = make_result(j);
    return PQ_OK;
  });
}

void pq_shoot_options_init(pq_shoot_options* opt) {
  if (!opt) return;
  const pmp::ShootingOptions d;
  *opt = {d.starts, d.seed, d.max_iter, d.tol, d.covector_radius, 0};
}

pq_status pq_shoot(const pq_scenario* scenario, const pq_shoot_options* opt, pq_result** out) {
  if (need(scenario, out) != PQ_OK) return PQ_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    pq_shoot_options o;
    pq_shoot_options_init(&o);
    if (opt) o = *opt;
    if (o.starts < 1) throw ArgumentError("starts must be >= 1");
    pmp::ExtremalOptions eo;
    eo.steps = o.steps;
    const pmp::ShootingProblem prob(scenario->scenario, eo);
    pmp::ShootingOptions so;
    so.starts = o.starts;
    so.seed = o.seed;
    so.max_iter = o.max_iter;
    so.tol = o.tol;
    so.covector_radius = o.covector_radius;
    const auto ms = pmp::multi_start(prob, so);

    const bool sphere3 = prob.model().on_sphere() && is_real(prob.model().representation()) && prob.model().dim() == 3;
    json j = header("shoot");
    j["scenario"] = scenario->scenario.name;
    j["seed"] = o.seed;
    j["starts"] = o.starts;
    j["p0"] = prob.p0();
    j["converged_starts"] = std::count_if(ms.starts.begin(), ms.starts.end(),
                                          [](const pmp::StartOutcome& s) { return s.result.converged; });
    json fams = json::array();
    CsvTable ft{{"family", "T", "cost", "residual", "members", "start_index"}, {}};
    for (Eigen::Index i = 0; i < prob.q_in().size(); ++i) ft.header.push_back("p_in_" + std::to_string(i + 1));
    for (std::size_t f = 0; f < ms.families.size(); ++f) {
      const auto& fam = ms.families[f];
      json e{{"T", fam.T},
             {"cost", fam.cost},
             {"residual", fam.residual_norm},
             {"members", fam.members},
             {"start_index", fam.start_index},
             {"class", fam.cls == pmp::ExtremalClass::Normal ? "normal" : "abnormal"},
             {"p_in", to_json(fam.p_in)},
             {"endpoint", to_json(fam.endpoint)}};
      if (sphere3) e["spherical_covector"] = spherical_covector(prob.q_in(), fam.p_in);
      fams.push_back(std::move(e));
      std::vector<double> row{static_cast<double>(f), fam.T, fam.cost, fam.residual_norm,
                              static_cast<double>(fam.members), static_cast<double>(fam.start_index)};
      for (Eigen::Index i = 0; i < fam.p_in.size(); ++i) row.push_back(fam.p_in(i));
      ft.rows.push_back(std::move(row));
    }
    j["families"] = fams;

    CsvTable st{{"start_index", "converged", "residual", "iterations", "T", "cost"}, {}};
    for (const auto& s : ms.starts)
      st.rows.push_back({static_cast<double>(s.start_index), s.result.converged ? 1.0 : 0.0, s.result.residual_norm,
                         static_cast<double>(s.result.iterations), s.result.T, s.cost});

    const bool ok = !ms.families.empty();
    std::vector<std::pair<std::string, CsvTable>> tables{{"starts", st}, {"families", ft}};
    if (ok) {
      const auto& best = ms.families.front();
      const auto ex = prob.extremal(prob.encode(best.p_in, best.T));
      j["best"] = {{"T", best.T},
                   {"cost", best.cost},
                   {"hamiltonian_spread", ex.hamiltonian_spread()},
                   {"switch_times", ex.switch_times},
                   {"singular_entry", ex.singular_entry}};
      if (prob.model().channels() == 1) {
        try {
          const auto cls = pmp::classify_arcs(ex, prob.model());
          json arcs = json::array();
          for (const auto& a : cls.arcs)
            arcs.push_back({{"label", pmp::to_string(a.label)}, {"t_start", a.t_start}, {"t_end", a.t_end}});
          j["best"]["arcs"] = arcs;
        } catch (const NumericError& e) {
          j["best"]["arcs_error"] = e.what();
        }
      }
      tables.emplace_back("extremal", extremal_table(ex));
    }
    *out = make_result(j, ok);
    for (auto& [name, t] : tables) add_table(*out, name, t);
    return ok ? PQ_OK : fail(PQ_ERR_NOT_CONVERGED, "no shooting start converged");
  });
}

void pq_grape_options_init(pq_grape_options* opt) {
  if (!opt) return;
  const grape::GrapeOptions d;
  *opt = {d.max_iters, d.eps0, 0.1, nullptr, 0, 0};
}

pq_status pq_grape(const pq_scenario* scenario, const pq_grape_options* opt, pq_result** out) {
  if (need(scenario, out) != PQ_OK) return PQ_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    pq_grape_options o;
    pq_grape_options_init(&o);
    if (opt) o = *opt;
    const Scenario& s = scenario->scenario;
    const TimeGrid grid = s.time.grid();
    const int m = s.bilinear().channels();
    Mat guess;
    if (o.guess) {
      if (o.guess_rows != static_cast<size_t>(m) || o.guess_cols != static_cast<size_t>(grid.n_steps()))
        throw ArgumentError("guess must be " + std::to_string(m) + " x " + std::to_string(grid.n_steps()));
      guess = row_major(o.guess, o.guess_rows, o.guess_cols);
    } else {
      guess = Mat::Constant(m, grid.n_steps(), o.guess_value);
    }
    grape::GrapeOptions go;
    go.max_iters = o.max_iters;
    go.eps0 = o.eps0;
    const auto run = grape::grape_optimize(s, ControlLaw(grid, guess), go);
    const bool ok = run.stop_reason != "max_iters";
    json j = header("grape");
    j["scenario"] = s.name;
    j["iterations"] = run.iterations;
    j["stop_reason"] = run.stop_reason;
    j["initial_cost"] = run.cost_history.front();
    j["final_cost"] = run.cost_history.back();
    j["final_fidelity"] = run.final_fidelity;
    j["gradient_inf_norm"] = run.final_gradient.lpNorm<Eigen::Infinity>();
    CsvTable h{{"iteration", "cost", "eps"}, {}};
    for (std::size_t i = 0; i < run.cost_history.size(); ++i)
      h.rows.push_back({static_cast<double>(i), run.cost_history[i], i == 0 ? 0.0 : run.eps_history[i - 1]});
    *out = make_result(j, ok);
    add_table(*out, "cost_history", h);
    add_table(*out, "control", control_table(run.control));
    return ok ? PQ_OK : fail(PQ_ERR_NOT_CONVERGED, "GRAPE reached max_iters before a stationary point");
  });
}

void pq_synth_options_init(pq_synth_options* opt) {
  if (!opt) return;
  *opt = {0.5, 0, 1, 0, -1, 1.0, 1.0, 400, 12};
}

pq_status pq_synthesize(const char* problem, const pq_synth_options* opt, pq_result** out) {
  if (need(problem, out) != PQ_OK) return PQ_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    pq_synth_options o;
    pq_synth_options_init(&o);
    if (opt) o = *opt;
    if (o.samples < 1) throw ArgumentError("samples must be >= 1");
    const std::string_view p = problem;
    if (p == "grushin") return synth_grushin(o, out);
    if (p == "spin-p1") return synth_spin(true, o, out);
    if (p == "spin-p2") return synth_spin(false, o, out);
    if (p == "warmup") return synth_warmup(o, out);
    throw ArgumentError("unknown problem '" + std::string(p) + "'; expected grushin, spin-p1, spin-p2, or warmup");
  });
}

pq_status pq_chattering(int max_switches, double horizon, pq_result** out) {
  if (need(out) != PQ_OK) return PQ_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    if (max_switches < 0) throw ArgumentError("max_switches must be >= 0");
    if (!(horizon > 0.0)) throw ArgumentError("horizon must be > 0");
    const auto verdict = existence::check_filippov(builtin_scenario("chattering-2d"));
    CsvTable t{{"n_switches", "distance"}, {}};
    json rows = json::array();
    std::vector<int> ns{0};
    for (int n = 1; n <= max_switches; n *= 2) ns.push_back(n);
    for (int n : ns) {
      const auto r = existence::chattering_demo(n, horizon);
      t.rows.push_back({static_cast<double>(n), r.distance});
      rows.push_back({{"n_switches", n}, {"distance", r.distance}});
    }
    json j = header("chattering");
    j["horizon"] = horizon;
    j["target"] = {std::exp(-horizon), 0.0};
    j["existence_verdict"] = existence::to_string(verdict.verdict);
    j["distances"] = rows;
    *out = make_result(j);
    add_table(*out, "chattering", t);
    return PQ_OK;
  });
}

pq_status pq_propagate(const pq_scenario* scenario, const double* controls, size_t rows, size_t cols,
                       const double* constant, pq_result** out) {
  if (need(scenario, out) != PQ_OK) return PQ_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const Scenario& s = scenario->scenario;
    const TimeGrid grid = s.time.grid();
    const int m = pq_scenario_channels(scenario);
    Mat u = Mat::Zero(m, grid.n_steps());
    if (controls) {
      if (rows != static_cast<size_t>(m) || cols != static_cast<size_t>(grid.n_steps()))
        throw ArgumentError("controls must be " + std::to_string(m) + " x " + std::to_string(grid.n_steps()));
      u = row_major(controls, rows, cols);
    } else if (constant) {
      for (int j = 0; j < m; ++j) u.row(j).setConstant(constant[j]);
    }
    const ControlLaw law(grid, u);
    json j = header("propagate");
    j["scenario"] = s.name;
    j["T"] = grid.t_end();
    j["steps"] = grid.n_steps();
    dynamics::Trajectory tr = [&] {
      if (s.is_lindblad()) {
        if (!s.initial_density) throw ValidationError("Lindblad scenario has no initial density");
        return dynamics::propagate_lindblad(s.lindblad(), law, *s.initial_density);
      }
      return dynamics::propagate(s.bilinear(), law, s.initial());
    }();
    if (s.is_lindblad()) {
      const CMat rho = unvectorize(tr.endpoint(), s.lindblad().dimension());
      j["final_trace"] = rho.trace().real();
      j["final_purity"] = (rho * rho).trace().real();
      json pops = json::array();
      for (Eigen::Index i = 0; i < rho.rows(); ++i) pops.push_back(rho(i, i).real());
      j["final_populations"] = pops;
    } else {
      j["endpoint"] = to_json(tr.endpoint(), tr.representation);
      j["endpoint_norm"] = tr.endpoint().norm();
      if (s.target.kind != TargetKind::Free || s.target.state.size() == tr.endpoint().size())
        j["target_overlap"] = std::norm(s.target.state.dot(tr.endpoint()));
      j["energy"] = law.energy();
    }
    *out = make_result(j);
    add_table(*out, "trajectory", tr.to_csv());
    add_table(*out, "control", control_table(law));
    return PQ_OK;
  });
}

}  // extern "C"
