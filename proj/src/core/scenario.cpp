#include "pmpqoc/core/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(ctx + ": missing key '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& ctx) {
  if (!j.is_number()) throw ValidationError(ctx + ": expected a number");
  return j.get<double>();
}

cplx complex_entry(const json& j, bool allow_complex, const std::string& ctx) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (allow_complex && j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ValidationError(ctx + (allow_complex ? ": expected a number or [re, im] pair" : ": expected a real number"));
}

CVec parse_vector(const json& j, bool allow_complex, const std::string& ctx) {
  if (!j.is_array() || j.empty()) throw ValidationError(ctx + ": expected a non-empty array");
  CVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_entry(j[i], allow_complex, ctx);
  return v;
}

CMat parse_matrix(const json& j, bool allow_complex, const std::string& ctx) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ValidationError(ctx + ": expected a row-major nested array");
  const auto rows = j.size();
  const auto cols = j[0].size();
  CMat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ValidationError(ctx + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_entry(j[r][c], allow_complex, ctx);
  }
  return m;
}

json entry_json(cplx z, bool complex) {
  if (!complex) return z.real();
  return json::array({z.real(), z.imag()});
}

json vector_json(const CVec& v, bool complex) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(entry_json(v(i), complex));
  return out;
}

json matrix_json(const CMat& m, bool complex) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(entry_json(m(r, c), complex));
    out.push_back(std::move(row));
  }
  return out;
}

BilinearSystem parse_bilinear(const json& sys, Representation rep) {
  const bool cx = !is_real(rep);
  CMat drift = parse_matrix(require(sys, "drift", "system"), cx, "system.drift");
  std::vector<CMat> controls;
  if (sys.contains("controls")) {
    const json& cs = sys.at("controls");
    if (!cs.is_array()) throw ValidationError("system.controls: expected an array of matrices");
    for (std::size_t j = 0; j < cs.size(); ++j)
      controls.push_back(parse_matrix(cs[j], cx, "system.controls[" + std::to_string(j) + "]"));
  }
  if (sys.contains("dimension") && number(sys.at("dimension"), "system.dimension") != drift.rows())
    throw ValidationError("system.dimension disagrees with the drift size");
  return BilinearSystem(rep, std::move(drift), std::move(controls));
}

Target parse_target(const json& j) {
  Target t;
  const std::string kind = require(j, "kind", "target").get<std::string>();
  if (kind == "point") t.kind = TargetKind::Point;
  else if (kind == "phase_orbit") t.kind = TargetKind::PhaseOrbit;
  else if (kind == "free") t.kind = TargetKind::Free;
  else throw ValidationError("target.kind: unknown kind '" + kind + "'");
  t.state = parse_vector(require(j, "state", "target"), true, "target.state");
  if (j.contains("up_to_sign")) t.up_to_sign = j.at("up_to_sign").get<bool>();
  return t;
}

Cost parse_cost(const json& j) {
  Cost c;
  const std::string kind = require(j, "kind", "cost").get<std::string>();
  if (kind == "energy") c.kind = CostKind::Energy;
  else if (kind == "time") c.kind = CostKind::Time;
  else if (kind == "fidelity") c.kind = CostKind::Fidelity;
  else if (kind == "custom_quadratic") {
    c.kind = CostKind::CustomQuadratic;
    c.weights = parse_vector(require(j, "weights", "cost"), false, "cost.weights").real();
  } else {
    throw ValidationError("cost.kind: unknown kind '" + kind + "'");
  }
  return c;
}

TimeSpec parse_time(const json& j) {
  TimeSpec t;
  const std::string mode = require(j, "mode", "time").get<std::string>();
  t.steps = require(j, "steps", "time").get<int>();
  if (mode == "fixed") {
    t.free = false;
    t.T = number(require(j, "T", "time"), "time.T");
  } else if (mode == "free") {
    t.free = true;
    t.T_min = number(require(j, "T_min", "time"), "time.T_min");
    t.T_max = number(require(j, "T_max", "time"), "time.T_max");
    t.T = t.T_max;
  } else {
    throw ValidationError("time.mode: expected 'fixed' or 'free'");
  }
  return t;
}

ControlBounds parse_bounds(const json& j) {
  ControlBounds b;
  const std::string kind = require(j, "kind", "bounds").get<std::string>();
  if (kind == "unbounded") {
    b.kind = BoundsKind::Unbounded;
  } else if (kind == "box") {
    b.kind = BoundsKind::Box;
    for (const auto& iv : require(j, "intervals", "bounds")) {
      if (!iv.is_array() || iv.size() != 2) throw ValidationError("bounds.intervals: expected [lo, hi] pairs");
      b.intervals.push_back({number(iv[0], "bounds.intervals"), number(iv[1], "bounds.intervals")});
    }
  } else if (kind == "ball") {
    b.kind = BoundsKind::Ball;
    b.radius = number(require(j, "radius", "bounds"), "bounds.radius");
  } else if (kind == "discrete") {
    b.kind = BoundsKind::Discrete;
    for (const auto& p : require(j, "points", "bounds"))
      b.points.push_back(parse_vector(p, false, "bounds.points").real());
  } else {
    throw ValidationError("bounds.kind: unknown kind '" + kind + "'");
  }
  return b;
}

}  // namespace

Vec Cost::running_weights(int channels) const {
  switch (kind) {
    case CostKind::Energy: return Vec::Ones(channels);
    case CostKind::Fidelity: return Vec::Constant(channels, 0.5);
    case CostKind::CustomQuadratic: return weights;
    case CostKind::Time: return Vec::Zero(channels);
  }
  return Vec::Zero(channels);
}

bool ControlBounds::contains(const Vec& u, double tol) const {
  switch (kind) {
    case BoundsKind::Unbounded: return true;
    case BoundsKind::Box:
      for (Eigen::Index j = 0; j < u.size(); ++j)
        if (u(j) < intervals[j].lo - tol || u(j) > intervals[j].hi + tol) return false;
      return true;
    case BoundsKind::Ball: return u.norm() <= radius + tol;
    case BoundsKind::Discrete:
      for (const auto& p : points)
        if ((p - u).cwiseAbs().maxCoeff() <= tol) return true;
      return false;
  }
  return false;
}

std::vector<std::optional<Interval>> ControlBounds::per_channel(int channels) const {
  std::vector<std::optional<Interval>> out(channels);
  if (kind == BoundsKind::Box)
    for (int j = 0; j < channels; ++j) out[j] = intervals[j];
  return out;
}

const BilinearSystem& Scenario::bilinear() const {
  if (const auto* b = std::get_if<BilinearSystem>(&system)) return *b;
  throw ArgumentError("operation requires a bilinear (non-Lindblad) scenario");
}

const LindbladModel& Scenario::lindblad() const {
  if (const auto* l = std::get_if<LindbladModel>(&system)) return *l;
  throw ArgumentError("operation requires a Lindblad scenario");
}

const StateVector& Scenario::initial() const {
  if (!initial_state) throw ArgumentError("scenario has no pure initial state");
  return *initial_state;
}

std::string_view to_string(TargetKind k) {
  switch (k) {
    case TargetKind::Point: return "point";
    case TargetKind::PhaseOrbit: return "phase_orbit";
    case TargetKind::Free: return "free";
  }
  return "?";
}

std::string_view to_string(CostKind k) {
  switch (k) {
    case CostKind::Energy: return "energy";
    case CostKind::Time: return "time";
    case CostKind::Fidelity: return "fidelity";
    case CostKind::CustomQuadratic: return "custom_quadratic";
  }
  return "?";
}

std::string_view to_string(BoundsKind k) {
  switch (k) {
    case BoundsKind::Unbounded: return "unbounded";
    case BoundsKind::Box: return "box";
    case BoundsKind::Ball: return "ball";
    case BoundsKind::Discrete: return "discrete";
  }
  return "?";
}

void validate(const Scenario& s) {
  const BilinearSystem& h = s.is_lindblad() ? s.lindblad().hamiltonian() : s.bilinear();
  const int n = h.dimension();
  const int m = h.channels();
  const bool sphere = h.on_sphere();

  if (s.is_lindblad()) {
    if (!s.initial_density) throw ValidationError("initial_state: Lindblad scenarios need a density matrix");
    const CMat& rho = *s.initial_density;
    if (rho.rows() != n || rho.cols() != n) throw ValidationError("initial_state: density matrix has wrong size");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw ValidationError("initial_state: density matrix is not Hermitian");
    if (std::abs(rho.trace() - cplx(1.0)) > 1e-9)
      throw ValidationError("initial_state: density matrix trace is not 1");
  } else {
    if (!s.initial_state) throw ValidationError("initial_state: missing");
    if (s.initial_state->dimension() != n) throw ValidationError("initial_state: dimension differs from system");
  }

  if (s.target.state.size() != n) throw ValidationError("target.state: dimension differs from system");
  if (!s.is_lindblad()) {
    if (is_real(h.representation()) && s.target.state.imag().cwiseAbs().maxCoeff() != 0.0)
      throw ValidationError("target.state: real system needs a real target");
    if (sphere && std::abs(s.target.state.norm() - 1.0) > 1e-9)
      throw ValidationError("target.state: must have unit norm");
  }
  if (s.target.kind == TargetKind::PhaseOrbit && h.representation() != Representation::ComplexUnitary)
    throw ValidationError("target: phase_orbit requires a complex-unitary system");
  if (s.target.kind == TargetKind::Free && !s.cost.has_terminal_term())
    throw ValidationError("target: free endpoint requires a terminal cost term (use cost kind 'fidelity')");
  if (s.cost.has_terminal_term() && s.target.kind != TargetKind::Free)
    throw ValidationError("cost: fidelity terminal cost requires target kind 'free'");

  if (s.cost.kind == CostKind::CustomQuadratic) {
    if (s.cost.weights.size() != m) throw ValidationError("cost.weights: one weight per control channel required");
    if ((s.cost.weights.array() <= 0.0).any()) throw ValidationError("cost.weights: weights must be positive");
  }
  if (s.cost.kind == CostKind::Time && !s.time.free)
    throw ValidationError("time: minimum-time cost requires mode 'free'");

  if (s.time.steps < 1) throw ValidationError("time.steps: must be >= 1");
  if (s.time.free) {
    if (!(s.time.T_min > 0.0) || !(s.time.T_max > s.time.T_min) || !std::isfinite(s.time.T_max))
      throw ValidationError("time: free mode needs 0 < T_min < T_max");
  } else if (!(s.time.T > 0.0) || !std::isfinite(s.time.T)) {
    throw ValidationError("time.T: must be positive and finite");
  }

  const ControlBounds& b = s.bounds;
  switch (b.kind) {
    case BoundsKind::Unbounded: break;
    case BoundsKind::Box:
      if (static_cast<int>(b.intervals.size()) != m) throw ValidationError("bounds.intervals: one per channel required");
      for (const auto& iv : b.intervals)
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi)
          throw ValidationError("bounds.intervals: need finite lo <= hi");
      break;
    case BoundsKind::Ball:
      if (!(b.radius > 0.0) || !std::isfinite(b.radius)) throw ValidationError("bounds.radius: must be positive");
      break;
    case BoundsKind::Discrete:
      if (b.points.empty()) throw ValidationError("bounds.points: at least one point required");
      for (const auto& p : b.points)
        if (p.size() != m) throw ValidationError("bounds.points: each point needs one entry per channel");
      break;
  }
  if (!(s.tolerances.integration > 0.0) || !(s.tolerances.shooting > 0.0) || !(s.tolerances.rank > 0.0))
    throw ValidationError("tolerances: must be positive");
}

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
  try {
    const json& sys = require(root, "system", "scenario");
    const std::string rep_name = require(sys, "representation", "system").get<std::string>();
    const bool lindblad = rep_name == "lindblad";
    const Representation rep = lindblad ? Representation::ComplexUnitary : representation_from_string(rep_name);

    BilinearSystem h = parse_bilinear(sys, rep);
    const json& init = require(root, "initial_state", "scenario");

    std::optional<StateVector> initial_state;
    std::optional<CMat> initial_density;
    std::variant<BilinearSystem, LindbladModel> system = h;
    if (lindblad) {
      std::vector<CMat> basis;
      for (const auto& v : require(sys, "dissipators", "system"))
        basis.push_back(parse_matrix(v, true, "system.dissipators"));
      CMat a = basis.empty() ? CMat(0, 0) : parse_matrix(require(sys, "coefficients", "system"), true, "system.coefficients");
      system = LindbladModel(h, std::move(basis), std::move(a));
      initial_density = parse_matrix(init, true, "initial_state");
    } else {
      initial_state = StateVector(rep, parse_vector(init, !is_real(rep), "initial_state"), h.on_sphere());
    }

    Scenario s{
        root.value("name", std::string{}),
        std::move(system),
        std::move(initial_state),
        std::move(initial_density),
        parse_target(require(root, "target", "scenario")),
        parse_cost(require(root, "cost", "scenario")),
        parse_time(require(root, "time", "scenario")),
        parse_bounds(require(root, "bounds", "scenario")),
        Tolerances{},
    };
    if (root.contains("tolerances")) {
      const json& t = root.at("tolerances");
      s.tolerances.integration = t.value("integration", s.tolerances.integration);
      s.tolerances.shooting = t.value("shooting", s.tolerances.shooting);
      s.tolerances.rank = t.value("rank", s.tolerances.rank);
    }
    validate(s);
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario schema: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  const BilinearSystem& h = s.is_lindblad() ? s.lindblad().hamiltonian() : s.bilinear();
  const bool cx = !is_real(h.representation());
  json sys;
  sys["representation"] = s.is_lindblad() ? std::string("lindblad") : std::string(to_string(h.representation()));
  sys["dimension"] = h.dimension();
  sys["drift"] = matrix_json(h.drift(), cx);
  sys["controls"] = json::array();
  for (const auto& c : h.controls()) sys["controls"].push_back(matrix_json(c, cx));
  if (s.is_lindblad()) {
    sys["dissipators"] = json::array();
    for (const auto& v : s.lindblad().basis()) sys["dissipators"].push_back(matrix_json(v, true));
    sys["coefficients"] = matrix_json(s.lindblad().coefficients(), true);
  }

  json root;
  root["schema"] = "pmp-qoc/1";
  if (!s.name.empty()) root["name"] = s.name;
  root["system"] = std::move(sys);
  root["initial_state"] = s.is_lindblad() ? matrix_json(*s.initial_density, true)
                                          : vector_json(s.initial_state->entries, cx);
  json target{{"kind", to_string(s.target.kind)}, {"state", vector_json(s.target.state, cx)}};
  if (s.target.up_to_sign) target["up_to_sign"] = true;
  root["target"] = std::move(target);
  json cost{{"kind", to_string(s.cost.kind)}};
  if (s.cost.kind == CostKind::CustomQuadratic) cost["weights"] = std::vector<double>(s.cost.weights.begin(), s.cost.weights.end());
  root["cost"] = std::move(cost);
  if (s.time.free)
    root["time"] = {{"mode", "free"}, {"T_min", s.time.T_min}, {"T_max", s.time.T_max}, {"steps", s.time.steps}};
  else
    root["time"] = {{"mode", "fixed"}, {"T", s.time.T}, {"steps", s.time.steps}};
  json bounds{{"kind", to_string(s.bounds.kind)}};
  switch (s.bounds.kind) {
    case BoundsKind::Unbounded: break;
    case BoundsKind::Box:
      bounds["intervals"] = json::array();
      for (const auto& iv : s.bounds.intervals) bounds["intervals"].push_back({iv.lo, iv.hi});
      break;
    case BoundsKind::Ball: bounds["radius"] = s.bounds.radius; break;
    case BoundsKind::Discrete:
      bounds["points"] = json::array();
      for (const auto& p : s.bounds.points) bounds["points"].push_back(std::vector<double>(p.begin(), p.end()));
      break;
  }
  root["bounds"] = std::move(bounds);
  root["tolerances"] = {{"integration", s.tolerances.integration},
                        {"shooting", s.tolerances.shooting},
                        {"rank", s.tolerances.rank}};
  return root.dump(2);
}

template <class A, class B>
bool differ(const A& a, const B& b) {
  return a.rows() != b.rows() || a.cols() != b.cols() || a != b;
}

bool operator==(const Scenario& a, const Scenario& b) {
  if (a.name != b.name || a.system.index() != b.system.index()) return false;
  if (a.is_lindblad() ? !(a.lindblad() == b.lindblad()) : !(a.bilinear() == b.bilinear())) return false;
  if (a.initial_state.has_value() != b.initial_state.has_value()) return false;
  if (a.initial_state && (differ(a.initial_state->entries, b.initial_state->entries) ||
                          a.initial_state->representation != b.initial_state->representation))
    return false;
  if (a.initial_density.has_value() != b.initial_density.has_value()) return false;
  if (a.initial_density && differ(*a.initial_density, *b.initial_density)) return false;
  if (a.target.kind != b.target.kind || differ(a.target.state, b.target.state) || a.target.up_to_sign != b.target.up_to_sign)
    return false;
  if (a.cost.kind != b.cost.kind || differ(a.cost.weights, b.cost.weights)) return false;
  const auto& ta = a.time;
  const auto& tb = b.time;
  if (ta.free != tb.free || ta.steps != tb.steps) return false;
  if (ta.free ? (ta.T_min != tb.T_min || ta.T_max != tb.T_max) : ta.T != tb.T) return false;
  const auto& ba = a.bounds;
  const auto& bb = b.bounds;
  if (ba.kind != bb.kind || ba.intervals != bb.intervals || ba.radius != bb.radius ||
      ba.points.size() != bb.points.size())
    return false;
  for (std::size_t i = 0; i < ba.points.size(); ++i)
    if (differ(ba.points[i], bb.points[i])) return false;
  return a.tolerances.integration == b.tolerances.integration && a.tolerances.shooting == b.tolerances.shooting &&
         a.tolerances.rank == b.tolerances.rank;
}

}  // namespace pmpqoc
