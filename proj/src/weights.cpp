#include "ladderops/weights.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

namespace lop {

namespace {

using boost::multiprecision::exp;
using boost::multiprecision::pow;

void require(bool ok, ErrorCode code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

bool finite(double v) { return std::isfinite(v); }

void validate_atom(const WeightSpec& w, const DeformationAtom& a) {
  const double lo = support_lo(w);
  const std::string name = atom_name(a.kind);
  require(finite(a.a) && finite(a.gamma), ErrorCode::InvalidAtom, name + " has non-finite parameter");
  switch (a.kind) {
    case AtomKind::ExpLinear:
      break;
    case AtomKind::PowerShift:
      require(lo + a.a > 0, ErrorCode::InvalidAtom, name + ": x + c must stay positive on the support");
      break;
    case AtomKind::ExpInvX:
      require(a.a >= 0, ErrorCode::InvalidAtom, name + ": s must be >= 0");
      require(w.family != Family::Jacobi || a.a == 0, ErrorCode::InvalidAtom,
              name + " is singular inside [-1,1]");
      break;
    case AtomKind::ExpQuad:
      require(w.family != Family::Laguerre || a.a >= 0, ErrorCode::InvalidAtom,
              name + ": t must be >= 0 on [0,inf)");
      break;
    case AtomKind::ExpInvX2:
      require(a.a >= 0, ErrorCode::InvalidAtom, name + ": t must be >= 0");
      break;
    case AtomKind::ExpInvOneMinusX2:
      require(a.a >= 0, ErrorCode::InvalidAtom, name + ": t must be >= 0");
      require(w.family != Family::Laguerre, ErrorCode::InvalidAtom, name + " needs |x| < 1");
      break;
    case AtomKind::PowerOneMinusK2X2:
      require(w.family != Family::Laguerre, ErrorCode::InvalidAtom, name + " needs bounded support");
      require(a.a >= 0 && a.a < 1, ErrorCode::InvalidAtom, name + ": k2 must lie in [0,1)");
      break;
    case AtomKind::PowerShiftNeg:
      require(a.a < lo, ErrorCode::InvalidAtom, name + ": t must lie below the support");
      break;
  }
}

bool in_closed(const WeightSpec& w, double t) {
  return t >= support_lo(w) && t <= support_hi(w);
}

template <class T>
T endpoint_vprime(const WeightSpec& w, const T& y) {
  const Real one(1);
  switch (w.family) {
    case Family::Laguerre:
      return T(Real(-w.lambda)) / y;
    case Family::Jacobi:
      return T(Real(w.alpha)) / (one - y) - T(Real(w.beta)) / (one + y);
    case Family::ShiftedJacobi:
      return T(Real(-w.alpha)) / y + T(Real(w.beta)) / (one - y);
  }
  return T(Real(0));
}

template <class T>
T atom_vprime(const DeformationAtom& a, const T& y) {
  const Real p(a.a);
  const Real g(a.gamma);
  const Real one(1);
  switch (a.kind) {
    case AtomKind::ExpLinear:
      return T(p);
    case AtomKind::PowerShift:
      return T(-g) / (y + p);
    case AtomKind::ExpInvX:
      return T(-p) / (y * y);
    case AtomKind::ExpQuad:
      return T(2 * p) * y;
    case AtomKind::ExpInvX2:
      return T(-2 * p) / (y * y * y);
    case AtomKind::ExpInvOneMinusX2: {
      T d = one - y * y;
      return T(2 * p) * y / (d * d);
    }
    case AtomKind::PowerOneMinusK2X2:
      return T(2 * g * p) * y / (one - p * (y * y));
    case AtomKind::PowerShiftNeg:
      return T(-g) / (y - p);
  }
  return T(Real(0));
}

template <class T>
T vprime_impl(const WeightSpec& w, const T& y) {
  T s = endpoint_vprime(w, y);
  for (const auto& a : w.atoms) s += atom_vprime(a, y);
  return s;
}

Real atom_value(const DeformationAtom& a, const Real& x) {
  const Real p(a.a);
  const Real g(a.gamma);
  switch (a.kind) {
    case AtomKind::ExpLinear: return exp(-p * x);
    case AtomKind::PowerShift: return pow(x + p, g);
    case AtomKind::ExpInvX: return p == 0 ? Real(1) : exp(-p / x);
    case AtomKind::ExpQuad: return exp(-p * x * x);
    case AtomKind::ExpInvX2: return p == 0 ? Real(1) : exp(-p / (x * x));
    case AtomKind::ExpInvOneMinusX2: return p == 0 ? Real(1) : exp(-p / (1 - x * x));
    case AtomKind::PowerOneMinusK2X2: return pow(1 - p * x * x, g);
    case AtomKind::PowerShiftNeg: return pow(x - p, g);
  }
  return Real(1);
}

Real endpoint_value(const WeightSpec& w, const Real& x) {
  switch (w.family) {
    case Family::Laguerre: return pow(x, Real(w.lambda));
    case Family::Jacobi: return pow(1 - x, Real(w.alpha)) * pow(1 + x, Real(w.beta));
    case Family::ShiftedJacobi: return pow(x, Real(w.alpha)) * pow(1 - x, Real(w.beta));
  }
  return Real(1);
}

Real fh_value(const FisherHartwig& f, const Real& x) {
  const Real d = x - Real(f.t);
  const Real c = d >= 0 ? Real(f.A + f.B) : Real(f.A);
  return pow(boost::multiprecision::abs(d), Real(f.gamma)) * c;
}

void check_open_support(const WeightSpec& w, const Real& x) {
  const bool ok = x > support_lo(w) && (!bounded_support(w) || x < support_hi(w));
  if (!ok) throw Error(ErrorCode::OutOfSupport, "x=" + to_string(x) + " outside the open support");
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::Laguerre: return "laguerre";
    case Family::Jacobi: return "jacobi";
    case Family::ShiftedJacobi: return "shifted_jacobi";
  }
  return "?";
}

const char* atom_name(AtomKind k) {
  switch (k) {
    case AtomKind::ExpLinear: return "ExpLinear";
    case AtomKind::PowerShift: return "PowerShift";
    case AtomKind::ExpInvX: return "ExpInvX";
    case AtomKind::ExpQuad: return "ExpQuad";
    case AtomKind::ExpInvX2: return "ExpInvX2";
    case AtomKind::ExpInvOneMinusX2: return "ExpInvOneMinusX2";
    case AtomKind::PowerOneMinusK2X2: return "PowerOneMinusK2X2";
    case AtomKind::PowerShiftNeg: return "PowerShiftNeg";
  }
  return "?";
}

double support_lo(const WeightSpec& w) { return w.family == Family::Jacobi ? -1.0 : 0.0; }

double support_hi(const WeightSpec& w) {
  return w.family == Family::Laguerre ? std::numeric_limits<double>::infinity() : 1.0;
}

bool bounded_support(const WeightSpec& w) { return w.family != Family::Laguerre; }

double left_exponent(const WeightSpec& w) {
  switch (w.family) {
    case Family::Laguerre: return w.lambda;
    case Family::Jacobi: return w.beta;
    case Family::ShiftedJacobi: return w.alpha;
  }
  return 0;
}

double right_exponent(const WeightSpec& w) {
  switch (w.family) {
    case Family::Laguerre: return 0;
    case Family::Jacobi: return w.alpha;
    case Family::ShiftedJacobi: return w.beta;
  }
  return 0;
}

bool has_jumps(const WeightSpec& w) { return !w.jumps.points.empty() || w.jumps.omega0 != 1; }
bool has_fh(const WeightSpec& w) { return w.fh.has_value(); }
bool is_smooth(const WeightSpec& w) { return !has_jumps(w) && !has_fh(w); }

WeightSpec make_weight(WeightSpec w) {
  const auto exps = w.family == Family::Laguerre ? std::vector<double>{w.lambda}
                                                 : std::vector<double>{w.alpha, w.beta};
  for (double e : exps)
    require(finite(e) && e > -1, ErrorCode::ExponentOutOfRange,
            "endpoint exponent " + std::to_string(e) + " must exceed -1");

  double lin = 0, quad = 0;
  for (const auto& a : w.atoms) {
    validate_atom(w, a);
    if (a.kind == AtomKind::ExpLinear) lin += a.a;
    if (a.kind == AtomKind::ExpQuad) quad += a.a;
  }
  if (w.family == Family::Laguerre)
    require(quad > 0 || (quad == 0 && lin > 0), ErrorCode::InvalidAtom,
            "Laguerre-type weight needs exponential decay at infinity");

  double partial = w.jumps.omega0;
  require(finite(partial), ErrorCode::NegativeWeight, "omega0 must be finite");
  require(partial >= 0, ErrorCode::NegativeWeight, "omega0 must be >= 0");
  bool any_positive = partial > 0;
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& p : w.jumps.points) {
    require(finite(p.t) && in_closed(w, p.t), ErrorCode::BadSupportPoint,
            "jump point " + std::to_string(p.t) + " outside the support");
    require(p.t > prev, ErrorCode::BadSupportPoint, "jump points must be strictly increasing");
    prev = p.t;
    partial += p.omega;
    require(finite(p.omega) && partial >= 0, ErrorCode::NegativeWeight,
            "partial sums of jump heights must stay nonnegative");
    const bool reaches = bounded_support(w) ? p.t < support_hi(w) : true;
    if (partial > 0 && reaches) any_positive = true;
  }
  require(any_positive, ErrorCode::NegativeWeight, "step factor vanishes on the whole support");

  if (w.fh) {
    const auto& f = *w.fh;
    require(finite(f.t) && in_closed(w, f.t), ErrorCode::BadSupportPoint,
            "FH point " + std::to_string(f.t) + " outside the support");
    require(finite(f.gamma) && f.gamma > 0, ErrorCode::ExponentOutOfRange, "FH gamma must be > 0");
    require(finite(f.A) && finite(f.B) && f.A >= 0 && f.A + f.B >= 0 && (f.A > 0 || f.A + f.B > 0),
            ErrorCode::NegativeWeight, "FH factor A + B theta must be nonnegative and nonzero");
    for (const auto& p : w.jumps.points)
      require(p.t != f.t, ErrorCode::BadSupportPoint, "FH point coincides with a jump point");
  }

  {
    // Spot check of positivity on a grid inside the support.
    PrecisionScope scope(64);
    const double lo = support_lo(w);
    const double hi = bounded_support(w) ? support_hi(w) : 40.0;
    for (int i = 1; i < 64; ++i) {
      const Real x = Real(lo) + (Real(hi) - Real(lo)) * Real(i) / 64;
      require(eval_weight(w, x) >= 0, ErrorCode::NegativeWeight,
              "weight negative at x=" + to_string(x));
    }
  }
  return w;
}

WeightSpec laguerre(double lambda, std::vector<DeformationAtom> extra) {
  WeightSpec w;
  w.family = Family::Laguerre;
  w.lambda = lambda;
  w.atoms.push_back(DeformationAtom::exp_linear(1));
  for (auto& a : extra) w.atoms.push_back(a);
  return make_weight(w);
}

WeightSpec jacobi(double alpha, double beta, std::vector<DeformationAtom> atoms) {
  WeightSpec w;
  w.family = Family::Jacobi;
  w.alpha = alpha;
  w.beta = beta;
  w.atoms = std::move(atoms);
  return make_weight(w);
}

WeightSpec shifted_jacobi(double alpha, double beta, std::vector<DeformationAtom> atoms) {
  WeightSpec w;
  w.family = Family::ShiftedJacobi;
  w.alpha = alpha;
  w.beta = beta;
  w.atoms = std::move(atoms);
  return make_weight(w);
}

std::vector<double> pole_points(const WeightSpec& w) {
  std::vector<double> p;
  switch (w.family) {
    case Family::Laguerre: p = {0.0}; break;
    case Family::Jacobi: p = {-1.0, 1.0}; break;
    case Family::ShiftedJacobi: p = {0.0, 1.0}; break;
  }
  for (const auto& j : w.jumps.points) p.push_back(j.t);
  if (w.fh) p.push_back(w.fh->t);
  for (const auto& a : w.atoms) {
    switch (a.kind) {
      case AtomKind::PowerShift: p.push_back(-a.a); break;
      case AtomKind::ExpInvX:
      case AtomKind::ExpInvX2: p.push_back(0.0); break;
      case AtomKind::ExpInvOneMinusX2: p.push_back(-1.0); p.push_back(1.0); break;
      case AtomKind::PowerOneMinusK2X2:
        if (a.a > 0) {
          p.push_back(1 / std::sqrt(a.a));
          p.push_back(-1 / std::sqrt(a.a));
        }
        break;
      case AtomKind::PowerShiftNeg: p.push_back(a.a); break;
      default: break;
    }
  }
  return p;
}

Real eval_atoms(const WeightSpec& w, const Real& x) {
  Real v(1);
  for (const auto& a : w.atoms) v *= atom_value(a, x);
  return v;
}

Real eval_step(const WeightSpec& w, const Real& x) {
  Real s(w.jumps.omega0);
  for (const auto& p : w.jumps.points)
    if (x >= Real(p.t)) s += Real(p.omega);
  return s;
}

Real eval_weight_no_step(const WeightSpec& w, const Real& x) {
  Real v = endpoint_value(w, x) * eval_atoms(w, x);
  if (w.fh) v *= fh_value(*w.fh, x);
  return v;
}

Real eval_weight(const WeightSpec& w, const Real& x) {
  check_open_support(w, x);
  const Real s = eval_step(w, x);
  if (s == 0) return Real(0);
  return s * eval_weight_no_step(w, x);
}

Real eval_vprime(const WeightSpec& w, const Real& x) {
  check_open_support(w, x);
  for (const auto& p : w.jumps.points)
    if (x == Real(p.t)) throw Error(ErrorCode::SingularPoint, "x at a jump point");
  if (w.fh && x == Real(w.fh->t)) throw Error(ErrorCode::SingularPoint, "x at the FH point");
  for (double p : pole_points(w))
    if (x == Real(p)) throw Error(ErrorCode::SingularPoint, "x at an atom singularity");
  return vprime_impl(w, x);
}

Complex eval_vprime(const WeightSpec& w, const Complex& z) { return vprime_impl(w, z); }

Real eval_vprime_unchecked(const WeightSpec& w, const Real& x) { return vprime_impl(w, x); }

Real eval_atoms_vprime(const WeightSpec& w, const Real& x) {
  Real s(0);
  for (const auto& a : w.atoms) s += atom_vprime(a, x);
  return s;
}

Complex eval_atoms_vprime(const WeightSpec& w, const Complex& z) {
  Complex s;
  for (const auto& a : w.atoms) s += atom_vprime(a, z);
  return s;
}

Complex family_g(Family f, const Complex& y) {
  switch (f) {
    case Family::Laguerre: return y;
    case Family::Jacobi: return Real(1) - y * y;
    case Family::ShiftedJacobi: return y - y * y;
  }
  return y;
}

Real family_g(Family f, const Real& y) {
  switch (f) {
    case Family::Laguerre: return y;
    case Family::Jacobi: return 1 - y * y;
    case Family::ShiftedJacobi: return y - y * y;
  }
  return y;
}

bool on_closed_support(const WeightSpec& w, const Complex& z) {
  if (z.im != 0) return false;
  if (z.re < Real(support_lo(w))) return false;
  return !bounded_support(w) || z.re <= Real(support_hi(w));
}

Complex kernel_divdiff(const WeightSpec& w, const Complex& z, const Real& x) {
  if (on_closed_support(w, z)) throw Error(ErrorCode::ZOnSupport, "z lies on the support");
  const Complex fz = family_g(w.family, z) * vprime_impl(w, z);
  const Real fx = family_g(w.family, x) * eval_vprime(w, x);
  return (fz - fx) / (z - x);
}

Complex kernel_divdiff_fast(const WeightSpec& w, const Complex& z, const Complex& fz, const Real& x) {
  const Real fx = family_g(w.family, x) * vprime_impl(w, x);
  return (fz - fx) / (z - x);
}

// ---- JSON ----

namespace {

using nlohmann::json;

struct AtomSchema {
  AtomKind kind;
  const char* key;
  const char* first;
  bool has_gamma;
};

const AtomSchema kAtomSchema[] = {
    {AtomKind::ExpLinear, "ExpLinear", "c", false},
    {AtomKind::PowerShift, "PowerShift", "c", true},
    {AtomKind::ExpInvX, "ExpInvX", "s", false},
    {AtomKind::ExpQuad, "ExpQuad", "t", false},
    {AtomKind::ExpInvX2, "ExpInvX2", "t", false},
    {AtomKind::ExpInvOneMinusX2, "ExpInvOneMinusX2", "t", false},
    {AtomKind::PowerOneMinusK2X2, "PowerOneMinusK2X2", "k2", true},
    {AtomKind::PowerShiftNeg, "PowerShiftNeg", "t", true},
};

const AtomSchema& schema_for(AtomKind k) {
  for (const auto& s : kAtomSchema)
    if (s.kind == k) return s;
  throw Error(ErrorCode::BadConfig, "unknown atom kind");
}

double num(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw Error(ErrorCode::BadConfig, std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

WeightSpec weight_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadConfig, std::string("malformed weight JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::BadConfig, "weight JSON must be an object");
  WeightSpec w;
  const std::string fam = j.value("family", "");
  if (fam == "laguerre") {
    w.family = Family::Laguerre;
    w.lambda = num(j, "lambda");
  } else if (fam == "jacobi" || fam == "shifted_jacobi") {
    w.family = fam == "jacobi" ? Family::Jacobi : Family::ShiftedJacobi;
    w.alpha = num(j, "alpha");
    w.beta = num(j, "beta");
  } else {
    throw Error(ErrorCode::BadConfig, "unknown family '" + fam + "'");
  }
  if (j.contains("atoms")) {
    if (!j["atoms"].is_array()) throw Error(ErrorCode::BadConfig, "atoms must be an array");
    for (const auto& a : j["atoms"]) {
      const std::string kind = a.value("kind", "");
      const AtomSchema* s = nullptr;
      for (const auto& c : kAtomSchema)
        if (kind == c.key) s = &c;
      if (!s) throw Error(ErrorCode::BadConfig, "unknown atom kind '" + kind + "'");
      const json params = a.value("params", json::object());
      DeformationAtom atom{s->kind, num(params, s->first), 0};
      if (s->has_gamma) atom.gamma = num(params, "gamma");
      w.atoms.push_back(atom);
    }
  }
  if (j.contains("jumps") && !j["jumps"].is_null()) {
    const auto& jj = j["jumps"];
    w.jumps.omega0 = jj.contains("omega0") ? num(jj, "omega0") : 1.0;
    if (jj.contains("points"))
      for (const auto& p : jj["points"]) w.jumps.points.push_back({num(p, "t"), num(p, "omega")});
  }
  if (j.contains("fh") && !j["fh"].is_null()) {
    const auto& f = j["fh"];
    w.fh = FisherHartwig{num(f, "t"), num(f, "gamma"), num(f, "A"), num(f, "B")};
  }
  return make_weight(w);
}

std::string weight_to_json(const WeightSpec& w) {
  nlohmann::ordered_json j;
  j["family"] = family_name(w.family);
  if (w.family == Family::Laguerre) {
    j["lambda"] = w.lambda;
  } else {
    j["alpha"] = w.alpha;
    j["beta"] = w.beta;
  }
  j["atoms"] = nlohmann::ordered_json::array();
  for (const auto& a : w.atoms) {
    const auto& s = schema_for(a.kind);
    nlohmann::ordered_json params;
    params[s.first] = a.a;
    if (s.has_gamma) params["gamma"] = a.gamma;
    j["atoms"].push_back({{"kind", s.key}, {"params", params}});
  }
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& p : w.jumps.points) pts.push_back({{"t", p.t}, {"omega", p.omega}});
  j["jumps"] = {{"omega0", w.jumps.omega0}, {"points", pts}};
  if (w.fh)
    j["fh"] = {{"t", w.fh->t}, {"gamma", w.fh->gamma}, {"A", w.fh->A}, {"B", w.fh->B}};
  else
    j["fh"] = nullptr;
  return j.dump();
}

}  // namespace lop
