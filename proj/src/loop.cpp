#include "loopbundle/loop.hpp"

#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace loopbundle {

std::string QhrLoop::name() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "qhr:K=%g", K);
  return buf;
}

Loop make_loop(const LoopSpec& spec) {
  switch (spec.kind) {
    case LoopKind::rz: return Loop(RzLoop{});
    case LoopKind::qc: return Loop(QcLoop{});
    case LoopKind::qh2: return Loop(Qh2Loop{});
    case LoopKind::qhr:
      if (!std::isfinite(spec.K)) throw LoopError(ErrorKind::UnknownKind, "qhr: K must be finite");
      return Loop(QhrLoop{spec.K});
    case LoopKind::qsu2: return Loop(Qsu2Loop{});
  }
  throw LoopError(ErrorKind::UnknownKind, "loop kind");
}

Loop parse_loop(const std::string& text) {
  if (text == "rz") return make_loop({LoopKind::rz});
  if (text == "qc") return make_loop({LoopKind::qc});
  if (text == "qh2") return make_loop({LoopKind::qh2});
  if (text == "qsu2") return make_loop({LoopKind::qsu2});
  if (text == "qhr") return make_loop({LoopKind::qhr, 4.0});
  const std::string prefix = "qhr:K=";
  if (text.rfind(prefix, 0) == 0) {
    const char* s = text.c_str() + prefix.size();
    char* end = nullptr;
    double K = std::strtod(s, &end);
    if (end == s || *end != '\0' || !std::isfinite(K))
      throw LoopError(ErrorKind::UnknownLoop, "bad K in '" + text + "'");
    return make_loop({LoopKind::qhr, K});
  }
  throw LoopError(ErrorKind::UnknownLoop, "'" + text + "'");
}

std::vector<std::string> catalog_names() { return {"rz", "qc", "qh2", "qhr:K=4", "qsu2"}; }

Vec<double> chart_map(ChartKind kind, ChartAngles angles) {
  const double th = angles.theta;
  if (!std::isfinite(th) || !std::isfinite(angles.phi) || th < 0.0)
    throw LoopError(ErrorKind::OutOfDomain, "chart_map: need finite angles with theta >= 0");
  double r;
  if (kind == ChartKind::sphere) {
    if (!(th < std::numbers::pi) || std::cos(th / 2) < kSingularGuard)
      throw LoopError(ErrorKind::PoleSingularity, "sphere chart: theta = pi is the projection pole");
    r = std::tan(th / 2);
  } else {
    r = std::tanh(th / 2);
  }
  return {r * std::cos(angles.phi), r * std::sin(angles.phi)};
}

ChartAngles chart_map_inverse(ChartKind kind, const Vec<double>& zeta) {
  double r = std::hypot(zeta[0], zeta[1]);
  double phi = std::atan2(zeta[1], zeta[0]);
  if (kind == ChartKind::sphere) return {2.0 * std::atan(r), phi};
  if (!(r < 1.0)) throw LoopError(ErrorKind::OutOfDomain, "hyperboloid chart: |zeta| must be < 1");
  return {2.0 * std::atanh(r), phi};
}

UnitaryRep qsu2_matrix(const Cplx<double>& eta) { return su2_of(eta); }

Qsu2Product qsu2_product(const Cplx<double>& eta, const Cplx<double>& zeta) {
  UnitaryRep u = su2_loop_product(eta, zeta);
  return {u, u.m[0][1] / u.m[0][0].re};
}

}  // namespace loopbundle
