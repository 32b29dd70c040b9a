#include "loopbundle/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "loopbundle/bundle.hpp"
#include "loopbundle/gauge.hpp"
#include "loopbundle/reconstruct.hpp"

namespace loopbundle {

std::map<std::string, double> SuiteConfig::default_tolerances() {
  return {
      {"exact", 1e-11},      {"qsu2", 1e-10},     {"fd", 1e-7},          {"frame", 1e-10},
      {"ad_form", 1e-8},     {"structure", 1e-8}, {"jacobi", 1e-6},      {"ode", 1e-6},
      {"path", 1e-6},        {"mc", 1e-6},        {"batalin", 1e-10},    {"order", 0.3},
      {"bundle", 1e-10},     {"winding", 1e-9},   {"commutator", 1e-6},  {"omega_d", 1e-8},
      {"gauge_law", 1e-5},   {"structure_eq", 1e-5}, {"bianchi", 1e-4}, {"maxwell", 1e-12},
      {"glue", 1e-8},
  };
}

double SuiteConfig::tolerance(const std::string& name) const {
  auto it = tol.find(name);
  if (it != tol.end()) return it->second;
  return default_tolerances().at(name);
}

std::vector<std::string> suite_names() { return {"axioms", "tangent", "jacobi", "reconstruct", "bundle", "gauge", "all"}; }

ComplexStructure complex_structure(double cx, double cy) {
  // C¹ = (i/2)(Cx + i Cy), C² = (i/2)(Cx − i Cy)
  return {-0.5 * cy, 0.5 * cx, 0.5 * cy, 0.5 * cx};
}

namespace {

using Clock = std::chrono::steady_clock;

bool rejectable(const LoopError& e) {
  switch (e.kind()) {
    case ErrorKind::DomainSingularity:
    case ErrorKind::OutOfDomain:
    case ErrorKind::NoSolutionInChart:
    case ErrorKind::SingularFrame:
    case ErrorKind::PoleSingularity:
      return true;
    default:
      return false;
  }
}

long count_or(const SuiteConfig& cfg, long fallback) { return cfg.samples > 0 ? cfg.samples : fallback; }

std::uint64_t stream_seed(const SuiteConfig& cfg, std::uint64_t tag) { return splitmix64(cfg.seed ^ (tag << 32)); }

Vec<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vec<double> v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

double rel(const Vec<double>& got, const Vec<double>& want) { return max_abs(got - want) / std::max(1.0, max_abs(want)); }

void note_rejected(VerificationReport& rep, const std::string& what, long n) {
  if (n > 0) rep.notes.push_back(what + ": rejected draws: " + std::to_string(n));
}

void finish(VerificationReport& rep, Clock::time_point t0) {
  rep.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

VerificationReport axioms_suite(const SuiteConfig& cfg) {
  auto t0 = Clock::now();
  Loop L = parse_loop(cfg.loop);
  VerificationReport rep = check_loop_axioms(L, count_or(cfg, 10000), cfg.seed, cfg.tolerance("exact"));
  const long n = count_or(cfg, 10000);

  if (L.kind() == LoopKind::rz) {
    MaxTracker comm;
    for (long s = 0; s < n; ++s) {
      auto rng = rng_for(stream_seed(cfg, 1), s);
      Vec<double> a = L.sample(rng), b = L.sample(rng);
      comm.add(L.distance(L.product(a, b), L.product(b, a)));
    }
    rep.add("commutativity", comm.value, cfg.tolerance("exact"), comm.count);
  }
  if (L.kind() == LoopKind::qh2) {
    MaxTracker closure;
    for (long s = 0; s < n; ++s) {
      auto rng = rng_for(stream_seed(cfg, 2), s);
      Vec<double> a = L.sample(rng, 0.999), b = L.sample(rng, 0.999);
      closure.add(norm2(L.product(a, b)) < 1.0 ? 0.0 : 1.0);
    }
    rep.add("unit_disk_closure", closure.value, 0.0, closure.count);
  }
  if (L.kind() == LoopKind::qsu2) {
    Loop qc = parse_loop("qc");
    MaxTracker match, unitary;
    long rejected = 0;
    const long m = std::min(n, 1000L);
    for (long s = 0; s < m; ++s) {
      auto rng = rng_for(stream_seed(cfg, 3), s);
      Vec<double> a = qc.sample(rng), b = qc.sample(rng);
      try {
        Qsu2Product p = qsu2_product(as_cplx(a), as_cplx(b));
        match.add(rel(as_vec(p.coordinate), qc.product(a, b)));
        const auto& U = p.matrix.m;
        double d = std::abs(norm2(U[0][0]) + norm2(U[0][1]) - 1.0);
        d = std::max(d, std::abs(U[0][0].im));
        unitary.add(d);
      } catch (const LoopError& e) {
        if (!rejectable(e)) throw;
        ++rejected;
      }
    }
    rep.add("qsu2_coordinate_matches_qc", match.value, cfg.tolerance("qsu2"), match.count);
    rep.add("qsu2_matrix_unitary_real_diagonal", unitary.value, cfg.tolerance("qsu2"), unitary.count);
    note_rejected(rep, "qsu2", rejected);
  }
  finish(rep, t0);
  return rep;
}

VerificationReport tangent_suite(const SuiteConfig& cfg) {
  auto t0 = Clock::now();
  Loop L = parse_loop(cfg.loop);
  VerificationReport rep("tangent");
  const std::size_t n = L.dim();
  const Vec<double> e = L.identity();
  const double h = 1e-5;
  MaxTracker fd, rt, adl, adr, ada, closed;
  long rejected = 0;

  Mat<double> I = Mat<double>::identity(n);
  rep.add("frames_at_identity",
          std::max(max_abs(left_frame(L, e) - I), max_abs(right_frame(L, e) - I)), cfg.tolerance("frame"), 1);

  const long N = count_or(cfg, 1000);
  for (long s = 0; s < N; ++s) {
    auto rng = rng_for(stream_seed(cfg, 4), s);
    Vec<double> a = L.sample(rng), b = L.sample(rng), v = random_vector(rng, n);
    try {
      Vec<double> jv = pushforward_left(L, a, b, v);
      Vec<double> plus = L.product(a, b + scaled(v, h)), minus = L.product(a, b - scaled(v, h));
      Vec<double> fdv = scaled(L.difference(plus, minus), 1.0 / (2 * h));
      fd.add(rel(fdv, jv));

      rt.add(rel(canonical_form(L, a, pushforward_left(L, a, e, v)), v));

      AdFormResiduals r = verify_ad_form_laws(L, b, a, v);
      adl.add(r.left);
      adr.add(r.right);
      ada.add(r.adjoint);

      if (L.kind() == LoopKind::qc || L.kind() == LoopKind::qh2) {
        Tensor3<double> C = structure_functions(L, a);
        ComplexStructure cs = complex_structure(C(0, 0, 1), C(1, 0, 1));
        // Qℂ: C¹₁₂ = −η, C²₁₂ = η̄. QH²: C¹₁₂ = η, C²₁₂ = −η̄.
        double sg = L.kind() == LoopKind::qc ? -1.0 : 1.0;
        double d = std::max({std::abs(cs.c1_re - sg * a[0]), std::abs(cs.c1_im - sg * a[1]),
                             std::abs(cs.c2_re + sg * a[0]), std::abs(cs.c2_im - sg * a[1])});
        closed.add(d);
      }
    } catch (const LoopError& err) {
      if (!rejectable(err)) throw;
      ++rejected;
    }
  }
  rep.add("pushforward_vs_finite_difference", fd.value, cfg.tolerance("fd"), fd.count);
  rep.add("canonical_form_inverts_frame", rt.value, cfg.tolerance("frame"), rt.count);
  rep.add("ad_form_left_law", adl.value, cfg.tolerance("ad_form"), adl.count);
  rep.add("ad_form_right_law", adr.value, cfg.tolerance("ad_form"), adr.count);
  rep.add("fundamental_field_adjoint_law", ada.value, cfg.tolerance("ad_form"), ada.count);
  if (closed.count > 0) rep.add("structure_functions_closed_form", closed.value, cfg.tolerance("structure"), closed.count);
  note_rejected(rep, "tangent", rejected);
  finish(rep, t0);
  return rep;
}

VerificationReport jacobi_suite(const SuiteConfig& cfg) {
  auto t0 = Clock::now();
  Loop L = parse_loop(cfg.loop);
  VerificationReport rep("jacobi");
  MaxTracker jac, anti;
  long rejected = 0;
  const long N = count_or(cfg, 100);
  for (long s = 0; s < N; ++s) {
    auto rng = rng_for(stream_seed(cfg, 5), s);
    Vec<double> a = L.sample(rng);
    try {
      jac.add(jacobi_residual(L, a));
      for (FrameSide side : {FrameSide::left, FrameSide::right}) {
        Tensor3<double> C = structure_functions(L, a, side);
        double d = 0.0;
        for (std::size_t p = 0; p < C.n; ++p)
          for (std::size_t i = 0; i < C.n; ++i)
            for (std::size_t j = 0; j < C.n; ++j) d = std::max(d, std::abs(C(p, i, j) + C(p, j, i)));
        anti.add(d);
      }
    } catch (const LoopError& err) {
      if (!rejectable(err)) throw;
      ++rejected;
    }
  }
  rep.add("modified_jacobi", jac.value, cfg.tolerance("jacobi"), jac.count);
  rep.add("structure_antisymmetry", anti.value, cfg.tolerance("exact"), anti.count);
  note_rejected(rep, "jacobi", rejected);
  finish(rep, t0);
  return rep;
}

VerificationReport reconstruct_suite(const SuiteConfig& cfg) {
  auto t0 = Clock::now();
  Loop L = parse_loop(cfg.loop);
  VerificationReport rep("reconstruct");
  MaxTracker ode, path, mc, bat;
  long rejected = 0;
  const long N = count_or(cfg, 50);
  for (long s = 0; s < N; ++s) {
    auto rng = rng_for(stream_seed(cfg, 6), s);
    Vec<double> a = L.sample(rng), b = L.sample(rng), c = L.sample(rng);
    try {
      ReconstructOptions opt;
      opt.steps = cfg.steps;
      opt.tol = 0.0;
      ReconstructResult r = reconstruct_product(L, a, b, opt);
      Vec<double> exact = L.product(a, b);
      ode.add(L.distance(r.value, exact) / std::max(1.0, max_abs(exact)));
      if (L.dim() >= 2) path.add(L.distance(integrate_lie_equation(L, a, b, cfg.steps, PathKind::bezier), r.value));
      mc.add(maurer_cartan_residual(L, b, a));
      VerificationReport br = batalin_axiom_check(L, a, b, c, cfg.tolerance("batalin"));
      for (const auto& cr : br.cases) bat.add(cr.max_residual);
    } catch (const LoopError& err) {
      if (!rejectable(err)) throw;
      ++rejected;
    }
  }
  rep.add("reconstruct_vs_closed_form", ode.value, cfg.tolerance("ode"), ode.count);
  if (path.count > 0) rep.add("path_independence", path.value, cfg.tolerance("path"), path.count);
  rep.add("maurer_cartan", mc.value, cfg.tolerance("mc"), mc.count);
  rep.add("transformation_quasigroup_axioms", bat.value, cfg.tolerance("batalin"), bat.count);

  if (L.kind() == LoopKind::qc || L.kind() == LoopKind::qh2 || L.kind() == LoopKind::qsu2) {
    // Benchmark pair; error ratio between 32 and 64 steps.
    Vec<double> a{0.5, 0.0}, b{0.0, 0.5};
    Vec<double> exact = L.product(a, b);
    double e32 = L.distance(integrate_lie_equation(L, a, b, 32), exact);
    double e64 = L.distance(integrate_lie_equation(L, a, b, 64), exact);
    double order = std::log2(e32 / e64);
    rep.add("convergence_order", std::abs(order - 4.0) / 4.0, cfg.tolerance("order"), 2);
    std::ostringstream os;
    os.precision(4);
    os << "observed order " << order << " (errors " << e32 << " at 32 steps, " << e64 << " at 64)";
    rep.notes.push_back(os.str());
  }
  note_rejected(rep, "reconstruct", rejected);
  finish(rep, t0);
  return rep;
}

// ---------------------------------------------------------------------------

BundleAtlas make_test_atlas(const Loop& L, const Vec<double>& q0) {
  BundleAtlas atlas("test-line", L);
  atlas.add_chart({"a", [](const Vec<double>& x) { return x[0] < 0.5; }, 1});
  atlas.add_chart({"b", [](const Vec<double>& x) { return x[0] > -0.5; }, 1});
  auto element = [q0](const Vec<double>& x, const Vec<double>&) { return scaled(q0, 0.5 + 0.5 * std::sin(x[0])); };
  atlas.set_transition("a", "b", {TransitionMode::left, element});
  atlas.set_transition("b", "a", {TransitionMode::left_inverse, element});
  atlas.set_overlap_sampler([](std::mt19937_64& rng) { return Vec<double>{uniform(rng, -0.5, 0.5)}; });
  return atlas;
}

void generic_atlas_cases(VerificationReport& rep, const BundleAtlas& atlas, const SuiteConfig& cfg, long N,
                         const std::string& prefix, std::uint64_t tag) {
  const Loop& F = atlas.fiber();
  const std::string alpha = atlas.charts()[0].id, beta = atlas.charts()[1].id;
  MaxTracker trip, cocycle, law, comp, freeness;
  long rejected = 0;
  for (long s = 0; s < N; ++s) {
    auto rng = rng_for(stream_seed(cfg, tag), s);
    Vec<double> x = atlas.sample_overlap(rng);
    Vec<double> q = F.sample(rng), a = F.sample(rng), b = F.sample(rng);
    try {
      Vec<double> back = atlas.carry(beta, alpha, x, atlas.carry(alpha, beta, x, q));
      trip.add(F.distance(back, q));
      cocycle.add(std::max(cocycle_residual(atlas, alpha, beta, alpha, x, q),
                           cocycle_residual(atlas, alpha, beta, beta, x, q)));
      law.add(transition_right_law_residual(atlas, alpha, beta, x, q, a));
      TotalPoint p{alpha, x, q};
      Vec<double> lhs = right_action(atlas, right_action(atlas, p, a), b).fiber;
      TotalPoint p2{alpha, x, associator(F, AssociatorKind::right, a, b, q)};
      Vec<double> rhs = right_action(atlas, p2, F.product(a, b)).fiber;
      comp.add(rel(lhs, rhs));
      if (max_abs(a) > 1e-2) freeness.add(F.distance(right_action(atlas, p, a).fiber, q) > 1e-9 ? 0.0 : 1.0);
    } catch (const LoopError& err) {
      if (!rejectable(err)) throw;
      ++rejected;
    }
  }
  const double tol = cfg.tolerance("bundle");
  rep.add(prefix + "chart_round_trip", trip.value, tol, trip.count);
  rep.add(prefix + "cocycle", cocycle.value, tol, cocycle.count);
  rep.add(prefix + "transition_right_law", law.value, tol, law.count);
  rep.add(prefix + "right_action_composition", comp.value, tol, comp.count);
  rep.add(prefix + "right_action_free", freeness.value, 0.0, freeness.count);
  note_rejected(rep, prefix + "transitions", rejected);
}

void s3_cases(VerificationReport& rep, const SuiteConfig& cfg, long N) {
  const Loop qc = parse_loop("qc");
  const BundleAtlas atlas = make_s3_bundle();
  MaxTracker normd, proj, indep, trip, trans;
  long rejected = 0;
  for (long s = 0; s < N; ++s) {
    auto rng = rng_for(stream_seed(cfg, 7), s);
    double theta = uniform(rng, 0.05, std::numbers::pi / 2 - 0.05);
    S3Point p = s3_point(theta, uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0));
    Cplx<double> eta = as_cplx(qc.sample(rng));
    S3Point pe = s3_right_action(p, eta);
    normd.add(s3_norm_defect(pe));
    proj.add(max_abs(s3_project(pe) - s3_project(p)));
    trip.add(s3_distance(s3_untrivialize(s3_trivialize(p, "-")), p));
    TotalPoint m = s3_trivialize(p, "-");
    trans.add(qc.distance(atlas.carry("-", "+", m.base, m.fiber), s3_trivialize(p, "+").fiber));
    try {
      indep.add(s3_trivialization_independence_residual(p, eta));
    } catch (const LoopError& err) {
      if (!rejectable(err)) throw;
      ++rejected;
    }
  }
  const double tol = cfg.tolerance("bundle");
  rep.add("s3_norm_preservation", normd.value, tol, normd.count);
  rep.add("s3_projection_equivariance", proj.value, tol, proj.count);
  rep.add("s3_trivialization_round_trip", trip.value, tol, trip.count);
  rep.add("s3_transition_reproduces_chart", trans.value, tol, trans.count);
  rep.add("s3_trivialization_independence", indep.value, 10 * tol, indep.count);
  note_rejected(rep, "s3 independence (right action leaves the + chart)", rejected);
}

void winding_cases(VerificationReport& rep, const SuiteConfig& cfg, long N, int n) {
  const Loop qc = parse_loop("qc");
  MaxTracker iter, from_fibers;
  long rejected = 0;
  if (n != 0) {
    const double theta_max = 0.9 * std::numbers::pi / std::abs(n);
    for (long s = 0; s < N; ++s) {
      auto rng = rng_for(stream_seed(cfg, 8), s);
      double theta = uniform(rng, 0.01, theta_max), gamma = uniform(rng, -3.1, 3.1);
      Vec<double> zeta = qc.sample(rng, 0.3);
      try {
        Vec<double> qn = winding_transition(n, theta, gamma);
        Vec<double> direct = qc.product(qn, zeta);
        iter.add(rel(iterate_left(qc, winding_transition(1, theta, gamma), n, zeta), direct));
        from_fibers.add(rel(winding_element_from_fibers(zeta, direct), qn));
      } catch (const LoopError& err) {
        if (!rejectable(err)) throw;
        ++rejected;
      }
    }
  }
  rep.add("winding_iterate_vs_closed_form", iter.value, cfg.tolerance("winding"), iter.count);
  rep.add("winding_element_from_fibers", from_fibers.value, cfg.tolerance("winding"), from_fibers.count);
  note_rejected(rep, "winding", rejected);
}

VerificationReport bundle_suite(const SuiteConfig& cfg) {
  auto t0 = Clock::now();
  Loop L = parse_loop(cfg.loop);
  BundleAtlas atlas = make_atlas(cfg.atlas);
  VerificationReport rep("bundle");
  const long N = count_or(cfg, 1000);
  generic_atlas_cases(rep, atlas, cfg, N, "", 9);
  if (atlas.name() == "s3-over-s1") {
    s3_cases(rep, cfg, N);
  } else {
    int n = std::stoi(cfg.atlas.substr(cfg.atlas.find("n=") + 2));
    winding_cases(rep, cfg, N, n);
  }
  auto rng = rng_for(stream_seed(cfg, 10), 0);
  generic_atlas_cases(rep, make_test_atlas(L, L.sample(rng)), cfg, N, "line_atlas_", 11);
  finish(rep, t0);
  return rep;
}

// ---------------------------------------------------------------------------

// ∂_μ of a Quadratic, written out from its coefficients.
double quadratic_derivative(const Quadratic& q, std::size_t mu, const Vec<double>& x) {
  double d = q.c1.empty() ? 0.0 : q.c1[mu];
  for (std::size_t b = 0; b < q.c2.cols() && q.c2.rows() > 0; ++b) d += (q.c2(mu, b) + q.c2(b, mu)) * x[b];
  return d;
}

struct SectionCases {
  MaxTracker horizontal, vertical, mixed;
};

void structure_cases(SectionCases& sc, const LocalConnectionForm& form, const Vec<double>& x, const Vec<double>& y,
                     std::mt19937_64& rng) {
  const std::size_t n = form.fiber.dim(), m = form.A->base_dim();
  Vec<double> v1 = random_vector(rng, m), v2 = random_vector(rng, m);
  Vec<double> u1 = random_vector(rng, n), u2 = random_vector(rng, n);
  Vec<double> H1 = horizontal_lift(form, x, y, v1), H2 = horizontal_lift(form, x, y, v2);
  Vec<double> V1 = vertical_vector(form, x, y, u1), V2 = vertical_vector(form, x, y, u2);
  sc.horizontal.add(std::max(structure_equation_residual(form, x, y, H1, H2), horizontal_bracket_residual(form, x, y)));
  sc.vertical.add(structure_equation_residual(form, x, y, V1, V2));
  sc.mixed.add(structure_equation_residual(form, x, y, H1, V2));
}

FieldPtr s3_section_transition() {
  // q_{+-} = e^{i g(ψ)}: the + coordinate of the − section ζ₋ = ρ e^{i g(ψ)}.
  Quadratic r{1.0, {0.0}, Mat<double>(1, 1)};
  Mat<double> c2(1, 1);
  c2(0, 0) = 0.2;
  Quadratic g{0.3, {0.7}, c2};
  return std::make_shared<PhaseField>(r, g);
}

FieldPtr winding_section_transition(int n) {
  Quadratic r{std::tan(n * kClutchAngle / 2), {0.0, 0.0}, Mat<double>(2, 2)};
  Quadratic g{0.0, {0.0, 1.0}, Mat<double>(2, 2)};
  return std::make_shared<PhaseField>(r, g);
}

void qc_fixed_cases(VerificationReport& rep, const SuiteConfig& cfg, long N) {
  const Loop qc = parse_loop("qc");
  const Vec<double> e = qc.identity();
  MaxTracker law_s3, law_w, off_section, two_route, glue, cond2;

  FieldPtr qba_s3 = s3_section_transition();
  FieldPtr qab_s3 = std::make_shared<RightInverseField>(qc, qba_s3);
  FieldPtr qba_w = winding_section_transition(1);
  FieldPtr qab_w = std::make_shared<RightInverseField>(qc, qba_w);

  for (long s = 0; s < N; ++s) {
    auto rng = rng_for(stream_seed(cfg, 12), s);
    LocalConnectionForm f1{qc, random_trig_potential(2, 1, rng())};
    LocalConnectionForm f2{qc, random_trig_potential(2, 2, rng())};
    Vec<double> psi{uniform(rng, 0.1, 3.0)};
    Vec<double> tp{uniform(rng, std::numbers::pi / 2 - kStripHalfWidth, std::numbers::pi / 2 + kStripHalfWidth),
                   uniform(rng, -3.0, 3.0)};
    law_s3.add(curvature_gauge_residual(f1, qab_s3, qba_s3, psi, e));
    law_w.add(curvature_gauge_residual(f2, qab_w, qba_w, tp, e));
    off_section.add(curvature_gauge_residual(f2, qab_w, qba_w, tp, qc.sample(rng)));
    two_route.add(gauge_two_route_residual(f1, qab_s3, qba_s3, psi));

    // S¹ partition cos²(ψ/2) + sin²(ψ/2) glued into the − chart.
    BundleAtlas atlas = make_s3_bundle();
    const BaseChart& minus = atlas.chart("-");
    const BaseChart& plus = atlas.chart("+");
    LocalConnectionForm f1p{qc, random_trig_potential(2, 1, rng())};
    LocalConnectionForm plus_form = gauge_transform(f1p, qba_s3, qab_s3);
    std::vector<GluePiece> pieces{
        {minus.contains, std::make_shared<CosineField>(0.5, 0.5), f1.A},
        {plus.contains, std::make_shared<CosineField>(0.5, -0.5), plus_form.A},
    };
    std::vector<Vec<double>> probes;
    for (int k = 0; k <= 16; ++k) probes.push_back({-std::numbers::pi + k * std::numbers::pi / 8});
    LocalConnectionForm glued = glue_connections(qc, pieces, probes);
    Vec<double> y = qc.sample(rng);
    glue.add(vertical_reproduction_residual(glued, psi, y));
    cond2.add(right_equivariance_residual(glued, psi, y, qc.sample(rng)));
  }
  rep.add("curvature_gauge_law_s3_on_section", law_s3.value, cfg.tolerance("gauge_law"), law_s3.count);
  rep.add("curvature_gauge_law_winding_on_section", law_w.value, cfg.tolerance("gauge_law"), law_w.count);
  rep.add("glue_vertical_reproduction", glue.value, cfg.tolerance("glue"), glue.count);
  std::ostringstream os;
  os.precision(3);
  os << "measured, not gated: curvature law off the section " << off_section.value
     << "; local vs pullback transformation gap " << two_route.value << "; glued form right equivariance "
     << cond2.value;
  rep.notes.push_back(os.str());
}

void maxwell_case(VerificationReport& rep, const SuiteConfig& cfg, long N) {
  const Loop L = parse_loop("qhr:K=0");
  const std::size_t n = L.dim(), m = 2;
  MaxTracker curl;
  for (long s = 0; s < N; ++s) {
    auto rng = rng_for(stream_seed(cfg, 13), s);
    std::vector<Quadratic> comps;
    for (std::size_t k = 0; k < n * m; ++k) comps.push_back(Quadratic::random(m, rng, 0.5));
    auto A = std::make_shared<PolynomialPotential>(n, m, comps);
    LocalConnectionForm form{L, A};
    Vec<double> x = random_vector(rng, m), y = L.sample(rng);
    Curvature F = curvature(form, x, y);
    for (std::size_t i = 0; i < n; ++i) {
      double want = quadratic_derivative(A->component(i, 1), 0, x) - quadratic_derivative(A->component(i, 0), 1, x);
      curl.add(std::abs(F(i, 0, 1) - want));
    }
  }
  rep.add("abelian_maxwell_curl", curl.value, cfg.tolerance("maxwell"), curl.count);
}

VerificationReport gauge_suite(const SuiteConfig& cfg) {
  auto t0 = Clock::now();
  Loop L = parse_loop(cfg.loop);
  VerificationReport rep("gauge");
  const std::size_t n = L.dim();
  const Vec<double> e = L.identity();
  const long N = count_or(cfg, 50);
  MaxTracker comm, omd, bianchi, bianchi_e, equiv;
  SectionCases off, on;
  long rejected = 0;
  for (long s = 0; s < N; ++s) {
    auto rng = rng_for(stream_seed(cfg, 14), s);
    LocalConnectionForm form{L, random_polynomial_potential(n, 2, rng())};
    LocalConnectionForm form3{L, random_polynomial_potential(n, 3, rng())};
    TestFunction f = TestFunction::random(2, n, rng());
    Vec<double> x = random_vector(rng, 2), x3 = random_vector(rng, 3), y = L.sample(rng);
    try {
      comm.add(commutator_residual(form, f, x, y));
      omd.add(omega_annihilates_D_residual(form, x, y));
      structure_cases(off, form, x, y, rng);
      structure_cases(on, form, x, e, rng);
      Vec<double> X = random_vector(rng, 3 + n), Y = random_vector(rng, 3 + n), Z = random_vector(rng, 3 + n);
      bianchi.add(bianchi_residual(form3, x3, y, X, Y, Z));
      bianchi_e.add(bianchi_residual(form3, x3, e, X, Y, Z));
      equiv.add(right_equivariance_residual(form, x, y, L.sample(rng)));
    } catch (const LoopError& err) {
      if (!rejectable(err)) throw;
      ++rejected;
    }
  }
  rep.add("commutator", comm.value, cfg.tolerance("commutator"), comm.count);
  rep.add("omega_annihilates_horizontal", omd.value, cfg.tolerance("omega_d"), omd.count);
  const double st = cfg.tolerance("structure_eq");
  rep.add("structure_equation_horizontal", off.horizontal.value, st, off.horizontal.count);
  rep.add("structure_equation_vertical", off.vertical.value, st, off.vertical.count);
  rep.add("structure_equation_mixed", off.mixed.value, st, off.mixed.count);
  rep.add("structure_equation_horizontal_on_section", on.horizontal.value, st, on.horizontal.count);
  rep.add("structure_equation_vertical_on_section", on.vertical.value, st, on.vertical.count);
  rep.add("structure_equation_mixed_on_section", on.mixed.value, st, on.mixed.count);
  rep.add("bianchi_3d", bianchi.value, cfg.tolerance("bianchi"), bianchi.count);
  rep.add("bianchi_3d_on_section", bianchi_e.value, cfg.tolerance("bianchi"), bianchi_e.count);
  {
    std::ostringstream os;
    os.precision(3);
    os << "measured, not gated: right equivariance of the coordinate form " << equiv.value;
    rep.notes.push_back(os.str());
  }
  qc_fixed_cases(rep, cfg, std::max(1L, N / 2));
  maxwell_case(rep, cfg, N);
  note_rejected(rep, "gauge", rejected);
  finish(rep, t0);
  return rep;
}

}  // namespace

VerificationReport run_suite(const SuiteConfig& cfg, const std::string& suite) {
  if (suite == "axioms") return axioms_suite(cfg);
  if (suite == "tangent") return tangent_suite(cfg);
  if (suite == "jacobi") return jacobi_suite(cfg);
  if (suite == "reconstruct") return reconstruct_suite(cfg);
  if (suite == "bundle") return bundle_suite(cfg);
  if (suite == "gauge") return gauge_suite(cfg);
  if (suite == "all") {
    auto t0 = Clock::now();
    VerificationReport rep("all");
    for (const auto& name : suite_names())
      if (name != "all") rep.merge(run_suite(cfg, name));
    finish(rep, t0);
    return rep;
  }
  throw LoopError(ErrorKind::UnknownSuite, "'" + suite + "'");
}

}  // namespace loopbundle
