#pragma once

// Principal Q-bundle atlases. Fiber coordinates in overlapping charts are
// related by left translations; transition elements q_βα = q_β / q_α are
// derived from those maps and therefore depend on the fiber point.

#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>

#include "loopbundle/core.hpp"

namespace loopbundle {

struct BaseChart {
  std::string id;
  std::function<bool(const Vec<double>&)> contains;
  std::size_t base_dim = 1;
};

enum class TransitionMode {
  left,          // ζ_β = q · ζ_α
  left_inverse,  // ζ_β = q \ ζ_α
};

/// How fiber coordinates change from chart `from` to chart `to` over x.
/// The element q may depend on the fiber coordinate being carried.
struct ChartTransition {
  TransitionMode mode = TransitionMode::left;
  std::function<Vec<double>(const Vec<double>& x, const Vec<double>& fiber)> element;
};

struct TotalPoint {
  std::string chart;
  Vec<double> base;
  Vec<double> fiber;
};

class BundleAtlas {
 public:
  BundleAtlas(std::string name, Loop fiber) : name_(std::move(name)), fiber_(std::move(fiber)) {}

  const std::string& name() const { return name_; }
  const Loop& fiber() const { return fiber_; }
  const std::vector<BaseChart>& charts() const { return charts_; }
  const BaseChart& chart(const std::string& id) const;

  void add_chart(BaseChart chart) { charts_.push_back(std::move(chart)); }
  void set_transition(const std::string& from, const std::string& to, ChartTransition t) {
    transitions_[{from, to}] = std::move(t);
  }
  void set_overlap_sampler(std::function<Vec<double>(std::mt19937_64&)> s) { overlap_sampler_ = std::move(s); }

  bool in_overlap(const std::string& a, const std::string& b, const Vec<double>& x) const {
    return chart(a).contains(x) && chart(b).contains(x);
  }
  /// Base point in the overlap of the first two charts.
  Vec<double> sample_overlap(std::mt19937_64& rng) const { return overlap_sampler_(rng); }

  /// Fiber coordinate of the same total-space point in chart `to`.
  Vec<double> carry(const std::string& from, const std::string& to, const Vec<double>& x,
                    const Vec<double>& fiber) const;

 private:
  std::string name_;
  Loop fiber_;
  std::vector<BaseChart> charts_;
  std::map<std::pair<std::string, std::string>, ChartTransition> transitions_;
  std::function<Vec<double>(std::mt19937_64&)> overlap_sampler_;
};

/// Fiber coordinate times a on the right; base unchanged.
TotalPoint right_action(const BundleAtlas& atlas, const TotalPoint& p, const Vec<double>& a);

/// Re-express p in another chart. NotInOverlap when the base point is not in both.
TotalPoint change_chart(const BundleAtlas& atlas, const TotalPoint& p, const std::string& to_chart);

/// q_βα(p) = R⁻¹_{q_α} q_β for the point with coordinate q_α in chart α.
Vec<double> transition_element(const BundleAtlas& atlas, const std::string& alpha, const std::string& beta,
                               const Vec<double>& x, const Vec<double>& q_alpha);

/// Both forms of the cocycle condition with q_α := q_test; max distance.
double cocycle_residual(const BundleAtlas& atlas, const std::string& alpha, const std::string& beta,
                        const std::string& gamma, const Vec<double>& x, const Vec<double>& q_test);

/// R_a q_βα(p) = r_(q_α,a) q_βα(p), with R_a q_βα(p) := q_βα(p·a).
double transition_right_law_residual(const BundleAtlas& atlas, const std::string& alpha, const std::string& beta,
                                     const Vec<double>& x, const Vec<double>& q_alpha, const Vec<double>& a);

// ---------------------------------------------------------------------------
// S³ → S¹ with QS² fibers. Points of S³ are (z1, z2) ∈ ℂ² stored as 4 reals.

struct S3Point {
  Cplx<double> z1, z2;
};

/// Parameterization z1 = cos(θ/2) e^{iψ1}, z2 = sin(θ/2) e^{iψ2}.
S3Point s3_point(double theta, double psi1, double psi2);
/// π(z1, z2) = (cos ψ1, sin ψ1, 0). ProjectionSingular when |z2| = 1.
Vec<double> s3_project(const S3Point& p);
/// Right translation of S³ by η ∈ QS² (explicit formula on (z1, z2)).
S3Point s3_right_action(const S3Point& p, const Cplx<double>& eta);
double s3_norm_defect(const S3Point& p);
double s3_distance(const S3Point& a, const S3Point& b);

/// Φ_∓ : S³ → U_∓ × QS². Base coordinate is ψ1.
TotalPoint s3_trivialize(const S3Point& p, const std::string& chart);
S3Point s3_untrivialize(const TotalPoint& p);

/// Atlas with charts "-" = (−π, π) and "+" = (0, 2π) on S¹.
BundleAtlas make_s3_bundle();

/// Φ⁻¹_α(π(p), φ_α(R̃_η p)) vs Φ⁻¹_β(π(p), φ_β(R̃_η p)) on S³.
double s3_trivialization_independence_residual(const S3Point& p, const Cplx<double>& eta);

// ---------------------------------------------------------------------------
// QS² bundle over S² glued along an equatorial strip with winding n.

inline constexpr double kStripHalfWidth = 0.1;
inline constexpr double kClutchAngle = 0.5;

/// e^{iγ} tan(nθ/2); DomainSingularity at the poles of tan.
Vec<double> winding_transition(int n, double theta, double gamma);
/// (L_q)^n ζ; negative n applies L⁻¹_q.
Vec<double> iterate_left(const Loop& L, const Vec<double>& q, int n, const Vec<double>& zeta);
/// The element q with L_q ζ₋ = ζ₊ written out from ζ±.
Vec<double> winding_element_from_fibers(const Vec<double>& zeta_minus, const Vec<double>& zeta_plus);

/// Charts "-" (θ < π/2 + w) and "+" (θ > π/2 − w); base point (θ, φ).
BundleAtlas make_winding_bundle(int n);

/// "s3-over-s1" or "qs2-over-s2:n=<int>".
BundleAtlas make_atlas(const std::string& name);

}  // namespace loopbundle
