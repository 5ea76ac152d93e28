#pragma once

// The map Psi_k(x, y) = (1/(x - y), -x y / (k (x - y))) from dynamic pairs to
// approximation pairs, and the regions of the (u, v) plane built from it.
//
// Membership is three-valued. A constraint whose slack lies within
// eps_boundary of zero makes the point "boundary" unless another constraint
// is violated outright.

#include "jagerlab/cf_core.hpp"
#include "jagerlab/scalar.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace jagerlab {

template <Scalar T>
using Point2 = Eigen::Matrix<T, 2, 1>;

template <Scalar T>
Point2<T> make_point(T first, T second) {
  Point2<T> p;
  p << std::move(first), std::move(second);
  return p;
}

enum class Membership { outside = 0, boundary = 1, inside = 2 };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::outside: return "outside";
    case Membership::boundary: return "boundary";
    case Membership::inside: return "inside";
  }
  return "?";
}

inline Membership all_of(std::initializer_list<Membership> parts) {
  return std::min(parts);
}

inline Membership any_of(std::initializer_list<Membership> parts) {
  return std::max(parts);
}

/// Classifies the constraint slack > 0.
template <Scalar T>
Membership classify_slack(const T& slack, double eps) {
  if (slack > T(eps)) return Membership::inside;
  if (slack < T(-eps)) return Membership::outside;
  return Membership::boundary;
}

template <Scalar T>
Point2<T> psi(const KParameter<T>& k, const Point2<T>& p) {
  const T d = p.x() - p.y();
  if (d == T(0)) throw DomainError("psi: singular input (x = y)");
  return make_point<T>(T(1) / d, T(-(p.x() * p.y()) / (k.value() * d)));
}

/// Reflection about x + y = 0; Psi_k is invariant under it.
template <Scalar T>
Point2<T> reflect(const Point2<T>& p) {
  return make_point<T>(T(-p.y()), T(-p.x()));
}

template <FloatingScalar T>
struct Preimage {
  std::array<Point2<T>, 2> roots;
  std::size_t count = 0;

  std::size_t size() const { return count; }
  bool empty() const { return count == 0; }
  const Point2<T>& operator[](std::size_t i) const { return roots[i]; }
  /// The root on or below x + y = 0.
  const Point2<T>& canonical() const { return roots[0]; }
};

/// Solves Psi_k(x, y) = q. From x - y = 1/u and x y = -k v / u,
/// (x + y)^2 = (1 - 4 k u v) / u^2. The canonical root (x + y <= 0) comes first,
/// its reflection second; a double root is reported when |1 - 4kuv| <= eps_compare.
template <FloatingScalar T>
Preimage<T> psi_preimage(const KParameter<T>& k, const Point2<T>& q, const TolerancePolicy& tol) {
  using std::sqrt;
  const T& u = q.x();
  const T& v = q.y();
  if (!(u > T(0))) throw DomainError("psi_preimage: u must be positive");
  Preimage<T> out;
  const T hyper = T(1) - T(4) * k.value() * u * v;
  if (hyper < T(-tol.eps_compare)) return out;
  const T d = T(1) / u;
  const bool double_root = abs_value(hyper) <= T(tol.eps_compare);
  const T s = double_root ? T(0) : T(-d * sqrt(hyper));
  out.roots[0] = make_point<T>(T((s + d) / 2), T((s - d) / 2));
  out.count = 1;
  if (!double_root) {
    out.roots[1] = reflect(out.roots[0]);
    out.count = 2;
  }
  return out;
}

/// P_(k,a) = (0,1) x (-k-a-1, -k-a].
template <Scalar T>
struct Strip {
  KParameter<T> k;
  Digit a;

  T upper() const { return -k.value() - T(a); }
  T lower() const { return -k.value() - T(a) - T(1); }
};

template <Scalar T>
bool strip_contains(const Strip<T>& s, const Point2<T>& p) {
  return p.x() > T(0) && p.x() < T(1) && p.y() > s.lower() && p.y() <= s.upper();
}

template <Scalar T>
Membership strip_classify(const Strip<T>& s, const Point2<T>& p, double eps) {
  return all_of({classify_slack<T>(p.x(), eps), classify_slack<T>(T(1) - p.x(), eps),
                 classify_slack<T>(T(p.y() - s.lower()), eps),
                 classify_slack<T>(T(s.upper() - p.y()), eps)});
}

/// a u + b v = c
template <Scalar T>
struct Line {
  T a, b, c;
  T value(const Point2<T>& q) const { return a * q.x() + b * q.y() - c; }
};

template <Scalar T>
Line<T> line_through(const Point2<T>& p, const Point2<T>& r) {
  const T a = r.y() - p.y();
  const T b = p.x() - r.x();
  return {a, b, T(a * p.x() + b * p.y())};
}

template <Scalar T>
struct QuadRegion {
  std::array<Point2<T>, 4> vertices;
  std::array<Line<T>, 4> edge_lines;  // edge i joins vertex i and i+1
};

template <Scalar T>
QuadRegion<T> make_quad(const std::array<Point2<T>, 4>& vertices) {
  QuadRegion<T> quad{vertices, {}};
  for (std::size_t i = 0; i < 4; ++i) {
    quad.edge_lines[i] = line_through(vertices[i], vertices[(i + 1) % 4]);
  }
  return quad;
}

/// Image of P_(k,a) when Psi_k is injective there (a >= 1, or k >= 1).
template <Scalar T>
QuadRegion<T> pa_sharp_quad(const KParameter<T>& k, Digit a) {
  if (k.below_one() && a == 0) {
    throw DomainError("pa_sharp_quad: Psi_k folds P_(k,0) when k < 1; use the P0 region");
  }
  const T& kk = k.value();
  const T s = kk + T(a);
  return make_quad<T>({make_point<T>(T(1) / s, T(0)),
                       make_point<T>(T(1) / (s + 1), T(s / (kk * (s + 1)))),
                       make_point<T>(T(1) / (s + 2), T((s + 1) / (kk * (s + 2)))),
                       make_point<T>(T(1) / (s + 2), T(0))});
}

/// The actual image of P_(k,a): Psi_k sends the corner (0, -k-a-1) to
/// (1/(k+a+1), 0), so this differs from pa_sharp_quad in its last vertex.
/// pa_sharp_quad strictly contains it; the surplus triangle lies in the
/// image of P_(k,a+1).
template <Scalar T>
QuadRegion<T> pa_image_quad(const KParameter<T>& k, Digit a) {
  if (k.below_one() && a == 0) {
    throw DomainError("pa_image_quad: Psi_k folds P_(k,0) when k < 1; use the P0 region");
  }
  const T& kk = k.value();
  const T s = kk + T(a);
  return make_quad<T>({make_point<T>(T(1) / s, T(0)),
                       make_point<T>(T(1) / (s + 1), T(s / (kk * (s + 1)))),
                       make_point<T>(T(1) / (s + 2), T((s + 1) / (kk * (s + 2)))),
                       make_point<T>(T(1) / (s + 1), T(0))});
}

template <FloatingScalar T>
T segment_distance_squared(const Point2<T>& q, const Point2<T>& p0, const Point2<T>& p1) {
  const Point2<T> d = p1 - p0;
  const T len2 = d.squaredNorm();
  T t = len2 > T(0) ? T((q - p0).dot(d) / len2) : T(0);
  if (t < T(0)) t = T(0);
  if (t > T(1)) t = T(1);
  const Point2<T> foot = p0 + d * t;
  return (q - foot).squaredNorm();
}

/// Point-in-polygon with an eps_boundary band around the edges.
template <FloatingScalar T, std::size_t N>
Membership polygon_classify(const std::array<Point2<T>, N>& vertices, const Point2<T>& q,
                            double eps) {
  const T eps2 = T(eps) * T(eps);
  bool inside = false;
  for (std::size_t i = 0, j = N - 1; i < N; j = i++) {
    const auto& a = vertices[i];
    const auto& b = vertices[j];
    if (segment_distance_squared(q, a, b) <= eps2) return Membership::boundary;
    if ((a.y() > q.y()) != (b.y() > q.y())) {
      const T cross_u = (b.x() - a.x()) * (q.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (q.x() < cross_u) inside = !inside;
    }
  }
  return inside ? Membership::inside : Membership::outside;
}

template <FloatingScalar T>
Membership quad_classify(const QuadRegion<T>& quad, const Point2<T>& q, double eps) {
  return polygon_classify(quad.vertices, q, eps);
}

namespace detail {

template <Scalar T>
void require_below_one(const KParameter<T>& k, const char* what) {
  if (!k.below_one()) throw DomainError(std::string(what) + ": requires k < 1");
}

}  // namespace detail

/// Literal five-constraint region for Psi_k(P_(k,0)), k < 1:
///   u k + v < 1,  v > 0,  (k+1)^2 u + k v > k + 1,  u + k v < 1,  4 k u v <= 1.
/// This set is strictly smaller than the actual image; see p0_enclosed_contains.
template <Scalar T>
Membership p0_sharp_contains(const KParameter<T>& k, const Point2<T>& q, double eps) {
  detail::require_below_one(k, "p0_sharp_contains");
  const T& kk = k.value();
  const T& u = q.x();
  const T& v = q.y();
  return all_of({classify_slack<T>(T(1 - (u * kk + v)), eps), classify_slack<T>(v, eps),
                 classify_slack<T>(T((kk + 1) * (kk + 1) * u + kk * v - (kk + 1)), eps),
                 classify_slack<T>(T(1 - (u + kk * v)), eps),
                 classify_slack<T>(T(1 - 4 * kk * u * v), eps)});
}

/// The region enclosed by the five image curves of the boundary of
/// P_(k,0) restricted to x + y <= 0 (k < 1). The two line constraints only
/// bound it over the u-ranges where those lines are actual edges:
///   v > 0,  (k+1)^2 u + k v > k + 1,  4 k u v <= 1,
///   (u + k v < 1  or  u >= 1/2),  (u k + v < 1  or  u <= 1/(2k)).
template <Scalar T>
Membership p0_enclosed_contains(const KParameter<T>& k, const Point2<T>& q, double eps) {
  detail::require_below_one(k, "p0_enclosed_contains");
  const T& kk = k.value();
  const T& u = q.x();
  const T& v = q.y();
  return all_of(
      {classify_slack<T>(v, eps),
       classify_slack<T>(T((kk + 1) * (kk + 1) * u + kk * v - (kk + 1)), eps),
       classify_slack<T>(T(1 - 4 * kk * u * v), eps),
       any_of({classify_slack<T>(T(1 - (u + kk * v)), eps), classify_slack<T>(T(u - T(1) / 2), eps)}),
       any_of({classify_slack<T>(T(1 - (u * kk + v)), eps),
               classify_slack<T>(T(T(1) / (2 * kk) - u), eps)})});
}

template <Scalar T>
struct LabeledCurve {
  std::string label;
  std::vector<Point2<T>> points;  // traversal order, endpoints included
};

template <Scalar T>
std::vector<Point2<T>> sample_segment(const Point2<T>& from, const Point2<T>& to,
                                      std::size_t samples) {
  std::vector<Point2<T>> pts;
  pts.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const T t = T(i) / T(samples - 1);
    pts.push_back(from + (to - from) * t);
  }
  pts.back() = to;
  return pts;
}

/// The arc of 4 k u v = 1 for u running from u_from to u_to.
template <Scalar T>
std::vector<Point2<T>> sample_hyperbola(const KParameter<T>& k, const T& u_from, const T& u_to,
                                        std::size_t samples) {
  std::vector<Point2<T>> pts;
  pts.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const T u = i + 1 == samples ? u_to : T(u_from + (u_to - u_from) * T(i) / T(samples - 1));
    pts.push_back(make_point<T>(u, T(T(1) / (4 * k.value() * u))));
  }
  return pts;
}

template <Scalar T>
struct P0Corners {
  Point2<T> right;       // (1/k, 0)
  Point2<T> left_base;   // (1/(k+1), 0)
  Point2<T> left_top;    // (1/(k+2), (k+1)/(k(k+2)))
  Point2<T> fold_upper;  // (1/2, 1/(2k)) = Psi(1, -1)
  Point2<T> fold_lower;  // (1/(2k), 1/2) = Psi(k, -k)
};

template <Scalar T>
P0Corners<T> p0_corners(const KParameter<T>& k) {
  const T& kk = k.value();
  return {make_point<T>(T(1) / kk, T(0)), make_point<T>(T(1) / (kk + 1), T(0)),
          make_point<T>(T(1) / (kk + 2), T((kk + 1) / (kk * (kk + 2)))),
          make_point<T>(T(1) / 2, T(T(1) / (2 * kk))), make_point<T>(T(T(1) / (2 * kk)), T(1) / 2)};
}

/// The five boundary pieces of Psi_k(P_(k,0)) for k < 1, labelled
/// p0_item_1 .. p0_item_5, each sampled with `samples` points.
template <Scalar T>
std::vector<LabeledCurve<T>> p0_boundary_curves(const KParameter<T>& k, std::size_t samples) {
  detail::require_below_one(k, "p0_boundary_curves");
  if (samples < 2) throw DomainError("p0_boundary_curves: need at least 2 samples per curve");
  const auto c = p0_corners(k);
  return {
      {"p0_item_1", sample_segment(c.fold_lower, c.right, samples)},
      {"p0_item_2", sample_segment(c.left_base, c.right, samples)},
      {"p0_item_3", sample_segment(c.left_base, c.left_top, samples)},
      {"p0_item_4", sample_segment(c.left_top, c.fold_upper, samples)},
      {"p0_item_5", sample_hyperbola(k, c.fold_upper.x(), c.fold_lower.x(), samples)},
  };
}

/// (0,0), (1/k,0), (1/(k+1),1/(k+1)), (0,1/(k+1)).
template <Scalar T>
std::array<Point2<T>, 4> corollary_quad_vertices(const KParameter<T>& k) {
  const T& kk = k.value();
  const T top = T(1) / (kk + 1);
  return {make_point<T>(T(0), T(0)), make_point<T>(T(T(1) / kk), T(0)), make_point<T>(top, top),
          make_point<T>(T(0), top)};
}

enum class GammaMode { constructive_union, corollary_literal, piecewise };

inline const char* to_string(GammaMode m) {
  switch (m) {
    case GammaMode::constructive_union: return "constructive-union";
    case GammaMode::corollary_literal: return "corollary-literal";
    case GammaMode::piecewise: return "piecewise";
  }
  return "?";
}

namespace detail {

/// (0,1) x (-inf, -k], the union of all strips.
template <FloatingScalar T>
Membership dynamic_domain_classify(const KParameter<T>& k, const Point2<T>& p, double eps) {
  return all_of({classify_slack<T>(p.x(), eps), classify_slack<T>(T(1 - p.x()), eps),
                 classify_slack<T>(T(-k.value() - p.y()), eps)});
}

template <FloatingScalar T>
Membership gamma_constructive(const KParameter<T>& k, const Point2<T>& q,
                              const TolerancePolicy& tol) {
  if (!(q.x() > T(0))) return Membership::outside;
  const T hyper = T(1) - T(4) * k.value() * q.x() * q.y();
  if (hyper < T(-tol.eps_boundary)) return Membership::outside;
  TolerancePolicy root_tol = tol;
  root_tol.eps_compare = 0.0;
  if (hyper < T(0)) {
    // Inside the dead zone above the hyperbola: project onto it.
    const auto roots = psi_preimage(k, make_point<T>(q.x(), T(T(1) / (4 * k.value() * q.x()))),
                                    root_tol);
    return std::min(Membership::boundary,
                    dynamic_domain_classify(k, roots.canonical(), tol.eps_boundary));
  }
  const auto roots = psi_preimage(k, q, root_tol);
  Membership best = Membership::outside;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    best = std::max(best, dynamic_domain_classify(k, roots[i], tol.eps_boundary));
  }
  if (hyper <= T(tol.eps_boundary)) best = std::min(best, Membership::boundary);
  return best;
}

template <FloatingScalar T>
Membership gamma_corollary(const KParameter<T>& k, const Point2<T>& q, double eps) {
  const Membership quad = polygon_classify(corollary_quad_vertices(k), q, eps);
  if (!k.below_one()) return quad;
  const T& kk = k.value();
  const Membership under_arc =
      all_of({classify_slack<T>(T(q.x() - T(1) / 2), eps),
              classify_slack<T>(T(T(1) / (2 * kk) - q.x()), eps), classify_slack<T>(q.y(), eps),
              classify_slack<T>(T(1 - 4 * kk * q.x() * q.y()), eps)});
  return any_of({quad, under_arc});
}

template <FloatingScalar T>
Membership gamma_piecewise(const KParameter<T>& k, const Point2<T>& q, double eps) {
  using std::floor;
  if (!(q.x() > T(0))) return Membership::outside;
  // P_a^# spans u in [1/(k+a+2), 1/(k+a)].
  const T reach = T(1) / q.x() - k.value();
  if (reach < T(-eps)) return Membership::outside;
  const double r = to_double(reach);
  const auto hi = static_cast<long long>(std::floor(r + 1e-9));
  const auto lo = std::max<long long>(0, static_cast<long long>(std::floor(r)) - 2);
  Membership best = Membership::outside;
  for (long long a = lo; a <= std::max(hi, 0LL); ++a) {
    const auto digit = static_cast<Digit>(a);
    const Membership piece = (digit == 0 && k.below_one())
                                 ? p0_enclosed_contains(k, q, eps)
                                 : quad_classify(pa_image_quad(k, digit), q, eps);
    best = std::max(best, piece);
  }
  return best;
}

}  // namespace detail

/// Membership in the space of Jager pairs Gamma_k.
///  - constructive_union: q has a Psi_k preimage in (0,1) x (-inf, -k].
///  - corollary_literal: the closed-form quadrangle, plus for k < 1 the area
///    under the arc 4kuv = 1 between u = 1/2 and u = 1/(2k).
///  - piecewise: the union of the per-strip images (quadrangles for the
///    injective strips, the enclosed P0 region for a = 0 when k < 1).
template <FloatingScalar T>
Membership gamma_contains(const KParameter<T>& k, const Point2<T>& q, GammaMode mode,
                          const TolerancePolicy& tol) {
  switch (mode) {
    case GammaMode::constructive_union: return detail::gamma_constructive(k, q, tol);
    case GammaMode::corollary_literal: return detail::gamma_corollary(k, q, tol.eps_boundary);
    case GammaMode::piecewise: return detail::gamma_piecewise(k, q, tol.eps_boundary);
  }
  return Membership::outside;
}

}  // namespace jagerlab
