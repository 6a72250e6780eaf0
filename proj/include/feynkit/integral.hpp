#pragma once

// Numerical evaluation of the one-loop cutoff integral
//
//   J_mu(L) = integral over |p| <= L of  p_mu / (p^2 - 2 p.q + ell)^2  d^4 p
//
// with every product Euclidean, against the large-L form
// pi^2 q_mu (ln(L^2/(ell - q^2)) - 3/2). The coefficient of the i
// prefactor is what both sides report. Requires ell > q^2, which keeps the
// denominator positive on the whole ball.
//
// Two backends: uniform Monte Carlo over the 4-ball (deterministic under a
// per-shard counter-seeding contract, so the worker count never changes the
// result) and nested Gauss-Legendre quadrature in hyperspherical
// coordinates with grid-doubling convergence control.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "feynkit/errors.hpp"

namespace feynkit {

using FourVector = std::array<double, 4>;

inline double dot(const FourVector& a, const FourVector& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double squared_norm(const FourVector& a) { return dot(a, a); }

/// Point of the 4-ball in nested spherical coordinates: r >= 0,
/// phi1 and phi2 in [0, pi], phi3 in [0, 2*pi).
struct HypersphericalPoint {
  double r = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;

  FourVector cartesian() const {
    const double s1 = std::sin(phi1);
    const double s2 = std::sin(phi2);
    return {r * std::cos(phi1), r * s1 * std::cos(phi2), r * s1 * s2 * std::cos(phi3),
            r * s1 * s2 * std::sin(phi3)};
  }

  /// Volume element of the map: r^3 sin^2(phi1) sin(phi2).
  double volume_element() const {
    const double s1 = std::sin(phi1);
    return r * r * r * s1 * s1 * std::sin(phi2);
  }
};

enum class IntegrationMethod { monte_carlo, quadrature };

struct IntegralSpec {
  FourVector q{};
  /// The scalar ell, must exceed q^2.
  double ell = 0.0;
  /// Ball radius L > 0.
  double cutoff = 0.0;
  /// Component index, 1-based (1..4).
  int component = 1;
  IntegrationMethod method = IntegrationMethod::monte_carlo;
  /// Monte Carlo sample count (minimum 10^4).
  long long samples = 1'000'000;
  /// Quadrature nodes per axis at the coarsest level.
  int resolution = 16;
  /// Relative grid-doubling tolerance for quadrature.
  double tolerance = 1e-4;
  std::uint64_t seed = 0;
  /// Worker threads; <= 0 means hardware concurrency.
  int threads = 0;
};

struct IntegralEstimate {
  double value = 0.0;
  /// Monte Carlo standard error, or the last grid-doubling difference.
  double std_error = 0.0;
  /// Samples drawn, or integrand evaluations performed.
  long long samples_used = 0;
  /// False when grid refinement still disagrees beyond tolerance.
  bool converged = true;
};

namespace detail {

inline void validate_common(const IntegralSpec& spec) {
  if (spec.component < 1 || spec.component > 4)
    throw DomainError("component index must be in 1..4, got " +
                      std::to_string(spec.component));
  if (!(spec.cutoff > 0.0)) throw DomainError("cutoff L must be positive");
  if (!(spec.ell > squared_norm(spec.q)))
    throw DomainError("ell must exceed q^2 to keep the denominator positive");
}

/// SplitMix64 finalizer; full avalanche, so (seed, shard) keys decorrelate.
inline std::uint64_t scramble(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based stream: state depends only on (seed, shard), never on the
/// worker that runs the shard.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t shard)
      : state_(scramble(seed ^ scramble(shard))) {}

  /// Uniform in [0, 1).
  double unit() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline void kahan_add(double& sum, double& carry, double term) {
  const double y = term - carry;
  const double t = sum + y;
  carry = (t - sum) - y;
  sum = t;
}

/// Exact pairwise reduction in index order; independent of worker count.
inline double pairwise_sum(const std::vector<double>& xs, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 4) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += xs[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum(xs, 0, xs.size());
}

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs jobs [0, count) on a small pool; job order never affects results
/// because each job writes only its own slot.
template <class Job>
void run_jobs(std::size_t count, int threads, const Job& job) {
  const int workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
    });
  for (auto& t : pool) t.join();
}

constexpr long long kShardSize = 65536;

struct ShardSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

inline ShardSums monte_carlo_shard(const IntegralSpec& spec, std::uint64_t shard,
                                   long long count) {
  CounterRng rng(spec.seed, shard);
  const int mu = spec.component - 1;
  const double two_pi = 2.0 * std::numbers::pi;
  double sum = 0.0, sum_c = 0.0, sum_sq = 0.0, sum_sq_c = 0.0;
  for (long long i = 0; i < count; ++i) {
    const double u1 = rng.unit(), u2 = rng.unit();
    const double u3 = rng.unit(), u4 = rng.unit();
    const double u5 = rng.unit();
    // Box-Muller; log1p(-u) keeps the argument in (0, 1].
    const double r1 = std::sqrt(-2.0 * std::log1p(-u1));
    const double r2 = std::sqrt(-2.0 * std::log1p(-u3));
    FourVector g{r1 * std::cos(two_pi * u2), r1 * std::sin(two_pi * u2),
                 r2 * std::cos(two_pi * u4), r2 * std::sin(two_pi * u4)};
    double norm = std::sqrt(squared_norm(g));
    if (norm < 1e-300) {
      g = {1.0, 0.0, 0.0, 0.0};
      norm = 1.0;
    }
    const double radius = spec.cutoff * std::pow(u5, 0.25);
    const double scale = radius / norm;
    const FourVector p{scale * g[0], scale * g[1], scale * g[2], scale * g[3]};
    const double denom = squared_norm(p) - 2.0 * dot(p, spec.q) + spec.ell;
    const double f = p[mu] / (denom * denom);
    kahan_add(sum, sum_c, f);
    kahan_add(sum_sq, sum_sq_c, f * f);
  }
  return {sum, sum_sq};
}

inline IntegralEstimate monte_carlo(const IntegralSpec& spec) {
  if (spec.samples < 10'000)
    throw DomainError("Monte Carlo needs at least 10^4 samples, got " +
                      std::to_string(spec.samples));
  const long long n = spec.samples;
  const std::size_t shards = static_cast<std::size_t>((n + kShardSize - 1) / kShardSize);
  std::vector<double> sums(shards), sums_sq(shards);
  run_jobs(shards, resolve_threads(spec.threads), [&](std::size_t s) {
    const long long lo = static_cast<long long>(s) * kShardSize;
    const long long count = std::min(kShardSize, n - lo);
    const ShardSums sums_for_shard = monte_carlo_shard(spec, s, count);
    sums[s] = sums_for_shard.sum;
    sums_sq[s] = sums_for_shard.sum_sq;
  });
  const double total = pairwise_sum(sums);
  const double total_sq = pairwise_sum(sums_sq);
  const double l = spec.cutoff;
  const double volume = std::numbers::pi * std::numbers::pi * l * l * l * l / 2.0;
  const double mean = total / static_cast<double>(n);
  const double variance =
      std::max(0.0, (total_sq - total * mean) / static_cast<double>(n - 1));
  IntegralEstimate est;
  est.value = volume * mean;
  est.std_error = volume * std::sqrt(variance / static_cast<double>(n));
  est.samples_used = n;
  est.converged = true;
  return est;
}

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Newton iteration on Legendre polynomials; standard construction.
inline GaussRule gauss_legendre(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double pi = std::numbers::pi;
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[order - 1 - i] = x;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

/// Rule rescaled to [a, b].
inline GaussRule scaled(const GaussRule& rule, double a, double b) {
  GaussRule out = rule;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    out.nodes[i] = mid + half * rule.nodes[i];
    out.weights[i] = half * rule.weights[i];
  }
  return out;
}

/// Radial panel edges: dyadic halving from L down to the denominator's
/// length scale, so the near-origin structure and the slow 1/r tail are
/// both resolved with the same node count per panel.
inline std::vector<double> radial_edges(double cutoff, double ell) {
  const double scale = std::min(cutoff, std::max(std::sqrt(ell), 1e-3));
  std::vector<double> edges{cutoff};
  double v = cutoff;
  while (v > 2.0 * scale) {
    v /= 2.0;
    edges.push_back(v);
  }
  edges.push_back(0.0);
  std::reverse(edges.begin(), edges.end());
  return edges;
}

inline double quadrature_level(const IntegralSpec& spec, int res, long long& evals) {
  const double pi = std::numbers::pi;
  const int mu = spec.component - 1;
  const GaussRule base_r = gauss_legendre(res);
  const GaussRule rule_phi1 = scaled(gauss_legendre(res), 0.0, pi);
  const GaussRule rule_phi2 = scaled(gauss_legendre(res), 0.0, pi);
  const GaussRule rule_phi3 = scaled(gauss_legendre(2 * res), 0.0, 2.0 * pi);
  const std::vector<double> edges = radial_edges(spec.cutoff, spec.ell);
  const std::size_t panels = edges.size() - 1;

  struct Angle1 {
    double cos_v, sin_sq_w;  // node cosine; weight * sin^2
  };
  struct Angle2 {
    double cos_v, sin_v, sin_w;  // weight * sin folded into sin_w
  };
  std::vector<Angle1> a1(rule_phi1.nodes.size());
  for (std::size_t i = 0; i < a1.size(); ++i) {
    const double s = std::sin(rule_phi1.nodes[i]);
    a1[i] = {std::cos(rule_phi1.nodes[i]), rule_phi1.weights[i] * s * s};
  }
  std::vector<Angle2> a2(rule_phi2.nodes.size());
  for (std::size_t i = 0; i < a2.size(); ++i) {
    const double s = std::sin(rule_phi2.nodes[i]);
    a2[i] = {std::cos(rule_phi2.nodes[i]), s, rule_phi2.weights[i] * s};
  }
  struct Angle3 {
    double cos_v, sin_v, w;
  };
  std::vector<Angle3> a3(rule_phi3.nodes.size());
  for (std::size_t i = 0; i < a3.size(); ++i)
    a3[i] = {std::cos(rule_phi3.nodes[i]), std::sin(rule_phi3.nodes[i]),
             rule_phi3.weights[i]};

  // One job per radial shell; each writes its own slot.
  const std::size_t shells = panels * static_cast<std::size_t>(res);
  std::vector<double> shell_values(shells);
  run_jobs(shells, resolve_threads(spec.threads), [&](std::size_t shell) {
    const std::size_t panel = shell / res;
    const std::size_t node = shell % res;
    const GaussRule radial = scaled(base_r, edges[panel], edges[panel + 1]);
    const double r = radial.nodes[node];
    const double wr = radial.weights[node] * r * r * r;
    const FourVector& q = spec.q;
    double acc = 0.0, acc_c = 0.0;
    for (const Angle1& u : a1) {
      const double p0 = r * u.cos_v;
      const double rs = r * std::sqrt(std::max(0.0, 1.0 - u.cos_v * u.cos_v));
      for (const Angle2& v : a2) {
        const double p1 = rs * v.cos_v;
        const double rss = rs * v.sin_v;
        double inner = 0.0;
        for (const Angle3& t : a3) {
          const double p2 = rss * t.cos_v;
          const double p3 = rss * t.sin_v;
          const double denom =
              r * r - 2.0 * (p0 * q[0] + p1 * q[1] + p2 * q[2] + p3 * q[3]) + spec.ell;
          const double component =
              mu == 0 ? p0 : (mu == 1 ? p1 : (mu == 2 ? p2 : p3));
          inner += t.w * component / (denom * denom);
        }
        kahan_add(acc, acc_c, u.sin_sq_w * v.sin_w * inner);
      }
    }
    shell_values[shell] = wr * acc;
  });
  evals += static_cast<long long>(shells) * static_cast<long long>(a1.size()) *
           static_cast<long long>(a2.size()) * static_cast<long long>(a3.size());
  return pairwise_sum(shell_values);
}

inline IntegralEstimate quadrature(const IntegralSpec& spec) {
  if (spec.resolution < 2) throw DomainError("quadrature resolution must be at least 2");
  if (!(spec.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  long long evals = 0;
  double coarse = quadrature_level(spec, spec.resolution, evals);
  int res = spec.resolution;
  for (int round = 0; round < 2; ++round) {
    res *= 2;
    const double fine = quadrature_level(spec, res, evals);
    const double diff = std::abs(fine - coarse);
    IntegralEstimate est;
    est.value = fine;
    est.std_error = diff;
    est.samples_used = evals;
    est.converged = diff <= spec.tolerance * std::max(1.0, std::abs(fine));
    if (est.converged || round == 1) return est;
    coarse = fine;
  }
  return {};  // unreachable
}

}  // namespace detail

/// The large-L form: pi^2 q_mu (ln(L^2/(ell - q^2)) - 3/2), the real
/// coefficient of the i prefactor.
inline double closed_form(const IntegralSpec& spec) {
  detail::validate_common(spec);
  const double delta = spec.ell - squared_norm(spec.q);
  const double pi_sq = std::numbers::pi * std::numbers::pi;
  return pi_sq * spec.q[spec.component - 1] *
         (std::log(spec.cutoff * spec.cutoff / delta) - 1.5);
}

inline double closed_form(const FourVector& q, double ell, double cutoff, int component) {
  IntegralSpec spec;
  spec.q = q;
  spec.ell = ell;
  spec.cutoff = cutoff;
  spec.component = component;
  return closed_form(spec);
}

inline IntegralEstimate integrate(const IntegralSpec& spec) {
  detail::validate_common(spec);
  return spec.method == IntegrationMethod::monte_carlo ? detail::monte_carlo(spec)
                                                       : detail::quadrature(spec);
}

struct ScanRow {
  double cutoff = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double closed_form = 0.0;
  double residual = 0.0;
  bool converged = true;
};

/// One integrate + closed_form row per cutoff; the cutoffs must be
/// strictly increasing and positive.
inline std::vector<ScanRow> divergence_scan(IntegralSpec base,
                                            const std::vector<double>& cutoffs) {
  if (cutoffs.empty()) throw DomainError("scan needs at least one cutoff");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > 0.0)) throw DomainError("scan cutoffs must be positive");
    if (i > 0 && !(cutoffs[i] > cutoffs[i - 1]))
      throw DomainError("scan cutoffs must be strictly increasing");
  }
  std::vector<ScanRow> rows;
  rows.reserve(cutoffs.size());
  for (double l : cutoffs) {
    base.cutoff = l;
    const IntegralEstimate est = integrate(base);
    ScanRow row;
    row.cutoff = l;
    row.estimate = est.value;
    row.std_error = est.std_error;
    row.closed_form = feynkit::closed_form(base);
    row.residual = est.value - row.closed_form;
    row.converged = est.converged;
    rows.push_back(row);
  }
  return rows;
}

/// Plain-decimal rendering (no exponent), 12 significant digits by default.
inline std::string format_plain(double value, int significant = 12) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  const double magnitude = std::floor(std::log10(std::abs(value)));
  int decimals = significant - 1 - static_cast<int>(magnitude);
  char buf[512];
  if (decimals < 0) {
    const double scale = std::pow(10.0, -decimals);
    std::snprintf(buf, sizeof buf, "%.0f", std::round(value / scale) * scale);
  } else {
    decimals = std::min(decimals, 320);
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  }
  return buf;
}

inline void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "L,estimate,std_error,closed_form,residual\n";
  for (const ScanRow& row : rows)
    out << format_plain(row.cutoff) << ',' << format_plain(row.estimate) << ','
        << format_plain(row.std_error) << ',' << format_plain(row.closed_form) << ','
        << format_plain(row.residual) << '\n';
}

}  // namespace feynkit
