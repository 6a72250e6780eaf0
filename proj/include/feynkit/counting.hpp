#pragma once

// Pure-arithmetic solvers for the direct and inverse recovery problems,
// the power counter, the rational-function degree profile, and the
// divergence classification. Everything here is stateless integer
// arithmetic over line counts.

#include <optional>
#include <string>
#include <string_view>

#include "feynkit/errors.hpp"

namespace feynkit {

/// Observable data: external line counts (N_e, N_p).
struct ExternalData {
  int electrons = 0;
  int photons = 0;

  friend bool operator==(const ExternalData&, const ExternalData&) = default;
};

/// Unobservable data recovered by the inverse problem:
/// internal line counts plus the derived contact and vertex counts.
/// Q = 2 F_p and n = F_e + F_p by construction.
struct InternalData {
  int electron_lines = 0;  // F_e
  int photon_lines = 0;    // F_p
  int contacts = 0;        // Q
  int vertices = 0;        // n

  /// Furry parity: physically meaningful diagrams have an even vertex count.
  bool physical() const { return vertices % 2 == 0; }

  friend bool operator==(const InternalData&, const InternalData&) = default;
};

/// Observable data recovered by the direct problem.
struct DirectSolution {
  int contacts = 0;           // Q
  int vertices = 0;           // n
  int external_electrons = 0;  // N_e
  int external_photons = 0;    // N_p

  bool physical() const { return vertices % 2 == 0; }

  friend bool operator==(const DirectSolution&, const DirectSolution&) = default;
};

/// Inverse problem: recover (Q, n, F_p, F_e) from (N_e, N_p).
/// The external electron count must be even; odd input is a parity error.
/// An odd recovered vertex count is reported through physical(), not an error.
inline InternalData solve_inverse(ExternalData x) {
  if (x.electrons < 0 || x.photons < 0)
    throw DomainError("external counts must be nonnegative");
  if (x.electrons % 2 != 0)
    throw DomainError("parity error: external electron count must be even, got " +
                      std::to_string(x.electrons));
  InternalData y;
  y.contacts = x.electrons;
  y.vertices = x.electrons + x.photons;
  y.photon_lines = x.electrons / 2;
  y.electron_lines = x.photons + x.electrons / 2;
  return y;
}

/// Direct problem: recover (Q, n, N_e, N_p) from (F_e, F_p).
/// Requires F_e >= F_p, otherwise N_p would be negative.
inline DirectSolution solve_direct(int electron_lines, int photon_lines) {
  if (electron_lines < 0 || photon_lines < 0)
    throw DomainError("internal counts must be nonnegative");
  if (electron_lines < photon_lines)
    throw DomainError("infeasible internal data: F_e=" + std::to_string(electron_lines) +
                      " < F_p=" + std::to_string(photon_lines) +
                      " would give a negative external photon count");
  DirectSolution y;
  y.contacts = 2 * photon_lines;
  y.vertices = electron_lines + photon_lines;
  y.external_electrons = 2 * photon_lines;
  y.external_photons = electron_lines - photon_lines;
  return y;
}

/// K = 2F - (F_e + 4m) with F = F_e + F_p.
inline int power_counter(int electron_lines, int photon_lines, int loops) {
  if (electron_lines < 0 || photon_lines < 0)
    throw DomainError("internal counts must be nonnegative");
  const int f = electron_lines + photon_lines;
  return 2 * f - (electron_lines + 4 * loops);
}

/// K = (3/2) N_e + N_p - 4m; N_e must be even so K stays integral.
inline int power_counter_external(int external_electrons, int external_photons, int loops) {
  if (external_electrons < 0 || external_photons < 0)
    throw DomainError("external counts must be nonnegative");
  if (external_electrons % 2 != 0)
    throw DomainError("parity error: external electron count must be even, got " +
                      std::to_string(external_electrons));
  return (3 * external_electrons) / 2 + external_photons - 4 * loops;
}

/// Degree profile of the rational integrand: numerator power F_e,
/// denominator power F = F_e + F_p.
struct RationalProfile {
  int numerator_power = 0;
  int denominator_power = 0;

  friend bool operator==(const RationalProfile&, const RationalProfile&) = default;
};

inline RationalProfile rational_profile(int electron_lines, int photon_lines) {
  if (electron_lines < 0 || photon_lines < 0)
    throw DomainError("internal counts must be nonnegative");
  return {electron_lines, electron_lines + photon_lines};
}

enum class DivergenceClass { convergent, logarithmic, linear, quadratic, vacuum };

constexpr std::string_view to_string(DivergenceClass c) {
  switch (c) {
    case DivergenceClass::convergent: return "convergent";
    case DivergenceClass::logarithmic: return "logarithmic";
    case DivergenceClass::linear: return "linear";
    case DivergenceClass::quadratic: return "quadratic";
    case DivergenceClass::vacuum: return "vacuum";
  }
  return "?";
}

struct DivergenceReport {
  int power_counter = 0;
  DivergenceClass nominal_class = DivergenceClass::convergent;
  /// One of the four known single-loop divergence patterns, when matched.
  std::optional<int> case_id;
  /// Nominal-vs-actual discrepancies and other remarks.
  std::string note;

  bool divergent() const { return power_counter <= 0; }
};

/// Classifies by power counting: divergent iff K <= 0. At one loop the
/// divergent patterns are exactly (N_e,N_p) = (0,4) logarithmic,
/// (2,0) linear, (0,2) quadratic, and (0,0) vacuum. The (2,0) report
/// carries a note: its actual cutoff dependence is logarithmic because
/// the linear coefficient vanishes. The loop count is an explicit
/// parameter so the degenerate vacuum pattern (m=1 on an empty graph)
/// stays representable.
inline DivergenceReport classify_divergence(int external_electrons, int external_photons,
                                            int loops = 1) {
  DivergenceReport report;
  report.power_counter = power_counter_external(external_electrons, external_photons, loops);
  if (report.power_counter > 0) {
    report.nominal_class = DivergenceClass::convergent;
    return report;
  }
  if (external_electrons == 0 && external_photons == 0) {
    report.nominal_class = DivergenceClass::vacuum;
    if (loops == 1) report.case_id = 4;
    return report;
  }
  switch (report.power_counter) {
    case 0:
      report.nominal_class = DivergenceClass::logarithmic;
      break;
    case -1:
      report.nominal_class = DivergenceClass::linear;
      break;
    default:
      report.nominal_class = DivergenceClass::quadratic;
      if (report.power_counter < -2)
        report.note = "superficial degree " + std::to_string(-report.power_counter) +
                      " exceeds quadratic";
      break;
  }
  if (loops == 1) {
    if (external_electrons == 0 && external_photons == 4)
      report.case_id = 1;
    else if (external_electrons == 2 && external_photons == 0) {
      report.case_id = 2;
      report.note =
          "actual cutoff dependence is logarithmic: the linear coefficient vanishes";
    } else if (external_electrons == 0 && external_photons == 2)
      report.case_id = 3;
  }
  return report;
}

}  // namespace feynkit
