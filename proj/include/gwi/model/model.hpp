#pragma once

#include <string>

#include "gwi/model/law.hpp"

namespace gwi {

/// Finiteness of the extra moments: sum k^2 log k p_k for the offspring law,
/// sum k log k q_k for the immigration law.
enum class TailClass { finite, infinite, unknown };
enum class Role { offspring, immigration };

/// Offspring mean must equal 1 within this tolerance.
inline constexpr double kCriticalityTolerance = 1e-10;

struct ModelOptions {
  /// Reject offspring laws with B = 0 (no branching). Simulation tests with
  /// deterministic single-child offspring switch this off.
  bool require_branching = true;
};

/// Critical branching process with immigration. Immutable; share freely.
class Model {
 public:
  const Law& offspring() const { return offspring_; }
  const Law& immigration() const { return immigration_; }

  /// sum k(k-1) p_k.
  double B() const { return B_; }
  /// sum k q_k.
  double lambda() const { return lambda_; }
  /// 2 lambda / B, the shape of the limiting Gamma law of 2Y_n/(Bn).
  double gamma() const { return gamma_; }

  TailClass xlogx_offspring() const { return xlogx_offspring_; }
  TailClass xlogx_immigration() const { return xlogx_immigration_; }

  std::string name() const { return offspring_.name() + "+" + immigration_.name(); }

 private:
  friend Model make_model(Law offspring, Law immigration, ModelOptions options);
  Model(Law offspring, Law immigration);

  Law offspring_;
  Law immigration_;
  double B_ = 0.0;
  double lambda_ = 0.0;
  double gamma_ = 0.0;
  TailClass xlogx_offspring_ = TailClass::unknown;
  TailClass xlogx_immigration_ = TailClass::unknown;
};

/// Throws DomainError for a non-critical offspring law, B outside (0, inf)
/// (unless options allow B = 0) or lambda outside (0, inf).
Model make_model(Law offspring, Law immigration, ModelOptions options = {});

/// Analytic classification of the extra moment for `law` in `role`.
TailClass classify_xlogx(const Law& law, Role role);

std::string tail_class_name(TailClass t);

}  // namespace gwi
