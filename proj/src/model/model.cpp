#include "gwi/model/model.hpp"

#include <cmath>
#include <sstream>

#include "gwi/error.hpp"

namespace gwi {

namespace {

// Explicit laws beyond this support length are treated as stand-ins for
// unbounded laws whose tails we cannot classify from a finite vector.
constexpr std::size_t kExplicitClassifyLimit = 1'000'000;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Model::Model(Law offspring, Law immigration)
    : offspring_(std::move(offspring)), immigration_(std::move(immigration)) {}

Model make_model(Law offspring, Law immigration, ModelOptions options) {
  if (std::abs(offspring.mean() - 1.0) > kCriticalityTolerance) {
    throw DomainError("offspring law " + offspring.name() + " is not critical: mean " +
                      fmt(offspring.mean()));
  }
  const double B = offspring.factorial_moment2();
  if (!std::isfinite(B) || B < 0.0 || (options.require_branching && B <= 0.0)) {
    throw DomainError("offspring law " + offspring.name() + ": B = " + fmt(B) +
                      " must lie in (0, inf)");
  }
  const double lambda = immigration.mean();
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw DomainError("immigration law " + immigration.name() + ": lambda = " + fmt(lambda) +
                      " must lie in (0, inf); lambda = 0 is a plain Galton-Watson process");
  }
  Model model(std::move(offspring), std::move(immigration));
  model.B_ = B;
  model.lambda_ = lambda;
  model.gamma_ = B > 0.0 ? 2.0 * lambda / B : std::numeric_limits<double>::infinity();
  model.xlogx_offspring_ = classify_xlogx(model.offspring_, Role::offspring);
  model.xlogx_immigration_ = classify_xlogx(model.immigration_, Role::immigration);
  return model;
}

TailClass classify_xlogx(const Law& law, Role role) {
  switch (law.kind()) {
    case LawKind::explicit_probs: {
      const auto& probs = std::get<family::Explicit>(law.spec()).probs;
      return probs.size() <= kExplicitClassifyLimit ? TailClass::finite : TailClass::unknown;
    }
    case LawKind::geometric_critical:
    case LawKind::binary:
    case LawKind::poisson:
    case LawKind::bernoulli01:
      return TailClass::finite;
    case LawKind::log_heavy_offspring: {
      // p_k ~ k^-3 log^-b k: k^2 log k p_k ~ (log k)^{1-b}/k diverges iff b <= 2;
      // k log k p_k is always summable.
      const double beta = std::get<family::LogHeavyOffspring>(law.spec()).beta;
      if (role == Role::immigration) return TailClass::finite;
      return beta <= 2.0 ? TailClass::infinite : TailClass::finite;
    }
    case LawKind::log_heavy_immigration: {
      // q_k ~ k^-2 log^-b k: k log k q_k ~ (log k)^{1-b}/k diverges iff b <= 2;
      // k^2 log k q_k never is summable.
      const double beta = std::get<family::LogHeavyImmigration>(law.spec()).beta;
      if (role == Role::offspring) return TailClass::infinite;
      return beta <= 2.0 ? TailClass::infinite : TailClass::finite;
    }
  }
  return TailClass::unknown;
}

std::string tail_class_name(TailClass t) {
  switch (t) {
    case TailClass::finite: return "finite";
    case TailClass::infinite: return "infinite";
    case TailClass::unknown: return "unknown";
  }
  return "unknown";
}

}  // namespace gwi
