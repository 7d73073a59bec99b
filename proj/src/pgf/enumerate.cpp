#include "gwi/pgf/enumerate.hpp"

#include <cstdint>

#include "gwi/error.hpp"

namespace gwi {

namespace {

constexpr std::uint64_t kMaxOutcomes = 10'000'000;

struct Atom {
  std::size_t value;
  double prob;
};

std::vector<Atom> atoms(const Law& law, const char* role) {
  const auto top = law.max_support();
  if (!top) throw DomainError(std::string("enumerate_pmf_Y: ") + role + " law has unbounded support");
  std::vector<Atom> out;
  for (std::int64_t k = 0; k <= *top; ++k) {
    if (const double p = law.pmf(k); p > 0.0) out.push_back({static_cast<std::size_t>(k), p});
  }
  return out;
}

class Walker {
 public:
  Walker(const Model& model, std::size_t n)
      : offspring_(atoms(model.offspring(), "offspring")),
        immigration_(atoms(model.immigration(), "immigration")),
        n_(n) {}

  std::vector<double> run(std::size_t initial) {
    generation(0, initial, 1.0);
    return std::move(pmf_);
  }

 private:
  void generation(std::size_t t, std::size_t population, double weight) {
    if (t == n_) {
      if (pmf_.size() <= population) pmf_.resize(population + 1, 0.0);
      pmf_[population] += weight;
      return;
    }
    particle(t, population, 0, weight);
  }

  /// Assigns children to the remaining `left` particles, then immigrants.
  void particle(std::size_t t, std::size_t left, std::size_t children, double weight) {
    if (++visited_ > kMaxOutcomes) throw DomainError("enumerate_pmf_Y: too many outcomes");
    if (left == 0) {
      for (const auto& im : immigration_) generation(t + 1, children + im.value, weight * im.prob);
      return;
    }
    for (const auto& a : offspring_) particle(t, left - 1, children + a.value, weight * a.prob);
  }

  std::vector<Atom> offspring_;
  std::vector<Atom> immigration_;
  std::size_t n_;
  std::vector<double> pmf_;
  std::uint64_t visited_ = 0;
};

}  // namespace

std::vector<double> enumerate_pmf_Y(const Model& model, std::size_t n, std::size_t initial) {
  return Walker(model, n).run(initial);
}

}  // namespace gwi
