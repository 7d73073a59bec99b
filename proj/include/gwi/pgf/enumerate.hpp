#pragma once

#include <cstddef>
#include <vector>

#include "gwi/model/model.hpp"

namespace gwi {

/// P(Y_n = k) for every reachable k, by walking every offspring and
/// immigration outcome of every generation. Exponential cost; meant as an
/// independent oracle for tiny n. Both laws need bounded support and the
/// number of outcome combinations is capped (DomainError beyond ~1e7).
std::vector<double> enumerate_pmf_Y(const Model& model, std::size_t n, std::size_t initial = 0);

}  // namespace gwi
