#pragma once

#include <cstddef>
#include <vector>

namespace chernoff {

// Probabilists' rule: E[g(Z)] ~ sum_k weights[k] g(nodes[k]) for Z ~ N(0,1).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Golub-Welsch; rules are cached per node count.
const GaussHermiteRule& gauss_hermite(std::size_t m);

}  // namespace chernoff
