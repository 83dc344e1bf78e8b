#include "chernoff/gauss_hermite.hpp"

#include "chernoff/error.hpp"

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <mutex>

namespace chernoff {

namespace {

GaussHermiteRule golub_welsch(std::size_t m) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                 static_cast<Eigen::Index>(m));
  for (std::size_t k = 1; k < m; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    jacobi(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = b;
    jacobi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  if (eig.info() != Eigen::Success) throw NumericError("Gauss-Hermite eigen solve failed");
  GaussHermiteRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    rule.nodes[k] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights[k] = v0 * v0;
    total += rule.weights[k];
  }
  for (double& w : rule.weights) w /= total;
  // Symmetrize to remove eigen-solver round-off.
  for (std::size_t k = 0; k < m / 2; ++k) {
    const std::size_t j = m - 1 - k;
    const double z = 0.5 * (rule.nodes[j] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[j] + rule.weights[k]);
    rule.nodes[k] = -z;
    rule.nodes[j] = z;
    rule.weights[k] = rule.weights[j] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(std::size_t m) {
  if (m < 1 || m > 512) throw DomainError("Gauss-Hermite node count must be in [1, 512]");
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(golub_welsch(m));
  return *slot;
}

}  // namespace chernoff
