#pragma once

#include "chernoff/grid_function.hpp"
#include "chernoff/weight.hpp"

#include <optional>

namespace chernoff {

double weighted_norm(const GridFunction& f, const WeightFunction& kappa,
                     const std::optional<Box>& region = std::nullopt);
double positive_part_norm(const GridFunction& f, const WeightFunction& kappa,
                          const std::optional<Box>& region = std::nullopt);
double negative_part_norm(const GridFunction& f, const WeightFunction& kappa,
                          const std::optional<Box>& region = std::nullopt);

// Max over adjacent grid-point pairs of |df| / dx.
double lipschitz_estimate(const GridFunction& f);

}  // namespace chernoff
