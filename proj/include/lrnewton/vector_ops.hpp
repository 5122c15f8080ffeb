#pragma once

#include <span>
#include <vector>

namespace lrn {

using Vector = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// alpha * x + beta * y as a new vector.
Vector combine(double alpha, std::span<const double> x, double beta, std::span<const double> y);
bool all_finite(std::span<const double> x);

}  // namespace lrn
