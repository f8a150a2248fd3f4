#pragma once

namespace slitflow {

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// Survival function of the chi-squared distribution with dof degrees of freedom.
double chi_squared_sf(double x, int dof);

}  // namespace slitflow
