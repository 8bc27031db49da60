#pragma once

namespace pairpot {

/// Volume of a radius-`radius` ball in R^dim (dim in {1,2,3}).
double ball_volume(int dim, double radius);

/// Volume of the union of two radius-R balls whose centers are `dist`
/// apart (closed forms for dim 1-3).
double two_ball_union_volume(int dim, double R, double dist);

/// Poisson(beta) two-point void probability: chance that no point lands
/// within R of either end of a segment of length r.
double poisson_two_point_void(int dim, double beta, double R, double r);

/// Normalized-sphere average of the two-point void probability for the
/// Poisson process: exp(-beta |B(o,R) union B(rv,R)|) by isotropy.
double poisson_J(int dim, double beta, double R, double r);

/// Limit of the mean of the pair-sum kernel estimator under Poisson:
/// beta^2 J(r) (the interaction term is identically 1).
double poisson_R_target(int dim, double beta, double R, double r);

/// Limit of b |eroded| Var(R_hat(r)) under Poisson:
/// (2 beta^2 / (sigma_d r^(d-1))) J(r) * Integral(K^2).
double poisson_variance_constant(int dim, double beta, double R, double r,
                                 double kernel_squared_integral);

} // namespace pairpot
