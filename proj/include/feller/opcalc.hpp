#pragma once

#include "feller/matrix.hpp"

namespace feller {

// Commuting check threshold for the log-additivity verification.
inline constexpr double kCommutatorTol = 1e-12;

// Radius of the ball around the identity inside which both factors must
// lie for log-additivity: keeps -2*log(1 - delta) < 0.45 < 1, so the sum
// of the two logs stays inside the image of log.
inline constexpr double kAdditivityRadius = 0.2;

// Geometric tail threshold for truncating the log series.
inline constexpr double kLogTailTol = 1e-14;

// Operator norm on functions over a finite space with the sup norm:
// the maximum absolute row sum.
double op_norm(const Matrix& m);

// exp(P) = sum P^k / k!, evaluated with scaling and squaring: the raw
// series loses digits once op_norm exceeds 1, so square s times with
// s = ceil(log2(max(1, op_norm(m)))).
Matrix mat_exp(const Matrix& m);

// log(P) = sum (-1)^{k-1} (P - Id)^k / k, truncated once the geometric
// tail bound r^{k+1} / ((k+1)(1-r)) with r = op_norm(P - Id) drops below
// kLogTailTol. Throws DomainError when r >= 1.
Matrix mat_log(const Matrix& m);

// Residual of exp(log m) against m in op_norm. Requires op_norm(m - Id) < 1.
double verify_exp_log_roundtrip(const Matrix& m);

// Residual of log(p1 p2) against log(p1) + log(p2) in op_norm. Requires
// the factors to commute within kCommutatorTol (else CommutatorError) and
// to lie within kAdditivityRadius of the identity (else DomainError).
double verify_log_additivity(const Matrix& p1, const Matrix& p2);

// log(q_w) / w: the generator a semigroup member q_w = exp(A w) came from.
// Throws InvalidHorizon for w <= 0 and DomainError outside the log ball.
Matrix recover_generator(const Matrix& q_w, double w);

}  // namespace feller
