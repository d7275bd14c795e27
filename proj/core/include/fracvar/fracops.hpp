#pragma once

#include "fracvar/numgrid.hpp"

namespace fracvar {

/// Fractional order. Derivative operators accept 0 < alpha <= 1 (alpha = 1 is
/// the classical-reduction switch); integral operators accept any alpha > 0.
struct FracOrder {
  double alpha = 0.5;
};

enum class Side { Left, Right };

/// Which of the two integration-by-parts pairings to check: the left-Caputo /
/// right-RL pairing, or its mirror.
enum class IbpForm { CaputoLeft, CaputoRight };

/// Left Riemann-Liouville integral of order alpha > 0 on [a,t]. Product
/// trapezoid: the kernel (t-u)^(alpha-1) is integrated exactly against the
/// piecewise-linear interpolant of x, O(h^2). Value at the first node is 0.
SampledFn rl_integral_left(const SampledFn& x, FracOrder alpha);

/// Mirror of rl_integral_left under t -> a+b-t.
SampledFn rl_integral_right(const SampledFn& x, FracOrder alpha);

/// Left Caputo derivative, 0 < alpha <= 1, L1 scheme (O(h^(2-alpha))).
/// Value at the first node is 0. At alpha = 1 returns finite_diff(x, 1).
SampledFn caputo_left(const SampledFn& x, FracOrder alpha);

/// Mirror of caputo_left under reflection; value at the last node is 0.
/// At alpha = 1 this is -x'.
SampledFn caputo_right(const SampledFn& x, FracOrder alpha);

/// Left Riemann-Liouville derivative, computed as
/// caputo_left(x) + x(a) (t-a)^(-alpha) / Gamma(1-alpha).
/// The first node is masked when x(a) != 0 (singular endpoint).
SampledFn rl_deriv_left(const SampledFn& x, FracOrder alpha);

/// Mirror: caputo_right(x) + x(b) (b-t)^(-alpha) / Gamma(1-alpha), last node
/// masked when x(b) != 0. At alpha = 1 this is -x'.
SampledFn rl_deriv_right(const SampledFn& x, FracOrder alpha);

/// Grunwald-Letnikov approximant of the Riemann-Liouville derivative with
/// binomial weights (-1)^k C(alpha,k); first-order accurate. Kept as an
/// independent cross-check of the composite schemes above; exercised by the
/// test suite only.
SampledFn gl_derivative(const SampledFn& x, FracOrder alpha, Side side);

/// Relative defect of the fractional integration-by-parts identity
///   int y * caputo_left(x)  ==  int x * rl_deriv_right(y)
/// (IbpForm::CaputoLeft; CaputoRight checks the mirrored pairing). Requires
/// x(a) = x(b) = 0; the singular masked endpoint of the RL derivative is
/// replaced by the exact limit 0 of the product, which the hypothesis makes
/// valid.
double ibp_defect(const SampledFn& x, const SampledFn& y, FracOrder alpha,
                  IbpForm form = IbpForm::CaputoLeft);

}  // namespace fracvar
