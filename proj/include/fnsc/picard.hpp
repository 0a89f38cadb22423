#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace fnsc {

template <class X>
struct PicardResult {
  X point;
  int iterations = 0;
  double residual = 0.0;  ///< ‖x - y - B(x, x)‖ at the returned point
  bool converged = false;
  bool gate_held = false;  ///< 4K‖y‖ < 1
  std::vector<double> residual_history;
  std::string warning;
};

/// Picard iteration x⁰ = start (default y), x^{n+1} = y + B(xⁿ, xⁿ) for the
/// quadratic equation x = y + B(x, x).
///
/// Stops at the first iterate whose residual ‖y + B(x, x) - x‖ is at most
/// tol·max(1, ‖x‖) and returns that iterate, so `residual` is the residual of
/// `point` itself. Non-finite norms or exhausting max_iter leave
/// `converged` false. X needs copy, `a + b`, `a - b` and `norm(x)`.
template <class X, class Bilinear, class Norm>
PicardResult<X> picard_solve(const X& y, Bilinear&& bilinear, Norm&& norm, double K, double tol,
                             int max_iter, std::optional<X> start = std::nullopt) {
  PicardResult<X> out{start ? *start : y, 0, 0.0, false, false, {}, {}};
  const double ny = norm(y);
  out.gate_held = 4.0 * K * ny < 1.0;
  if (!out.gate_held)
    out.warning = "smallness gate violated: 4K|y| = " + std::to_string(4.0 * K * ny) + " >= 1";
  for (int it = 1; it <= max_iter; ++it) {
    X next = y + bilinear(out.point, out.point);
    const double res = norm(next - out.point);
    const double size = norm(out.point);
    out.iterations = it;
    out.residual = res;
    out.residual_history.push_back(res);
    if (!std::isfinite(res) || !std::isfinite(size)) {
      out.warning += out.warning.empty() ? "" : "; ";
      out.warning += "iteration produced non-finite values";
      return out;
    }
    if (res <= tol * std::max(1.0, size)) {
      out.converged = true;
      return out;
    }
    out.point = std::move(next);
  }
  out.warning += out.warning.empty() ? "" : "; ";
  out.warning += "max_iter reached with residual " + std::to_string(out.residual);
  return out;
}

}  // namespace fnsc
