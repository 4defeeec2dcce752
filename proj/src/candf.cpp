#include "dpk/candf.hpp"

#include <algorithm>
#include <cmath>

#include "dpk/lattice.hpp"

namespace dpk {

double rate_from_objective(double scale, double f) noexcept {
    return std::max(0.0, 0.5 * std::log2(scale / f));
}

RateResult compute_rate(std::span<const double> h, double power, const SolveOptions& opts) {
    const DpkInstance inst = candf_instance(h, power);
    RateResult r;
    r.solve = solve(inst, opts);
    r.a_star = r.solve.a_star;
    r.f_star = r.solve.f_star;
    r.scale = inst.d().front();
    r.rate_bits = rate_from_objective(r.scale, r.f_star);
    return r;
}

}  // namespace dpk
