#include "dpk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dpk/error.hpp"

namespace dpk {

namespace {

bool within(double f, double best) { return f <= best + 1e-12 * std::abs(best); }

// Running minimum plus every vector within 1e-12 relative of it.
class MinimizerSet {
public:
    explicit MinimizerSet(const DpkInstance& inst) : G_(gram(inst)) {}

    void consider(const IntVector& a) {
        const double f = quadratic_form(G_, a);
        ++out_.vectors_scanned;
        if (f < out_.f_star) {
            out_.f_star = f;
            std::erase_if(near_, [&](const auto& e) { return !within(e.first, f); });
        }
        if (within(f, out_.f_star)) near_.emplace_back(f, a);
    }

    std::uint64_t scanned() const noexcept { return out_.vectors_scanned; }

    OracleResult finish() {
        for (auto& [f, v] : near_)
            if (within(f, out_.f_star)) out_.minimizers.push_back(std::move(v));
        std::sort(out_.minimizers.begin(), out_.minimizers.end());
        out_.minimizers.erase(std::unique(out_.minimizers.begin(), out_.minimizers.end()), out_.minimizers.end());
        return std::move(out_);
    }

private:
    Matrix G_;
    OracleResult out_{std::numeric_limits<double>::infinity(), {}, 0};
    std::vector<std::pair<double, IntVector>> near_;
};

}  // namespace

OracleResult brute_force_box(const DpkInstance& inst, std::int64_t radius, std::uint64_t budget) {
    if (radius < 0) throw InvalidArgument("oracle: radius must be non-negative");
    const std::size_t n = inst.n();
    const double side = 2.0 * static_cast<double>(radius) + 1.0;
    const double size = std::pow(side, static_cast<double>(n));
    if (size > static_cast<double>(budget))
        throw BudgetExceeded("oracle: enumeration of " + std::to_string(size) + " vectors exceeds budget of " +
                                 std::to_string(budget),
                             size);

    MinimizerSet best(inst);

    // Odometer over [-radius, radius]^n; canonical vectors only.
    IntVector a(n, -radius);
    for (;;) {
        const auto first = std::find_if(a.begin(), a.end(), [](std::int64_t x) { return x != 0; });
        if (first != a.end() && *first > 0) best.consider(a);
        std::size_t i = n;
        while (i > 0 && a[i - 1] == radius) a[--i] = -radius;
        if (i == 0) break;
        ++a[i - 1];
    }
    if (radius == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            IntVector e(n, 0);
            e[i] = 1;
            best.consider(e);
        }
    }
    return best.finish();
}

OracleResult brute_force_ball(const DpkInstance& inst, double radius2, std::uint64_t budget) {
    if (!(radius2 >= 0.0)) throw InvalidArgument("oracle: radius must be non-negative");
    const std::size_t n = inst.n();
    MinimizerSet best(inst);
    IntVector a(n, 0);

    // Depth-first over coordinates; `leading` is true while a[0..i) are all
    // zero, in which case a[i] >= 0 keeps only canonical vectors.
    auto recurse = [&](auto&& self, std::size_t i, double remaining, bool leading) -> void {
        if (i == n) {
            if (leading) return;
            if (best.scanned() >= budget)
                throw BudgetExceeded("oracle: ball enumeration exceeds budget of " + std::to_string(budget),
                                     static_cast<double>(budget) + 1.0);
            best.consider(a);
            return;
        }
        const auto reach = static_cast<std::int64_t>(std::floor(std::sqrt(remaining) * (1.0 + 1e-12)));
        for (std::int64_t v = leading ? 0 : -reach; v <= reach; ++v) {
            const double sq = static_cast<double>(v * v);
            if (sq > remaining * (1.0 + 1e-12)) continue;
            a[i] = v;
            self(self, i + 1, remaining - sq, leading && v == 0);
        }
        a[i] = 0;
    };
    recurse(recurse, 0, std::max(radius2, 1.0), true);
    return best.finish();
}

OracleResult brute_force(const DpkInstance& inst, const InstanceStats& stats, std::uint64_t budget) {
    return brute_force_box(inst, std::max<std::int64_t>(stats.psi_floor, 1), budget);
}

}  // namespace dpk
