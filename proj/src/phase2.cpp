#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "dpk/error.hpp"
#include "solver_detail.hpp"

namespace dpk::detail {

namespace {

// Calls fn(indices) for every r-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t r, Fn&& fn) {
    if (r > n) return;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    for (;;) {
        fn(std::span<const std::size_t>(idx));
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b))); }

// Lexicographic sort, then drop every point within tolerance of an earlier
// kept point. Candidates for a match share the first coordinate up to tol.
void sort_and_dedup(BreakpointSet& set, double tol) {
    const std::size_t dim = set.dim;
    const std::size_t count = set.size();
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    const auto& xs = set.coords;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(xs.begin() + a * dim, xs.begin() + (a + 1) * dim, xs.begin() + b * dim,
                                            xs.begin() + (b + 1) * dim);
    });
    std::vector<bool> dropped(count, false);
    std::vector<double> out;
    out.reserve(xs.size());
    for (std::size_t s = 0; s < count; ++s) {
        if (dropped[s]) continue;
        const double* p = xs.data() + order[s] * dim;
        out.insert(out.end(), p, p + dim);
        for (std::size_t t = s + 1; t < count; ++t) {
            const double* q = xs.data() + order[t] * dim;
            if (!close(p[0], q[0], tol)) break;
            if (dropped[t]) continue;
            bool same = true;
            for (std::size_t c = 1; c < dim && same; ++c) same = close(p[c], q[c], tol);
            if (same) dropped[t] = true;
        }
    }
    set.coords = std::move(out);
}

// Per-vertex images y = D^-1 V xi and, for every coordinate, the integer
// window [lo, hi] of values m with |y_i - m| <= 1/2 (up to tolerance).
struct VertexImages {
    std::size_t n = 0;
    std::vector<double> y;
    std::vector<std::int64_t> lo;
    std::vector<std::int64_t> hi;
};

VertexImages vertex_images(const Matrix& dinv_w, const BreakpointSet& vertices) {
    VertexImages im;
    im.n = dinv_w.rows();
    const std::size_t k = dinv_w.cols();
    const std::size_t count = vertices.size();
    im.y.resize(count * im.n);
    im.lo.resize(count * im.n);
    im.hi.resize(count * im.n);
    for (std::size_t p = 0; p < count; ++p) {
        const auto xi = vertices.point(p);
        for (std::size_t i = 0; i < im.n; ++i) {
            double s = 0.0;
            for (std::size_t c = 0; c < k; ++c) s += dinv_w(i, c) * xi[c];
            const double tol = 1e-9 * (1.0 + std::abs(s));
            im.y[p * im.n + i] = s;
            im.lo[p * im.n + i] = static_cast<std::int64_t>(std::ceil(s - 0.5 - tol));
            im.hi[p * im.n + i] = static_cast<std::int64_t>(std::floor(s + 0.5 + tol));
        }
    }
    return im;
}

// Vertices grouped by integer cell: vertex p lies in the closure of every
// cell in the product of its windows. Windows are intervals, so a subset is
// pairwise compatible exactly when it shares a cell, and its smallest shared
// cell is the coordinatewise max of lo.
struct CellIndex {
    std::vector<std::vector<std::int64_t>> keys;
    std::vector<std::vector<std::uint32_t>> members;  // ascending vertex ids
};

CellIndex cell_index(const VertexImages& im, std::size_t count, std::size_t r) {
    const std::size_t n = im.n;
    // Flat (cell, vertex) entries, then one sort to group them.
    std::vector<std::int64_t> cells;
    std::vector<std::uint32_t> owner;
    std::vector<std::int64_t> cell(n);
    for (std::size_t p = 0; p < count; ++p) {
        const std::int64_t* lo = im.lo.data() + p * n;
        const std::int64_t* hi = im.hi.data() + p * n;
        std::copy(lo, lo + n, cell.begin());
        for (;;) {
            cells.insert(cells.end(), cell.begin(), cell.end());
            owner.push_back(static_cast<std::uint32_t>(p));
            std::size_t i = 0;
            while (i < n && cell[i] == hi[i]) {
                cell[i] = lo[i];
                ++i;
            }
            if (i == n) break;
            ++cell[i];
        }
    }
    const std::size_t entries = owner.size();
    auto key = [&](std::size_t e) { return cells.begin() + static_cast<std::ptrdiff_t>(e * n); };
    std::vector<std::size_t> order(entries);
    for (std::size_t e = 0; e < entries; ++e) order[e] = e;

    // Sort by a fixed hash of the cell, then the cell itself, then the vertex:
    // equal cells end up adjacent in a reproducible order.
    std::vector<std::uint64_t> hash(entries);
    for (std::size_t e = 0; e < entries; ++e) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::size_t i = 0; i < n; ++i) h = (h ^ static_cast<std::uint64_t>(key(e)[i])) * 0x100000001b3ull;
        hash[e] = h;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (hash[x] != hash[y]) return hash[x] < hash[y];
        const auto c = std::lexicographical_compare_three_way(key(x), key(x) + n, key(y), key(y) + n);
        return c != 0 ? c < 0 : owner[x] < owner[y];
    });
    CellIndex index;
    for (std::size_t s = 0; s < entries;) {
        std::size_t t = s + 1;
        while (t < entries && std::equal(key(order[s]), key(order[s]) + n, key(order[t]))) ++t;
        if (t - s >= r) {
            index.keys.emplace_back(key(order[s]), key(order[s]) + n);
            std::vector<std::uint32_t> members;
            for (std::size_t e = s; e < t; ++e) members.push_back(owner[order[e]]);
            index.members.push_back(std::move(members));
        }
        s = t;
    }
    return index;
}

class SubsetEvaluator {
public:
    SubsetEvaluator(const Matrix& G, const VertexImages& im, std::size_t subset_size)
        : G_(G), im_(im), inv_(1.0 / static_cast<double>(subset_size)), b_(im.n) {}

    // b = D^-1 V (mean of the vertices) = mean of the vertex images.
    void evaluate(std::span<const std::size_t> subset, Incumbent& inc) {
        const std::size_t n = im_.n;
        std::fill(b_.begin(), b_.end(), 0.0);
        for (std::size_t p : subset)
            for (std::size_t i = 0; i < n; ++i) b_[i] += im_.y[p * n + i];
        offer_sum(b_, inc);
    }

    // Same, given the sum of the subset's images.
    void offer_sum(std::span<const double> sum, Incumbent& inc) {
        for (std::size_t i = 0; i < b_.size(); ++i) b_[i] = sum[i] * inv_;
        inc.offer_rounded(G_, b_);
    }

private:
    const Matrix& G_;
    const VertexImages& im_;
    double inv_;
    std::vector<double> b_;
};

void exhaustive_from(std::size_t first, std::size_t count, std::size_t r, SubsetEvaluator& ev, Incumbent& inc) {
    // Subsets with smallest index `first`: first + every (r-1)-subset of (first, count).
    const std::size_t tail = count - first - 1;
    if (tail < r - 1) return;
    std::vector<std::size_t> subset(r);
    subset[0] = first;
    for_each_subset(tail, r - 1, [&](std::span<const std::size_t> rest) {
        for (std::size_t j = 0; j < rest.size(); ++j) subset[j + 1] = first + 1 + rest[j];
        ev.evaluate(subset, inc);
    });
}

// Subsets of one cell whose smallest shared cell is that cell, built depth
// first with running image sums and running maxima of lo.
void cell_subsets(const VertexImages& im, const std::vector<std::int64_t>& key,
                  const std::vector<std::uint32_t>& members, std::size_t r, SubsetEvaluator& ev, Incumbent& inc) {
    const std::size_t n = im.n;
    const std::size_t m = members.size();
    std::vector<double> sum((r + 1) * n, 0.0);
    std::vector<std::int64_t> top((r + 1) * n, std::numeric_limits<std::int64_t>::min());
    auto recurse = [&](auto&& self, std::size_t depth, std::size_t from) -> void {
        const double* s0 = sum.data() + depth * n;
        const std::int64_t* t0 = top.data() + depth * n;
        double* s1 = sum.data() + (depth + 1) * n;
        std::int64_t* t1 = top.data() + (depth + 1) * n;
        for (std::size_t j = from; j + (r - depth) <= m; ++j) {
            const std::size_t p = members[j];
            for (std::size_t i = 0; i < n; ++i) {
                s1[i] = s0[i] + im.y[p * n + i];
                t1[i] = std::max(t0[i], im.lo[p * n + i]);
            }
            if (depth + 1 < r) {
                self(self, depth + 1, j + 1);
            } else if (std::equal(t1, t1 + n, key.begin())) {
                ev.offer_sum(std::span<const double>(s1, n), inc);
            }
        }
    };
    recurse(recurse, 0, 0);
}

}  // namespace

BreakpointSet phase1_points(const Matrix& dinv_w, std::int64_t psi_ceil, double rank_tol_rel, double dedup_tol) {
    const std::size_t n = dinv_w.rows();
    const std::size_t k = dinv_w.cols();
    BreakpointSet set;
    set.dim = k;

    // Half-integers c with |c| <= ceil(psi) + 1/2: 2 ceil(psi) + 2 values.
    std::vector<double> halves;
    for (std::int64_t m = -psi_ceil - 1; m <= psi_ceil; ++m) halves.push_back(static_cast<double>(m) + 0.5);
    const std::size_t base = halves.size();

    Matrix sub(k, k);
    std::vector<double> c(k);
    std::vector<std::size_t> digit(k);
    for_each_subset(n, k, [&](std::span<const std::size_t> pi) {
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t col = 0; col < k; ++col) sub(r, col) = dinv_w(pi[r], col);
        const double scale = sub.max_abs();
        if (scale == 0.0) return;
        const auto lu = LuFactorization::factor(sub, rank_tol_rel * scale);
        if (!lu) return;
        std::fill(digit.begin(), digit.end(), 0);
        for (;;) {
            for (std::size_t r = 0; r < k; ++r) c[r] = halves[digit[r]];
            const Vector x = lu->solve(c);
            set.coords.insert(set.coords.end(), x.begin(), x.end());
            ++set.raw_count;
            std::size_t r = 0;
            while (r < k && ++digit[r] == base) digit[r++] = 0;
            if (r == k) break;
        }
    });
    sort_and_dedup(set, dedup_tol);
    return set;
}

void phase2_run(const Matrix& G, const Matrix& dinv_w, const BreakpointSet& vertices, Phase2Mode mode,
                unsigned threads, Incumbent& inc) {
    const std::size_t count = vertices.size();
    const std::size_t r = dinv_w.cols() + 1;
    if (count < r) return;
    if (vertices.dim != dinv_w.cols()) throw InvalidArgument("phase2: vertex dimension does not match k");

    const VertexImages im = vertex_images(dinv_w, vertices);
    CellIndex cells;
    if (mode == Phase2Mode::compatible) cells = cell_index(im, count, r);
    const std::size_t tasks = mode == Phase2Mode::compatible ? cells.keys.size() : count;

    const unsigned workers =
        std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(tasks, 1))));
    std::vector<Incumbent> partial(workers);
    auto work = [&](unsigned w) {
        SubsetEvaluator ev(G, im, r);
        for (std::size_t t = w; t < tasks; t += workers) {
            if (mode == Phase2Mode::compatible)
                cell_subsets(im, cells.keys[t], cells.members[t], r, ev, partial[w]);
            else
                exhaustive_from(t, count, r, ev, partial[w]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& p : partial) inc.merge(p);
}

}  // namespace dpk::detail
