#include "kcert/distinct.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>
#include <random>

namespace kcert {

RealInterval<double> squared_distance(const IntervalBox<double>& box, const ComplexVector<double>& q)
{
    detail::require_same(box.size(), q.size(), "squared_distance");
    RealInterval<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < box.size(); ++j) {
        acc = acc + square(box[j].re() - RealInterval<double>::point(q[j].re));
        acc = acc + square(box[j].im() - RealInterval<double>::point(q[j].im));
    }
    return acc;
}

IntervalBox<double> enclose_double(const IntervalBox<BigFloat>& box)
{
    IntervalBox<double> out;
    out.reserve(box.size());
    for (const auto& z : box) {
        out.emplace_back(RealInterval<double>(z.re().lo().to_double(Rounding::down), z.re().hi().to_double(Rounding::up)),
                         RealInterval<double>(z.im().lo().to_double(Rounding::down), z.im().hi().to_double(Rounding::up)));
    }
    return out;
}

std::vector<RealInterval<double>> squared_distances(const std::vector<IntervalBox<double>>& boxes,
                                                    const ComplexVector<double>& q, int threads)
{
    std::vector<RealInterval<double>> out(boxes.size());
    const int team = threads > 0 ? threads : omp_get_max_threads();
    const auto count = static_cast<std::ptrdiff_t>(boxes.size());
#pragma omp parallel for schedule(static) num_threads(team)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        out[static_cast<std::size_t>(k)] = squared_distance(boxes[static_cast<std::size_t>(k)], q);
    }
    return out;
}

std::vector<RealInterval<double>> squared_distances_serial(const std::vector<IntervalBox<double>>& boxes,
                                                           const ComplexVector<double>& q)
{
    std::vector<RealInterval<double>> out;
    out.reserve(boxes.size());
    for (const auto& b : boxes) {
        out.push_back(squared_distance(b, q));
    }
    return out;
}

ComplexVector<double> random_anchor(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    ComplexVector<double> q;
    q.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double re = coord(gen);
        const double im = coord(gen);
        q.push_back({re, im});
    }
    return q;
}

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t k)
    {
        while (parent_[k] != k) {
            parent_[k] = parent_[parent_[k]];
            k = parent_[k];
        }
        return k;
    }

    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

private:
    std::vector<std::size_t> parent_;
};

const IntervalBox<double>& as_double(const IntervalBox<double>& b, IntervalBox<double>&)
{
    return b;
}

const IntervalBox<double>& as_double(const IntervalBox<BigFloat>& b, IntervalBox<double>& scratch)
{
    scratch = enclose_double(b);
    return scratch;
}

}  // namespace

template <class T>
DistinctnessReport group_overlaps(const std::vector<IntervalBox<T>>& boxes, std::uint64_t seed,
                                  std::vector<std::size_t> ids, int threads)
{
    const std::size_t r = boxes.size();
    if (ids.empty()) {
        ids.resize(r);
        std::iota(ids.begin(), ids.end(), std::size_t{0});
    }
    detail::require_same(ids.size(), r, "group_overlaps ids");
    const std::size_t n = r == 0 ? 0 : boxes.front().size();
    for (const auto& b : boxes) {
        detail::require_same(b.size(), n, "group_overlaps");
    }

    DistinctnessReport out;
    out.anchor = random_anchor(n, seed);

    std::vector<IntervalBox<double>> outer(r);
    for (std::size_t k = 0; k < r; ++k) {
        IntervalBox<double> scratch;
        outer[k] = as_double(boxes[k], scratch);
    }
    out.distances = threads == 1 ? squared_distances_serial(outer, out.anchor)
                                 : squared_distances(outer, out.anchor, threads);

    std::vector<std::size_t> order(r);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& da = out.distances[a];
        const auto& db = out.distances[b];
        if (da.lo() != db.lo()) {
            return da.lo() < db.lo();
        }
        return a < b;
    });

    // Sweep in order of lower bounds. The active set is a min-heap on upper
    // bounds; anything ending before the current lower bound can never meet a
    // later interval again.
    UnionFind uf(r);
    std::vector<std::size_t> active;
    auto later_end = [&](std::size_t a, std::size_t b) { return out.distances[a].hi() > out.distances[b].hi(); };
    for (std::size_t k : order) {
        const double lo = out.distances[k].lo();
        while (!active.empty() && out.distances[active.front()].hi() < lo) {
            std::pop_heap(active.begin(), active.end(), later_end);
            active.pop_back();
        }
        for (std::size_t other : active) {
            ++out.comparisons;
            if (overlaps(boxes[k], boxes[other])) {
                uf.unite(k, other);
            }
        }
        active.push_back(k);
        std::push_heap(active.begin(), active.end(), later_end);
    }

    // Number groups by their smallest id.
    std::vector<std::size_t> by_id(r);
    std::iota(by_id.begin(), by_id.end(), std::size_t{0});
    std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
    std::vector<std::size_t> group_of_root(r, r);
    out.group_of.assign(r, 0);
    for (std::size_t k : by_id) {
        const std::size_t root = uf.find(k);
        if (group_of_root[root] == r) {
            group_of_root[root] = out.groups.size();
            out.groups.emplace_back();
            out.representatives.push_back(ids[k]);
        }
        out.group_of[k] = group_of_root[root];
        out.groups[group_of_root[root]].push_back(ids[k]);
    }
    out.distinct_count = out.groups.size();
    return out;
}

template DistinctnessReport group_overlaps(const std::vector<IntervalBox<double>>&, std::uint64_t,
                                           std::vector<std::size_t>, int);
template DistinctnessReport group_overlaps(const std::vector<IntervalBox<BigFloat>>&, std::uint64_t,
                                           std::vector<std::size_t>, int);

}  // namespace kcert
