#pragma once

// Grouping of certified boxes by overlap. Squared distances to a random
// anchor q act as a prefilter: if the distance intervals of two boxes are
// disjoint, so are the boxes, and only the remaining pairs are compared.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kcert/bigfloat.hpp"
#include "kcert/linalg.hpp"

namespace kcert {

struct DistinctnessReport {
    /// Candidate ids per group, ascending; groups ordered by their smallest id.
    std::vector<std::vector<std::size_t>> groups;
    /// Smallest id of each group.
    std::vector<std::size_t> representatives;
    std::size_t distinct_count = 0;
    ComplexVector<double> anchor;
    /// d_k for each input box, in input order.
    std::vector<RealInterval<double>> distances;
    /// Group number of each input box.
    std::vector<std::size_t> group_of;
    /// Number of exact box-overlap tests performed.
    std::size_t comparisons = 0;

    friend bool operator==(const DistinctnessReport&, const DistinctnessReport&) = default;
};

/// Enclosure of sum_j (Re I_j - Re q_j)^2 + (Im I_j - Im q_j)^2.
RealInterval<double> squared_distance(const IntervalBox<double>& box, const ComplexVector<double>& q);

/// Smallest binary64 box containing `box`.
IntervalBox<double> enclose_double(const IntervalBox<BigFloat>& box);

/// d_k for every box, computed on an OpenMP team (`threads` = 0 uses the
/// runtime default).
std::vector<RealInterval<double>> squared_distances(const std::vector<IntervalBox<double>>& boxes,
                                                    const ComplexVector<double>& q, int threads = 0);

std::vector<RealInterval<double>> squared_distances_serial(const std::vector<IntervalBox<double>>& boxes,
                                                           const ComplexVector<double>& q);

/// Anchor with coordinates uniform in [-1,1] + i[-1,1], from mt19937_64(seed).
ComplexVector<double> random_anchor(std::size_t n, std::uint64_t seed);

/// Groups are the connected components of the overlap relation. `ids` names
/// the boxes (defaults to 0..r-1). Distances are computed in parallel when
/// `threads` != 1.
template <class T>
DistinctnessReport group_overlaps(const std::vector<IntervalBox<T>>& boxes, std::uint64_t seed,
                                  std::vector<std::size_t> ids = {}, int threads = 0);

}  // namespace kcert
