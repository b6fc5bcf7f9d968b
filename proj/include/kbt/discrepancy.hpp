#pragma once

// Exact extreme and star discrepancy of finite point multisets in [0,1),
// the quadratic brute-force cross-check, and the Beatty specialization.
//
// Interval convention is right-open [x, y); the supremum may be attained
// only as a limit (window closing on a point from the right), which the
// witness records via its inclusive/exclusive flags.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "kbt/errors.hpp"
#include "kbt/irrational.hpp"
#include "kbt/real.hpp"

namespace kbt {

struct PointSet {
    std::vector<double> points;  // all in [0, 1)

    static PointSet of(std::vector<double> pts) {
        if (pts.empty()) throw RangeError("PointSet: need N >= 1");
        for (double v : pts)
            if (!(v >= 0.0 && v < 1.0))
                throw RangeError("PointSet: points must lie in [0,1)");
        return PointSet{std::move(pts)};
    }

    std::size_t size() const { return points.size(); }
};

struct DiscrepancyValue {
    double value = 0.0;
    // Witness window: [x, y) up to the recorded limits.  x_exclusive means
    // the sup is approached as the left edge tends to x from above;
    // y_inclusive means it is approached as the right edge tends to y from
    // above (so the window captures the point at y in the limit).
    double witness_x = 0.0;
    double witness_y = 0.0;
    bool x_exclusive = false;
    bool y_inclusive = false;
    bool excess = true;  // true: too many points inside; false: too few
};

// Closed form over sorted points z_(1) <= ... <= z_(N):
//   D = 1/N + max_i (i/N - z_i) - min_i (i/N - z_i).
inline DiscrepancyValue extreme_discrepancy(const PointSet& ps) {
    std::vector<double> z = ps.points;
    std::stable_sort(z.begin(), z.end());
    const std::size_t n = z.size();
    const double N = static_cast<double>(n);

    std::size_t arg_max = 0, arg_min = 0;
    double tmax = -2.0, tmin = 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        double term = static_cast<double>(i + 1) / N - z[i];
        if (term > tmax) {
            tmax = term;
            arg_max = i;
        }
        if (term < tmin) {
            tmin = term;
            arg_min = i;
        }
    }

    DiscrepancyValue d;
    d.value = 1.0 / N + tmax - tmin;
    if (arg_min <= arg_max) {
        // Too many points in [z_(m), z_(M)]: the window [z_m, z_M + eps).
        d.excess = true;
        d.witness_x = z[arg_min];
        d.witness_y = z[arg_max];
        d.x_exclusive = false;
        d.y_inclusive = true;
    } else {
        // Too few points in the open gap (z_(M), z_(m)).
        d.excess = false;
        d.witness_x = z[arg_max];
        d.witness_y = z[arg_min];
        d.x_exclusive = true;
        d.y_inclusive = false;
    }
    return d;
}

// D* = 1/(2N) + max_i |z_(i) - (2i-1)/(2N)|, anchored boxes [0, y).
inline DiscrepancyValue star_discrepancy(const PointSet& ps) {
    std::vector<double> z = ps.points;
    std::stable_sort(z.begin(), z.end());
    const std::size_t n = z.size();
    const double N = static_cast<double>(n);

    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dev = std::fabs(z[i] - (2.0 * static_cast<double>(i) + 1.0) /
                                          (2.0 * N));
        if (dev > best) {
            best = dev;
            arg = i;
        }
    }

    DiscrepancyValue d;
    d.value = 1.0 / (2.0 * N) + best;
    d.witness_x = 0.0;
    d.witness_y = z[arg];
    double mid = (2.0 * static_cast<double>(arg) + 1.0) / (2.0 * N);
    if (z[arg] >= mid) {
        // Count runs low before the point: window [0, z_i).
        d.excess = false;
        d.y_inclusive = false;
    } else {
        // Count runs high once the point is captured: window [0, z_i].
        d.excess = true;
        d.y_inclusive = true;
    }
    return d;
}

// Independent quadratic check: scan every critical window with endpoints at
// sample points (or 0/1), in both the closed-closed (excess) and open-open
// (deficiency) limit readings.
inline DiscrepancyValue brute_force_discrepancy(const PointSet& ps) {
    if (ps.size() > 10000)
        throw SizeLimit("brute_force_discrepancy: N must be <= 10^4");
    std::vector<double> z = ps.points;
    std::stable_sort(z.begin(), z.end());
    const std::size_t n = z.size();
    const double N = static_cast<double>(n);

    // Candidate edges 0, z_0..z_{n-1}, 1 with their lower/upper ranks.
    std::vector<double> edge;
    edge.reserve(n + 2);
    edge.push_back(0.0);
    edge.insert(edge.end(), z.begin(), z.end());
    edge.push_back(1.0);
    std::vector<std::size_t> lo(edge.size()), hi(edge.size());
    for (std::size_t i = 0; i < edge.size(); ++i) {
        lo[i] = static_cast<std::size_t>(
            std::lower_bound(z.begin(), z.end(), edge[i]) - z.begin());
        hi[i] = static_cast<std::size_t>(
            std::upper_bound(z.begin(), z.end(), edge[i]) - z.begin());
    }

    DiscrepancyValue best;
    best.value = -1.0;
    for (std::size_t a = 0; a < edge.size(); ++a) {
        for (std::size_t b = a; b < edge.size(); ++b) {
            double len = edge[b] - edge[a];
            // Excess reading: window [x, y + eps) captures [x, y].
            double cnt_cc = static_cast<double>(hi[b] - std::min(lo[a], hi[b]));
            double dev = cnt_cc / N - len;
            if (dev > best.value) {
                best.value = dev;
                best.witness_x = edge[a];
                best.witness_y = edge[b];
                best.x_exclusive = false;
                best.y_inclusive = true;
                best.excess = true;
            }
            // Deficiency reading: window [x + eps, y) captures (x, y).
            double cnt_oo =
                lo[b] > hi[a] ? static_cast<double>(lo[b] - hi[a]) : 0.0;
            dev = len - cnt_oo / N;
            if (dev > best.value) {
                best.value = dev;
                best.witness_x = edge[a];
                best.witness_y = edge[b];
                best.x_exclusive = true;
                best.y_inclusive = false;
                best.excess = false;
            }
        }
    }
    return best;
}

// Discrepancy of ({n*alpha + beta})_{n <= N} from certified fractional
// parts.
inline DiscrepancyValue beatty_discrepancy(const Real& alpha,
                                           const Real& beta, long long N) {
    if (N < 1) throw RangeError("beatty_discrepancy: N must be >= 1");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(N));
    for (long long n = 1; n <= N; ++n) pts.push_back(frac_part(alpha, beta, n));
    return extreme_discrepancy(PointSet::of(std::move(pts)));
}

}  // namespace kbt
