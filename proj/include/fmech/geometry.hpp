#ifndef FMECH_GEOMETRY_HPP
#define FMECH_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "fmech/errors.hpp"

namespace fmech {

/// A location in d-dimensional real space. Storage is inline for d <= 3.
class Point {
public:
    using storage_type = boost::container::small_vector<double, 3>;

    Point() = default;
    Point(std::initializer_list<double> coords) : coords_(coords) {}
    explicit Point(std::size_t dim, double fill = 0.0) : coords_(dim, fill) {}
    template <class It>
    Point(It first, It last) : coords_(first, last) {}

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t k) const noexcept { return coords_[k]; }
    double& operator[](std::size_t k) noexcept { return coords_[k]; }

    auto begin() const noexcept { return coords_.begin(); }
    auto end() const noexcept { return coords_.end(); }
    auto begin() noexcept { return coords_.begin(); }
    auto end() noexcept { return coords_.end(); }

    bool is_finite() const noexcept {
        return std::all_of(coords_.begin(), coords_.end(),
                           [](double c) { return std::isfinite(c); });
    }

    friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }

    /// Lexicographic order on coordinates.
    friend bool operator<(const Point& a, const Point& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }

private:
    storage_type coords_;
};

enum class Metric { Euclidean, Manhattan };

struct Circle {
    Point center;
    double radius = 0.0;
};

/// Thrown when Weiszfeld iteration hits its cap; carries the best iterate seen.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, Point best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const Point& best_iterate() const noexcept { return best_; }

private:
    Point best_;
};

inline void require_same_dim(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) {
        throw InputError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
    }
}

inline double euclidean_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return std::sqrt(s);
}

inline double manhattan_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) s += std::abs(a[k] - b[k]);
    return s;
}

inline double distance(const Point& a, const Point& b, Metric metric) {
    require_same_dim(a, b);
    return metric == Metric::Euclidean ? euclidean_distance(a, b) : manhattan_distance(a, b);
}

enum class EvenMedian { Lower, Upper };

namespace detail {

inline std::size_t common_dim(std::span<const Point> points, const char* who) {
    if (points.empty()) throw InputError(std::string(who) + ": empty point set");
    const std::size_t d = points.front().dim();
    for (const auto& p : points) {
        if (p.dim() != d) throw InputError(std::string(who) + ": mixed dimensions");
    }
    return d;
}

// Zero-based rank of the median element among n sorted values.
inline std::size_t median_rank(std::size_t n, EvenMedian policy) {
    return policy == EvenMedian::Lower ? (n - 1) / 2 : n / 2;
}

} // namespace detail

/// Per-coordinate median. Even counts resolve by `policy`.
inline Point coordinate_median(std::span<const Point> points,
                               EvenMedian policy = EvenMedian::Lower) {
    const std::size_t d = detail::common_dim(points, "coordinate_median");
    const std::size_t rank = detail::median_rank(points.size(), policy);
    Point out(d);
    std::vector<double> column(points.size());
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < points.size(); ++i) column[i] = points[i][k];
        std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(rank),
                         column.end());
        out[k] = column[rank];
    }
    return out;
}

inline double total_euclidean(std::span<const Point> points, const Point& at) {
    double s = 0.0;
    for (const auto& p : points) s += euclidean_distance(p, at);
    return s;
}

struct WeiszfeldOptions {
    double tolerance = 1e-9;
    std::size_t max_iterations = 10000;
};

/// Minimizer of total Euclidean distance (Weiszfeld iteration).
///
/// Optima sitting on a data point are detected up front with the
/// subgradient test |sum of unit vectors from p| <= multiplicity(p); iterates
/// that land on a data point take the Vardi-Zhang step instead of dividing
/// by zero. Stops when an iterate moves less than `tolerance`.
inline Point geometric_median(std::span<const Point> points, WeiszfeldOptions opts = {}) {
    const std::size_t d = detail::common_dim(points, "geometric_median");
    if (!(opts.tolerance > 0.0)) throw InputError("geometric_median: tolerance must be positive");

    constexpr double kOnPoint = 1e-12;

    // Collapse duplicates into weights.
    std::vector<Point> sites;
    std::vector<double> weight;
    {
        std::vector<Point> sorted(points.begin(), points.end());
        std::sort(sorted.begin(), sorted.end());
        for (auto& p : sorted) {
            if (!sites.empty() && sites.back() == p) {
                weight.back() += 1.0;
            } else {
                sites.push_back(std::move(p));
                weight.push_back(1.0);
            }
        }
    }
    if (sites.size() == 1) return sites.front();

    // Resultant of unit vectors pulling away from `at`, skipping site `skip`.
    auto pull_norm = [&](const Point& at, std::size_t skip) {
        Point r(d);
        for (std::size_t i = 0; i < sites.size(); ++i) {
            if (i == skip) continue;
            const double len = euclidean_distance(sites[i], at);
            if (len <= kOnPoint) continue;
            for (std::size_t k = 0; k < d; ++k) r[k] += weight[i] * (sites[i][k] - at[k]) / len;
        }
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += r[k] * r[k];
        return std::sqrt(s);
    };

    for (std::size_t s = 0; s < sites.size(); ++s) {
        if (pull_norm(sites[s], s) <= weight[s] + 1e-12) return sites[s];
    }

    auto cost_at = [&](const Point& at) {
        double c = 0.0;
        for (std::size_t i = 0; i < sites.size(); ++i) c += weight[i] * euclidean_distance(sites[i], at);
        return c;
    };

    // y - H^{-1} g for the smooth objective at y (no site at y). Gaussian
    // elimination with partial pivoting; nullopt when H is singular.
    auto newton_step = [&](const Point& at) -> std::optional<Point> {
        std::vector<std::vector<double>> a(d, std::vector<double>(d + 1, 0.0));
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const double len = euclidean_distance(sites[i], at);
            Point u(d);
            for (std::size_t k = 0; k < d; ++k) u[k] = (at[k] - sites[i][k]) / len;
            for (std::size_t r = 0; r < d; ++r) {
                a[r][d] -= weight[i] * u[r];
                for (std::size_t c = 0; c < d; ++c)
                    a[r][c] += weight[i] * ((r == c ? 1.0 : 0.0) - u[r] * u[c]) / len;
            }
        }
        for (std::size_t c = 0; c < d; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < d; ++r)
                if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
            if (std::abs(a[piv][c]) < 1e-300) return std::nullopt;
            std::swap(a[c], a[piv]);
            for (std::size_t r = 0; r < d; ++r) {
                if (r == c) continue;
                const double f = a[r][c] / a[c][c];
                for (std::size_t k = c; k <= d; ++k) a[r][k] -= f * a[c][k];
            }
        }
        Point out = at;
        for (std::size_t k = 0; k < d; ++k) out[k] += a[k][d] / a[k][k];
        if (!out.is_finite()) return std::nullopt;
        return out;
    };

    double wsum = 0.0;
    Point y(d);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t k = 0; k < d; ++k) y[k] += weight[i] * sites[i][k];
        wsum += weight[i];
    }
    for (std::size_t k = 0; k < d; ++k) y[k] /= wsum;

    Point best = y;
    double best_cost = std::numeric_limits<double>::infinity();

    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        Point num(d);
        double den = 0.0;
        double cost = 0.0;
        std::size_t coincident = sites.size();
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const double len = euclidean_distance(sites[i], y);
            cost += weight[i] * len;
            if (len <= kOnPoint) {
                coincident = i;
                continue;
            }
            for (std::size_t k = 0; k < d; ++k) num[k] += weight[i] * sites[i][k] / len;
            den += weight[i] / len;
        }
        if (cost < best_cost) {
            best_cost = cost;
            best = y;
        }

        Point next(d);
        for (std::size_t k = 0; k < d; ++k) next[k] = num[k] / den;
        if (coincident != sites.size()) {
            const double r = pull_norm(y, coincident);
            const double w = weight[coincident];
            if (r <= w) return sites[coincident];
            const double beta = std::min(1.0, w / r);
            for (std::size_t k = 0; k < d; ++k)
                next[k] = (1.0 - beta) * next[k] + beta * y[k];
        }

        if (coincident == sites.size()) {
            // Weiszfeld crawls when the optimum is close to a site; a Newton
            // step is taken instead whenever it lowers the cost further.
            if (auto step = newton_step(y); step && cost_at(*step) < cost_at(next)) next = std::move(*step);
        }

        const double moved = euclidean_distance(next, y);
        y = std::move(next);
        if (moved < opts.tolerance) return y;
    }
    throw ConvergenceError("geometric_median: no convergence within iteration cap", best);
}

inline Point geometric_median(std::span<const Point> points, double tolerance) {
    return geometric_median(points, WeiszfeldOptions{tolerance, 10000});
}

namespace detail {

inline Circle circle_from(const Point& a, const Point& b) {
    Point c{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    const double r = std::max(euclidean_distance(c, a), euclidean_distance(c, b));
    return {std::move(c), r};
}

inline Circle circle_from(const Point& a, const Point& b, const Point& c) {
    const double bx = b[0] - a[0], by = b[1] - a[1];
    const double cx = c[0] - a[0], cy = c[1] - a[1];
    const double det = 2.0 * (bx * cy - by * cx);
    const double scale = std::max({std::abs(bx), std::abs(by), std::abs(cx), std::abs(cy)});
    if (std::abs(det) <= 1e-14 * scale * scale) {
        // Collinear: the farthest pair spans the other point.
        Circle best = circle_from(a, b);
        for (Circle cand : {circle_from(a, c), circle_from(b, c)}) {
            if (cand.radius > best.radius) best = std::move(cand);
        }
        return best;
    }
    const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    Point center{a[0] + (cy * b2 - by * c2) / det, a[1] + (bx * c2 - cx * b2) / det};
    const double r = std::max({euclidean_distance(center, a), euclidean_distance(center, b),
                               euclidean_distance(center, c)});
    return {std::move(center), r};
}

inline bool covers(const Circle& c, const Point& p) {
    return euclidean_distance(c.center, p) <= c.radius + 1e-12 * (1.0 + c.radius);
}

} // namespace detail

inline constexpr std::uint64_t kDefaultCircleSeed = 0x5eedc1c1eULL;

/// Minimum enclosing circle of 2-d points (randomized incremental, Welzl).
/// The shuffle is driven by `seed`, so results are reproducible.
inline Circle smallest_enclosing_circle(std::span<const Point> points,
                                        std::uint64_t seed = kDefaultCircleSeed) {
    const std::size_t d = detail::common_dim(points, "smallest_enclosing_circle");
    if (d != 2) throw InputError("smallest_enclosing_circle: points must be 2-d");

    std::vector<Point> pts(points.begin(), points.end());
    std::mt19937_64 rng(seed);
    std::shuffle(pts.begin(), pts.end(), rng);

    Circle c{pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (detail::covers(c, pts[i])) continue;
        c = {pts[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (detail::covers(c, pts[j])) continue;
            c = detail::circle_from(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (!detail::covers(c, pts[k])) c = detail::circle_from(pts[i], pts[j], pts[k]);
            }
        }
    }
    return c;
}

/// Point minimizing the maximum Manhattan distance: rotate 45 degrees to
/// Chebyshev coordinates and take the bounding-box center. 1-d and 2-d only.
inline Point manhattan_one_center(std::span<const Point> points) {
    const std::size_t d = detail::common_dim(points, "manhattan_one_center");
    if (d == 1) {
        const auto [lo, hi] = std::minmax_element(points.begin(), points.end());
        return Point{0.5 * ((*lo)[0] + (*hi)[0])};
    }
    if (d != 2) throw InputError("manhattan_one_center: points must be 1-d or 2-d");
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double vmin = umin, vmax = -umin;
    for (const auto& p : points) {
        const double u = p[0] + p[1], v = p[0] - p[1];
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    const double u = 0.5 * (umin + umax), v = 0.5 * (vmin + vmax);
    return Point{0.5 * (u + v), 0.5 * (u - v)};
}

/// Euclidean 1-center for d in {1, 2}: interval midpoint or circle center.
inline Point euclidean_one_center(std::span<const Point> points,
                                  std::uint64_t seed = kDefaultCircleSeed) {
    const std::size_t d = detail::common_dim(points, "euclidean_one_center");
    if (d == 1) return manhattan_one_center(points);
    return smallest_enclosing_circle(points, seed).center;
}

} // namespace fmech

#endif
