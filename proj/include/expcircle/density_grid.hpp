#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "expcircle/circle_map.hpp"
#include "expcircle/rng.hpp"

namespace expcircle {

inline constexpr std::size_t kDefaultResolution = 4096;

/// Periodic function on the uniform grid x_j = j / M, extended between nodes
/// by linear interpolation. M is a power of two.
class GridFunction {
public:
    explicit GridFunction(std::vector<double> values);

    template <class F>
    static GridFunction sample(std::size_t resolution, F&& f) {
        std::vector<double> v(resolution);
        const double h = 1.0 / static_cast<double>(resolution);
        for (std::size_t j = 0; j < resolution; ++j) v[j] = f(static_cast<double>(j) * h);
        return GridFunction(std::move(v));
    }
    static GridFunction constant(std::size_t resolution, double c);

    std::size_t resolution() const { return values_.size(); }
    double spacing() const { return 1.0 / static_cast<double>(values_.size()); }
    double node(std::size_t j) const { return static_cast<double>(j) * spacing(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t j) const { return values_[j]; }

    /// Linear interpolant at an arbitrary circle point (x is reduced mod 1).
    double operator()(double x) const {
        const double t = reduce_mod1(x) * static_cast<double>(values_.size());
        std::size_t k = static_cast<std::size_t>(t);
        const double frac = t - static_cast<double>(k);
        if (k >= values_.size()) k = values_.size() - 1;
        const std::size_t k1 = (k + 1) & (values_.size() - 1);
        return values_[k] + frac * (values_[k1] - values_[k]);
    }

    GridFunction operator+(const GridFunction& o) const;
    GridFunction operator-(const GridFunction& o) const;
    GridFunction operator*(const GridFunction& o) const;  ///< node-wise product
    GridFunction operator*(double c) const;
    GridFunction operator+(double c) const;
    friend GridFunction operator*(double c, const GridFunction& f) { return f * c; }

private:
    std::vector<double> values_;
};

/// Nonnegative grid function with unit node mean (the periodic trapezoid
/// integral), i.e. a probability density.
class GridDensity {
public:
    /// Validates an already normalized function (mean within 1e-12 of 1).
    explicit GridDensity(GridFunction f);

    /// Divides by the node mean. Throws NonPositiveDensity on negative
    /// values or nonpositive mass.
    static GridDensity normalize(const GridFunction& f);
    static GridDensity uniform(std::size_t resolution);

    template <class F>
    static GridDensity sample(std::size_t resolution, F&& f) {
        return normalize(GridFunction::sample(resolution, std::forward<F>(f)));
    }

    const GridFunction& function() const { return f_; }
    operator const GridFunction&() const { return f_; }
    std::size_t resolution() const { return f_.resolution(); }
    std::span<const double> values() const { return f_.values(); }
    double operator[](std::size_t j) const { return f_[j]; }
    double operator()(double x) const { return f_(x); }

private:
    struct Trusted {};
    GridDensity(GridFunction f, Trusted) : f_(std::move(f)) {}
    GridFunction f_;
};

/// Renormalizes after an operation that ought to preserve mass, warning when
/// the drift exceeds 1e-8.
GridDensity renormalize_after(const GridFunction& f, const char* operation);

/// Periodic trapezoid rule, i.e. the node mean.
double integrate(const GridFunction& f);
/// Node mean of |f - g|. Throws ResolutionMismatch.
double l1_distance(const GridFunction& f, const GridFunction& g);
double l1_norm(const GridFunction& f);
double sup_norm(const GridFunction& f);
double inf_value(const GridFunction& f);
double sup_value(const GridFunction& f);

/// Total variation of the interpolant, i.e. ||f'||_{L^1}.
double derivative_l1(const GridFunction& f);
/// Largest central difference quotient |f_{j+1} - f_{j-1}| / (2h).
double sup_central_difference(const GridFunction& f);
/// Largest adjacent slope; the exact Lipschitz constant of the interpolant.
double lipschitz_constant(const GridFunction& f);

/// Lag at or below which holder_coefficient scans every node pair.
inline constexpr std::size_t kHolderFullLag = 1024;
inline constexpr std::size_t kHolderSampleNodes = 256;
inline constexpr std::size_t kHolderLongLags = 512;

/// Grid estimate of H_alpha(f) = sup |f(x)-f(y)| / d(x,y)^alpha.
///
/// For M <= 2048 every node pair is scanned. Otherwise all pairs with lag
/// <= kHolderFullLag are scanned, plus kHolderLongLags lags spread evenly
/// over (kHolderFullLag, M/2] (always including M/2) from kHolderSampleNodes
/// evenly spaced nodes. The estimate is deterministic and never exceeds the
/// true supremum over node pairs. Throws InvalidAlpha unless alpha in (0,1].
double holder_coefficient(const GridFunction& f, double alpha);

/// Node-wise log of a strictly positive density. Throws NonPositiveDensity.
GridFunction log_transform(const GridDensity& psi);

/// Inverse-CDF sampler for the piecewise-linear density.
class DensitySampler {
public:
    explicit DensitySampler(const GridDensity& psi);
    double draw(CounterRng& rng) const;
    std::size_t resolution() const { return values_.size(); }

private:
    std::vector<double> values_;
    std::vector<double> cumulative_;  // cumulative cell masses, size M + 1
};

/// One draw from psi (constructs a sampler; use DensitySampler for streams).
CirclePoint sample(const GridDensity& psi, CounterRng& rng);

/// Mass of the interpolant of f over [lo, hi) with 0 <= lo <= hi <= 1.
double integrate_interval(const GridFunction& f, double lo, double hi);

/// CSV rows "x,value" (header "x,value"), 17 significant digits.
void write_csv(std::ostream& os, const GridFunction& f);
/// Reads the write_csv format; throws InvalidGrid on a non-uniform or
/// non-power-of-two grid.
GridFunction read_csv(std::istream& is);

}  // namespace expcircle
