#include "expcircle/density_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "expcircle/diagnostics.hpp"
#include "expcircle/errors.hpp"

namespace expcircle {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void require_same(const GridFunction& f, const GridFunction& g) {
    if (f.resolution() != g.resolution()) {
        throw ResolutionMismatch("grid resolutions differ: " + std::to_string(f.resolution()) + " vs " +
                                 std::to_string(g.resolution()));
    }
}

template <class Op>
GridFunction zip(const GridFunction& f, const GridFunction& g, Op op) {
    require_same(f, g);
    std::vector<double> v(f.resolution());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = op(f[j], g[j]);
    return GridFunction(std::move(v));
}

template <class Op>
GridFunction map_values(const GridFunction& f, Op op) {
    std::vector<double> v(f.resolution());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = op(f[j]);
    return GridFunction(std::move(v));
}

// max_j |f_j - f_{j+lag}| over the nodes listed by `stride` (1 = all nodes).
double max_lag_difference(std::span<const double> v, std::size_t lag, std::size_t stride) {
    const std::size_t m = v.size();
    double best = 0.0;
    if (stride == 1) {
        const std::size_t straight = m - lag;
        for (std::size_t j = 0; j < straight; ++j) best = std::max(best, std::abs(v[j] - v[j + lag]));
        for (std::size_t j = straight; j < m; ++j) best = std::max(best, std::abs(v[j] - v[j + lag - m]));
        return best;
    }
    for (std::size_t j = 0; j < m; j += stride) best = std::max(best, std::abs(v[j] - v[(j + lag) % m]));
    return best;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
    if (!is_power_of_two(values_.size())) {
        throw InvalidGrid("grid resolution must be a power of two >= 2, got " + std::to_string(values_.size()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidGrid("grid values must be finite");
    }
}

GridFunction GridFunction::constant(std::size_t resolution, double c) {
    return GridFunction(std::vector<double>(resolution, c));
}

GridFunction GridFunction::operator+(const GridFunction& o) const {
    return zip(*this, o, [](double a, double b) { return a + b; });
}
GridFunction GridFunction::operator-(const GridFunction& o) const {
    return zip(*this, o, [](double a, double b) { return a - b; });
}
GridFunction GridFunction::operator*(const GridFunction& o) const {
    return zip(*this, o, [](double a, double b) { return a * b; });
}
GridFunction GridFunction::operator*(double c) const {
    return map_values(*this, [c](double a) { return a * c; });
}
GridFunction GridFunction::operator+(double c) const {
    return map_values(*this, [c](double a) { return a + c; });
}

GridDensity::GridDensity(GridFunction f) : f_(std::move(f)) {
    if (inf_value(f_) < 0.0) throw NonPositiveDensity("density has negative node values");
    const double mass = integrate(f_);
    if (std::abs(mass - 1.0) > 1e-12) {
        throw InvalidArgument("density mass " + fmt17(mass) + " differs from 1 by more than 1e-12");
    }
}

GridDensity GridDensity::normalize(const GridFunction& f) {
    if (inf_value(f) < 0.0) throw NonPositiveDensity("cannot normalize a function with negative values");
    const double mass = integrate(f);
    if (!(mass > 0.0)) throw NonPositiveDensity("cannot normalize a function with zero mass");
    return GridDensity(f * (1.0 / mass), Trusted{});
}

GridDensity GridDensity::uniform(std::size_t resolution) {
    return GridDensity(GridFunction::constant(resolution, 1.0), Trusted{});
}

GridDensity renormalize_after(const GridFunction& f, const char* operation) {
    const double mass = integrate(f);
    if (std::abs(mass - 1.0) > 1e-8) {
        diagnostics::warn(std::string(operation) + ": mass drifted to " + fmt17(mass) + " before renormalization");
    }
    return GridDensity::normalize(f);
}

double integrate(const GridFunction& f) {
    // Kahan summation keeps the node mean within a few ulps.
    double sum = 0.0, comp = 0.0;
    for (double v : f.values()) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(f.resolution());
}

double l1_distance(const GridFunction& f, const GridFunction& g) {
    require_same(f, g);
    double sum = 0.0;
    for (std::size_t j = 0; j < f.resolution(); ++j) sum += std::abs(f[j] - g[j]);
    return sum / static_cast<double>(f.resolution());
}

double l1_norm(const GridFunction& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += std::abs(v);
    return sum / static_cast<double>(f.resolution());
}

double sup_norm(const GridFunction& f) {
    double best = 0.0;
    for (double v : f.values()) best = std::max(best, std::abs(v));
    return best;
}

double inf_value(const GridFunction& f) { return *std::min_element(f.values().begin(), f.values().end()); }
double sup_value(const GridFunction& f) { return *std::max_element(f.values().begin(), f.values().end()); }

double derivative_l1(const GridFunction& f) {
    const auto v = f.values();
    double tv = std::abs(v.front() - v.back());
    for (std::size_t j = 1; j < v.size(); ++j) tv += std::abs(v[j] - v[j - 1]);
    return tv;
}

double sup_central_difference(const GridFunction& f) {
    const auto v = f.values();
    const std::size_t m = v.size();
    double best = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        best = std::max(best, std::abs(v[(j + 1) % m] - v[(j + m - 1) % m]));
    }
    return best * static_cast<double>(m) / 2.0;
}

double lipschitz_constant(const GridFunction& f) {
    return max_lag_difference(f.values(), 1, 1) * static_cast<double>(f.resolution());
}

double holder_coefficient(const GridFunction& f, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidAlpha("Hoelder order must lie in (0, 1]");
    const auto v = f.values();
    const std::size_t m = v.size();
    const std::size_t half = m / 2;
    const double mm = static_cast<double>(m);
    auto weight = [&](std::size_t lag) {
        return alpha == 1.0 ? mm / static_cast<double>(lag) : std::pow(static_cast<double>(lag) / mm, -alpha);
    };
    double best = 0.0;
    const std::size_t full = std::min(half, kHolderFullLag);
    for (std::size_t lag = 1; lag <= full; ++lag) best = std::max(best, max_lag_difference(v, lag, 1) * weight(lag));
    if (half > kHolderFullLag) {
        const std::size_t stride = std::max<std::size_t>(1, m / kHolderSampleNodes);
        const std::size_t span = half - kHolderFullLag;
        const std::size_t count = std::min(span, kHolderLongLags);
        std::size_t previous = kHolderFullLag;
        for (std::size_t t = 1; t <= count; ++t) {
            const std::size_t lag = kHolderFullLag + (t * span + count - 1) / count;
            if (lag == previous) continue;
            previous = lag;
            best = std::max(best, max_lag_difference(v, lag, stride) * weight(lag));
        }
    }
    return best;
}

GridFunction log_transform(const GridDensity& psi) {
    if (!(inf_value(psi) > 0.0)) throw NonPositiveDensity("log_transform needs a strictly positive density");
    return map_values(psi.function(), [](double a) { return std::log(a); });
}

DensitySampler::DensitySampler(const GridDensity& psi)
    : values_(psi.values().begin(), psi.values().end()), cumulative_(values_.size() + 1, 0.0) {
    const std::size_t m = values_.size();
    const double h = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < m; ++k) {
        cumulative_[k + 1] = cumulative_[k] + 0.5 * h * (values_[k] + values_[(k + 1) % m]);
    }
}

double DensitySampler::draw(CounterRng& rng) const {
    const std::size_t m = values_.size();
    const double h = 1.0 / static_cast<double>(m);
    const double target = rng.uniform() * cumulative_.back();
    // First cell whose upper cumulative bound exceeds the target.
    auto it = std::upper_bound(cumulative_.begin() + 1, cumulative_.end(), target);
    std::size_t k = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    if (k >= m) k = m - 1;
    while (k + 1 < m && cumulative_[k + 1] == cumulative_[k]) ++k;
    const double a = values_[k];
    const double b = values_[(k + 1) % m];
    const double q = std::max(0.0, (target - cumulative_[k]) / h);
    // Solve a t + (b - a) t^2 / 2 = q for t in [0, 1] in cancellation-free form.
    const double disc = std::max(0.0, a * a + 2.0 * (b - a) * q);
    const double denom = a + std::sqrt(disc);
    double t = denom > 0.0 ? 2.0 * q / denom : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return reduce_mod1((static_cast<double>(k) + t) * h);
}

CirclePoint sample(const GridDensity& psi, CounterRng& rng) { return CirclePoint(DensitySampler(psi).draw(rng)); }

double integrate_interval(const GridFunction& f, double lo, double hi) {
    const std::size_t m = f.resolution();
    const double mm = static_cast<double>(m);
    auto primitive = [&](double x) {
        // Integral of the interpolant over [0, x].
        const double t = x * mm;
        std::size_t k = static_cast<std::size_t>(t);
        if (k >= m) k = m;
        double acc = 0.0;
        for (std::size_t c = 0; c < k; ++c) acc += 0.5 * (f[c] + f[(c + 1) % m]);
        if (k < m) {
            const double s = t - static_cast<double>(k);
            const double a = f[k], b = f[(k + 1) % m];
            acc += a * s + 0.5 * (b - a) * s * s;
        }
        return acc / mm;
    };
    return primitive(hi) - primitive(lo);
}

void write_csv(std::ostream& os, const GridFunction& f) {
    os << "x,value\n";
    for (std::size_t j = 0; j < f.resolution(); ++j) os << fmt17(f.node(j)) << ',' << fmt17(f[j]) << '\n';
}

GridFunction read_csv(std::istream& is) {
    std::vector<double> xs, vals;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("x,", 0) == 0 && line.find_first_of("0123456789") == std::string::npos) continue;
        }
        std::istringstream row(line);
        std::string xs_str, v_str;
        if (!std::getline(row, xs_str, ',') || !std::getline(row, v_str)) {
            throw InvalidGrid("malformed CSV row: " + line);
        }
        try {
            xs.push_back(std::stod(xs_str));
            vals.push_back(std::stod(v_str));
        } catch (const std::exception&) {
            throw InvalidGrid("malformed CSV row: " + line);
        }
    }
    const std::size_t m = vals.size();
    if (!is_power_of_two(m)) throw InvalidGrid("CSV grid size " + std::to_string(m) + " is not a power of two");
    for (std::size_t j = 0; j < m; ++j) {
        const double expected = static_cast<double>(j) / static_cast<double>(m);
        if (std::abs(xs[j] - expected) > 1e-12) {
            throw InvalidGrid("CSV grid is not uniform at row " + std::to_string(j) + ": x = " + fmt17(xs[j]));
        }
    }
    return GridFunction(std::move(vals));
}

}  // namespace expcircle
