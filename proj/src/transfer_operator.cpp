#include "expcircle/transfer_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "expcircle/errors.hpp"
#include "expcircle/inverse_branches.hpp"
#include "expcircle/parallel.hpp"

namespace expcircle {

TransferOperator::TransferOperator(ExpandingMap map, std::size_t resolution)
    : map_(std::move(map)), resolution_(resolution) {
    if (resolution_ < 2 || (resolution_ & (resolution_ - 1)) != 0) {
        throw InvalidGrid("grid resolution must be a power of two >= 2");
    }
    const std::size_t w = static_cast<std::size_t>(map_.winding());
    taps_.resize(resolution_ * w);
    const double mm = static_cast<double>(resolution_);
    parallel::for_range(resolution_, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            const double x = static_cast<double>(j) / mm;
            for (std::size_t i = 0; i < w; ++i) {
                const double y = reduce_mod1(branch_preimage(map_, x, static_cast<int>(i)));
                const double t = y * mm;
                std::size_t cell = static_cast<std::size_t>(t);
                double frac = t - static_cast<double>(cell);
                if (cell >= resolution_) {
                    cell = resolution_ - 1;
                    frac = 1.0;
                }
                taps_[j * w + i] = {cell, frac, 1.0 / map_.derivative(y), y};
            }
        }
    });
}

void TransferOperator::require_resolution(const GridFunction& u) const {
    if (u.resolution() != resolution_) {
        throw ResolutionMismatch("operator built for M = " + std::to_string(resolution_) + ", got M = " +
                                 std::to_string(u.resolution()));
    }
}

GridFunction TransferOperator::apply(const GridFunction& u) const {
    require_resolution(u);
    const std::size_t w = static_cast<std::size_t>(map_.winding());
    const std::size_t mask = resolution_ - 1;
    const auto v = u.values();
    std::vector<double> out(resolution_);
    const Tap* tap = taps_.data();
    for (std::size_t j = 0; j < resolution_; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < w; ++i, ++tap) {
            const double a = v[tap->cell];
            const double b = v[(tap->cell + 1) & mask];
            acc += tap->weight * (a + tap->frac * (b - a));
        }
        out[j] = acc;
    }
    return GridFunction(std::move(out));
}

GridDensity TransferOperator::apply(const GridDensity& psi) const {
    return renormalize_after(apply(psi.function()), "transfer operator");
}

double TransferOperator::preimage(std::size_t node, int branch) const {
    return taps_.at(node * static_cast<std::size_t>(map_.winding()) + static_cast<std::size_t>(branch)).point;
}

double TransferOperator::weight(std::size_t node, int branch) const {
    return taps_.at(node * static_cast<std::size_t>(map_.winding()) + static_cast<std::size_t>(branch)).weight;
}

GridDensity apply(const ExpandingMap& map, const GridDensity& psi) {
    return TransferOperator(map, psi.resolution()).apply(psi);
}

namespace {

IterationStep record(int step, const GridDensity& prev, const GridDensity& next) {
    IterationStep s;
    s.step = step;
    s.l1_diff = l1_distance(next, prev);
    s.sup = sup_value(next);
    s.inf = inf_value(next);
    s.d_l1 = derivative_l1(next);
    return s;
}

}  // namespace

IterationResult iterate(const TransferOperator& op, const GridDensity& psi, int n) {
    if (n < 0) throw InvalidArgument("iteration count must be >= 0");
    GridDensity current = psi;
    IterationDiagnostics diag;
    diag.steps.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        GridDensity next = op.apply(current);
        diag.steps.push_back(record(k, current, next));
        current = std::move(next);
    }
    diag.n_steps = n;
    diag.final_sup = sup_value(current);
    diag.final_inf = inf_value(current);
    return {std::move(current), std::move(diag)};
}

GridDensity cesaro(const TransferOperator& op, const GridDensity& psi, int n_terms) {
    if (n_terms < 1) throw InvalidArgument("Cesaro average needs N >= 1");
    std::vector<double> acc(psi.values().begin(), psi.values().end());
    GridDensity current = psi;
    for (int k = 1; k < n_terms; ++k) {
        current = op.apply(current);
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += current[j];
    }
    for (double& a : acc) a /= static_cast<double>(n_terms);
    return GridDensity::normalize(GridFunction(std::move(acc)));
}

InvariantDensityResult invariant_density(const TransferOperator& op, double tol, int max_iter) {
    return invariant_density(op, GridDensity::uniform(op.resolution()), tol, max_iter);
}

InvariantDensityResult invariant_density(const TransferOperator& op, const GridDensity& initial, double tol,
                                         int max_iter) {
    if (!(tol > 0.0)) throw InvalidArgument("invariant density tolerance must be > 0");
    GridDensity current = initial;
    IterationDiagnostics diag;
    for (int k = 1; k <= max_iter; ++k) {
        GridDensity next = op.apply(current);
        diag.steps.push_back(record(k, current, next));
        current = std::move(next);
        if (diag.steps.back().l1_diff < tol) {
            diag.n_steps = k;
            diag.final_sup = sup_value(current);
            diag.final_inf = inf_value(current);
            diag.residual = l1_distance(op.apply(current), current);
            const double lip = lipschitz_constant(current);
            return {std::move(current), std::move(diag), lip};
        }
    }
    throw NoConvergence("invariant density did not converge to tol " + std::to_string(tol) + " within " +
                        std::to_string(max_iter) + " iterations (last L1 difference " +
                        std::to_string(diag.steps.empty() ? 0.0 : diag.steps.back().l1_diff) + ")");
}

double regularity_constant(const ExpandingMap& map) {
    const double lam = map.lambda();
    return map.d2_sup() / (lam * (lam - 1.0));
}

BoundCheck check_sup_bound(const TransferOperator& op, const GridFunction& psi, int n) {
    const double omega = regularity_constant(op.map());
    BoundCheck c;
    c.rhs = (1.0 + omega) * sup_norm(psi);
    GridFunction u = psi;
    c.lhs = sup_norm(u);
    for (int k = 1; k <= n; ++k) {
        u = op.apply(u);
        c.lhs = std::max(c.lhs, sup_norm(u));
    }
    c.ok = c.lhs <= c.rhs + 1e-8;
    return c;
}

BoundCheck check_c1_bound(const TransferOperator& op, const GridFunction& psi, int n) {
    const double omega = regularity_constant(op.map());
    auto c1 = [](const GridFunction& u) { return sup_norm(u) + sup_central_difference(u); };
    BoundCheck c;
    c.rhs = (1.0 + omega) * (1.0 + omega) * c1(psi);
    GridFunction u = psi;
    c.lhs = c1(u);
    for (int k = 1; k <= n; ++k) {
        u = op.apply(u);
        c.lhs = std::max(c.lhs, c1(u));
    }
    c.ok = c.lhs <= c.rhs * 1.02;
    return c;
}

BoundCheck check_derivative_l1_bound(const TransferOperator& op, const GridFunction& psi, int n) {
    const double omega = regularity_constant(op.map());
    const double lam = op.map().lambda();
    const double d0 = derivative_l1(psi);
    BoundCheck c;
    c.rhs = omega * l1_norm(psi);
    c.lhs = 0.0;
    GridFunction u = psi;
    for (int k = 1; k <= n; ++k) {
        u = op.apply(u);
        c.lhs = std::max(c.lhs, derivative_l1(u) - std::pow(lam, -k) * d0);
    }
    c.ok = c.lhs <= c.rhs + 1e-9;
    return c;
}

}  // namespace expcircle
