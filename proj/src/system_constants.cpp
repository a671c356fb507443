#include "expcircle/system_constants.hpp"

#include <cmath>
#include <cstdio>

#include "expcircle/errors.hpp"
#include "expcircle/transfer_operator.hpp"

namespace expcircle {

int ConstantsLedger::N_of(double B) const {
    if (!(B > 1.0)) return 1;
    return static_cast<int>(std::floor(std::log(B) / (alpha * std::log(lambda)))) + 1;
}

std::string ConstantsLedger::to_json() const {
    auto real = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    // Hand-written so each real keeps the full 17 digits.
    std::string s = "{\n";
    auto field = [&](const char* name, const std::string& value, bool last = false) {
        s += "  \"";
        s += name;
        s += "\": ";
        s += value;
        s += last ? "\n" : ",\n";
    };
    field("alpha", real(alpha));
    field("lambda", real(lambda));
    field("omega", real(omega));
    field("a", real(a));
    field("K", real(K));
    field("N_K", std::to_string(N_K));
    field("n_k_paper_raw", real(n_k_paper_raw));
    field("D_exact", real(D_exact));
    field("D_relaxed", real(D_relaxed));
    field("D_tilde", real(D_tilde));
    field("theta_exact", real(theta_exact));
    field("theta_paper", real(theta_paper));
    field("C", real(C));
    field("lower_floor", real(lower_floor), true);
    s += "}";
    return s;
}

ConstantsLedger compute_ledger(const ExpandingMap& map, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidAlpha("alpha must lie in (0, 1]");
    ConstantsLedger l;
    l.alpha = alpha;
    l.lambda = map.lambda();
    l.omega = regularity_constant(map);
    const double op1 = l.omega + 1.0;
    l.lower_floor = std::exp(-op1);
    l.a = 0.5 * l.lower_floor;
    l.K = std::exp(4.0 * op1);
    l.n_k_paper_raw = 4.0 * op1 / (alpha * std::log(l.lambda));
    l.N_K = l.N_of(l.K);
    l.D_exact = 2.0 / (1.0 - l.a);
    l.theta_exact = std::pow(1.0 - l.a, 1.0 / (alpha * l.N_K));
    l.theta_paper = std::pow(-std::expm1(-3.0 * op1), std::log(l.lambda) / (4.0 * op1));
    l.C = 96.0 * (2.0 + l.omega) * (2.0 + l.omega);
    return l;
}

bool hoelder_class_check(const GridDensity& psi, double D, double alpha) {
    if (!(inf_value(psi) > 0.0)) return false;
    if (std::abs(integrate(psi) - 1.0) > 1e-10) return false;
    return holder_coefficient(log_transform(psi), alpha) <= D + kClassSlack;
}

bool pointwise_log_bounds_check(const GridDensity& psi, double alpha) {
    if (!(inf_value(psi) > 0.0)) return false;
    const double h = holder_coefficient(log_transform(psi), alpha);
    const double lo = std::exp(-h) * (1.0 - 1e-12);
    const double hi = std::exp(h) * (1.0 + 1e-12);
    for (double v : psi.values()) {
        if (v < lo || v > hi) return false;
    }
    return true;
}

}  // namespace expcircle
