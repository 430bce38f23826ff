#include "nhols/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nhols/rng.hpp"

namespace nhols {

namespace {

// Below this |p| the generic power mean switches to the geometric closed form
// to avoid catastrophic cancellation in (a^p + b^p)/2.
constexpr double kGeomSwitch = 1e-8;

double pmean_generic(double p, double a, double b) {
    if (a < 0.0 || b < 0.0)
        throw DomainError("p-mean requires nonnegative arguments");
    if (a == 0.0 || b == 0.0) {
        if (p < 0.0)
            throw DomainError("negative-p mean undefined at zero argument");
        if (p == 0.0) return 0.0;
        const double x = std::max(a, b);
        return 2.0 * x * std::exp(-std::log(2.0) / p);
    }
    // Log-space evaluation keeps large |p| finite: factor out the max term.
    const double la = p * std::log(a);
    const double lb = p * std::log(b);
    const double m = std::max(la, lb);
    const double lse = m + std::log1p(std::exp(std::min(la, lb) - m));
    return 2.0 * std::exp((lse - std::log(2.0)) / p);
}

}  // namespace

MixingSpec MixingSpec::named(MixingKind k) {
    MixingSpec s;
    s.kind = k;
    switch (k) {
        case MixingKind::arithmetic: s.p = 1.0; break;
        case MixingKind::harmonic: s.p = -1.0; break;
        case MixingKind::l2: s.p = 2.0; break;
        case MixingKind::geometric: s.p = 0.0; break;
        case MixingKind::maximum: s.p = std::numeric_limits<double>::infinity(); break;
        default: throw InvalidParam("named() expects one of the five named kinds");
    }
    return s;
}

MixingSpec MixingSpec::power(double p) {
    if (!std::isfinite(p)) throw InvalidParam("pmean exponent must be finite");
    // Canonicalize the named exponents onto their dedicated kernels.
    if (p == 1.0) return named(MixingKind::arithmetic);
    if (p == -1.0) return named(MixingKind::harmonic);
    if (p == 2.0) return named(MixingKind::l2);
    if (std::abs(p) < kGeomSwitch) return named(MixingKind::geometric);
    MixingSpec s;
    s.kind = MixingKind::pmean;
    s.p = p;
    return s;
}

MixingSpec MixingSpec::user(std::function<double(double, double)> f,
                            bool differentiable) {
    MixingSpec s;
    s.kind = MixingKind::custom;
    s.custom = std::move(f);
    s.custom_differentiable = differentiable;
    return s;
}

std::string MixingSpec::name() const {
    switch (kind) {
        case MixingKind::arithmetic: return "arith";
        case MixingKind::harmonic: return "harm";
        case MixingKind::l2: return "l2";
        case MixingKind::geometric: return "geom";
        case MixingKind::maximum: return "max";
        case MixingKind::pmean: return "pmean:" + std::to_string(p);
        case MixingKind::custom: return "custom";
    }
    return "?";
}

MixingSpec parse_mixing(const std::string& name) {
    if (name == "arith") return MixingSpec::named(MixingKind::arithmetic);
    if (name == "harm") return MixingSpec::named(MixingKind::harmonic);
    if (name == "l2") return MixingSpec::named(MixingKind::l2);
    if (name == "geom") return MixingSpec::named(MixingKind::geometric);
    if (name == "max") return MixingSpec::named(MixingKind::maximum);
    if (name.rfind("pmean:", 0) == 0) {
        try {
            return MixingSpec::power(std::stod(name.substr(6)));
        } catch (const std::invalid_argument&) {
            throw InvalidParam("bad pmean exponent in '" + name + "'");
        }
    }
    throw InvalidParam("unknown mixing '" + name +
                       "' (expected arith|harm|l2|geom|max|pmean:<p>)");
}

double sigma_eval(const MixingSpec& spec, double a, double b) {
    switch (spec.kind) {
        case MixingKind::arithmetic:
            if (a < 0.0 || b < 0.0) throw DomainError("sigma requires a, b >= 0");
            return a + b;
        case MixingKind::harmonic:
            if (a < 0.0 || b < 0.0) throw DomainError("sigma requires a, b >= 0");
            // Explicit harmonic kind: limit value 0 on the boundary.
            if (a == 0.0 || b == 0.0) return 0.0;
            return 4.0 * a * b / (a + b);
        case MixingKind::l2:
            if (a < 0.0 || b < 0.0) throw DomainError("sigma requires a, b >= 0");
            return std::sqrt(2.0 * (a * a + b * b));
        case MixingKind::geometric:
            if (a < 0.0 || b < 0.0) throw DomainError("sigma requires a, b >= 0");
            return 2.0 * std::sqrt(a * b);
        case MixingKind::maximum:
            if (a < 0.0 || b < 0.0) throw DomainError("sigma requires a, b >= 0");
            return 2.0 * std::max(a, b);
        case MixingKind::pmean:
            return pmean_generic(spec.p, a, b);
        case MixingKind::custom:
            if (!spec.custom) throw InvalidParam("custom mixing without a function");
            return spec.custom(a, b);
    }
    throw InvalidParam("unreachable mixing kind");
}

PropertyCheck check_one_homogeneity(const MixingSpec& spec, int sample_count,
                                    uint64_t seed, double tol) {
    Rng rng(seed);
    PropertyCheck out;
    out.pass = true;
    for (int s = 0; s < sample_count; ++s) {
        const double a = rng.log_uniform(1e-3, 1e3);
        const double b = rng.log_uniform(1e-3, 1e3);
        const double c = rng.log_uniform(1e-3, 1e3);
        const double lhs = sigma_eval(spec, c * a, c * b);
        const double rhs = c * sigma_eval(spec, a, b);
        const double viol = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
        out.max_violation = std::max(out.max_violation, viol);
        if (viol > tol) out.pass = false;
    }
    return out;
}

PropertyCheck check_positivity(const MixingSpec& spec, int sample_count,
                               uint64_t seed) {
    Rng rng(seed);
    PropertyCheck out;
    out.pass = true;
    for (int s = 0; s < sample_count; ++s) {
        const double a = rng.log_uniform(1e-3, 1e3);
        const double b = rng.log_uniform(1e-3, 1e3);
        const double v = sigma_eval(spec, a, b);
        if (!(v > 0.0)) {
            out.pass = false;
            out.max_violation = std::max(out.max_violation, -v);
        }
    }
    return out;
}

PropertyCheck check_symmetry(const MixingSpec& spec, int sample_count,
                             uint64_t seed, double tol) {
    Rng rng(seed);
    PropertyCheck out;
    out.pass = true;
    for (int s = 0; s < sample_count; ++s) {
        const double a = rng.log_uniform(1e-3, 1e3);
        const double b = rng.log_uniform(1e-3, 1e3);
        const double ab = sigma_eval(spec, a, b);
        const double ba = sigma_eval(spec, b, a);
        const double viol = std::abs(ab - ba) / std::max(std::abs(ab), 1e-300);
        out.max_violation = std::max(out.max_violation, viol);
        if (viol > tol) out.pass = false;
    }
    return out;
}

PropertyCheck check_order_preservation(const MixingSpec& spec, int sample_count,
                                       uint64_t seed) {
    Rng rng(seed);
    PropertyCheck out;
    out.pass = true;
    for (int s = 0; s < sample_count; ++s) {
        const double a = rng.log_uniform(1e-3, 1e3);
        const double b = rng.log_uniform(1e-3, 1e3);
        const double da = rng.log_uniform(1e-6, 1e2);
        const double db = rng.log_uniform(1e-6, 1e2);
        const double lo = sigma_eval(spec, a, b);
        const double hi = sigma_eval(spec, a + da, b + db);
        if (hi < lo) {
            out.pass = false;
            out.max_violation = std::max(out.max_violation, (lo - hi) / lo);
        }
    }
    return out;
}

}  // namespace nhols
