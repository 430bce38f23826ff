#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "nhols/error.hpp"

namespace nhols {

// The five named members of the scaled p-mean family, plus a generic p and a
// user-supplied map. The named kinds have dedicated kernels; PMean and Custom
// evaluate through the scalar path.
enum class MixingKind : int {
    arithmetic = 0,  // p = 1
    harmonic = 1,    // p = -1
    l2 = 2,          // p = 2
    geometric = 3,   // p -> 0
    maximum = 4,     // p -> inf
    pmean = 5,       // generic finite p
    custom = 6,
};

inline constexpr int kNamedKindCount = 5;

// A one-homogeneous positive symmetric map of two neighbor values, scaled so
// that sigma(a, a) = 2a across the family.
struct MixingSpec {
    MixingKind kind = MixingKind::arithmetic;
    double p = 1.0;  // meaningful for kind == pmean
    std::function<double(double, double)> custom;
    bool custom_differentiable = false;

    static MixingSpec named(MixingKind k);
    static MixingSpec power(double p);
    static MixingSpec user(std::function<double(double, double)> f,
                           bool differentiable = false);

    bool differentiable() const {
        if (kind == MixingKind::maximum) return false;
        if (kind == MixingKind::custom) return custom_differentiable;
        return true;
    }
    // Strictly positive arguments required (division / negative powers).
    bool requires_positive() const {
        return kind == MixingKind::harmonic ||
               (kind == MixingKind::pmean && p < 0) || kind == MixingKind::custom;
    }
    std::string name() const;
};

// CLI names: arith, harm, l2, geom, max, pmean:<p>.
MixingSpec parse_mixing(const std::string& name);

double sigma_eval(const MixingSpec& spec, double a, double b);

// Sampling-based property checkers used by the test and validation suites.
struct PropertyCheck {
    bool pass = false;
    double max_violation = 0.0;  // max relative violation observed
};

PropertyCheck check_one_homogeneity(const MixingSpec& spec, int sample_count,
                                    uint64_t seed, double tol = 1e-10);
PropertyCheck check_positivity(const MixingSpec& spec, int sample_count,
                               uint64_t seed);
PropertyCheck check_symmetry(const MixingSpec& spec, int sample_count,
                             uint64_t seed, double tol = 1e-12);
// Order preservation (a <= a', b <= b' implies sigma <= sigma'); required of
// user-supplied mixings before use.
PropertyCheck check_order_preservation(const MixingSpec& spec, int sample_count,
                                       uint64_t seed);

}  // namespace nhols
