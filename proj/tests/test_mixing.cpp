#include <doctest.h>

#include <cmath>

#include "nhols/error.hpp"
#include "nhols/mixing.hpp"
#include "nhols/rng.hpp"

using namespace nhols;

TEST_CASE("closed-form values at (1, 3)") {
    CHECK(sigma_eval(MixingSpec::named(MixingKind::arithmetic), 1, 3) ==
          doctest::Approx(4.0));
    CHECK(sigma_eval(MixingSpec::named(MixingKind::harmonic), 1, 3) ==
          doctest::Approx(3.0));
    CHECK(sigma_eval(MixingSpec::named(MixingKind::l2), 1, 3) ==
          doctest::Approx(2.0 * std::sqrt(5.0)));
    CHECK(sigma_eval(MixingSpec::named(MixingKind::geometric), 1, 3) ==
          doctest::Approx(2.0 * std::sqrt(3.0)));
    CHECK(sigma_eval(MixingSpec::named(MixingKind::maximum), 1, 3) ==
          doctest::Approx(6.0));
}

TEST_CASE("generic pmean agrees with the named closed forms") {
    Rng rng(3);
    MixingSpec generic;
    generic.kind = MixingKind::pmean;
    for (int s = 0; s < 200; ++s) {
        const double a = rng.log_uniform(1e-2, 1e2);
        const double b = rng.log_uniform(1e-2, 1e2);
        generic.p = 1.0;
        CHECK(sigma_eval(generic, a, b) == doctest::Approx(a + b).epsilon(1e-12));
        generic.p = -1.0;
        CHECK(sigma_eval(generic, a, b) ==
              doctest::Approx(4 * a * b / (a + b)).epsilon(1e-12));
        generic.p = 2.0;
        CHECK(sigma_eval(generic, a, b) ==
              doctest::Approx(std::sqrt(2 * (a * a + b * b))).epsilon(1e-12));
    }
}

TEST_CASE("parsing CLI names") {
    CHECK(parse_mixing("arith").kind == MixingKind::arithmetic);
    CHECK(parse_mixing("harm").kind == MixingKind::harmonic);
    CHECK(parse_mixing("l2").kind == MixingKind::l2);
    CHECK(parse_mixing("geom").kind == MixingKind::geometric);
    CHECK(parse_mixing("max").kind == MixingKind::maximum);
    const MixingSpec p3 = parse_mixing("pmean:3.5");
    CHECK(p3.kind == MixingKind::pmean);
    CHECK(p3.p == doctest::Approx(3.5));
    // named exponents canonicalize onto their kernels
    CHECK(parse_mixing("pmean:1").kind == MixingKind::arithmetic);
    CHECK(parse_mixing("pmean:1e-12").kind == MixingKind::geometric);
    CHECK_THROWS_AS(parse_mixing("median"), InvalidParam);
}

TEST_CASE("domain handling at the boundary") {
    // p >= 1 and the limits accept zeros
    CHECK(sigma_eval(MixingSpec::named(MixingKind::arithmetic), 0, 2) ==
          doctest::Approx(2.0));
    CHECK(sigma_eval(MixingSpec::named(MixingKind::geometric), 0, 2) ==
          doctest::Approx(0.0));
    CHECK(sigma_eval(MixingSpec::named(MixingKind::maximum), 0, 2) ==
          doctest::Approx(4.0));
    // explicit harmonic kind takes the limit value 0
    CHECK(sigma_eval(MixingSpec::named(MixingKind::harmonic), 0.0, 2.0) ==
          doctest::Approx(0.0));
    // general negative p rejects zeros
    CHECK_THROWS_AS(sigma_eval(MixingSpec::power(-2.0), 0.0, 1.0), DomainError);
    // negatives are always out of domain
    CHECK_THROWS_AS(sigma_eval(MixingSpec::named(MixingKind::l2), -1.0, 1.0),
                    DomainError);
}

TEST_CASE("property samplers") {
    for (const MixingKind k : {MixingKind::arithmetic, MixingKind::harmonic,
                               MixingKind::l2, MixingKind::geometric,
                               MixingKind::maximum}) {
        const MixingSpec spec = MixingSpec::named(k);
        CHECK(check_one_homogeneity(spec, 1000, 7).pass);
        CHECK(check_positivity(spec, 1000, 8).pass);
        CHECK(check_symmetry(spec, 1000, 9).pass);
        CHECK(check_order_preservation(spec, 1000, 10).pass);
    }
    CHECK(check_one_homogeneity(MixingSpec::power(7.5), 1000, 11).pass);

    const auto affine = MixingSpec::user([](double a, double b) { return a + b + 1.0; });
    CHECK_FALSE(check_one_homogeneity(affine, 1000, 12).pass);
    const auto diff = MixingSpec::user([](double a, double b) { return a - b; });
    CHECK_FALSE(check_positivity(diff, 1000, 13).pass);
    const auto antitone =
        MixingSpec::user([](double a, double b) { return 1.0 / (a + b); });
    CHECK_FALSE(check_order_preservation(antitone, 1000, 14).pass);
}

TEST_CASE("strict monotonicity across kinds for a != b") {
    Rng rng(21);
    for (int s = 0; s < 500; ++s) {
        const double a = rng.log_uniform(1e-2, 1e2);
        double b = rng.log_uniform(1e-2, 1e2);
        if (std::abs(a - b) < 1e-9) b += 1.0;
        const double vh = sigma_eval(MixingSpec::named(MixingKind::harmonic), a, b);
        const double vg = sigma_eval(MixingSpec::named(MixingKind::geometric), a, b);
        const double va = sigma_eval(MixingSpec::named(MixingKind::arithmetic), a, b);
        const double v2 = sigma_eval(MixingSpec::named(MixingKind::l2), a, b);
        const double vm = sigma_eval(MixingSpec::named(MixingKind::maximum), a, b);
        CHECK(vh < vg);
        CHECK(vg < va);
        CHECK(va < v2);
        CHECK(v2 < vm);
    }
}

TEST_CASE("diagonal equals 2a for every kind") {
    Rng rng(22);
    for (int s = 0; s < 200; ++s) {
        const double a = rng.log_uniform(1e-3, 1e3);
        for (const MixingKind k : {MixingKind::arithmetic, MixingKind::harmonic,
                                   MixingKind::l2, MixingKind::geometric,
                                   MixingKind::maximum}) {
            const double v = sigma_eval(MixingSpec::named(k), a, a);
            CHECK(std::abs(v - 2 * a) <= 1e-14 * 2 * a);
        }
        CHECK(std::abs(sigma_eval(MixingSpec::power(4.2), a, a) - 2 * a) <=
              1e-12 * 2 * a);
    }
}

TEST_CASE("p -> 0 limit approaches the geometric mean") {
    Rng rng(23);
    double worst = 0.0;
    for (int s = 0; s < 300; ++s) {
        const double a = rng.log_uniform(1e-2, 1e2);
        const double b = rng.log_uniform(1e-2, 1e2);
        const double g = sigma_eval(MixingSpec::named(MixingKind::geometric), a, b);
        for (const double p : {1e-6, -1e-6}) {
            const double v = sigma_eval(MixingSpec::power(p), a, b);
            worst = std::max(worst, std::abs(v - g) / g);
        }
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("large p approaches the maximum with the exact 2^(-1/p) floor") {
    Rng rng(24);
    double worst = 0.0;
    for (int s = 0; s < 500; ++s) {
        const double a = rng.log_uniform(1e-2, 1e2);
        const double b = rng.log_uniform(1e-2, 1e2);
        const double m = sigma_eval(MixingSpec::named(MixingKind::maximum), a, b);
        const double v = sigma_eval(MixingSpec::power(50.0), a, b);
        CHECK(v <= m * (1 + 1e-12));
        worst = std::max(worst, (m - v) / m);
    }
    // sup over pairs of the relative gap is 1 - 2^(-1/50)
    CHECK(worst <= 1.0 - std::exp2(-1.0 / 50.0) + 1e-12);
}

TEST_CASE("maximum kind is flagged non-differentiable") {
    CHECK_FALSE(MixingSpec::named(MixingKind::maximum).differentiable());
    CHECK(MixingSpec::named(MixingKind::l2).differentiable());
    CHECK(MixingSpec::named(MixingKind::geometric).differentiable());
}
