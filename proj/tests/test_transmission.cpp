#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vpipe/transmission.hpp"
#include "vpipe/units.hpp"

using namespace vpipe;
using Catch::Approx;

TEST_CASE("roll projection") {
    auto [roll, prop] = roll_projection(1.0, 0.0);
    CHECK(roll == 1.0);
    CHECK(prop == 0.0);

    std::tie(roll, prop) = roll_projection(1.0, kPi / 2.0);
    CHECK(roll == Approx(0.0).margin(1e-12));
    CHECK(prop == Approx(1.0).epsilon(1e-12));

    std::tie(roll, prop) = roll_projection(1.0, deg_to_rad(21.0));
    CHECK(roll == Approx(0.9335804264972017).epsilon(1e-12));
    CHECK(prop == Approx(0.35836794954530027).epsilon(1e-12));
}

TEST_CASE("transmission entries from the wheel radii") {
    const MechanismParams p = defaults::mechanism();

    const TransmissionMatrix diag = build_transmission(p, 1.0, 4, 0.0);
    CHECK(diag.kpp == 4.0);
    CHECK(diag.kpr == 0.0);
    CHECK(diag.krr == Approx(50.0 / 22.5).epsilon(1e-15));

    const TransmissionMatrix base = build_transmission(p, 1.0, 4, deg_to_rad(21.0));
    CHECK(base.kpr == Approx(0.477823932727067).epsilon(1e-12));

    const TransmissionMatrix opt = build_transmission(p, 1.0, 4, deg_to_rad(1.6));
    CHECK(opt.kpr == Approx(0.03722885163142517).epsilon(1e-12));
}

TEST_CASE("roll efficiency") {
    CHECK(roll_efficiency(0.0) == 1.0);
    CHECK(roll_efficiency(deg_to_rad(21.0)) == Approx(0.93).margin(0.005));
    CHECK(roll_efficiency(deg_to_rad(1.6)) == Approx(0.9996101150403544).epsilon(1e-12));
    CHECK_THROWS_AS(roll_efficiency(-0.1), ValidationError);
    CHECK_THROWS_AS(roll_efficiency(2.0), ValidationError);
}

TEST_CASE("entry identity over the angle range") {
    const MechanismParams p = defaults::mechanism();
    for (int i = 0; i <= 1000; ++i) {
        const double alpha = kPi / 2.0 * static_cast<double>(i) / 1000.0;
        const TransmissionMatrix t = build_transmission(p, 1.0, 4, alpha);
        const double x = t.kpr * t.rs / t.ro;
        const double y = t.krr * t.rs / t.rp;
        CHECK(std::abs(x * x + y * y - 1.0) < 1e-12);
    }
}

TEST_CASE("kpr grows and krr shrinks with the contact angle") {
    const MechanismParams p = defaults::mechanism();
    double prev_kpr = -1.0;
    double prev_krr = 1e9;
    for (int i = 1; i < 200; ++i) {
        const double alpha = kPi / 2.0 * static_cast<double>(i) / 200.0;
        const TransmissionMatrix t = build_transmission(p, 1.0, 4, alpha);
        CHECK(t.kpr > prev_kpr);
        CHECK(t.krr < prev_krr);
        prev_kpr = t.kpr;
        prev_krr = t.krr;
    }
}

TEST_CASE("diagonal matrix inverts diagonally") {
    const MechanismParams p = defaults::mechanism();
    const TransmissionMatrix t = build_transmission(p, 1.0, 4, 0.0, 0.0);
    const Eigen::Matrix2d inv = t.inverse();
    CHECK(inv(0, 1) == 0.0);
    CHECK(inv(1, 0) == 0.0);
    CHECK(inv(0, 0) == Approx(1.0 / t.kpp).epsilon(1e-15));
    CHECK(inv(1, 1) == Approx(1.0 / t.krr).epsilon(1e-15));
}

TEST_CASE("stress test keeps the diagonal and imposes the leakage ratios") {
    const MechanismParams p = defaults::mechanism();
    const TransmissionMatrix base = build_transmission(p, 1.0, 4, deg_to_rad(21.0));

    const TransmissionMatrix zero = stress_test_matrix(base, 0.0, 0.0);
    CHECK(zero.kpp == base.kpp);
    CHECK(zero.krr == base.krr);
    CHECK(zero.kpr == 0.0);
    CHECK(zero.krp == 0.0);

    const TransmissionMatrix stress = stress_test_matrix(base, 0.3, 0.3);
    CHECK(stress.kpr == Approx(0.3 * base.krr).epsilon(1e-15));
    CHECK(stress.krp == Approx(0.3 * base.kpp).epsilon(1e-15));
    CHECK(stress.determinant() == Approx(base.kpp * base.krr * (1.0 - 0.09)).epsilon(1e-12));

    CHECK_THROWS_AS(stress_test_matrix(base, 1.0, 0.3), ValidationError);
    CHECK_THROWS_AS(stress_test_matrix(base, -0.1, 0.3), ValidationError);
}

TEST_CASE("singular matrix is rejected") {
    const MechanismParams p = defaults::mechanism();
    const TransmissionMatrix t = build_transmission(p, 1.0, 4, deg_to_rad(45.0));
    const double krp_singular = t.kpp * t.krr / t.kpr;
    CHECK_THROWS_AS(build_transmission(p, 1.0, 4, deg_to_rad(45.0), krp_singular),
                    SingularConfigurationError);
}

TEST_CASE("alpha surface") {
    const MechanismParams tpl = defaults::mechanism();
    const AlphaSurface surf = alpha_surface(tpl, 0.0, 60.0, -40.0, 40.0, 31, 41);

    // origin node is the zero-separation baseline
    CHECK(surf.at(0, 20) == Approx(21.0).margin(0.5));
    CHECK(surf.nb_values[20] == 0.0);

    // the configured mounting point lies in the near-zero plateau
    double nearest = 1e9;
    for (std::size_t i = 0; i < surf.a_values.size(); ++i) {
        for (std::size_t j = 0; j < surf.nb_values.size(); ++j) {
            const double da = surf.a_values[i] - tpl.a;
            const double dnb = surf.nb_values[j] - (tpl.n - tpl.b);
            if (std::abs(da) <= 1.0 && std::abs(dnb) <= 1.0) {
                nearest = std::min(nearest, surf.at(i, j));
            }
        }
    }
    CHECK(nearest < 2.0);

    // same n - b realized through different (n, b) pairs gives the same angle
    MechanismParams p1 = tpl;
    p1.a = 10.0;
    p1.n = 12.0;
    p1.b = 0.0;
    MechanismParams p2 = tpl;
    p2.a = 10.0;
    p2.n = 19.0;
    p2.b = 7.0;
    CHECK(contact_angle(p1) == Approx(contact_angle(p2)).margin(1e-10));
}
