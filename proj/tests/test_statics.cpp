#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "vpipe/statics.hpp"
#include "vpipe/units.hpp"

using namespace vpipe;
using Catch::Approx;

namespace {

MassModel zero_masses() {
    MassModel m;
    m.total_weight = 0.0;
    for (int k = 0; k < 5; ++k) {
        m.components.push_back({k, 0.0, Eigen::Vector2d::Zero()});
    }
    return m;
}

MassLayout default_layout() {
    return default_mass_layout(defaults::kTotalMassKg * defaults::kGravityMps2);
}

}  // namespace

TEST_CASE("moment arm") {
    CHECK(moment_arm({1.0, 0.0}, {0.0, 1.0}) == 1.0);
    CHECK(moment_arm({2.0, 0.0}, {1.0, 0.0}) == 0.0);
    CHECK(moment_arm({3.0, 4.0}, {0.6, 0.8}) == Approx(0.0).margin(1e-15));
    CHECK_THROWS_AS(moment_arm({1.0, 0.0}, {0.0, 2.0}), ValidationError);
}

TEST_CASE("joint torque follows the linear spring law") {
    Configuration free_state;  // theta = 0
    const SpringModel spring{10.06, 0.0};
    CHECK(joint_torque(spring, free_state) == 0.0);

    Configuration deflected;
    deflected.theta = deg_to_rad(10.0);
    CHECK(joint_torque(spring, deflected) == Approx(100.6).epsilon(1e-12));
}

TEST_CASE("pure clamping presses all three wheels") {
    const MechanismParams p = defaults::mechanism().zero_separation();
    const ContactForces f = solve_normal_forces(p, zero_masses(), 1000.0);
    CHECK(f.fn0 > 0.0);
    CHECK(f.fn1 > 0.0);
    CHECK(f.fn2 > 0.0);
    CHECK(f.fn1 + f.fn2 - f.fn0 == 0.0);
    CHECK_FALSE(f.separation);
}

TEST_CASE("no loads, no forces") {
    const MechanismParams p = defaults::mechanism().zero_separation();
    const ContactForces f = solve_normal_forces(p, zero_masses(), 0.0);
    CHECK(f.fn0 == 0.0);
    CHECK(f.fn1 == 0.0);
    CHECK(f.fn2 == 0.0);
}

TEST_CASE("link-2 wheel carries about 20% at the prototype ratio") {
    const MechanismParams p = defaults::mechanism().with_link2(0.71 * defaults::kLink1Mm);
    const Configuration c = solve_configuration(p);
    const SpringModel spring{defaults::kSpringStiffnessNmmPerDeg, defaults::kPreloadDeg};
    const ContactForces f =
        solve_normal_forces(p, default_layout().resolve(p, c), joint_torque(spring, c));
    CHECK(f.fn2 / f.total() == Approx(0.20).margin(1e-3));
}

TEST_CASE("closed form matches a generic 3x3 solve") {
    std::mt19937_64 rng(20240717);
    std::uniform_real_distribution<double> len1(60.0, 150.0);
    std::uniform_real_distribution<double> len2(40.0, 160.0);
    std::uniform_real_distribution<double> offset(0.0, 25.0);
    std::uniform_real_distribution<double> spacing(10.0, 90.0);
    std::uniform_real_distribution<double> radius_o(15.0, 35.0);
    std::uniform_real_distribution<double> radius_s(10.0, 30.0);
    std::uniform_real_distribution<double> weight(0.0, 3.0);
    std::uniform_real_distribution<double> pos(-60.0, 60.0);
    std::uniform_real_distribution<double> torque(0.0, 3000.0);

    int solved = 0;
    while (solved < 100) {
        MechanismParams p;
        p.l1 = len1(rng);
        p.l2 = len2(rng);
        p.a = offset(rng);
        p.b = offset(rng);
        p.n = offset(rng);
        p.wo = spacing(rng);
        p.ro = radius_o(rng);
        p.rs = radius_s(rng);
        p.dp = 100.0;

        MassModel masses;
        for (int k = 0; k < 5; ++k) {
            const double w = weight(rng);
            masses.components.push_back({k, w, {pos(rng), pos(rng)}});
            masses.total_weight += w;
        }
        const double mj = torque(rng);

        ContactForces f;
        try {
            f = solve_normal_forces(p, masses, mj);
        } catch (const ModelError&) {
            continue;  // unreachable sample, draw again
        }
        ++solved;

        const double mg1 = f.gravity_moments[0] + f.gravity_moments[1] + f.gravity_moments[3];
        const double mg2 = f.gravity_moments[2] + f.gravity_moments[4];
        const auto x = oracles::solve3x3({{{-1.0, 1.0, 1.0},
                                           {f.arm_n0, f.arm_n1, 0.0},
                                           {0.0, 0.0, f.arm_n2}}},
                                         {0.0, mj - mg1, -(mj + mg2)});
        CHECK(std::abs(f.fn0 - x[0]) < 1e-8);
        CHECK(std::abs(f.fn1 - x[1]) < 1e-8);
        CHECK(std::abs(f.fn2 - x[2]) < 1e-8);
        CHECK(std::abs(f.fn1 + f.fn2 - f.fn0) < 1e-12);

        // substituting back satisfies both subsystem moment balances
        const double link1_residual = f.arm_n0 * f.fn0 + f.arm_n1 * f.fn1 + mg1 - mj;
        const double link2_residual = f.arm_n2 * f.fn2 + mg2 + mj;
        CHECK(std::abs(link1_residual) < 1e-6);
        CHECK(std::abs(link2_residual) < 1e-6);
    }
}

TEST_CASE("forces are affine in the joint torque and in each weight") {
    const MechanismParams p = defaults::mechanism();
    const Configuration c = solve_configuration(p);
    const MassModel masses = default_layout().resolve(p, c);

    // three-point collinearity in MJ
    const ContactForces f0 = solve_normal_forces(p, masses, 0.0);
    const ContactForces f1 = solve_normal_forces(p, masses, 700.0);
    const ContactForces f2 = solve_normal_forces(p, masses, 1400.0);
    CHECK(std::abs(f2.fn1 - 2.0 * f1.fn1 + f0.fn1) < 1e-9);
    CHECK(std::abs(f2.fn2 - 2.0 * f1.fn2 + f0.fn2) < 1e-9);

    // three-point collinearity in one component weight
    auto scaled = [&](double factor) {
        MassModel m = masses;
        const double delta = (factor - 1.0) * m.components[2].weight;
        m.components[2].weight *= factor;
        m.total_weight += delta;
        return solve_normal_forces(p, m, 700.0);
    };
    const ContactForces g0 = scaled(1.0);
    const ContactForces g1 = scaled(2.0);
    const ContactForces g2 = scaled(3.0);
    CHECK(std::abs(g2.fn2 - 2.0 * g1.fn2 + g0.fn2) < 1e-9);
}

TEST_CASE("gravity without clamping separates a contact") {
    const MechanismParams p = defaults::mechanism().zero_separation();
    const Configuration c = solve_configuration(p);
    const ContactForces f = solve_normal_forces(p, default_layout().resolve(p, c), 0.0);
    CHECK(f.separation);
}

TEST_CASE("sweep rows normalize and match the single solve") {
    const MechanismParams p = defaults::mechanism();
    const SpringModel spring{defaults::kSpringStiffnessNmmPerDeg, defaults::kPreloadDeg};
    std::vector<double> ratios;
    for (int i = 0; i <= 10; ++i) {
        ratios.push_back(0.5 + 0.05 * i);
    }
    const SweepResult sweep = normal_force_sweep(p, default_layout(), spring, ratios);
    REQUIRE(sweep.rows.size() == ratios.size());
    REQUIRE(sweep.skipped.empty());
    for (const auto& row : sweep.rows) {
        CHECK(std::abs(row.share0 + row.share1 + row.share2 - 1.0) < 1e-12);
        CHECK(row.share0 == Approx(0.5).margin(1e-9));
    }

    const SweepResult single = normal_force_sweep(p, default_layout(), spring, {0.71});
    const MechanismParams p71 = p.with_link2(0.71 * p.l1);
    const Configuration c71 = solve_configuration(p71);
    const ContactForces direct = solve_normal_forces(
        p71, default_layout().resolve(p71, c71), joint_torque(spring, c71));
    REQUIRE(single.rows.size() == 1);
    CHECK(single.rows[0].fn0 == direct.fn0);
    CHECK(single.rows[0].fn1 == direct.fn1);
    CHECK(single.rows[0].fn2 == direct.fn2);
}

TEST_CASE("unreachable sweep rows are skipped, not fatal") {
    const MechanismParams p = defaults::mechanism().zero_separation();
    const SpringModel spring{defaults::kSpringStiffnessNmmPerDeg, defaults::kPreloadDeg};
    // ratio 0.05 gives L2 = 5.25 mm, far below L1 sin(alpha1)
    const SweepResult sweep = normal_force_sweep(p, default_layout(), spring, {0.05, 0.71});
    REQUIRE(sweep.rows.size() == 1);
    REQUIRE(sweep.skipped.size() == 1);
    CHECK(sweep.skipped[0].ratio == 0.05);
}

TEST_CASE("end-view moment arms match the hand derivation") {
    const MechanismParams base = defaults::mechanism().zero_separation();
    const EndView ev_base = end_view(base, solve_configuration(base));
    CHECK(ev_base.arm_n0 == 0.0);
    CHECK(ev_base.arm_n1 == Approx(98.03230492488119).epsilon(1e-12));
    CHECK(ev_base.arm_n2 == Approx(-64.8870773643326).epsilon(1e-12));

    const MechanismParams proto = defaults::mechanism();
    const EndView ev_proto = end_view(proto, solve_configuration(proto));
    CHECK(ev_proto.arm_n0 == Approx(-33.02616799011878).epsilon(1e-12));
    CHECK(ev_proto.arm_n1 == Approx(104.95906557449865).epsilon(1e-12));
}

TEST_CASE("whole-body moment equilibrium about the joint") {
    // adding the two subsystem balances cancels the internal joint torque:
    // the external loads alone must balance about O
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> offset(0.0, 20.0);
    std::uniform_real_distribution<double> weight(0.0, 3.0);
    std::uniform_real_distribution<double> pos(-60.0, 60.0);
    std::uniform_real_distribution<double> torque(100.0, 2500.0);
    int solved = 0;
    while (solved < 100) {
        MechanismParams p = defaults::mechanism();
        p.a = offset(rng);
        p.b = offset(rng);
        p.n = offset(rng);
        MassModel masses;
        for (int k = 0; k < 5; ++k) {
            const double w = weight(rng);
            masses.components.push_back({k, w, {pos(rng), pos(rng)}});
            masses.total_weight += w;
        }
        ContactForces f;
        try {
            f = solve_normal_forces(p, masses, torque(rng));
        } catch (const ModelError&) {
            continue;
        }
        ++solved;
        double total_moment = f.arm_n0 * f.fn0 + f.arm_n1 * f.fn1 + f.arm_n2 * f.fn2;
        for (double mg : f.gravity_moments) {
            total_moment += mg;
        }
        CHECK(std::abs(total_moment) < 1e-8);
    }
}

TEST_CASE("omni wheels land on the wall line") {
    // structural identity of the end view: the link-1 wheel center sits on
    // the omni centerline for any reachable design
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> offset(0.0, 20.0);
    for (int i = 0; i < 50; ++i) {
        MechanismParams p = defaults::mechanism();
        p.a = offset(rng);
        p.b = offset(rng);
        p.n = offset(rng);
        Configuration c;
        try {
            c = solve_configuration(p);
        } catch (const ModelError&) {
            continue;
        }
        if (c.alpha == 0.0) {
            continue;  // clamped configurations sit at the wall-contact boundary
        }
        const EndView ev = end_view(p, c);
        CHECK(ev.joint_height + ev.omni1_center.y() == Approx(ev.omni_line).margin(1e-9));
    }
}

TEST_CASE("mass model validation") {
    MassModel m;
    m.components.push_back({0, 1.0, {0.0, 0.0}});
    m.total_weight = 2.0;
    CHECK_THROWS_AS(m.validate(), ValidationError);

    m.total_weight = 1.0;
    m.components.push_back({0, 0.0, {0.0, 0.0}});
    CHECK_THROWS_AS(m.validate(), ValidationError);

    MassModel bad_index;
    bad_index.components.push_back({7, 1.0, {0.0, 0.0}});
    bad_index.total_weight = 1.0;
    CHECK_THROWS_AS(bad_index.validate(), ValidationError);
}

TEST_CASE("default layout resolves onto the arms") {
    const MechanismParams p = defaults::mechanism().zero_separation();
    const Configuration c = solve_configuration(p);
    const MassModel m = default_layout().resolve(p, c);
    REQUIRE(m.components.size() == 5);
    double sum = 0.0;
    for (const auto& comp : m.components) {
        sum += comp.weight;
        CHECK(comp.position.y() < 0.0);  // every centroid hangs below the joint
    }
    CHECK(sum == Approx(m.total_weight).margin(1e-9));
}
