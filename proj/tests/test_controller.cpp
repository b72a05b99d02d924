#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "demoswarm/controller.hpp"
#include "demoswarm/io.hpp"

using namespace demoswarm;
using doctest::Approx;

namespace {

Rm11Reading gray_reading() { return Rm11Reading{}; }

Rm11Reading floor_reading(FloorColor c) {
    Rm11Reading r;
    r.ground = {c, c, c};
    return r;
}

PfsmController two_state(ConditionInstance cond) {
    PfsmController c;
    c.states.push_back({BehaviorInstance{BehaviorKind::stop}, {Transition{cond, 1}}});
    c.states.push_back({BehaviorInstance{BehaviorKind::exploration, 10, 0.0}, {}});
    return c;
}

}  // namespace

TEST_CASE("stop controller never moves") {
    const PfsmController c = PfsmController::stop();
    CHECK(c.valid());
    Rng rng(1);
    ControllerRuntime rt = ControllerRuntime::start(c);
    Rm11Reading r;
    r.proximity.fill(0.9);
    r.neighbor_count = 4;
    r.neighbor_vector = {0.3, 0.1};
    for (int i = 0; i < 50; ++i) {
        const StepResult s = controller_step(c, rt, r, SimParams{}, rng);
        CHECK(s.wheels.left == 0.0);
        CHECK(s.wheels.right == 0.0);
        CHECK(s.runtime.current_state == 0);
        rt = s.runtime;
    }
}

TEST_CASE("fixed probability 1 always fires") {
    PfsmController c;
    const ConditionInstance always{ConditionKind::fixed_probability, 1.0, 0, 0.0};
    c.states.push_back({BehaviorInstance{BehaviorKind::stop}, {Transition{always, 1}}});
    c.states.push_back({BehaviorInstance{BehaviorKind::stop}, {Transition{always, 0}}});
    REQUIRE(c.valid());
    Rng rng(2);
    ControllerRuntime rt = ControllerRuntime::start(c);
    for (int i = 0; i < 100; ++i) {
        const StepResult s = controller_step(c, rt, gray_reading(), SimParams{}, rng);
        CHECK(s.runtime.current_state != rt.current_state);
        rt = s.runtime;
    }
}

TEST_CASE("floor conditions need their colour") {
    const PfsmController c = two_state({ConditionKind::black_floor, 1.0, 0, 0.0});
    Rng rng(3);
    for (int i = 0; i < 100; ++i)
        CHECK(controller_step(c, ControllerRuntime::start(c), gray_reading(), SimParams{}, rng).runtime.current_state ==
              0);
    CHECK(controller_step(c, ControllerRuntime::start(c), floor_reading(FloorColor::black), SimParams{}, rng)
              .runtime.current_state == 1);
    // majority vote of the ground sensors
    Rm11Reading mixed;
    mixed.ground = {FloorColor::black, FloorColor::gray, FloorColor::black};
    CHECK(mixed.floor() == FloorColor::black);
    mixed.ground = {FloorColor::black, FloorColor::gray, FloorColor::white};
    CHECK(mixed.floor() == FloorColor::gray);
}

TEST_CASE("neighbour-count logistic") {
    const ConditionInstance c{ConditionKind::neighbor_count, 0.0, 3, 2.0};
    const ConditionInstance inv{ConditionKind::inverted_neighbor_count, 0.0, 3, 2.0};
    Rm11Reading r;
    for (int n = 0; n <= 8; ++n) {
        r.neighbor_count = n;
        const double z = 1.0 / (1.0 + std::exp(2.0 * (3.0 - n)));
        CHECK(c.firing_probability(r) == Approx(z));
        CHECK(inv.firing_probability(r) == Approx(1.0 - z));
    }
    r.neighbor_count = 3;
    CHECK(c.firing_probability(r) == Approx(0.5));
}

TEST_CASE("first firing condition wins") {
    PfsmController c;
    const ConditionInstance always{ConditionKind::fixed_probability, 1.0, 0, 0.0};
    c.states.push_back({BehaviorInstance{BehaviorKind::stop}, {Transition{always, 2}, Transition{always, 1}}});
    c.states.push_back({BehaviorInstance{BehaviorKind::stop}, {}});
    c.states.push_back({BehaviorInstance{BehaviorKind::stop}, {}});
    Rng rng(4);
    CHECK(controller_step(c, ControllerRuntime::start(c), gray_reading(), SimParams{}, rng).runtime.current_state == 2);
}

TEST_CASE("behaviours steer the expected way") {
    const SimParams p;
    Rng rng(5);
    auto run = [&](BehaviorInstance b, const Rm11Reading& r) {
        PfsmController c;
        c.states.push_back({b, {}});
        return controller_step(c, ControllerRuntime::start(c), r, p, rng).wheels;
    };
    // exploration with a clear front drives straight at full speed
    const WheelSpeeds e = run({BehaviorKind::exploration, 5, 0.0}, gray_reading());
    CHECK(e.left == p.v_max);
    CHECK(e.right == p.v_max);

    Rm11Reading lit;
    lit.light[2] = 0.8;  // light to the left
    const WheelSpeeds photo = run({BehaviorKind::phototaxis}, lit);
    CHECK(photo.right > photo.left);
    const WheelSpeeds anti = run({BehaviorKind::anti_phototaxis}, lit);
    CHECK(anti.right < anti.left);

    Rm11Reading crowd;
    crowd.neighbor_count = 3;
    crowd.neighbor_vector = {0.0, -0.4};  // peers to the right
    const WheelSpeeds attract = run({BehaviorKind::attraction, 0, 3.0}, crowd);
    CHECK(attract.left > attract.right);
    const WheelSpeeds repel = run({BehaviorKind::repulsion, 0, 3.0}, crowd);
    CHECK(repel.left < repel.right);
}

TEST_CASE("exploration turns for at most tau steps after a front obstacle") {
    PfsmController c;
    c.states.push_back({BehaviorInstance{BehaviorKind::exploration, 7, 0.0}, {}});
    Rm11Reading blocked;
    blocked.proximity[0] = 0.9;
    Rng rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        ControllerRuntime rt = ControllerRuntime::start(c);
        StepResult s = controller_step(c, rt, blocked, SimParams{}, rng);
        CHECK(s.wheels.left == -s.wheels.right);
        int turning = 1;
        rt = s.runtime;
        while (rt.turn_countdown > 0) {
            s = controller_step(c, rt, gray_reading(), SimParams{}, rng);
            CHECK(s.wheels.left == -s.wheels.right);
            rt = s.runtime;
            ++turning;
        }
        CHECK(turning <= 7);
        s = controller_step(c, rt, gray_reading(), SimParams{}, rng);
        CHECK(s.wheels.left == s.wheels.right);
    }
}

TEST_CASE("actuation stays bounded for random controllers and readings") {
    Rng rng(7);
    const SimParams p;
    for (int i = 0; i < 300; ++i) {
        const PfsmController c = random_controller(rng);
        ControllerRuntime rt = ControllerRuntime::start(c);
        for (int step = 0; step < 20; ++step) {
            Rm11Reading r;
            for (double& v : r.proximity) v = rng.bernoulli(0.3) ? rng.uniform() : 0.0;
            for (double& v : r.light) v = rng.uniform();
            for (auto& g : r.ground) g = static_cast<FloorColor>(rng.uniform_int(0, 2));
            r.neighbor_count = static_cast<int>(rng.uniform_int(0, 12));
            if (r.neighbor_count > 0) r.neighbor_vector = unit(rng.uniform(-3, 3)) * rng.uniform();
            const StepResult s = controller_step(c, rt, r, p, rng);
            CHECK(std::abs(s.wheels.left) <= p.v_max);
            CHECK(std::abs(s.wheels.right) <= p.v_max);
            CHECK(s.runtime.current_state < c.states.size());
            rt = s.runtime;
        }
    }
}

TEST_CASE("controller_step is deterministic in the rng state") {
    Rng seed_rng(8);
    const PfsmController c = random_controller(seed_rng);
    Rm11Reading r;
    r.proximity[1] = 0.5;
    r.neighbor_count = 2;
    r.neighbor_vector = {0.2, 0.1};
    Rng a(77), b(77);
    ControllerRuntime ra = ControllerRuntime::start(c), rb = ra;
    for (int i = 0; i < 100; ++i) {
        const StepResult x = controller_step(c, ra, r, SimParams{}, a);
        const StepResult y = controller_step(c, rb, r, SimParams{}, b);
        CHECK(x.wheels.left == y.wheels.left);
        CHECK(x.wheels.right == y.wheels.right);
        CHECK(x.runtime == y.runtime);
        ra = x.runtime;
        rb = y.runtime;
    }
}

TEST_CASE("random_controller: validity, diversity, determinism") {
    std::set<std::string> distinct;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const PfsmController c = random_controller(rng);
        CHECK(c.valid());
        distinct.insert(io::controller_to_json(c).dump());
        Rng again(seed);
        CHECK(random_controller(again) == c);
    }
    CHECK(distinct.size() >= 95);
}

TEST_CASE("validation catches every invariant") {
    PfsmController empty;
    CHECK_FALSE(empty.valid());
    PfsmController self = two_state({ConditionKind::fixed_probability, 0.5, 0, 0.0});
    self.states[0].transitions[0].target = 0;
    CHECK_FALSE(self.valid());
    PfsmController dangling = two_state({ConditionKind::fixed_probability, 0.5, 0, 0.0});
    dangling.states[0].transitions[0].target = 5;
    CHECK_FALSE(dangling.valid());
    PfsmController beta = two_state({ConditionKind::fixed_probability, 1.5, 0, 0.0});
    CHECK_FALSE(beta.valid());
    PfsmController tau = two_state({ConditionKind::fixed_probability, 0.5, 0, 0.0});
    tau.states[1].behavior.turn_steps = 0;
    CHECK_FALSE(tau.valid());
    PfsmController init = PfsmController::stop();
    init.initial_state = 1;
    CHECK_FALSE(init.valid());
    PfsmController big;
    for (int i = 0; i < 5; ++i) big.states.push_back({BehaviorInstance{BehaviorKind::stop}, {}});
    CHECK_FALSE(big.valid());
}

TEST_CASE("mutate: closure and single edits") {
    Rng rng(9);
    PfsmController c = random_controller(rng);
    for (int i = 0; i < 1000; ++i) {
        const PfsmController m = mutate(c, rng);
        REQUIRE(m.valid());
        c = m;
    }

    const PfsmController lone = PfsmController::stop();
    const auto kinds = applicable_mutations(lone);
    CHECK(std::find(kinds.begin(), kinds.end(), MutationKind::remove_state) == kinds.end());
    CHECK(std::find(kinds.begin(), kinds.end(), MutationKind::remove_transition) == kinds.end());
    for (int i = 0; i < 200; ++i) {
        const PfsmController m = mutate(lone, rng);
        CHECK(m.valid());
        CHECK(m.states.size() >= 1);
    }
}

TEST_CASE("mutate: perturbing beta = 1 stays within [0.9, 1]") {
    PfsmController c;
    c.states.push_back({BehaviorInstance{BehaviorKind::stop}, {Transition{{ConditionKind::fixed_probability, 1.0, 0, 0.0}, 1}}});
    c.states.push_back({BehaviorInstance{BehaviorKind::stop}, {}});
    Rng rng(10);
    int beta_edits = 0;
    for (int i = 0; i < 500; ++i) {
        const PfsmController m = mutate(c, MutationKind::perturb_parameter, rng);
        const double beta = m.states[0].transitions[0].condition.probability;
        if (beta != 1.0) {
            ++beta_edits;
            CHECK(beta >= 0.9 - 1e-12);
            CHECK(beta <= 1.0);
        }
    }
    CHECK(beta_edits > 0);
}

TEST_CASE("a three-state controller with room admits all eight edits") {
    PfsmController c;
    const ConditionInstance cond{ConditionKind::fixed_probability, 0.5, 0, 0.0};
    c.states.push_back({BehaviorInstance{BehaviorKind::exploration, 10, 0.0}, {Transition{cond, 1}}});
    c.states.push_back({BehaviorInstance{BehaviorKind::attraction, 0, 2.0}, {Transition{cond, 2}}});
    c.states.push_back({BehaviorInstance{BehaviorKind::stop}, {}});
    CHECK(applicable_mutations(c).size() == 8);
    // with two states a transition has nowhere else to point
    c.states.pop_back();
    c.states[1].transitions[0].target = 0;
    const auto two = applicable_mutations(c);
    CHECK(two.size() == 7);
    CHECK(std::find(two.begin(), two.end(), MutationKind::retarget_transition) == two.end());
}

TEST_CASE("controller JSON round trip") {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const PfsmController c = random_controller(rng);
        const auto j = io::controller_to_json(c);
        CHECK(io::controller_from_json(nlohmann::json::parse(j.dump())) == c);
    }
}
