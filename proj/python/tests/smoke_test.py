"""Smoke tests for the cirrt python module.

Usage: smoke_test.py <module_dir> <scenario_dir>
"""
import math
import sys

module_dir, scenario_dir = sys.argv[1], sys.argv[2]
sys.path.insert(0, module_dir)

import cirrt  # noqa: E402


def approx(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def vec(x, y, z):
    return cirrt.Vec3(x, y, z)


def rest(x, y=0.0, z=0.0):
    return cirrt.VehicleState(vec(x, y, z), vec(0, 0, 0), vec(0, 0, 0))


# minimum-jerk primitive: endpoints, classic coefficients, cost
p = cirrt.generate_primitive(rest(0), 0.0, rest(1), 1.0)
assert approx(p.a0.x, 6.0) and approx(p.a1.x, -15.0) and approx(p.a2.x, 10.0)
assert approx(cirrt.evaluate(p, 1.0, 0).x, 1.0)
assert approx(cirrt.evaluate(p, 0.0, 3).x, 60.0)
assert approx(cirrt.cost(p), 720.0)
assert cirrt.input_feasible(p)

# geometry queries
box = cirrt.AxisAlignedBox(vec(0, 0, 0), vec(1, 1, 1))
assert cirrt.contains(box, vec(0.5, 0.5, 0.5))
assert not cirrt.contains(box, vec(2, 0, 0))
plane = cirrt.separation_plane(box, vec(0.5, 0.5, 5.0))
assert approx(plane.normal.z, 1.0) and approx(plane.offset, 1.0)

# collision detection on a straight crossing
line = cirrt.generate_primitive(
    cirrt.VehicleState(vec(0, 0, 0), vec(1, 0, 0), vec(0, 0, 0)),
    0.0,
    cirrt.VehicleState(vec(2, 0, 0), vec(1, 0, 0), vec(0, 0, 0)),
    2.0,
)
slab = [cirrt.AxisAlignedBox(vec(0.9, -1, -1), vec(1.1, 1, 1))]
assert not cirrt.collision_free(line, slab)
report = cirrt.collision_time(line, slab)
assert report.hit and abs(report.time - 0.9) <= 2e-3
assert approx(report.surface_normal.x, -1.0)

# impact model with the identified constants
pre = cirrt.VehicleState(vec(0, 0, 0), vec(-2, 1, 0), vec(0, 0, 0))
post = cirrt.collision_model(pre, vec(1, 0, 0))
assert approx(post.velocity.x, 0.86)
assert approx(post.velocity.y, 0.7347935676515389, tol=1e-9)
assert post.acceleration.x == 0.0

# planning on the bundled tunnel scenario is deterministic per seed
scenario = cirrt.parse_scenario(scenario_dir + "/tunnel.scn")
assert scenario.name == "tunnel"
a = cirrt.plan(scenario, mode="inclusive", iterations=400, seed=11)
b = cirrt.plan(scenario, mode="inclusive", iterations=400, seed=11)
assert a.tree_size == b.tree_size and a.best_time == b.best_time
assert a.tree_size > 1
assert a.collision_nodes > 0

if a.solved:
    assert a.samples, "solved plans carry dense samples"
    t0 = a.samples[0]
    assert approx(t0[1], 1.0) and approx(t0[2], 2.0)  # starts at (1, 2)
    assert approx(a.samples[-1][0], a.best_time, tol=1e-6)

exclusive = cirrt.plan(scenario, mode="exclusive", iterations=400, seed=11)
assert exclusive.collision_nodes == 0

# scenario validation surfaces as ScenarioError
try:
    cirrt.parse_scenario(scenario_dir + "/does_not_exist.scn")
except Exception as e:  # noqa: BLE001 - io failure type is fine
    pass
else:
    raise AssertionError("missing scenario must raise")

print("python smoke tests passed")
