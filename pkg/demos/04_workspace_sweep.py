"""
Workspace of one finger over a family of rolls
==============================================

Sweep rolls from -10 to +10 degrees in 1 degree steps and collect every
accepted configuration. The cloud of joint positions sketches the part of
the workspace the finger uses.
"""

import numpy as np

from handplan.sampler import SamplerConfig, rolling_family, workspace_sweep
from handplan.scenario_file import parse_scenario
from handplan.scenarios import build_scenario

scene, _ = build_scenario(parse_scenario("builtin:circle_roll"))
finger = scene.fingers[0]
tasks = rolling_family(10, 1)
cloud = workspace_sweep(finger, scene.object0, tasks, SamplerConfig(seed=3))

print(f"{len(tasks)} rolls, {len(cloud)} configurations, {len(cloud.errors)} failed rolls")
q3 = np.array([[s.joints[2].x, s.joints[2].y] for _, s in cloud.entries])
print("distal joint bounding box:", q3.min(axis=0).round(3), q3.max(axis=0).round(3))
per_task = np.bincount([k for k, _ in cloud.entries], minlength=len(tasks))
print("configurations per roll:", per_task.tolist())
