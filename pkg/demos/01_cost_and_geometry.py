"""
The motion cost of a single finger
==================================

A finger move is scored by how far its two distal joints travel compared
with the demanded object motion. The score has a closed form, and it is
cross-checked here against adaptive quadrature.
"""

import numpy as np

from handplan.cost import CostInput, accepts, cost_array, cost_closed_form, cost_quadrature
from handplan.geometry import Vec2, chord_angle, signed_turn

# One unit of object motion. Joint displacements e2 = 1 and e3 = 1 / (e - 1)
# land exactly on the target value of 1.
inp = CostInput(delta_norm=1.0, e3=1 / (np.e - 1), e2=1.0)
print("closed form  ", cost_closed_form(inp))
print("quadrature   ", cost_quadrature(inp))
print("accepted?    ", accepts(inp))

# Scanning e3 shows how narrow the acceptance band is.
e3 = np.linspace(0.4, 0.8, 9)
f = cost_array(1.0, e3, 1.0)
for a, b in zip(e3, f):
    mark = "*" if abs(b - 1) <= 0.05 else " "
    print(f"  e3 = {a:4.2f}  f = {b:6.4f} {mark}")

# Joint angles come from chords. A chord of length r * sqrt(2) on a circle
# of radius r subtends a right angle.
print("chord angle  ", np.degrees(chord_angle(np.sqrt(2), 1.0)))
print("signed turn  ", np.degrees(signed_turn(Vec2(1, 0), Vec2(0, -1))))
