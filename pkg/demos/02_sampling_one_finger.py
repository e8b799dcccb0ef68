"""
Sampling configurations for one finger
======================================

The sampler places the fingertip on its new contact, closes the chain
exactly, and keeps the configurations whose cost falls in the band. The
literal rejection scheme (joints drawn in disks) is shown for comparison.
"""

from handplan.geometry import Vec2, distance
from handplan.model import FingerChain
from handplan.sampler import SamplerConfig, Strategy, sample_finger
from handplan.errors import BudgetExhausted

finger = FingerChain.from_link_angles((0.0, 0.0), (0.0, 0.8, 1.6), (1.0, 1.0, 1.0))
target = finger.contact0 + Vec2(-0.3, 0.1)
d = distance(target, finger.contact0)

res = sample_finger(finger, target, d, SamplerConfig(target_count=20, seed=1))
print(f"manifold closure: {len(res)} configurations from {res.stats.attempts} draws")
print("  rejections:", res.stats.describe_rejections())
best = min(res, key=lambda s: abs(s.cost - 1))
print("  closest to f = 1:", [tuple(round(c, 4) for c in p) for p in best.joints], round(best.cost, 5))

# Independent draws in disks rarely hit both link lengths at once.
cfg = SamplerConfig(strategy=Strategy.PAPER_REJECTION, target_count=5, max_attempts=500_000, seed=1)
try:
    lit = sample_finger(finger, target, d, cfg)
    print(f"disk rejection: {len(lit)} configurations from {lit.stats.attempts} draws")
except BudgetExhausted as exc:
    print(f"disk rejection: only {len(exc.solutions)} configurations in {exc.stats.attempts} draws")
    print("  rejections:", exc.stats.describe_rejections())
