"""A tour of the five mechanisms on a few small bid vectors."""
from sybilshare import CostFunction, run_mechanism
from sybilshare.core import format_money

unit = CostFunction.constant(1.0)
concave = CostFunction.concave([0, 1, 1.5, 1.8, 2.0])

profiles = [
    (1.5, 0.6, 0.2),
    (0.9, 0.6, 0.55),
    (0.4, 0.35, 0.3),
    (2.0, 2.0),
]

for bids in profiles:
    print(f"bids {bids}")
    for mech in ("vcg", "shapley", "potential", "osp", "hybrid"):
        out = run_mechanism(mech, bids, unit)
        pays = ", ".join(format_money(p) for p in out.payments)
        print(f"  {mech:<10} winners {sorted(out.winners)}  payments [{pays}]  total {format_money(out.total_payment())}")
    print()

# Shapley and the hybrid rule also accept concave costs.
bids = (0.9, 0.8, 0.62, 0.3)
print(f"bids {bids} under f = {list(concave.table)}")
for mech in ("shapley", "hybrid"):
    out = run_mechanism(mech, bids, concave)
    print(f"  {mech:<10} winners {sorted(out.winners)}  payments [{', '.join(format_money(p) for p in out.payments)}]")

# The hybrid pruning threshold keeps C(S*) fixed while the set shrinks.
# Re-measuring the share on the shrinking set keeps more bidders here.
from sybilshare import run_hybrid

out = run_hybrid(bids, concave, rule="shrinking")
print(f"  {'shrinking':<10} winners {sorted(out.winners)}  payments [{', '.join(format_money(p) for p in out.payments)}]")
