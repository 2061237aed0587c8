"""Worst-case social cost ratios: Shapley tracks H_n, the Sybil-proof rule
pays (n+1)/2, and an all-or-none rule is far worse."""
from sybilshare import CostFunction, Grid, harmonic, worst_case_ratio
from sybilshare.welfare import nonexcludable_witness, optimal_allocation, run_all_or_none, social_cost

unit = CostFunction.constant(1.0)
grid = Grid(step=0.1, max_value=1.0)

print(" n   shapley     H_n    osp    (n+1)/2   all-or-none")
for n in range(2, 7):
    shap = worst_case_ratio("shapley", unit, n, grid)
    osp = worst_case_ratio("osp", unit, n, grid)
    v = nonexcludable_witness(n, 1e-3)
    base = social_cost(unit, run_all_or_none(v).winners, v) / optimal_allocation(unit, v)[1]
    print(f"{n:2d}  {shap.ratio:8.5f}  {harmonic(n):6.4f}  {osp.ratio:6.4f}  {(n + 1) / 2:6.2f}   {base:8.4f}")

wc = worst_case_ratio("shapley", unit, 5, grid)
print("\nShapley worst profile at n=5:", [round(x, 6) for x in wc.witness])
wc = worst_case_ratio("osp", unit, 5, grid)
print("Sybil-proof worst profile at n=5:", [round(x, 6) for x in wc.witness])
