"""Fake identities break VCG, Shapley and the potential mechanism, but not
the optimal Sybil-proof rule."""
from sybilshare import CostFunction, Grid, check_sybil_proof, run_sybil_extension
from sybilshare.sybil import agent_utility

unit = CostFunction.constant(1.0)


def compare(mech, values, reports, agent=0):
    truthful = run_sybil_extension(mech, unit, [[v] for v in values])
    lying = run_sybil_extension(mech, unit, reports)
    u0 = agent_utility(values[agent], truthful, agent)
    u1 = agent_utility(values[agent], lying, agent)
    print(f"{mech:<10} values {[round(v, 4) for v in values]}")
    print(f"           truthful utility {u0:.6f}, with identities {reports[agent]} -> {u1:.6f}")


# Two agents worth 1/3 each: nobody is served.  One agent adds two rich
# identities; every identity pays zero and both agents get the good.
compare("vcg", (1 / 3, 1 / 3), [[1 / 3, 1.0, 1.0], [1 / 3]])

# A high-value agent pays the full cost alone, or splits into two quarter
# bids and shares it four ways.
e = 0.01
compare("shapley", (1 + e, 1 / 3 - e, 1 / 3 - e), [[0.25, 0.25], [1 / 3 - e], [1 / 3 - e]])

# Duplicating the top bid pulls every low bidder in; each copy pays 1/5 + 3e.
e = 0.001
v = [1 + e, 1 / 2 - e, 1 / 3 - e, 1 / 4 - e]
compare("potential", v, [[1 + e, 1 + e]] + [[x] for x in v[1:]])
out = run_sybil_extension("potential", unit, [[1 + e, 1 + e]] + [[x] for x in v[1:]])
print(f"           identity payments {[round(p, 6) for p in out.outcome.payments[:2]]}")
print()

# Exhaustive search on a coarse grid finds the same kind of deviation for the
# first three and nothing for the optimal Sybil-proof rule.
grid = Grid(step=0.1, max_value=1.2, max_sybils=3, max_agents=3)
for mech in ("vcg", "shapley", "potential", "osp"):
    rep = check_sybil_proof(mech, unit, grid)
    if rep.passed:
        print(f"{mech:<10} pass after {rep.cases_examined} deviations")
    else:
        w = rep.witness
        print(f"{mech:<10} violated: values {w['valuations']}, reports {w['reports']}, gain {w['gain']:.4f}")
