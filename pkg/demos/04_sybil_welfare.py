"""Sybil identities can raise an agent's utility under Shapley, yet among
undominated strategies they never raise the social cost."""
from sybilshare import CostFunction, best_response, canonical_z, check_swi_shapley, enumerate_B
from sybilshare.mechanisms import run_shapley
from sybilshare.welfare import social_cost, sybil_social_cost

unit = CostFunction.constant(1.0)
e = 0.01
v = (1 + e, 1 / 3 - e, 1 / 3 - e)

strategy, utility = best_response("shapley", unit, v[0], [(v[1],), (v[2],)], 0.05, 3)
print(f"best response of the high agent: {strategy} with utility {utility:.4f}")

truthful = social_cost(unit, run_shapley(v, unit).winners, v)
sybil = sybil_social_cost(unit, v, [strategy, (v[1],), (v[2],)], "shapley")
print(f"social cost truthful {truthful:.4f}, with the split {sybil:.4f}")

print("\nundominated lists for v=1 with step 0.25:", enumerate_B(1.0, unit, 0.25, 3).strategies)
print("canonical form of (2, 0.6, 0.6) for v=1:", canonical_z([2, 0.6, 0.6], 1.0, unit))

for C in (unit, CostFunction.concave([0, 1, 1.4, 1.7, 1.9])):
    rep = check_swi_shapley(C, v, 0.05, 3)
    print(f"\n{C.kind} cost: {rep.verdict} over {rep.cases_examined} strategy profiles")
    for note in rep.notes:
        print("  note:", note)
