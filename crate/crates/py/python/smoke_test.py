"""Smoke test for the `stepup` extension module."""

import stepup

phi = stepup.PairColoring(3, 0b010)
assert phi.universe == 3
assert phi.color(0, 1) == "red" and phi.color(0, 2) == "blue"
assert phi.is_good_triple(0, 1, 2)
assert stepup.PairColoring.parse(phi.to_text()) == phi
assert stepup.verify_phi(phi, 3) is None
assert stepup.verify_phi(stepup.PairColoring(3), 3) == [0, 1, 2]

assert stepup.delta(0, 5) == 2
assert stepup.delta_profile([0, 1, 3, 7]) == [0, 1, 2]

h = stepup.Hypergraph(3, phi)
assert h.vertex_count == 8
assert h.edge([0, 1, 3, 7]) == "I"
assert h.find_k5() is None
alpha, witness = h.alpha()
assert len(witness) == alpha and h.is_independent(witness)

mono = stepup.Hypergraph(4, stepup.PairColoring(4))
assert len(mono.edges()) == 240

found = stepup.search_phi(12, 6, 3000, 1)
assert found is not None and stepup.verify_phi(found, 6) is None
g = stepup.Hypergraph(12, found)
q = list(range(0, 4096, 3))
res = g.extract(q, 6, factor=3)
assert res is not None and set(res["quad"]) <= set(q)
assert g.edge(list(res["quad"])) == res["rule"]
assert res["trace"].splitlines()[-1].startswith("EDGE ")
assert g.extract([0, 1, 2, 3, 4, 5], 6, factor=3) is None

assert len(stepup.steiner(7)) == 7
b = stepup.bound(3, 0.55)
assert b["domain"] == 3 and b["feasible"]

code, out, _ = stepup.cli(["steiner", "--n", "7"])
assert code == 0 and "count=7" in out

try:
    stepup.delta(4, 4)
except ValueError:
    pass
else:
    raise AssertionError("equal vertices must raise")

print("smoke test passed")
