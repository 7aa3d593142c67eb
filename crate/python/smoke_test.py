"""Smoke test for the Python bindings. Build first: pip install --no-build-isolation -e crates/py"""
import json

import lashof

dual = lashof.SteenrodDual(2)
assert dual.bound == 8, dual
assert dual.eval("Q^2 xi1") == "xi2 + xi1^3"
assert dual.eval("Q^3 1") == "0"
checked, failures = dual.coherence()
assert checked > 0 and not failures, failures

odd = lashof.SteenrodDual(3)
assert odd.eval("b Q^1 tau0", basis="zeta") == "2 zeta1"
assert odd.eval("b Q^1 tau0") == "xi1"

assert lashof.normalize("Q^3 Q^1") == "0"
assert lashof.normalize("Q^1 Q^3") == "Q^1 Q^3"

gens = lashof.free_generators(3, [("zeta1", 4), ("taubar1", 5)], 15)
assert ("b Q^3 zeta1", 15) in gens, gens

rows = json.loads(lashof.classify(2, 6))
assert any(r["n"] == 2 and r["collapse"]["verdict"] == "COLLAPSE" for r in rows)

quartic = 'kind = "presentation"\nprime = 2\nbound = 3\ngenerators = ["xi1@1"]\nrelations = ["xi1^4"]\n'
twisted = lashof.Presentation.from_toml(quartic + 'q_values = ["(Q^2, xi1) = xi1^3"]\n')
plain = lashof.Presentation(2, 3, [("xi1", 1)], ["xi1^4"], [("Q^2", "xi1", "0")])
assert twisted.q("Q^2", "xi1") == "xi1^3"
assert lashof.isomorphisms(twisted, plain) == []
assert len(lashof.isomorphisms(twisted.without_q_data(), plain.without_q_data())) == 1

truncated = lashof.Presentation.from_dual(2, 3)
killed = truncated.kill("xi1^3 + xi2")
assert killed.poincare_series() == [1, 1, 1, 1], killed

ok, report = lashof.run_scenario("example-fp-p2")
assert ok and json.loads(report)["scenario"] == "example-fp-p2"

try:
    dual.eval("Q^2 xi1 +")
except ValueError as e:
    assert "parse error" in str(e)
else:
    raise AssertionError("expected a parse error")

print("python smoke test passed")
