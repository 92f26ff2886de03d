"""Subset construction: what the observer can know after each event.

Loads the two four-class fixtures.  In q1 the estimator resolves every
observation to a single class; in q2 the faulty part mimics the healthy
observable pattern and the estimator stays ambiguous forever.
"""

from pathlib import Path

from hydiag import build_estimator, load_model

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

for name in ("q1", "q2"):
    model = load_model(FIXTURES / f"{name}.quot.json")
    est = build_estimator(model)
    print(f"--- {name}: {len(est.states)} reachable estimates")
    for sid, state in enumerate(est.states):
        print(f"  state {sid}: members {set(state.members)} [{state.classification.value}]")
    for (src, action, obs), dst in sorted(est.transitions.items()):
        print(f"  {src} --{action}, o{obs}--> {dst}")
