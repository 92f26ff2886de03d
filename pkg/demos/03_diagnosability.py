"""Deciding diagnosability, with witnesses you can replay.

Also shows the subtle case that motivates the fault-product check: an
estimator can have a loop of ambiguous states that still proves nothing,
because no single faulty run manages to stay on the loop forever.
"""

from pathlib import Path

from hydiag import (
    ActionLabel,
    ClassInfo,
    Kind,
    QuotientModel,
    brute_force_diagnosable,
    build_estimator,
    check_diagnosable,
    check_progressive,
    detection_delay_bound,
    load_model,
    replay_lasso,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

for name in ("q1", "q2"):
    model = load_model(FIXTURES / f"{name}.quot.json")
    print(f"--- {name}")
    print("progressive:", check_progressive(model).progressive)
    est = build_estimator(model)
    verdict = check_diagnosable(est)
    if verdict.diagnosable:
        print("diagnosable, detection delay bound:", detection_delay_bound(est))
    else:
        print("not diagnosable; witness lasso:")
        print("  prefix:", verdict.witness.prefix.pretty())
        print("  cycle: ", verdict.witness.cycle.pretty())
        print("  replays:", replay_lasso(est, verdict.witness))

# A loop of ambiguous estimates is not enough by itself.  Here the faulty
# branch can copy the healthy self-loop for one step only, after which its
# observables betray it -- so the system is diagnosable even though the
# estimator has an indeterminate self-loop.
e0, e1 = ActionLabel("e0", Kind.EXTERNAL), ActionLabel("e1", Kind.EXTERNAL)
tricky = QuotientModel(
    classes=[
        ClassInfo(0, False, True, 0),
        ClassInfo(1, True, False, 0),
        ClassInfo(2, True, False, 0),
        ClassInfo(3, True, False, 1),
        ClassInfo(4, True, False, 0),
    ],
    actions=[e0, e1, ActionLabel("f", Kind.FAULT)],
    edges=[
        (0, "e1", 0), (0, "f", 3),
        (1, "e0", 4), (2, "e1", 3),
        (3, "e0", 1), (3, "e1", 1), (3, "e1", 2), (3, "e1", 3),
        (4, "e0", 1), (4, "e0", 3), (4, "e1", 1), (4, "e1", 2), (4, "e1", 4),
    ],
    time=[(3, 2), (4, 1)],
)
print("--- tricky (ambiguous loop, but unsustainable)")
est = build_estimator(tricky)
loops = [
    (src, est.states[src].members)
    for (src, _, _), dst in est.transitions.items()
    if src == dst and est.states[src].classification.value == "indeterminate"
]
print("indeterminate self-loops in the estimator:", loops)
print("check_diagnosable:", check_diagnosable(est).diagnosable)
print("twin-plant oracle:", brute_force_diagnosable(tricky).diagnosable)
