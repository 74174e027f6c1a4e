#!/usr/bin/env python3
"""Regenerate tests/fixtures/pinned_moments.json from the enumeration oracle.

The suite fails if a fresh regeneration disagrees with the committed file,
so no multi-term expected value ever enters the tests by hand.
"""

import json
import pathlib
import sys
from fractions import Fraction

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from gibbsback import (  # noqa: E402
    dirichlet,
    enumerate_continuations,
    oracle_incomplete_moment,
    oracle_moment,
    pitman_yor,
)

PRIORS = {
    "py_1/2_1": lambda: pitman_yor(Fraction(1, 2), Fraction(1)),
    "py_1/3_2": lambda: pitman_yor(Fraction(1, 3), Fraction(2)),
    "py_-1/2_5/2": lambda: pitman_yor(Fraction(-1, 2), Fraction(5, 2)),
    "dirichlet_1": lambda: dirichlet(Fraction(1)),
    "dirichlet_5": lambda: dirichlet(Fraction(5)),
}

# (name, prior key, kind, args)
CASES = [
    # the two spec-level pinned regression constants
    ("py_half_1__n3_j2__m2__rm_r2__incomplete", "py_1/2_1",
     "incomplete", dict(n=3, j=2, m=2, target="rm", l=None, r=2)),
    ("dirichlet_1__n3_j2__m2_l1__incomplete_r1", "dirichlet_1",
     "incomplete", dict(n=3, j=2, m=2, target="rl", l=1, r=1)),
    ("dirichlet_1__n3_j2__m2_l1__incomplete_r2", "dirichlet_1",
     "incomplete", dict(n=3, j=2, m=2, target="rl", l=1, r=2)),
    ("py_half_1__n3_j2__m1_l0_r1__incomplete", "py_1/2_1",
     "incomplete", dict(n=3, j=2, m=1, target="rl", l=0, r=1)),
    # extra breadth
    ("py_third_2__n4_j2__m3_l2_r1__incomplete", "py_1/3_2",
     "incomplete", dict(n=4, j=2, m=3, target="rl", l=2, r=1)),
    ("fisher__n4_j3__m2_l0_r2__incomplete", "py_-1/2_5/2",
     "incomplete", dict(n=4, j=3, m=2, target="rl", l=0, r=2)),
    ("dirichlet_5__mults_2_1_1__m2__rm_r2__complete", "dirichlet_5",
     "complete", dict(mults=(2, 1, 1), m=2, target="rm", l=None, r=2)),
    ("py_half_1__mults_3_1__m2_l1_r2__complete", "py_1/2_1",
     "complete", dict(mults=(3, 1), m=2, target="rl", l=1, r=2)),
]


def generate() -> dict:
    pinned = {}
    for name, prior_key, kind, spec in CASES:
        prior = PRIORS[prior_key]()
        if kind == "complete":
            outs = enumerate_continuations(prior, spec["mults"], spec["m"])
            value = oracle_moment(outs, spec["target"], spec["l"], spec["r"])
        else:
            value = oracle_incomplete_moment(
                prior, spec["n"], spec["j"], spec["m"],
                spec["target"], spec["l"], spec["r"],
            )
        entry = {"prior": prior_key, "kind": kind, "value": str(value)}
        entry.update(
            {k: (list(v) if isinstance(v, tuple) else v) for k, v in spec.items()}
        )
        pinned[name] = entry
    return pinned


def main() -> int:
    out = pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    path = out / "pinned_moments.json"
    path.write_text(json.dumps(generate(), indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
