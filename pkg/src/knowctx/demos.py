"""Built-in interferometer scenarios.

All five share the same amplitude data: an even split c = (s, s) with
s = 1/sqrt(2) onto two mirrors, then orthonormal transition rows
(s, is) and (s, -is) into two detectors.  What varies is purely
epistemic: which layers can be known, and which events actually happen.

mz-a            both layers knowable and observed; classical chaining.
mz-b            the mirror layer can never be known; interference.
mz-c            the detector layer can never be known; the final
                distribution is a propensity vector, not a probability.
delayed-choice  the mirror layer stays merely attainable (level 2)
                while the detector fires; classical chaining, because
                the path record still exists.
eraser          the mirror layer is attained at level 2, then erased to
                level 1 before detection; interference is restored.

Scenarios are stored in the file-format dict shape and parsed through
the ordinary loader, so exporting a demo and re-running the file is the
identity.
"""

from __future__ import annotations

import math

_S = math.sqrt(0.5)

_FIRST = [[_S, 0.0], [_S, 0.0]]
_ROWS = [
    [[_S, 0.0], [0.0, _S]],
    [[_S, 0.0], [0.0, -_S]],
]


def _scenario(name, level_a, level_a_prime, events):
    return {
        "name": name,
        "layers": [
            {"size": 2, "knowability": level_a},
            {"size": 2, "knowability": level_a_prime},
        ],
        "first_layer": _FIRST,
        "transitions": [_ROWS],
        "events": events,
    }


DEMOS: dict[str, dict] = {
    "mz-a": _scenario(
        "mz-a", 3, 3,
        [
            {"n": 0, "kind": "observe", "layer": 0, "outcome": 0},
            {"n": 1, "kind": "observe", "layer": 1, "outcome": 0},
        ],
    ),
    "mz-b": _scenario(
        "mz-b", 1, 3,
        [
            {"n": 0, "kind": "attain", "layer": 0},
            {"n": 1, "kind": "observe", "layer": 1, "outcome": 0},
        ],
    ),
    "mz-c": _scenario(
        "mz-c", 3, 1,
        [
            {"n": 0, "kind": "observe", "layer": 0, "outcome": 0},
            {"n": 1, "kind": "attain", "layer": 1},
        ],
    ),
    "delayed-choice": _scenario(
        "delayed-choice", 2, 3,
        [
            {"n": 0, "kind": "attain", "layer": 0},
            {"n": 1, "kind": "observe", "layer": 1, "outcome": 0},
        ],
    ),
    "eraser": _scenario(
        "eraser", 2, 3,
        [
            {"n": 0, "kind": "attain", "layer": 0},
            {"n": 1, "kind": "erase", "layer": 0},
            {"n": 2, "kind": "observe", "layer": 1, "outcome": 0},
        ],
    ),
}
