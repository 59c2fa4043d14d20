"""Recursion specifications, the text grammar that describes them, and named presets.

Two families are supported:

* ``Homogeneous``: T(n) = sum_p T(n - a_p - T(n - b_p)), written
  ``homog:a1,b1,...,ak,bk;ic=v1,...,vr``
* ``ConwayFamily``: A(n) = A(n - A^k(n-1)) + A(A^k(n-1)), written
  ``conway:k;ic=v1,...,vr``

Presets (case-insensitive): conolly, conway, q, v, mu, newman:r, grytczuk:k.
A JSON object ``{"family": "homog"|"conway", "params": [...], "k": int,
"ic": [...]}`` is accepted as well.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Union

from metafib.errors import ArityError, SpecParseError, SpecValidationError


@dataclass(frozen=True)
class Homogeneous:
    params: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class ConwayFamily:
    k: int


Family = Union[Homogeneous, ConwayFamily]


@dataclass(frozen=True)
class RecursionSpec:
    family: Family
    initial_conditions: tuple[int, ...]

    def __post_init__(self):
        fam = self.family
        if isinstance(fam, Homogeneous):
            if fam.k < 1:
                raise SpecValidationError("homogeneous recursion needs at least one (a, b) pair")
            for pair in fam.params:
                if len(pair) != 2 or any(not isinstance(x, int) or x < 0 for x in pair):
                    raise SpecValidationError(f"parameters must be nonnegative integer pairs, got {pair!r}")
        elif isinstance(fam, ConwayFamily):
            if not isinstance(fam.k, int) or fam.k < 1:
                raise SpecValidationError(f"conway family needs k >= 1, got {fam.k!r}")
        else:
            raise SpecValidationError(f"unknown family {fam!r}")
        if len(self.initial_conditions) == 0:
            raise SpecValidationError("at least one initial condition is required")
        for v in self.initial_conditions:
            if not isinstance(v, int) or v < 1:
                raise SpecValidationError(f"initial conditions must be positive integers, got {v!r}")

    @property
    def r(self) -> int:
        return len(self.initial_conditions)

    def __str__(self) -> str:
        return render(self)


def homogeneous(params, ic) -> RecursionSpec:
    """Build a homogeneous spec from a flat list ``a1, b1, ..., ak, bk``."""
    params = list(params)
    if len(params) % 2:
        raise ArityError(f"homogeneous parameter list must have even length, got {len(params)}")
    pairs = tuple((params[i], params[i + 1]) for i in range(0, len(params), 2))
    return RecursionSpec(Homogeneous(pairs), tuple(ic))


def conway_family(k, ic) -> RecursionSpec:
    return RecursionSpec(ConwayFamily(k), tuple(ic))


PRESETS = {
    "conolly": lambda: homogeneous([0, 1, 1, 2], [1, 1]),
    "conway": lambda: conway_family(1, [1, 1]),
    "q": lambda: homogeneous([0, 1, 0, 2], [1, 1]),
    "v": lambda: homogeneous([0, 1, 0, 4], [1, 1, 1, 1]),
    "mu": lambda: homogeneous([1, 2, 2, 1], [1, 1, 1]),
}

# presets taking one positive integer argument
PARAM_PRESETS = {
    "newman": lambda r: conway_family(1, [1] * (r + 1)),
    "grytczuk": lambda k: conway_family(k, [1, 1]),
}


def render(spec: RecursionSpec) -> str:
    """Canonical explicit form of ``spec``; ``parse_spec(render(s)) == s``."""
    ic = ",".join(str(v) for v in spec.initial_conditions)
    fam = spec.family
    if isinstance(fam, Homogeneous):
        flat = ",".join(f"{a},{b}" for a, b in fam.params)
        return f"homog:{flat};ic={ic}"
    return f"conway:{fam.k};ic={ic}"


def spec_to_json(spec: RecursionSpec) -> dict:
    fam = spec.family
    if isinstance(fam, Homogeneous):
        return {"family": "homog", "params": [x for pair in fam.params for x in pair],
                "ic": list(spec.initial_conditions)}
    return {"family": "conway", "k": fam.k, "ic": list(spec.initial_conditions)}


def spot_count(spec: RecursionSpec) -> int:
    fam = spec.family
    if isinstance(fam, Homogeneous):
        return fam.k
    return 2


_INT = re.compile(r"^\d+$")


def _int_list(text: str, what: str) -> list[int]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not _INT.match(tok):
            raise SpecParseError(f"bad {what} token {tok!r}", token=tok)
        out.append(int(tok))
    return out


def _parse_int(tok: str) -> int:
    tok = tok.strip()
    if not _INT.match(tok):
        raise SpecParseError(f"expected a nonnegative integer, got {tok!r}", token=tok)
    return int(tok)


def _parse_json(text: str) -> RecursionSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON spec: {exc.msg}", token=text) from None
    if not isinstance(obj, dict):
        raise SpecParseError("JSON spec must be an object", token=text)
    family = obj.get("family")
    ic = obj.get("ic")
    if not isinstance(ic, list) or not ic:
        raise SpecValidationError("JSON spec needs a nonempty 'ic' list")
    if family == "homog":
        params = obj.get("params")
        if not isinstance(params, list):
            raise SpecParseError("homog JSON spec needs a 'params' list", token="params")
        return homogeneous(params, ic)
    if family == "conway":
        return conway_family(obj.get("k"), ic)
    raise SpecParseError(f"unknown family {family!r}", token=str(family))


def parse_spec(text: str) -> RecursionSpec:
    """Parse a preset name, the explicit mini-language, or a JSON object."""
    text = text.strip()
    if not text:
        raise SpecParseError("empty spec", token="")
    if text.startswith("{"):
        return _parse_json(text)

    head, _, rest = text.partition(";")
    name, _, arg = head.partition(":")
    name = name.strip().lower()

    if not rest:
        if name in PRESETS and not arg:
            return PRESETS[name]()
        if name in PARAM_PRESETS and arg:
            n = _parse_int(arg)
            if n < 1:
                raise SpecValidationError(f"{name} parameter must be >= 1, got {n}")
            return PARAM_PRESETS[name](n)

    if name not in ("homog", "conway"):
        raise SpecParseError(f"unknown spec or preset {name!r}", token=name)
    if not arg:
        raise SpecParseError(f"{name} needs parameters after ':'", token=head)

    rest = rest.strip()
    if not rest.startswith("ic="):
        raise SpecParseError(f"expected 'ic=...' after ';', got {rest!r}", token=rest)
    ic_text = rest[3:]
    if not ic_text.strip():
        raise SpecValidationError("empty initial conditions")
    ic = _int_list(ic_text, "initial condition")

    if name == "homog":
        return homogeneous(_int_list(arg, "parameter"), ic)
    return conway_family(_parse_int(arg), ic)
