"""Reading, writing, and re-verifying stored partner pairs.

A pair file is a JSON document:

    {
      "format": "isopair-pair-v1",
      "kind": "1d-order1", "dim": 1, "frame": "cartesian", "order": 1,
      "c": "0",                               # exact scalars, optional
      "seed_text": {"w": "x"},                # construction inputs
      "V_text": "x^2 - 1",
      "Vtilde_text": "x^2 + 1",
      "A_terms": [{"alpha": [i, j, k], "coeff_text": "..."}, ...],
      "extras": {...}                         # kind-specific bookkeeping
    }

All scalars are exact texts (``p/q`` possibly with a sqrt2 part); all
expressions use the canonical printer, so write -> read round-trips to
equal objects and re-running the writer is byte-stable.  One dimension
spells its variable ``x``; 3D cartesian texts use x1, x2, x3; cylindrical
texts use rho/phi/z, with the screw angle spelled ``xi`` and interpreted
through the stored pitch ``b_z``.
"""
from __future__ import annotations

import json
from typing import Any, Dict

from .errors import ConfigError
from .operators import CARTESIAN, CYLINDRICAL, LinOp
from .pairs import (ALL_KINDS, KIND_1D_ORDER1, KIND_1D_ORDER2, KIND_3D_AXIAL,
                    KIND_3D_FAMILY, KIND_3D_SCREW, KIND_3D_TRANSLATIONAL,
                    PartnerPair, display_expr)
from .parsing import parse_expr, parse_scalar
from .reports import CheckReport
from .scalars import Scalar, scalar_text
from .trig import MODE_PHI, TrigPoly

FORMAT = "isopair-pair-v1"

_1D_VARS = ("x", "x1")
_3D_CART_VARS = ("x", "y", "z", "x1", "x2", "x3")
_AXIAL_VARS = ("rho", "phi", "z")
_SCREW_VARS = ("rho", "xi", "z")

# allowed variable spellings for each seed expression, per kind
_SEED_VARS = {
    KIND_1D_ORDER1: {"w": _1D_VARS},
    KIND_1D_ORDER2: {"v": _1D_VARS},
    KIND_3D_TRANSLATIONAL: {"w": _1D_VARS, "V_yz": ("y", "z", "x2", "x3")},
    KIND_3D_AXIAL: {"w": ("phi",), "V_rhoz": ("rho", "z")},
    KIND_3D_SCREW: {"V": _SCREW_VARS},
    KIND_3D_FAMILY: {"w": _3D_CART_VARS},
}


def _expr_vars(kind: str):
    if kind in (KIND_1D_ORDER1, KIND_1D_ORDER2):
        return _1D_VARS
    if kind == KIND_3D_AXIAL:
        return _AXIAL_VARS
    if kind == KIND_3D_SCREW:
        return _SCREW_VARS
    return _3D_CART_VARS


def pair_to_dict(pair: PartnerPair) -> dict:
    doc: Dict[str, Any] = {
        "format": FORMAT,
        "kind": pair.kind,
        "dim": pair.dim,
        "frame": pair.frame,
        "order": pair.order,
        "seed_text": pair.seed_texts(),
        "V_text": display_expr(pair.V, pair.dim, pair.frame),
        "Vtilde_text": display_expr(pair.Vt, pair.dim, pair.frame),
        "A_terms": [
            {"alpha": list(alpha),
             "coeff_text": display_expr(coeff, pair.dim, pair.frame)}
            for alpha, coeff in pair.a_terms()
        ],
    }
    if pair.case_tag:
        doc["case"] = pair.case_tag
    if pair.c is not None:
        doc["c"] = scalar_text(pair.c)
    if pair.d is not None:
        doc["d"] = scalar_text(pair.d)
    extras = {}
    for key, value in pair.extras.items():
        extras[key] = scalar_text(value) if isinstance(value, Scalar) else value
    if extras:
        doc["extras"] = extras
    return doc


def pair_to_json(pair: PartnerPair) -> str:
    return json.dumps(pair_to_dict(pair), indent=2, sort_keys=True) + "\n"


def write_pair(pair: PartnerPair, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(pair_to_json(pair))


def _require(doc: dict, key: str, types) -> Any:
    if key not in doc:
        raise ConfigError(f"pair file is missing the {key!r} key")
    value = doc[key]
    if not isinstance(value, types):
        raise ConfigError(f"pair file key {key!r} has the wrong type")
    return value


def _retag_screw(value, b_z: Scalar):
    """Harmonics parsed under the xi spelling are carried on the stored
    screw combination phi - z/b_z."""
    if isinstance(value, TrigPoly) and value.mode == MODE_PHI:
        return value.retag(("xi", b_z))
    return value


def pair_from_dict(doc: dict) -> PartnerPair:
    if not isinstance(doc, dict):
        raise ConfigError("pair file must contain a JSON object")
    fmt = _require(doc, "format", str)
    if fmt != FORMAT:
        raise ConfigError(f"unsupported pair file format {fmt!r}")
    kind = _require(doc, "kind", str)
    if kind not in ALL_KINDS:
        raise ConfigError(f"unknown pair kind {kind!r}")
    dim = _require(doc, "dim", int)
    frame = _require(doc, "frame", str)
    order = _require(doc, "order", int)
    if frame not in (CARTESIAN, CYLINDRICAL):
        raise ConfigError(f"unknown frame {frame!r}")

    extras = dict(doc.get("extras", {}))
    b_z = None
    if "b_z" in extras:
        b_z = parse_scalar(extras["b_z"])
        extras["b_z"] = b_z

    variables = _expr_vars(kind)

    def read_expr(text: str):
        value = parse_expr(text, variables=variables)
        if kind == KIND_3D_SCREW:
            if b_z is None:
                raise ConfigError("screw pair file is missing extras.b_z")
            value = _retag_screw(value, b_z)
        if frame == CYLINDRICAL:
            return TrigPoly.of(value)
        if isinstance(value, TrigPoly):
            raise ConfigError("cartesian pair file contains trig terms")
        return value

    v_pot = read_expr(_require(doc, "V_text", str))
    vt_pot = read_expr(_require(doc, "Vtilde_text", str))

    terms = {}
    for item in _require(doc, "A_terms", list):
        if not isinstance(item, dict) or "alpha" not in item \
                or "coeff_text" not in item:
            raise ConfigError(
                "A_terms entries need 'alpha' and 'coeff_text' keys")
        alpha = item["alpha"]
        if (not isinstance(alpha, list) or len(alpha) != 3
                or not all(isinstance(i, int) and i >= 0 for i in alpha)):
            raise ConfigError(f"bad derivative multi-index {alpha!r}")
        terms[tuple(alpha)] = read_expr(item["coeff_text"])
    a_op = LinOp(terms, frame)

    seed_vars = _SEED_VARS[kind]
    seed_texts = _require(doc, "seed_text", dict)
    unknown = set(seed_texts) - set(seed_vars)
    if unknown:
        raise ConfigError(f"unknown seed entries for {kind}: {sorted(unknown)}")
    seed = {}
    for name, allowed in seed_vars.items():
        if name not in seed_texts:
            raise ConfigError(f"{kind} pair file needs seed_text.{name}")
        value = parse_expr(seed_texts[name], variables=allowed)
        if kind == KIND_3D_SCREW:
            value = TrigPoly.of(_retag_screw(value, b_z))
        elif kind == KIND_3D_AXIAL and name == "w":
            value = TrigPoly.of(value)
        elif isinstance(value, TrigPoly):
            raise ConfigError(f"seed {name} must not contain trig terms")
        seed[name] = value

    c = parse_scalar(doc["c"]) if "c" in doc else None
    d = parse_scalar(doc["d"]) if "d" in doc else None

    return PartnerPair(
        kind=kind, dim=dim, frame=frame, order=order,
        V=v_pot, Vt=vt_pot, A=a_op, c=c, d=d,
        seed=seed, case_tag=doc.get("case", ""), extras=extras,
    )


def read_pair(path: str) -> PartnerPair:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except json.JSONDecodeError as err:
        raise ConfigError(f"pair file is not valid JSON: {err}") from None
    except OSError as err:
        raise ConfigError(f"cannot read pair file: {err}") from None
    return pair_from_dict(doc)


def verify_pair(pair: PartnerPair) -> CheckReport:
    """Dispatch the exact symbolic checks appropriate to the pair's kind."""
    if pair.kind in (KIND_1D_ORDER1, KIND_1D_ORDER2):
        from .susy1d import verify_products

        return verify_products(pair)
    if pair.kind in (KIND_3D_TRANSLATIONAL, KIND_3D_AXIAL, KIND_3D_SCREW):
        from .iso3d_first import verify_first_order

        return verify_first_order(pair)
    if pair.kind == KIND_3D_FAMILY:
        from .iso3d_second import verify_family_pair

        return verify_family_pair(pair)
    raise ConfigError(f"no verifier for pair kind {pair.kind!r}")
