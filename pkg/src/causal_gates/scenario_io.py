"""JSON scenario files.

A file holds a list of scenario records (or ``{"scenarios": [...]}``)::

    {
      "name": "singlet-sigma_y-conjugation",
      "initial": <4x4 matrix>,
      "alice_op": {"kind": "measurement", "payload": [<ket>, <ket>]},
      "bob_op": {"kind": "conjugation"},
      "extension": {"name": "global-conjugation"},
      "expect": {"verdict": "violation_b", "signals": false}
    }

Complex numbers are ``[re, im]``; matrices are row-major nested lists of them;
kets are lists of them.  Gate kinds: ``unitary`` and ``antiunitary`` (payload
a matrix), ``conjugation`` (no payload), ``kraus`` (list of matrices),
``measurement`` (list of kets).  ``extension`` names a built-in rule or gives a
``table`` of ``{"input": matrix, "output": matrix}`` samples.  ``expect`` is
optional; see :mod:`causal_gates.suites`.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from . import gates, timeorder
from .timeorder import Scenario

VERDICTS = ("compliant", "violation_a", "violation_b", "undetermined")


class ScenarioFormatError(ValueError):
    pass


def encode_complex(z) -> list[float]:
    z = complex(z)
    # adding 0.0 turns -0.0 into 0.0 so output is stable under round trips
    return [z.real + 0.0, z.imag + 0.0]


def encode_array(a) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return encode_complex(a)
    return [encode_array(x) for x in a]


def decode_array(obj, ndim: int) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise ValueError(f"expected a {ndim}-d array of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def encode_gate(g: gates.GateSpec) -> dict:
    if isinstance(g, gates.Unitary):
        return {"kind": "unitary", "payload": encode_array(g.matrix)}
    if isinstance(g, gates.AntiUnitary):
        return {"kind": "antiunitary", "payload": encode_array(g.unitary)}
    if isinstance(g, gates.Conjugation):
        return {"kind": "conjugation"}
    if isinstance(g, gates.Kraus):
        return {"kind": "kraus", "payload": [encode_array(a) for a in g.operators]}
    if isinstance(g, gates.ProjectiveMeasurement):
        return {"kind": "measurement", "payload": [encode_array(v) for v in g.basis]}
    raise TypeError(f"cannot encode {type(g).__name__}")


def decode_gate(obj) -> gates.GateSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("gate must be an object with a 'kind' field")
    kind = obj["kind"]
    payload = obj.get("payload")
    if kind == "conjugation":
        return gates.Conjugation()
    if payload is None:
        raise ValueError(f"gate kind {kind!r} needs a payload")
    if kind == "unitary":
        return gates.Unitary(decode_array(payload, 2))
    if kind == "antiunitary":
        return gates.AntiUnitary(decode_array(payload, 2))
    if kind == "kraus":
        return gates.Kraus(tuple(decode_array(a, 2) for a in payload))
    if kind == "measurement":
        return gates.ProjectiveMeasurement(tuple(decode_array(v, 1) for v in payload))
    raise ValueError(f"unknown gate kind {kind!r}")


def encode_extension(rule: timeorder.ExtensionRule) -> dict:
    if rule.table is not None:
        return {
            "name": rule.name,
            "table": [{"input": encode_array(i), "output": encode_array(o)} for i, o in rule.table],
        }
    if timeorder.BUILTIN_RULES.get(rule.name) is not rule:
        raise TypeError(f"extension rule {rule.name!r} is neither built-in nor tabulated")
    return {"name": rule.name}


def decode_extension(obj) -> timeorder.ExtensionRule:
    if not isinstance(obj, dict) or "name" not in obj:
        raise ValueError("extension must be an object with a 'name' field")
    name = obj["name"]
    if "table" in obj:
        entries = [(decode_array(e["input"], 2), decode_array(e["output"], 2)) for e in obj["table"]]
        for k, (_, out) in enumerate(entries):
            if out.shape != (4, 4) or not np.allclose(out, out.conj().T, rtol=0, atol=timeorder.RULE_TOL):
                raise ValueError(f"extension table entry {k}: output is not a Hermitian 4x4 matrix")
            if abs(np.trace(out) - 1) > timeorder.RULE_TOL:
                raise ValueError(f"extension table entry {k}: output trace is not 1")
        return timeorder.table_rule(name, entries)
    if name not in timeorder.BUILTIN_RULES:
        raise ValueError(f"unknown extension rule {name!r}; built-ins are {sorted(timeorder.BUILTIN_RULES)}")
    return timeorder.BUILTIN_RULES[name]


def encode_scenario(s: Scenario, expect: dict | None = None) -> dict:
    rec = {
        "name": s.name,
        "initial": encode_array(s.initial),
        "alice_op": encode_gate(s.alice_op),
        "bob_op": encode_gate(s.bob_op),
    }
    if s.bob_extension is not None:
        rec["extension"] = encode_extension(s.bob_extension)
    if expect:
        rec["expect"] = dict(expect)
    return rec


def _decode_expect(obj) -> dict:
    if not isinstance(obj, dict):
        raise ValueError("'expect' must be an object")
    out = {}
    if "verdict" in obj:
        if obj["verdict"] not in VERDICTS:
            raise ValueError(f"expected verdict must be one of {VERDICTS}")
        out["verdict"] = obj["verdict"]
    if "signals" in obj:
        if not isinstance(obj["signals"], bool):
            raise ValueError("'signals' must be a boolean")
        out["signals"] = obj["signals"]
    return out


def decode_scenario(rec) -> tuple[Scenario, dict]:
    if not isinstance(rec, dict):
        raise ValueError("scenario record must be an object")
    for key in ("initial", "alice_op", "bob_op"):
        if key not in rec:
            raise ValueError(f"missing field {key!r}")
    ext = decode_extension(rec["extension"]) if rec.get("extension") is not None else None
    scen = Scenario(
        initial=decode_array(rec["initial"], 2),
        alice_op=decode_gate(rec["alice_op"]),
        bob_op=decode_gate(rec["bob_op"]),
        bob_extension=ext,
        name=str(rec.get("name", "")),
    )
    return scen, _decode_expect(rec.get("expect", {}))


def loads_scenarios(text: str, source: str = "<string>") -> list[tuple[Scenario, dict]]:
    """Parse scenario JSON text into validated (scenario, expectation) pairs."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if isinstance(data, dict) and "scenarios" in data:
        data = data["scenarios"]
    if not isinstance(data, list):
        raise ScenarioFormatError(f"{source}: top level must be a list of scenario records")
    out = []
    for idx, rec in enumerate(data):
        try:
            out.append(decode_scenario(rec))
        except (ValueError, TypeError, KeyError) as exc:
            raise ScenarioFormatError(f"{source}: record {idx}: {exc}") from None
    return out


def parse_scenario_file(path) -> list[tuple[Scenario, dict]]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioFormatError(f"{path}: {exc.strerror}") from None
    return loads_scenarios(text, str(path))


def dumps_scenarios(items) -> str:
    """Serialize scenarios, or (scenario, expect) pairs, to JSON text."""
    records = []
    for item in items:
        s, expect = item if isinstance(item, tuple) else (item, None)
        records.append(encode_scenario(s, expect))
    if not records:
        return "[]\n"
    return "[\n" + ",\n".join(json.dumps(r, sort_keys=True) for r in records) + "\n]\n"


def bundled(name: str) -> Path:
    """Path of a scenario file shipped with the package."""
    return Path(str(resources.files("causal_gates") / "data" / name))
