"""Reading and writing instance documents.

An instance document is UTF-8 JSON::

    {
      "source":   {"states": [...], "steps": [[x, y], ...], "barbs": {state: [barb, ...]}, "success": [...]},
      "target":   {...same keys...},
      "encoding": {source_state: target_state, ...},
      "relations": {name: {"over": "source|target|combined", "pairs": [[x, y], ...], "closures": ["refl", ...]}}
    }

Closure directives are applied left to right; ``refl`` adds identities over
the declared carrier.
"""
from __future__ import annotations

import json
from pathlib import Path

from .errors import EncodabilityError, ParseError, UnknownStateError
from .model import EncodingInstance, validate_instance
from .relations import CARRIERS, CLOSURES, Rel, closures

__all__ = ["parse_instance", "parse_document", "load_document", "dump_document", "dumps", "carrier_states"]

_TOP_KEYS = ("source", "target", "encoding", "relations")
_SYSTEM_KEYS = ("states", "steps", "barbs", "success")
_REL_KEYS = ("over", "pairs", "closures")


def load_document(text, origin="<string>"):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{origin}:{exc.lineno}:{exc.colno}: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError(f"{origin}: top level must be an object")
    return doc


def _expect(cond, where, msg):
    if not cond:
        raise ParseError(f"{where}: {msg}", field=where)


def _check_strings(value, where):
    _expect(isinstance(value, list), where, "expected an array")
    for i, v in enumerate(value):
        _expect(isinstance(v, str), f"{where}[{i}]", "expected a string")


def _check_pairs(value, where):
    _expect(isinstance(value, list), where, "expected an array of 2-arrays")
    for i, p in enumerate(value):
        _expect(isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p),
                f"{where}[{i}]", "expected a 2-array of state ids")


def _check_system(raw, where):
    _expect(isinstance(raw, dict), where, "expected an object")
    for key in raw:
        _expect(key in _SYSTEM_KEYS, f"{where}.{key}", f"unknown key; allowed: {', '.join(_SYSTEM_KEYS)}")
    _check_strings(raw.get("states", []), f"{where}.states")
    _check_pairs(raw.get("steps", []), f"{where}.steps")
    barbs = raw.get("barbs", {})
    _expect(isinstance(barbs, dict), f"{where}.barbs", "expected an object state -> [barb]")
    for s, names in barbs.items():
        _check_strings(names, f"{where}.barbs.{s}")
    _check_strings(raw.get("success", []), f"{where}.success")


def carrier_states(enc: EncodingInstance, over):
    if over == "source":
        return enc.source.states
    if over == "target":
        return enc.target.states
    return enc.combined.states


def _wrap(exc, where):
    err = type(exc)(f"{where}: {exc.args[0]}", **exc.context)
    return err


def parse_document(doc, origin="<document>"):
    """Validate a decoded document; returns ``(instance, {name: Rel})``."""
    for key in doc:
        _expect(key in _TOP_KEYS, f"{origin}: {key}", f"unknown top-level key; allowed: {', '.join(_TOP_KEYS)}")
    for section in ("source", "target"):
        _check_system(doc.get(section, {}), f"{origin}: {section}")
    encoding = doc.get("encoding", {})
    _expect(isinstance(encoding, dict), f"{origin}: encoding", "expected an object source -> target")
    for s, t in encoding.items():
        _expect(isinstance(t, str), f"{origin}: encoding.{s}", "expected a target state id")
    try:
        enc = validate_instance(doc)
    except EncodabilityError as exc:
        raise _wrap(exc, origin) from None

    rels = {}
    raw_rels = doc.get("relations", {})
    _expect(isinstance(raw_rels, dict), f"{origin}: relations", "expected an object name -> relation")
    for name, raw in raw_rels.items():
        where = f"{origin}: relations.{name}"
        _expect(isinstance(raw, dict), where, "expected an object")
        for key in raw:
            _expect(key in _REL_KEYS, f"{where}.{key}", f"unknown key; allowed: {', '.join(_REL_KEYS)}")
        over = raw.get("over")
        _expect(over in CARRIERS, f"{where}.over", f"expected one of {', '.join(CARRIERS)}")
        _check_pairs(raw.get("pairs", []), f"{where}.pairs")
        ops = raw.get("closures", [])
        _check_strings(ops, f"{where}.closures")
        for i, op in enumerate(ops):
            _expect(op in CLOSURES, f"{where}.closures[{i}]", f"expected one of {', '.join(CLOSURES)}")
        pairs = [tuple(p) for p in raw.get("pairs", [])]
        states = carrier_states(enc, over)
        known = set(states)
        for i, (x, y) in enumerate(pairs):
            for s in (x, y):
                if s not in known:
                    raise UnknownStateError(f"{where}.pairs[{i}]: state {s!r} is not in the {over} carrier",
                                            relation=name, index=i, state=s)
        rels[name] = closures(Rel(states, frozenset(pairs), over), ops)
    return enc, rels


def parse_instance(source):
    """Parse an instance file (path) or document text."""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        path = Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"{path}: not valid UTF-8 ({exc.reason})") from None
        except OSError as exc:
            raise ParseError(f"{path}: {exc.strerror}") from None
        origin = str(path)
    else:
        text, origin = source, "<string>"
    return parse_document(load_document(text, origin), origin)


def _system_doc(sys):
    return {
        "states": list(sys.states),
        "steps": [list(s) for s in sorted(sys.steps)],
        "barbs": {s: sorted(sys.barbs[s]) for s in sorted(sys.barbs)},
        "success": sorted(sys.success),
    }


def _carrier_name(enc, rel):
    if rel.over is not None:
        return rel.over
    for over in ("source", "target"):
        if tuple(rel.carrier) == tuple(carrier_states(enc, over)):
            return over
    return "combined"


def dump_document(enc: EncodingInstance, relations=None):
    """Document with every closure already applied (``closures`` left empty)."""
    return {
        "source": _system_doc(enc.source),
        "target": _system_doc(enc.target),
        "encoding": {s: enc[s] for s in enc.source.states},
        "relations": {
            name: {"over": _carrier_name(enc, rel), "pairs": [list(p) for p in rel], "closures": []}
            for name, rel in sorted((relations or {}).items())
        },
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
