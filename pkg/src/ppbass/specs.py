"""Reading and printing specification text for rings, modules, formulas and chains.

Besides the JSON objects, short forms are accepted on the command line:

* rings: ``zmod8``, ``integers`` (or ``Z``), ``poly2``, any corpus ring name
  such as ``M2(F2)``;
* modules: ``<ring>`` for the regular module, ``<ring>/<r>`` for R / R r and
  ``A+B`` for direct sums, e.g. ``zmod4+zmod4/2``;
* formulas: ``div:r``, ``ann:r``, ``top``, ``zero``;
* submodule generators: ``"2,1;0,1"`` (``;`` between generators).
"""
import json
import os
import re

from .bass import PpChain, chain_from_spec
from .errors import ParseError
from .modules import FpModule, cyclic, direct_sum, module_from_spec, present_module
from .pp import PpFormula, ann, bottom, div, formula_from_spec, top
from .rings import INTEGERS, PolyRing, Ring, construct_ring, zmod

SCHEMA = "ppbass/1"


def _load_text(text):
    """Contents of a file when ``text`` names one, else the text itself."""
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            return fh.read()
    return text


def _json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None


def parse_ring(text):
    text = _load_text(text).strip()
    if text.startswith("{"):
        return construct_ring(_json(text))
    if text in ("integers", "Z", "ZZ"):
        return INTEGERS
    m = re.fullmatch(r"zmod(\d+)|Z/(\d+)", text)
    if m:
        return zmod(int(m.group(1) or m.group(2)))
    m = re.fullmatch(r"poly(\d+)|F(\d+)\[x\]", text)
    if m:
        return PolyRing(int(m.group(1) or m.group(2)))
    from .corpus import RING_NAMES, corpus_ring
    if text in RING_NAMES:
        return corpus_ring(text)
    raise ParseError(f"unknown ring {text!r}; expected a ring spec object or zmodN, integers, polyP")


def parse_element(R, text):
    text = text.strip()
    if not text:
        raise ParseError("empty ring element")
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    try:
        return R.elem_from_json(value)
    except ParseError:
        raise
    except (ValueError, TypeError, KeyError, IndexError):
        raise ParseError(f"not an element of {R!r}: {text!r}") from None


def parse_module(text, ring=None):
    raw = _load_text(text).strip()
    if raw.startswith("{"):
        return module_from_spec(_json(raw))
    parts = [p.strip() for p in raw.split("+")]
    out = None
    for part in parts:
        M = _module_part(part, ring)
        out = M if out is None else direct_sum(out, M)
    if out is None:
        raise ParseError(f"empty module description {text!r}")
    return out


def _module_part(part, ring):
    if not part:
        if ring is None:
            raise ParseError("empty module part")
        return present_module(ring, 1, ())
    try:
        return present_module(parse_ring(part), 1, ())
    except ParseError:
        if "/" not in part:
            raise
    rname, _, r = part.rpartition("/")
    R = parse_ring(rname) if rname else ring
    if R is None:
        raise ParseError(f"no ring for module part {part!r}")
    return cyclic(R, parse_element(R, r))


def parse_formula(text, ring):
    raw = _load_text(text).strip()
    if raw.startswith("{"):
        return formula_from_spec(_json(raw), ring)
    if ring is None:
        raise ParseError("formula shorthand needs a ring (use --ring)")
    if raw in ("top", "x=x"):
        return top(ring)
    if raw in ("zero", "bottom", "x=0"):
        return bottom(ring)
    m = re.fullmatch(r"(div|ann):(.+)", raw)
    if m:
        r = parse_element(ring, m.group(2))
        return div(ring, r) if m.group(1) == "div" else ann(ring, r)
    raise ParseError(f"unknown formula {text!r}; expected div:r, ann:r, top, zero or a formula object")


def parse_generators(M, text):
    """``"2,1;0,1"`` -> list of representative vectors of M."""
    gens = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        coords = [c for c in chunk.split(",")]
        if len(coords) != M.ngens:
            raise ParseError(f"generator {chunk!r} needs {M.ngens} coordinates")
        gens.append(tuple(parse_element(M.ring, c) for c in coords))
    return gens


def parse_spec(text):
    """Ring, module, formula or chain, chosen by the fields of the object."""
    spec = _json(_load_text(text))
    if not isinstance(spec, dict):
        raise ParseError("a spec must be a JSON object")
    if "kind" in spec:
        return construct_ring(spec)
    if "gens" in spec:
        return module_from_spec(spec)
    if "classical" in spec or "pp" in spec:
        return chain_from_spec(spec)
    if "arity" in spec or "div" in spec or "ann" in spec:
        return formula_from_spec(spec)
    raise ParseError("cannot tell what this spec describes (no kind/gens/arity/classical/pp field)")


def to_spec(obj):
    if isinstance(obj, (Ring, FpModule, PpFormula, PpChain)):
        return obj.to_spec()
    raise TypeError(f"no spec form for {type(obj).__name__}")


def print_spec(obj):
    """Canonical one-line JSON for a ring, module, formula or chain."""
    return json.dumps(to_spec(obj), sort_keys=True, separators=(",", ":"))
