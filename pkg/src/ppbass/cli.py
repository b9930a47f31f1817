"""Command-line front end.

Exit codes: 0 computed and the property holds, 1 computed and refuted,
2 parse or usage error, 3 a search or enumeration cap was exceeded.
"""
import argparse
import json
import os
import random
import sys

from . import caps
from .bass import (DEFAULT_WINDOW, build_stages, chain_from_spec, classical_chain,
                   perfectness_witness, pp_type_window, profile_equiv_check, stabilization_check)
from .classifier import classify
from .errors import CapExceeded, ParseError, PreconditionError
from .invariants import gamma_family, is_pure_submodule, pp_index, weak_power_profile
from .modules import Submodule
from .pp import PpPair, evaluate, free_realization, implies, random_formula_of_arity
from .specs import (SCHEMA, parse_element, parse_formula, parse_generators, parse_module,
                    parse_ring, print_spec)

OK, REFUTED, PARSE, CAP = 0, 1, 2, 3


class Result:
    def __init__(self, code, data, lines):
        self.code = code
        self.data = data
        self.lines = lines


def _ring(args, required=True):
    if getattr(args, "ring", None) is None:
        if required:
            raise ParseError("--ring is required")
        return None
    return parse_ring(args.ring)


def _elem_list(R, text):
    return [parse_element(R, x) for x in text.split(",") if x.strip()]


def _fmt_vec(R, v):
    return "(" + ",".join(R.fmt(a) for a in v) + ")"


def _module_summary(M):
    R = M.ring
    out = {"ring": repr(R), "gens": M.ngens,
           "rels": [[R.elem_to_json(a) for a in row] for row in M.rels]}
    if R.euclidean:
        out["invariants"] = [R.elem_to_json(d) for d in M.invariants()]
    if M.finite:
        out["size"] = M.size
        out["radices"] = [int(d) for d in M.radices]
    return out


def _describe_module(M):
    R = M.ring
    if R.euclidean:
        inv = M.invariants()
        parts = ["Z" if R.is_zero(d) and isinstance(d, int) else
                 (f"{R!r}" if R.is_zero(d) else f"{R!r}/({R.fmt(d)})") for d in inv]
        return " + ".join(parts) or "0"
    return f"{M!r} (size {M.size})"


# ---------------------------------------------------------------------------
# verbs


def cmd_ring_check(args):
    R = parse_ring(args.ring)
    data = {"ring": repr(R), "spec": json.loads(print_spec(R)), "finite": R.finite}
    lines = [f"ring {R!r}: valid"]
    if R.finite:
        units = [int(u) for u in range(R.size) if R.is_unit(u)]
        data.update(size=R.size, characteristic=R.characteristic, units=len(units),
                    commutative=R.commutative)
        lines.append(f"size {R.size}, characteristic {R.characteristic}, {len(units)} units, "
                     f"{'commutative' if R.commutative else 'noncommutative'}")
    else:
        lines.append("Euclidean domain (no element enumeration)")
    lines.append("spec " + print_spec(R))
    return Result(OK, data, lines)


def cmd_classify(args):
    R = parse_ring(args.ring)
    rep = classify(R, label=args.ring if not args.ring.strip().startswith("{") else None)
    d = rep.to_dict()
    lines = [
        f"ring {d['ring']} (size {d['size']})",
        f"J = {{{', '.join(d['J'])}}}",
        f"semisimple {d['semisimple']}, local {d['local']}, R/J simple {d['rj_simple']}",
        f"n(R) = {d['n']}, deg(R) = {d['deg']}",
    ]
    for s in d["summands"]:
        lines.append(f"  summand R*{s['idempotent']} of size {s['size']}, multiplicity {s['multiplicity']}")
    lines.append(d["perfect"])
    return Result(OK, d, lines)


def cmd_eval(args):
    R = _ring(args, required=False)
    M = parse_module(args.module, R)
    phi = parse_formula(args.formula, M.ring)
    S = evaluate(phi, M)
    elems = S.elements()
    reps = [[_fmt_vec(M.ring, M.element(c)) for c in (e if isinstance(e, tuple) else (e,))] for e in elems]
    data = {"formula": phi.describe(), "module": _module_summary(M), "size": S.size,
            "codes": [list(e) if isinstance(e, tuple) else e for e in elems],
            "elements": reps}
    lines = [f"{phi.describe()} in {_describe_module(M)}: {S.size} elements",
             "{" + ", ".join(" ".join(r) for r in reps) + "}"]
    return Result(OK, data, lines)


def _witness_text(C, abar):
    R = C.ring
    if R.euclidean and C.ngens:
        desc = _describe_module(C)
    else:
        desc = f"size {C.size}" if C.finite else "infinite"
    return f"({desc}, {', '.join(_fmt_vec(R, a) for a in abar)})"


def _regular_witness(C, abar):
    """Name ``(R, r)`` when the realization is cyclic free: R^2/(1,-r) style."""
    R = C.ring
    if not R.euclidean or len(abar) != 1:
        return None
    inv = C.invariants()
    if len(inv) == 1 and R.is_zero(inv[0]):
        S = C._structure
        w = S._transform(abar[0])
        i = S.comps[0]
        return f"({'Z' if isinstance(R.zero, int) else repr(R)}, {R.fmt(R.mul(R.normal_unit(w[i]), w[i]))})"
    return None


def cmd_implies(args):
    R = _ring(args)
    phi = parse_formula(args.lhs, R)
    psi = parse_formula(args.rhs, R)
    res = implies(phi, psi)
    data = {"lhs": phi.describe(), "rhs": psi.describe(), "implies": bool(res)}
    if res:
        return Result(OK, data, ["true"])
    C, abar = res.witness
    named = _regular_witness(C, abar)
    data["witness"] = {"module": _module_summary(C), "tuple": [[R.elem_to_json(a) for a in v] for v in abar]}
    if named:
        data["witness"]["named"] = named
    return Result(REFUTED, data, [f"false, witness {named or _witness_text(C, abar)}"])


def cmd_realize(args):
    R = _ring(args)
    phi = parse_formula(args.formula, R)
    C, abar = free_realization(phi)
    data = {"formula": phi.describe(), "module": _module_summary(C),
            "tuple": [[R.elem_to_json(a) for a in v] for v in abar]}
    lines = [f"free realization of {phi.describe()}",
             f"module R^{C.ngens} / {len(C.rels)} relations: {_describe_module(C) if (R.euclidean or C.finite) else ''}",
             "tuple " + ", ".join(_fmt_vec(R, a) for a in abar)]
    if C.finite:
        data["tuple_codes"] = [C.to_code(a) for a in abar]
        lines.append("tuple codes " + ", ".join(str(C.to_code(a)) for a in abar))
    named = _regular_witness(C, abar)
    if named:
        data["named"] = named
        lines.append(f"isomorphic to {named}")
    return Result(OK, data, lines)


def _chain(args):
    if getattr(args, "chain", None):
        from .specs import _load_text
        return chain_from_spec(_load_text(args.chain))
    R = _ring(args)
    if not args.b:
        raise ParseError("--b or --chain is required")
    b = _elem_list(R, args.b)
    if len(b) == 1 and args.window is not None:
        b = b * args.window
    return classical_chain(R, b)


def cmd_bass(args):
    chain = _chain(args)
    R = chain.ring
    B = build_stages(chain)
    st = stabilization_check(chain)
    tw = pp_type_window(B)
    stages = []
    lines = []
    for n in range(B.stages + 1):
        row = {"stage": n, "formula": chain[n].describe(),
               "module": _module_summary(B.modules[n]),
               "image": [[R.elem_to_json(a) for a in v] for v in B.image_of_first(n)]}
        text = f"stage {n}: {chain[n].describe()}"
        if chain.classical:
            img = B.regular_image(n)
            row["regular_image"] = R.elem_to_json(img)
            text += f"; image of a_0 = {R.fmt(img)}"
        stages.append(row)
        lines.append(text)
    lines.append(st.verdict())
    lines.append("pp type: " + tw.verdict())
    data = {"stages": stages, "stabilization": st.to_dict(), "pp_type": tw.to_dict()}
    return Result(OK if st.stabilizes else REFUTED, data, lines)


def cmd_stabilize(args):
    chain = _chain(args)
    st = stabilization_check(chain)
    lines = [st.verdict(), "implication matrix:"]
    lines += ["  " + " ".join("1" if x else "0" for x in row) for row in st.matrix]
    return Result(OK if st.stabilizes else REFUTED, st.to_dict(), lines)


def _pairs(args, R, n=1):
    pairs = []
    for text in args.pair or []:
        if "/" not in text:
            raise ParseError(f"pair {text!r} must look like NUM/DEN")
        num, _, den = text.partition("/")
        pairs.append(PpPair(parse_formula(num, R), parse_formula(den, R)))
    if args.random:
        rng = random.Random(args.seed)
        for _ in range(args.random):
            pairs.append(PpPair(random_formula_of_arity(R, rng, n), random_formula_of_arity(R, rng, n)))
    if not pairs:
        raise ParseError("no pairs given (use --pair NUM/DEN or --random COUNT)")
    return pairs


def cmd_profile(args):
    if args.b or args.chain:
        chain = _chain(args)
        B = build_stages(chain)
        rep = profile_equiv_check(B.profile(), B, _pairs(args, chain.ring))
        d = rep.to_dict()
        lines = [f"{d['pairs']} pairs, {d['inconsistencies']} inconsistencies"]
        for row in d["rows"]:
            lines.append(f"  {row['pair'][0]} / {row['pair'][1]}: components {row['component_index']}, "
                         f"opens {row['opens_in_profile']}")
        return Result(OK if rep.inconsistencies == 0 else REFUTED, d, lines)
    R = _ring(args, required=False)
    if not args.module:
        raise ParseError("--module or a chain is required")
    M = parse_module(args.module, R)
    prof = weak_power_profile(M, _pairs(args, M.ring))
    table = prof.table()
    lines = [f"{t['pair'][0]} / {t['pair'][1]}: index {t['index']}, {t['verdict']}" for t in table]
    return Result(OK, {"module": _module_summary(M), "profile": table}, lines)


def cmd_purity(args):
    R = _ring(args, required=False)
    N = parse_module(args.ambient, R)
    gens = parse_generators(N, args.sub)
    v = is_pure_submodule(gens, N)
    Rn = N.ring
    data = {"pure": v.pure, "consistent": v.consistent,
            "submodule": [[Rn.elem_to_json(a) for a in g] for g in gens],
            "size": Submodule(N, gens).size}
    if v.pure:
        comp = [[Rn.elem_to_json(a) for a in c] for c in v.complement]
        data["complement"] = comp
        lines = ["pure (direct summand), complement <" + "; ".join(_fmt_vec(Rn, c) for c in v.complement) + ">"]
    else:
        lines = ["not pure"]
    if v.witness is not None:
        name = _formula_name(v.witness)
        data["witness"] = name
        data["witness_element"] = _fmt_vec(Rn, N.element(v.witness_detail))
        lines[0] += f", witness {name}"
    if not v.consistent:
        lines.append("warning: formula family refutes a split submodule")
    return Result(OK if v.pure else REFUTED, data, lines)


def _formula_name(phi):
    R = phi.ring
    if phi.arity == 1 and len(phi.rows) == 1:
        row = phi.rows[0]
        if phi.bound == 1 and row[0] == R.one:
            return f"div {R.fmt(R.neg(row[1]))}"
        if phi.bound == 0:
            return f"ann {R.fmt(row[0])}"
    return phi.describe()


def cmd_index(args):
    R = _ring(args, required=False)
    M = parse_module(args.module, R)
    pair = PpPair(parse_formula(args.num, M.ring), parse_formula(args.den, M.ring))
    idx = pp_index(M, pair)
    return Result(OK, {"index": idx, "num": pair.phi.describe(), "den": pair.psi.describe()},
                  [f"|{pair.phi.describe()} / {pair.psi.describe()}| = {idx}"])


def cmd_gamma(args):
    R = _ring(args, required=False)
    mods = [parse_module(m, R) for m in args.modules]
    fam = gamma_family(mods, max_bound=args.max_bound, max_rows=args.max_rows)
    return Result(OK, {"count": len(fam), "formulas": [json.loads(print_spec(f)) for f in fam],
                       "described": [f.describe() for f in fam]},
                  [f"{len(fam)} formulas"] + ["  " + f.describe() for f in fam])


def cmd_perfect(args):
    R = _ring(args)
    w = perfectness_witness(R, parse_element(R, args.r), window=args.window or DEFAULT_WINDOW)
    d = w.to_dict()
    lines = [d["verdict"]] + [f"  r^{c['i']} not in r^{c['i'] + 1}R" for c in d["certificates"]]
    return Result(REFUTED, d, lines)


def cmd_corpus(args):
    if not os.path.isdir(args.dir):
        raise ParseError(f"not a directory: {args.dir}")
    files = sorted(f for f in os.listdir(args.dir) if f.endswith(".json"))
    rows, worst = [], OK
    for name in files:
        path = os.path.join(args.dir, name)
        row = {"file": name}
        try:
            with open(path, encoding="utf-8") as fh:
                R = parse_ring(fh.read())
            if args.suite == "classify":
                d = classify(R).to_dict()
                row.update(status="ok", ring=d["ring"], size=d["size"], local=d["local"],
                           semisimple=d["semisimple"], rj_simple=d["rj_simple"], n=d["n"],
                           deg=d["deg"], assertions=d["assertions"])
            else:
                row.update(status="ok", ring=repr(R))
        except ParseError as exc:
            row.update(status="error", error=str(exc))
            worst = max(worst, PARSE)
        except CapExceeded as exc:
            row.update(status="error", error=str(exc))
            worst = max(worst, CAP)
        rows.append(row)
    lines = []
    for r in rows:
        if r["status"] != "ok":
            lines.append(f"{r['file']}: error: {r['error']}")
        elif args.suite == "classify":
            lines.append(f"{r['file']}: {r['ring']} size {r['size']} local {r['local']} semisimple "
                         f"{r['semisimple']} R/J simple {r['rj_simple']} n {r['n']} deg {r['deg']}")
        else:
            lines.append(f"{r['file']}: {r['ring']} ok")
    ok = sum(1 for r in rows if r["status"] == "ok")
    lines.append(f"{ok}/{len(rows)} rows ok")
    return Result(worst, {"suite": args.suite, "rows": rows, "ok": ok, "total": len(rows)}, lines)


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "structured"], default="human")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--window", type=int, default=None)
    common.add_argument("--enum-cap", type=int, default=None)
    common.add_argument("--search-cap", type=int, default=None)
    common.add_argument("--ring-cap", type=int, default=None)

    p = argparse.ArgumentParser(prog="ppbass", description="pp formulas, Bass chains and small-ring data")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = verb("ring-check", cmd_ring_check, "validate a ring spec")
    sp.add_argument("--ring", required=True)
    sp = verb("classify", cmd_classify, "decomposition data of a finite ring")
    sp.add_argument("--ring", required=True)
    sp = verb("eval", cmd_eval, "evaluate a formula in a finite module")
    sp.add_argument("--ring")
    sp.add_argument("--module", required=True)
    sp.add_argument("--formula", required=True)
    sp = verb("implies", cmd_implies, "decide phi <= psi")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--lhs", required=True)
    sp.add_argument("--rhs", required=True)
    sp = verb("realize", cmd_realize, "free realization of a formula")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--formula", required=True)
    for name, func, help_ in (("bass", cmd_bass, "build the stages of a chain"),
                              ("stabilize", cmd_stabilize, "stabilization check of a chain")):
        sp = verb(name, func, help_)
        sp.add_argument("--ring")
        sp.add_argument("--b", help="comma separated b_1,b_2,...; a single value is repeated --window times")
        sp.add_argument("--chain", help="chain spec (JSON text or file)")
    sp = verb("profile", cmd_profile, "weak-power profile or chain profile check")
    sp.add_argument("--ring")
    sp.add_argument("--module")
    sp.add_argument("--b")
    sp.add_argument("--chain")
    sp.add_argument("--pair", action="append", help="NUM/DEN, e.g. top/div:2")
    sp.add_argument("--random", type=int, default=0, help="add this many seeded random pairs")
    sp = verb("purity", cmd_purity, "is a submodule pure")
    sp.add_argument("--ring")
    sp.add_argument("--ambient", required=True)
    sp.add_argument("--sub", required=True, help='generators, e.g. "2,1;0,1"')
    sp = verb("index", cmd_index, "pp-pair index in a finite module")
    sp.add_argument("--ring")
    sp.add_argument("--module", required=True)
    sp.add_argument("--num", required=True)
    sp.add_argument("--den", required=True)
    sp = verb("gamma", cmd_gamma, "bounded formulas realized in add of given modules")
    sp.add_argument("--ring")
    sp.add_argument("--modules", nargs="+", required=True)
    sp.add_argument("--max-bound", type=int, default=1)
    sp.add_argument("--max-rows", type=int, default=2)
    sp = verb("perfect", cmd_perfect, "non-perfectness witness over a Euclidean domain")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--r", required=True)
    sp = verb("corpus", cmd_corpus, "run a suite over every ring spec in a directory")
    sp.add_argument("--dir", required=True)
    sp.add_argument("--suite", choices=["classify", "ring-check"], default="classify")
    return p


def _emit(args, verb, result, out):
    if args.format == "structured":
        out.write(json.dumps({"schema": SCHEMA, "verb": verb, "exit": result.code}, sort_keys=True) + "\n")
        out.write(json.dumps(result.data, sort_keys=True, default=_jsonable) + "\n")
    else:
        for line in result.lines:
            out.write(line + "\n")


def _jsonable(x):
    if hasattr(x, "tolist"):
        return x.tolist()
    if isinstance(x, tuple):
        return list(x)
    return str(x)


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return PARSE if exc.code else OK
    overrides = {k: v for k, v in (("enum", args.enum_cap), ("search", args.search_cap),
                                   ("ring", args.ring_cap)) if v is not None}
    try:
        with caps.override(**overrides):
            result = args.func(args)
    except (ParseError, PreconditionError) as exc:
        result = Result(PARSE, {"error": "parse", "message": str(exc)}, [f"error: {exc}"])
    except CapExceeded as exc:
        result = Result(CAP, {"error": "cap", "message": str(exc)}, [f"cap exceeded: {exc}"])
    _emit(args, args.verb, result, out)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
