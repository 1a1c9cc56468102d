"""Command line frontend: spec ingestion, pipeline orchestration, reports.

A spec file is a JSON object naming a prime, a working field, and permutation
generator data for the groups of one verification instance; see the files
under specs/ for the shipped examples.  Each command prints a human summary
with wall-clock timings on stdout and, with --out, writes a machine report.
Machine reports carry no timings so that reruns with the same spec and seed
are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .brauer import decompose_char, ibr, induce_char
from .errors import InputError, InternalCheckError, VerificationError
from .fields import field_create
from .galgebra import dgn_via_brauer_quotient
from .groups import GroupMap, Perm, PermGroup, Subgroup, conjugacy_data
from .triples import cocycle_class, cohomologous, make_triple, order_witness, trivial_cocycle
from .bijection import make_context, verify_corollary_b, verify_theorem_a

SCHEMA = 1


def load_spec(path: str) -> dict:
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except OSError as e:
        raise InputError("cannot read spec file: %s" % e)
    except json.JSONDecodeError as e:
        raise InputError("spec file is not valid JSON: %s" % e)
    if not isinstance(spec, dict):
        raise InputError("spec file must hold a JSON object")
    if spec.get("schema", SCHEMA) != SCHEMA:
        raise InputError("unsupported spec schema %r" % spec.get("schema"))
    return spec


def _perm(images, degree: int) -> Perm:
    if (
        not isinstance(images, list)
        or len(images) != degree
        or sorted(images) != list(range(degree))
    ):
        raise InputError("not a permutation of %d points: %r" % (degree, images))
    return Perm(images)


def _gens(spec: dict, key: str):
    data = spec.get(key)
    if not isinstance(data, list):
        raise InputError("spec is missing generator list %r" % key)
    degree = spec.get("degree")
    if not isinstance(degree, int) or degree < 1:
        raise InputError("spec needs a positive integer degree")
    return [_perm(row, degree) for row in data]


def _field(spec: dict):
    p, s = spec.get("p"), spec.get("field")
    if not isinstance(p, int) or p < 2:
        raise InputError("spec needs a prime p")
    if not isinstance(s, int) or s < 1:
        raise InputError("spec needs a positive field degree")
    return p, field_create(p, s)


def _subgroup(G: PermGroup, gens, label: str) -> Subgroup:
    elems = set(G.elements)
    for g in gens:
        if g not in elems:
            raise InputError("%s generator falls outside the group" % label)
    return Subgroup(G, generators=gens) if gens else Subgroup(G, elements=[G.identity])


def _select_theta(chars, sel, label: str = "theta"):
    if not isinstance(sel, dict):
        raise InputError("spec needs a %s selector" % label)
    if "index" in sel:
        i = sel["index"]
        if not isinstance(i, int) or not 0 <= i < len(chars):
            raise InputError("%s index out of range" % label)
        return chars[i]
    want_deg, want_fp = sel.get("degree"), sel.get("fingerprint")
    hits = [
        c
        for c in chars
        if (want_deg is None or c.degree == want_deg)
        and (want_fp is None or c.fingerprint() == want_fp)
    ]
    if len(hits) != 1:
        raise InputError(
            "%s selector matches %d characters, need exactly 1" % (label, len(hits))
        )
    return hits[0]


def _char_blob(char) -> dict:
    data = conjugacy_data(char.group, char.p)
    values = {}
    for c, vals in zip(data.p_regular, char.values):
        key = ",".join(str(i) for i in data.reps[c].images)
        values[key] = list(vals)
    return {
        "degree": char.degree,
        "fingerprint": char.fingerprint(),
        "field": char.q,
        "values": values,
    }


def _automorphisms(spec: dict, G: PermGroup):
    taus = []
    gset = set(G.elements)
    for row in spec.get("automorphisms", []):
        pi = _perm(row, spec["degree"])
        pii = pi.inverse()
        for g in G.generators:
            if pi * g * pii not in gset:
                raise InputError("automorphism permutation does not normalize the group")
        taus.append(GroupMap.from_callable(G, G, lambda x, a=pi, b=pii: a * x * b))
    return taus


def resolve_instance(spec: dict) -> dict:
    """Parse a spec into live objects; everything is validated on the way."""
    p, L = _field(spec)
    G = PermGroup(_gens(spec, "group"), degree=spec["degree"])
    out = {"p": p, "L": L, "G": G}
    if "normal" in spec:
        out["N"] = _subgroup(G, _gens(spec, "normal"), "normal")
    if "middle" in spec:
        out["M"] = _subgroup(G, _gens(spec, "middle"), "middle")
    if "defect" in spec:
        out["D"] = _subgroup(G, _gens(spec, "defect"), "defect")
    return out


def _need(inst: dict, key: str, what: str):
    if key not in inst:
        raise InputError("spec is missing the %s generators" % what)
    return inst[key]


def _context(spec: dict, inst: dict, seed: int):
    N = _need(inst, "N", "normal subgroup")
    M = _need(inst, "M", "middle subgroup")
    theta = _select_theta(ibr(N, inst["p"], inst["L"], seed=seed), spec.get("theta"))
    return make_context(inst["G"], N, M, theta, D=inst.get("D"))


def cmd_ibr(spec: dict, seed: int, args) -> tuple:
    inst = resolve_instance(spec)
    t0 = time.perf_counter()
    chars = ibr(inst["G"], inst["p"], inst["L"], seed=seed)
    lines = ["ibr: %d characters in %.2fs" % (len(chars), time.perf_counter() - t0)]
    for c in chars:
        lines.append("  degree %d  %s" % (c.degree, c.fingerprint()))
    payload = {"characters": [_char_blob(c) for c in chars], "count": len(chars)}
    return payload, True, lines


def cmd_dgn(spec: dict, seed: int, args) -> tuple:
    inst = resolve_instance(spec)
    t0 = time.perf_counter()
    ctx = _context(spec, inst, seed)
    phi2 = dgn_via_brauer_quotient(ctx.N, ctx.D, ctx.theta, ctx.L)
    agree = phi2 == ctx.phi
    nbasis = ibr(ctx.N, ctx.p, ctx.L)
    ti = nbasis.index(ctx.theta)
    unique = True
    for lam in ibr(ctx.C, ctx.p, ctx.L):
        mult = decompose_char(induce_char(lam, ctx.N), nbasis)[ti]
        if (mult % ctx.p != 0) != (lam == ctx.phi):
            unique = False
    ok = agree and unique
    lines = [
        "dgn: D order %d, C order %d, H order %d in %.2fs"
        % (ctx.D.order, ctx.C.order, ctx.H.order, time.perf_counter() - t0),
        "  phi degree %d  %s" % (ctx.phi.degree, ctx.phi.fingerprint()),
        "  both paths agree: %s" % agree,
        "  unique correspondent: %s" % unique,
    ]
    payload = {
        "defect_order": ctx.D.order,
        "defect_generators": [list(g.images) for g in ctx.D.generators],
        "centralizer_order": ctx.C.order,
        "normalizer_order": ctx.H.order,
        "theta": _char_blob(ctx.theta),
        "phi": _char_blob(ctx.phi),
        "paths_agree": agree,
        "unique_correspondent": unique,
        "ok": ok,
    }
    return payload, ok, lines


def cmd_cocycle(spec: dict, seed: int, args) -> tuple:
    inst = resolve_instance(spec)
    t0 = time.perf_counter()
    ctx = _context(spec, inst, seed)
    w = ctx.witness
    big = cocycle_class(ctx.t1)
    small = cocycle_class(ctx.t2)

    def is_trivial(cls):
        c = cls.representative
        triv = trivial_cocycle(c.group, c.field, c.action)
        return cohomologous(c, triv) is not None

    payload = {
        "quotient_order": big.representative.group.order,
        "big_class_trivial": is_trivial(big),
        "small_class_trivial": is_trivial(small),
        "classes_match": w.ok,
        "gamma_found": w.gamma is not None,
        "ok": w.ok,
    }
    lines = [
        "cocycle: quotient order %d in %.2fs"
        % (payload["quotient_order"], time.perf_counter() - t0),
        "  big side trivial: %s, small side trivial: %s"
        % (payload["big_class_trivial"], payload["small_class_trivial"]),
        "  classes match: %s" % w.ok,
    ]
    return payload, w.ok, lines


def cmd_order(spec: dict, seed: int, args) -> tuple:
    inst = resolve_instance(spec)
    t0 = time.perf_counter()
    target = spec.get("order_target")
    if target is None:
        ctx = _context(spec, inst, seed)
        w = ctx.witness
    else:
        if not isinstance(target, dict):
            raise InputError("order_target must be an object")
        N = _need(inst, "N", "normal subgroup")
        theta = _select_theta(ibr(N, inst["p"], inst["L"], seed=seed), spec.get("theta"))
        t1 = make_triple(inst["G"], N, theta)
        sub = {"degree": spec["degree"], **target}
        H = _subgroup(inst["G"], _gens(sub, "group"), "order_target group")
        C = _subgroup(inst["G"], _gens(sub, "normal"), "order_target normal")
        lam = _select_theta(
            ibr(C, inst["p"], inst["L"], seed=seed),
            target.get("theta"),
            label="order_target theta",
        )
        t2 = make_triple(H, C, lam)
        w = order_witness(t1, t2)
    clauses = None
    if w.report is not None:
        clauses = {
            "product": w.report.product_ok,
            "stabilizers": w.report.stabilizers_ok,
            "factors": w.report.factors_ok,
            "mu": w.report.mu_ok,
        }
    payload = {"ok": w.ok, "reason": w.reason, "clauses": clauses}
    lines = [
        "order: %s in %.2fs"
        % (w.reason or "relation holds", time.perf_counter() - t0)
    ]
    if clauses:
        lines.append(
            "  clauses product=%(product)s stabilizers=%(stabilizers)s "
            "factors=%(factors)s mu=%(mu)s" % clauses
        )
    return payload, w.ok, lines


def cmd_verify(spec: dict, seed: int, args) -> tuple:
    inst = resolve_instance(spec)
    t0 = time.perf_counter()
    ctx = _context(spec, inst, seed)
    taus = _automorphisms(spec, inst["G"])
    if taus:
        rep = verify_corollary_b(ctx, taus, level=args.level, seed=seed)
    else:
        rep = verify_theorem_a(ctx, level=args.level, seed=seed)
    lines = [
        "verify: D order %d, C order %d, H order %d"
        % (ctx.D.order, ctx.C.order, ctx.H.order)
    ]
    for name, spent in rep.timings.items():
        if name not in rep.conditions:
            lines.append("  %-28s setup %.2fs" % (name, spent))
    for name, good in rep.conditions.items():
        lines.append(
            "  %-28s %s  %.2fs"
            % (name, "pass" if good else "FAIL", rep.timings.get(name, 0.0))
        )
    lines.append("total %.2fs" % (time.perf_counter() - t0))
    payload = {
        "mode": "corollary" if taus else "theorem",
        "level": args.level,
        "defect_order": ctx.D.order,
        "centralizer_order": ctx.C.order,
        "normalizer_order": ctx.H.order,
        "phi": _char_blob(ctx.phi),
        "conditions": dict(rep.conditions),
        "witnesses": rep.witnesses,
        "ok": rep.ok,
    }
    return payload, rep.ok, lines


_COMMANDS = {
    "ibr": cmd_ibr,
    "dgn": cmd_dgn,
    "cocycle": cmd_cocycle,
    "order": cmd_order,
    "verify": cmd_verify,
}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dgnwb",
        description="Exact verification of equivariant Brauer character bijections.",
    )
    ap.add_argument("command", choices=sorted(_COMMANDS))
    ap.add_argument("--spec", required=True, help="JSON instance spec file")
    ap.add_argument("--seed", type=int, default=None, help="override the spec seed")
    ap.add_argument(
        "--level",
        choices=("quick", "exhaustive"),
        default="exhaustive",
        help="quantifier range for verify",
    )
    ap.add_argument("--out", help="write the machine report to this file")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        spec = load_spec(args.spec)
        seed = args.seed if args.seed is not None else int(spec.get("seed", 0))
        payload, ok, lines = _COMMANDS[args.command](spec, seed, args)
    except InputError as e:
        print("error: %s" % e, file=sys.stderr)
        return e.exit_code
    except VerificationError as e:
        print("verification failed: %s" % e, file=sys.stderr)
        return e.exit_code
    except InternalCheckError as e:
        print("internal check failed: %s" % e, file=sys.stderr)
        return e.exit_code
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": args.command,
        "seed": seed,
        "instance": spec,
    }
    report.update(payload)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    for line in lines:
        print(line)
    print("result: %s" % ("ok" if ok else "FAIL"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
