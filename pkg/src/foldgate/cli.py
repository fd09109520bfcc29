"""Command-line pipeline: build codes, analyze them, run brute-force oracles.

Exit codes: 1 for parse and I/O errors, 2 when a precondition fails (for
example no ZX-duality exists), 3 when the automorphism cap is exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .constructors import ClassicalCode, hypergraph_product, surface_code
from .coxeter import BRING, CoxeterError, EnumerationLimit, Presentation, hyperbolic_code, reflection_55
from .css import (
    CssCode,
    CssError,
    LogicalBasis,
    brute_force_distance,
    check_basis,
    code_from_dict,
    code_to_dict,
    direct_sum,
    distance,
    logical_bases,
    symplectify,
)
from .dualities import (
    CapExceeded,
    DualityError,
    automorphism_group,
    classical_automorphisms,
    find_tau0,
    isomorphism,
    phase_violations,
    zx_dualities,
)
from .f2 import BitMatrix, F2Error, block_diag
from .gates import GateError, gate_set, hadamard_gate, phase_gate
from .groups import F2MatrixGroup, GroupError, index_in_sp, invariant_subspaces, naive_order, restrict

SCHEMA = "foldgate.report/1"
BASIS_CHOICES = ("auto", "computed", "paper", "primed", "block", "file")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's 2
        raise UsageError(message)


def _matrix(m: BitMatrix) -> list[str]:
    return ["".join(map(str, r)) for r in m.to_dense().tolist()]


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


# build


def _build(args) -> dict:
    basis = None
    if args.kind == "bring":
        code = hyperbolic_code(BRING, "bring")
    elif args.kind == "hyperbolic":
        if args.presentation:
            try:
                text = Path(args.presentation).read_text(encoding="utf-8")
            except OSError as exc:
                raise UsageError(f"cannot read {args.presentation}: {exc.strerror}") from None
            pres = Presentation.parse(text)
            if args.relator:
                pres = pres.with_relators(*args.relator)
        else:
            pres = reflection_55(*(args.relator or []))
        code = hyperbolic_code(pres, "hyperbolic")
    elif args.kind == "hgp":
        if args.seed:
            seed = ClassicalCode.from_dict(_read_json(args.seed))
        else:
            from .fixtures import hgp_seed

            seed = hgp_seed()
        code = hypergraph_product(seed, seed, "hgp")
    elif args.kind == "surface":
        code, _ = surface_code(args.d)
    else:  # stack
        if not args.code:
            raise UsageError("build stack needs --code")
        single, b = code_from_dict(_read_json(args.code))
        code = direct_sum(single, single)
        if b is not None:
            basis = LogicalBasis(block_diag(b.zbasis, b.zbasis), block_diag(b.xbasis, b.xbasis))
    if basis is None and code.k > 0:
        basis = logical_bases(code)
    return code_to_dict(code, basis)


# analyze


def _transport(code: CssCode, ref: CssCode, basis: LogicalBasis) -> LogicalBasis:
    """Carry a basis of ``ref`` over to an isomorphic ``code``."""
    iso = isomorphism(ref, code)
    if iso is None:
        raise CssError("code is not isomorphic to the fixture the basis belongs to")

    def move(m: BitMatrix) -> BitMatrix:
        return BitMatrix.from_supports([sorted(iso.qubits[q] for q in s) for s in m.supports()], code.n)

    return LogicalBasis(move(basis.zbasis), move(basis.xbasis))


def _basis(code: CssCode, stored: LogicalBasis | None, choice: str) -> tuple[LogicalBasis, str]:
    if choice in ("paper", "primed"):
        from .fixtures import bring

        data = bring()
        ref = data.basis if choice == "paper" else data.primed
        return _transport(code, data.code, ref), choice
    if choice == "block":
        from .fixtures import block_code

        ref_code, ref = block_code()
        return _transport(code, ref_code, ref), choice
    if choice == "file":
        if stored is None:
            raise CssError("input file has no logical basis")
        return stored, "file"
    if choice == "auto" and stored is not None:
        return stored, "file"
    return symplectify(logical_bases(code)), "computed"


def _analyze(args) -> dict:
    obj = _read_json(args.code)
    raw = Path(args.code).read_bytes()
    code, stored = code_from_dict(obj)
    report: dict = {
        "schema": SCHEMA,
        "version": __version__,
        "input_sha256": hashlib.sha256(raw).hexdigest(),
        "code": {"n": code.n, "k": code.k, "rx": code.rx, "rz": code.rz, "label": code.label},
    }
    if args.distance is not None:
        d = distance(code, args.distance)
        report["code"]["distance"] = {"w_max": args.distance, "d": d}
    need_dual = args.dualities or args.gates or args.group or args.invariants
    if not need_dual:
        return report
    if code.k == 0:
        raise CssError("code encodes no logical qubits")
    basis, basis_id = _basis(code, stored, args.basis)
    check_basis(code, basis)
    report["basis"] = basis_id
    auts = automorphism_group(code)
    duals = zx_dualities(code)
    selfinv = [t for t in duals if t.is_self_inverse()]
    if args.dualities:
        report["dualities"] = {
            "automorphisms": len(auts),
            "zx_dualities": len(duals),
            "self_inverse": len(selfinv),
            "classical_automorphisms": len(classical_automorphisms(code)),
            "self_inverse_detail": [
                {
                    "qubits": list(t.qubits),
                    "fixed": len(t.fixed_qubits()),
                    "violations": phase_violations(code, t),
                }
                for t in selfinv
            ],
        }
    if not (args.gates or args.group or args.invariants):
        return report
    if not selfinv:
        raise DualityError("code has no self-inverse ZX-duality")
    # tau0 pairs the unprimed reference basis; the primed one mixes rows
    pairing = _basis(code, stored, "paper")[0] if basis_id == "primed" else basis
    try:
        taus = [find_tau0(code, pairing, duals).duality]
        chosen = "tau0"
    except DualityError:
        taus, chosen = selfinv, "all-self-inverse"
    report["taus"] = chosen
    if args.gates:
        gates = []
        for t in taus:
            entry = {"fixed_qubits": t.fixed_qubits(), "hadamard": _matrix(hadamard_gate(code, t, basis).logical)}
            bad = phase_violations(code, t)
            if bad:
                entry["phase"] = None
                entry["phase_violations"] = bad
            else:
                entry["phase"] = _matrix(phase_gate(code, t, basis).logical)
            gates.append(entry)
        report["gates"] = gates
    gs = gate_set(code, basis, auts, taus)
    group = gs.group()
    if args.group:
        report["group"] = {
            "generators": {
                "permutation": len(gs.permutations),
                "hadamard": len(gs.hadamards),
                "phase": len(gs.phases),
            },
            "permutation_image_order": str(gs.permutation_group().order()),
            "order": str(group.order()),
            "index_in_sp": str(index_in_sp(group, code.k, gs.form)),
        }
    if args.invariants:
        dec = invariant_subspaces(group, gs.form)
        parts = []
        for p in dec.parts:
            entry = {"dim": p.dim, "kind": p.kind, "basis": _matrix(p.basis)}
            if dec.split:
                r = restrict(group, p.basis)
                entry["restricted_order"] = str(r.group.order())
                entry["faithful"] = r.faithful
            parts.append(entry)
        report["invariants"] = {
            "parts": parts,
            "minimal": [{"dim": m.dim, "kind": m.kind} for m in dec.minimal],
            "unique": dec.unique,
        }
    return report


# oracles


def _oracle(args) -> dict:
    obj = _read_json(args.input)
    if args.kind == "distance":
        code, _ = code_from_dict(obj)
        if code.n > 24:
            raise CssError("brute-force distance is limited to n <= 24")
        brute = brute_force_distance(code, args.w)
        fast = distance(code, args.w)
        return {"schema": SCHEMA, "w_max": args.w, "brute_force": brute, "distance": fast, "agree": brute == fast}
    g = F2MatrixGroup.from_dict(obj)
    naive = naive_order(g, args.limit)
    chain = g.order()
    return {"schema": SCHEMA, "naive": str(naive), "chain": str(chain), "agree": naive == chain}


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="foldgate", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"foldgate {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="construct a code and emit its JSON")
    b.add_argument("kind", choices=["bring", "hyperbolic", "hgp", "surface", "stack"])
    b.add_argument("--presentation", help="presentation file for 'hyperbolic'")
    b.add_argument("--relator", action="append", help="extra relator (repeatable)")
    b.add_argument("--seed", help="classical code JSON for 'hgp'")
    b.add_argument("--d", type=int, default=3, help="surface code distance")
    b.add_argument("--code", help="code JSON for 'stack'")
    b.add_argument("--out")

    a = sub.add_parser("analyze", help="dualities, gates, groups and subspaces of a code")
    a.add_argument("code")
    a.add_argument("--dualities", action="store_true")
    a.add_argument("--gates", action="store_true")
    a.add_argument("--group", action="store_true")
    a.add_argument("--invariants", action="store_true")
    a.add_argument("--distance", type=int, metavar="W")
    a.add_argument("--basis", choices=BASIS_CHOICES, default="auto")
    a.add_argument("--out")

    o = sub.add_parser("oracle", help="brute-force cross-checks")
    o.add_argument("kind", choices=["distance", "group"])
    o.add_argument("input")
    o.add_argument("--w", type=int, default=4)
    o.add_argument("--limit", type=int, default=10**5)
    o.add_argument("--out")
    return p


def run(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
        if args.command == "build":
            report = _build(args)
        elif args.command == "analyze":
            report = _analyze(args)
        else:
            report = _oracle(args)
        _emit(report, args.out)
        return 0
    except CapExceeded as exc:
        print(f"foldgate: {exc}", file=sys.stderr)
        return 3
    except (UsageError, OSError, CoxeterError) as exc:
        print(f"foldgate: {exc}", file=sys.stderr)
        return 1
    except (CssError, DualityError, GateError, GroupError, F2Error, EnumerationLimit, ValueError) as exc:
        print(f"foldgate: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
