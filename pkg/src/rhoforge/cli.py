"""Command-line verification pipelines and report emission.

Every subcommand assembles a JSON report: command echo, input digest,
named checks with pass/fail/info status, library version, and wall
clock.  Reports are written atomically and are byte-identical across
runs with the same inputs and seed, apart from the timing field.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
import time
from fractions import Fraction

from . import __version__
from .bar import BarChain
from .delta import DeltaComplex, boundary_simplex, ngon, simplex
from .groups import FiniteAbelianGroup
from .hyperbolize import (
    hyperbolized_simplex,
    hyperbolized_sphere,
    thm12_constant,
    z_comparison_table,
    z_formula,
)
from .lens import (
    LensError,
    LensSpec,
    divisor_count,
    homotopy_invariant_count,
    invariant_count,
    lens_complex,
    rho_lower_bound_check,
)
from .polytopes import (
    ColoredCell,
    ColoredPolytope,
    ColoringError,
    NotACycleError,
    octagon_cells,
    octagon_polytope,
)
from .towers import ResourceCapError, bounding_chain, catalan_number


class UsageError(Exception):
    pass


# -- report plumbing --------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return (
            int(obj)
            if obj.denominator == 1
            else {"num": obj.numerator, "den": obj.denominator}
        )
    if isinstance(obj, frozenset):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _dumps(payload) -> str:
    return json.dumps(payload, indent=2, default=_jsonable)


def _atomic_write(path: str, text: str) -> None:
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(
        dir=os.path.dirname(target), prefix=".rhoforge-", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _check(name: str, ok=None, **values) -> dict:
    status = "info" if ok is None else ("pass" if ok else "fail")
    return {"name": name, "status": status, "values": values}


def _assemble(command, args, inputs, checks, extra, t0) -> dict:
    digest = hashlib.sha256(
        json.dumps(inputs, sort_keys=True, default=_jsonable).encode()
    ).hexdigest()
    failed = [c["name"] for c in checks if c["status"] == "fail"]
    report = {
        "command": command,
        "inputs": inputs,
        "inputs_digest": digest,
        "version": __version__,
        "seed": args.seed,
        "status": "fail" if failed else "pass",
        "failed_checks": failed,
        "checks": checks,
    }
    if extra:
        report.update(extra)
    report["elapsed_s"] = round(time.monotonic() - t0, 6)
    return report


# -- shared input loading ---------------------------------------------


def _parse_group(text: str) -> FiniteAbelianGroup:
    try:
        moduli = [int(p) for p in text.split(",") if p.strip()]
        return FiniteAbelianGroup(moduli)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad group {text!r}: {exc}") from None


def _group_from_field(field) -> FiniteAbelianGroup:
    if isinstance(field, list):
        return FiniteAbelianGroup(field)
    return FiniteAbelianGroup.from_json(field)


def _first_generator(group: FiniteAbelianGroup):
    return group.element([1] + [0] * (len(group.moduli) - 1))


def _load_cycle(args):
    """Cells for bound-chain: a JSON file or the built-in octagon.

    Files carry {"group": ..., "cells": [{"gen": ..., "sign": ...}]} for
    an explicit decomposition, or {"group": ..., "degree": ...,
    "terms": ...} for a collapsed chain whose terms expand by |coef|.
    """
    flag_group = _parse_group(args.group) if args.group else None
    if args.octagon:
        if flag_group is None:
            raise UsageError("--octagon needs --group")
        g = _first_generator(flag_group)
        return flag_group, octagon_cells(g, g, g, g), {
            "octagon": True,
            "group": flag_group.to_json(),
        }
    if not args.cycle:
        raise UsageError("need --cycle FILE or --octagon")
    with open(args.cycle) as fh:
        data = json.load(fh)
    if "group" in data:
        group = _group_from_field(data["group"])
        if flag_group is not None and group.moduli != flag_group.moduli:
            raise UsageError("--group disagrees with the cycle file")
    elif flag_group is not None:
        group = flag_group
    else:
        raise UsageError("cycle file has no group; pass --group")
    if "cells" in data:
        cells = [
            ColoredCell(
                tuple(group.element(r) for r in entry["gen"]),
                int(entry["sign"]),
            )
            for entry in data["cells"]
        ]
        payload = cells
    elif "terms" in data:
        payload = BarChain.from_json(group, data)
    else:
        raise UsageError("cycle file needs 'cells' or 'terms'")
    inputs = {"cycle": data, "group": group.to_json()}
    return group, payload, inputs


def _builtin_complex(spec: str) -> DeltaComplex:
    name, _, rest = spec.partition(":")
    try:
        if name == "ngon":
            return ngon(int(rest))
        if name == "simplex":
            return simplex(int(rest))
        if name == "boundary-simplex":
            return boundary_simplex(int(rest))
        if name == "lens":
            n, d = (int(p) for p in rest.split(","))
            return lens_complex(LensSpec(n, d))
    except (ValueError, LensError) as exc:
        raise UsageError(f"bad builtin {spec!r}: {exc}") from None
    raise UsageError(
        f"unknown builtin {name!r}; use ngon:N, simplex:N, "
        "boundary-simplex:N, or lens:N,D"
    )


def _load_complex(args):
    if args.builtin and args.complex:
        raise UsageError("pass either --complex or --builtin, not both")
    if args.builtin:
        return _builtin_complex(args.builtin), {"builtin": args.builtin}
    if args.complex:
        with open(args.complex) as fh:
            data = json.load(fh)
        return DeltaComplex.from_json(data), {"complex": data}
    raise UsageError("need --complex FILE or --builtin NAME")


def _homology_payload(K: DeltaComplex) -> dict:
    H = K.homology()
    return {
        "betti": list(H.betti),
        "torsion": [list(t) for t in H.torsion],
        "groups": [H.group(q) for q in range(len(H.betti))],
    }


# -- subcommands ------------------------------------------------------


def _cmd_bound_chain(args):
    group, payload, inputs = _load_cycle(args)
    checks = []
    extra = {}
    try:
        result = bounding_chain(payload)
    except NotACycleError as exc:
        checks.append(_check("input-is-cycle", False, error=str(exc)))
        return inputs, checks, extra, "report"
    except ColoringError as exc:
        checks.append(_check("tower-coloring", False, error=str(exc)))
        return inputs, checks, extra, "report"
    checks.append(_check("input-is-cycle", True))
    checks.append(
        _check(
            "boundary-identity",
            result.verified,
            multiplicity=result.multiplicity,
        )
    )
    checks.append(
        _check(
            "complexity-bound",
            result.complexity <= result.bound,
            complexity=result.complexity,
            bound=result.bound,
        )
    )
    extra["bounding"] = {
        "multiplicity": result.multiplicity,
        "cells": result.cells,
        "complexity": result.complexity,
        "bound": result.bound,
        "polytopes": [
            {
                "cells": p.cells,
                "pair_count": p.pair_count,
                "copies": p.copies,
                "heights": list(p.heights),
                "extensions": list(p.extensions),
            }
            for p in result.polytopes
        ],
    }
    return inputs, checks, extra, "report"


def _cmd_verify_polytope(args):
    if args.octagon:
        if not args.group:
            raise UsageError("--octagon needs --group")
        group = _parse_group(args.group)
        g = _first_generator(group)
        P = octagon_polytope(g, g, g, g)
        inputs = {"octagon": True, "group": group.to_json()}
    elif args.polytope:
        with open(args.polytope) as fh:
            data = json.load(fh)
        P = ColoredPolytope.from_json(data)
        inputs = {"polytope": data}
    else:
        raise UsageError("need --polytope FILE or --octagon")
    checks = [_check("coloring", P.check_coloring())]
    if checks[0]["status"] == "pass":
        labeling = P.endow(P.group.identity)
        checks.append(_check("endowment-consistent", labeling.check()))
    try:
        pairs = P.boundary_pairs()
        checks.append(_check("boundary-pairs", None, count=len(pairs)))
    except NotACycleError:
        checks.append(_check("boundary-pairs", None, count=None,
                             note="chain is not a cycle"))
    extra = {
        "polytope": {
            "degree": P.degree,
            "cells": len(P.cells),
            "gluings": len(P.gluings),
            "vertices": P.vertex_count,
        }
    }
    return inputs, checks, extra, "report"


def _cmd_homology(args):
    K, inputs = _load_complex(args)
    extra = {
        "f_vector": list(K.f_vector()),
        "euler": K.euler(),
        "homology": _homology_payload(K),
    }
    return inputs, [], extra, "report"


def _cmd_torsion(args):
    K, inputs = _load_complex(args)
    dets = [K.laplacian_pseudodet(q) for q in range(max(K.dim, 0) + 1)]
    extra = {
        "pseudodeterminants": dets,
        "torsion": K.laplacian_torsion(),
    }
    return inputs, [], extra, "report"


def _cmd_fvector(args):
    K, inputs = _load_complex(args)
    extra = {
        "f_vector": list(K.f_vector()),
        "total": K.total_cells(),
        "euler": K.euler(),
        "dim": K.dim,
    }
    return inputs, [], extra, "report"


def _cmd_hyperbolize(args):
    n = args.dim
    if n not in (1, 2, 3):
        raise UsageError("--dim must be 1, 2, or 3")
    inputs = {"dim": n}
    stage = hyperbolized_simplex(n)
    checks = []
    extra = {
        "stage_counts": list(stage.counts),
        "z_table": [
            {
                "n": row["n"],
                "z_formula": row["z_formula"],
                "construction": row["construction"],
                "ratio": row["ratio"],
                "built": row["built"],
            }
            for row in z_comparison_table(4)
        ],
    }
    if n <= 2:
        Y = hyperbolized_sphere(n)
        K = Y.complex
        extra["sphere"] = {
            "f_vector": list(K.f_vector()),
            "euler": K.euler(),
            "homology": _homology_payload(K),
        }
        extra["complex"] = K.to_json()
        H = K.homology()
        if n == 1:
            checks.append(
                _check(
                    "circle",
                    K.f_vector() == (6, 6) and H.betti == (1, 1),
                    f_vector=list(K.f_vector()),
                )
            )
        else:
            use = [0] * K.n_cells(1)
            for cell in K.faces[2]:
                for f in cell:
                    use[f] += 1
            checks.append(
                _check(
                    "closed-surface",
                    all(u == 2 for u in use),
                )
            )
            checks.append(
                _check(
                    "triangle-count",
                    K.n_cells(2) == 288,
                    triangles=K.n_cells(2),
                )
            )
            checks.append(
                _check(
                    "orientable-torsion-free",
                    H.betti[0] == 1
                    and H.betti[2] == 1
                    and all(not t for t in H.torsion),
                    betti=list(H.betti),
                )
            )
    return inputs, checks, extra, "out"


def _cmd_lens(args):
    try:
        spec = LensSpec(args.n, args.d)
        K = lens_complex(spec)
    except LensError as exc:
        raise UsageError(str(exc)) from None
    H = K.homology()
    f = K.f_vector()
    checks = [
        _check(
            "top-count",
            f[-1] == spec.n ** (spec.d - 1),
            top=f[-1],
            expected=spec.n ** (spec.d - 1),
        ),
        _check("euler-zero", K.euler() == 0, euler=K.euler()),
    ]
    if spec.d == 1:
        checks.append(_check("circle", H.betti == (1, 1)))
    else:
        checks.append(
            _check(
                "fundamental-torsion",
                H.betti[1] == 0 and H.torsion[1] == (spec.n,),
                h1_torsion=list(H.torsion[1]),
            )
        )
    inputs = {"N": spec.n, "d": spec.d}
    extra = {
        "f_vector": list(f),
        "total": sum(f),
        "homology": _homology_payload(K),
    }
    return inputs, checks, extra, "report"


def _cmd_rho_sweep(args):
    if args.stop < args.start:
        raise UsageError("--to must be at least --from")
    rows = []
    gated_failures = []
    for n in range(args.start, args.stop + 1):
        res = rho_lower_bound_check(LensSpec(n, args.d))
        rows.append(
            {
                "N": n,
                "rho": res.rho,
                "lower_bound": res.bound,
                "pass": res.holds,
                "status": res.status,
            }
        )
        if res.status == "ok" and not res.holds:
            gated_failures.append(n)
    checks = [
        _check(
            "bound-holds-in-hypothesis",
            not gated_failures,
            failures=gated_failures,
        )
    ]
    if args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["N", "rho", "lower_bound", "pass"])
        for row in rows:
            writer.writerow(
                [
                    row["N"],
                    repr(row["rho"]),
                    repr(row["lower_bound"]),
                    str(row["pass"]).lower(),
                ]
            )
        _atomic_write(args.csv, buf.getvalue())
    inputs = {"d": args.d, "from": args.start, "to": args.stop}
    extra = {"rows": rows}
    return inputs, checks, extra, "report"


def _cmd_constants(args):
    catalan = [catalan_number(k) for k in range(1, 6)]
    checks = [
        _check("z-4", z_formula(4) == 1728, value=z_formula(4)),
        _check(
            "thm12-k1",
            thm12_constant(1) == 2764800,
            value=thm12_constant(1),
        ),
        _check(
            "catalan",
            catalan == [1, 2, 5, 14, 42],
            values=catalan,
        ),
        _check(
            "invariant-counts",
            invariant_count(5, 7) == 2
            and invariant_count(6, 7) == 3
            and divisor_count(6) == 4
            and homotopy_invariant_count(6, 7) == 3,
        ),
    ]
    extra = {
        "z_table": z_comparison_table(4),
        "thm12": {str(k): thm12_constant(k) for k in (1, 2)},
        "catalan": catalan,
    }
    return {}, checks, extra, "report"


# -- parser and dispatch ----------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rhoforge",
        description="verification pipelines for colored-polytope bounding "
        "chains, lens quotients, and hyperbolized complexes",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=0, help="seed for any randomized checks"
    )
    common.add_argument(
        "--report", help="write the JSON report here (atomic)"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser(
        "bound-chain",
        parents=[common],
        help="build and verify a bounding chain for a cycle",
    )
    p.add_argument("--group", help="comma-separated moduli, e.g. 2 or 2,2")
    p.add_argument("--cycle", help="cycle JSON (cells or terms)")
    p.add_argument(
        "--octagon",
        action="store_true",
        help="use the built-in octagon decomposition with all four "
        "letters the first generator",
    )
    p.set_defaults(handler=_cmd_bound_chain)

    p = sub.add_parser(
        "verify-polytope",
        parents=[common],
        help="check coloring and endowment of a colored polytope",
    )
    p.add_argument("--polytope", help="polytope JSON file")
    p.add_argument("--group", help="group moduli for --octagon")
    p.add_argument("--octagon", action="store_true")
    p.set_defaults(handler=_cmd_verify_polytope)

    for name, handler in (
        ("homology", _cmd_homology),
        ("torsion", _cmd_torsion),
        ("fvector", _cmd_fvector),
    ):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--complex", help="complex JSON file")
        p.add_argument(
            "--builtin",
            help="ngon:N, simplex:N, boundary-simplex:N, or lens:N,D",
        )
        p.set_defaults(handler=handler)

    p = sub.add_parser(
        "hyperbolize",
        parents=[common],
        help="build a hyperbolization stage and its sphere",
    )
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out", help="write the JSON report here (atomic)")
    p.set_defaults(handler=_cmd_hyperbolize)

    p = sub.add_parser("lens", parents=[common])
    p.add_argument("--N", dest="n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(handler=_cmd_lens)

    p = sub.add_parser("rho-sweep", parents=[common])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--from", dest="start", type=int, default=3)
    p.add_argument("--to", dest="stop", type=int, default=50)
    p.add_argument("--csv", help="write N,rho,lower_bound,pass rows here")
    p.set_defaults(handler=_cmd_rho_sweep)

    p = sub.add_parser("constants", parents=[common])
    p.set_defaults(handler=_cmd_constants)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    t0 = time.monotonic()
    try:
        inputs, checks, extra, out_attr = args.handler(args)
    except UsageError as exc:
        print(f"rhoforge: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"rhoforge: resource cap exceeded: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"rhoforge: {exc}", file=sys.stderr)
        return 2
    report = _assemble(args.subcommand, args, inputs, checks, extra, t0)
    text = _dumps(report)
    path = getattr(args, out_attr, None) or args.report
    if path:
        _atomic_write(path, text + "\n")
        print(f"{report['status']}: report written to {path}")
    else:
        print(text)
    return 0 if report["status"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
