"""Command-line front end.  Reads JSON (or a polynomial expression) and writes JSON.

Exit codes: 0 success, 2 malformed input, 3 violated precondition
(for example a polynomial outside the requested ideal), 4 term budget
exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, List, Optional, Sequence

from . import acceptance
from .abp import LayeredABP, det_abp, eval_abp, imm_abp, valiant_matrix
from .errors import BudgetExceeded, ContractViolation, DetIdealsError, InputError
from .exact_poly import Poly, parse_poly
from .degeneration import reduce_to_single_bideterminant
from .hasse import deriv_space_dim
from .ips import (
    AxiomSystem, IPSCertificate, build_rank_instance, compound_certificate, det_inversion_refutation,
    extract_ideal_element, extraction_width, identity_condenser, inversion_system, verify_certificate,
)
from .oracle_compose import compose_projection, proj_to_det, proj_to_imm
from .pfaffian import (
    pfaff_compose, pfaff_reduce, pfaff_straighten, pfaffian, pfaffian_abp, subpfaff_embed,
)
from .pit import (
    MatrixGenerator, apply_generator, expand_generator, fs_condenser, random_condenser,
    recursive_generator, sz_test,
)
from .straightening import infer_shape, is_in_det_ideal, min_width, straighten

SEED_ENV = "DETIDEALS_SEED"

EXIT_INPUT = 2
EXIT_CONTRACT = 3
EXIT_BUDGET = 4

# ---------------------------------------------------------------- I/O helpers


def read_text(path: Optional[str]) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def read_json(path: Optional[str]) -> Any:
    text = read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON: {exc}") from exc


def read_poly(path: Optional[str]) -> Poly:
    return parse_poly(read_text(path))


def as_poly(value) -> Poly:
    """An entry given as an integer, a rational or expression string, or Poly JSON."""
    if isinstance(value, bool):
        raise InputError("booleans are not matrix entries")
    if isinstance(value, int):
        return Poly.const(value)
    if isinstance(value, str):
        return parse_poly(value)
    if isinstance(value, dict):
        return Poly.from_json(value)
    raise InputError(f"bad matrix entry: {value!r}")


def read_matrix(data) -> List[List[Poly]]:
    if isinstance(data, dict):
        data = data.get("matrix")
    if not isinstance(data, list) or not data or not all(isinstance(row, list) for row in data):
        raise InputError("expected a matrix as a list of rows")
    return [[as_poly(v) for v in row] for row in data]


def read_skew(data) -> List[List[Poly]]:
    """{"size": n, "entries": [[i, j, value], ...]} with i < j; missing entries are 0."""
    try:
        size = int(data["size"])
        entries = data.get("entries", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad skew matrix JSON: {exc}") from exc
    mat = [[Poly.zero()] * size for _ in range(size)]
    for item in entries:
        if not isinstance(item, list) or len(item) != 3:
            raise InputError("skew entries are [i, j, value] triples")
        i, j, value = item
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= size):
            raise InputError(f"skew entry ({i}, {j}) must satisfy 1 <= i < j <= {size}")
        p = as_poly(value)
        mat[i - 1][j - 1] = p
        mat[j - 1][i - 1] = -p
    return mat


def skew_json(mat: Sequence[Sequence[Poly]]) -> dict:
    size = len(mat)
    return {
        "size": size,
        "entries": [[i + 1, j + 1, mat[i][j].to_json()] for i in range(size) for j in range(i + 1, size)
                    if not mat[i][j].is_zero()],
    }


def matrix_json(mat: Sequence[Sequence[Poly]]) -> List[List[dict]]:
    return [[p.to_json() for p in row] for row in mat]


def read_abp(path: Optional[str]) -> LayeredABP:
    return LayeredABP.from_json(read_json(path))


def emit(obj, out: Optional[str]) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def circuit_report(circuit) -> dict:
    info = circuit.info
    return {
        "circuit": circuit.to_json(),
        "transcript": {"q": info["q"], "t": info["t"], "N": info["N"], "sigma": list(info["sigma"]),
                       "alpha": info["alpha"]},
        "output": circuit.evaluate().eps_slice(0).to_json(),
    }


def _ints(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _need(value, flag: str):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


# ---------------------------------------------------------------- commands


def cmd_straighten(a) -> Any:
    return straighten(read_poly(a.input), a.n, a.m).to_json()


def cmd_ideal_member(a) -> Any:
    f = read_poly(a.input)
    r = _need(a.r, "--r")
    member = is_in_det_ideal(f, r, a.n, a.m)
    return {"member": member, "min_width": None if f.is_zero() else min_width(f, a.n, a.m)}


def cmd_reduce(a) -> Any:
    f = read_poly(a.input)
    return reduce_to_single_bideterminant(f, _need(a.r, "--r"), a.n, a.m, budget=a.budget).to_json()


def cmd_compose(a) -> Any:
    f = read_poly(a.input)
    r = _need(a.r, "--r")
    if a.target == "det":
        circuit = proj_to_det(f, r, _need(a.t, "--t"), a.n, a.m)
    elif a.target == "imm":
        circuit = proj_to_imm(f, r, _need(a.w, "--w"), _need(a.d, "--d"), a.n, a.m)
    else:
        circuit = compose_projection(f, r, read_abp(_need(a.abp, "--abp")), a.n, a.m)
    return circuit_report(circuit)


def cmd_pfaffian(a) -> Any:
    if a.action == "eval":
        return {"pfaffian": pfaffian(read_skew(read_json(a.input))).to_json()}
    if a.action == "embed":
        return skew_json(subpfaff_embed(read_matrix(read_json(a.input))))
    f = read_poly(a.input)
    size = a.order
    if a.action == "straighten":
        return pfaff_straighten(f, size).to_json()
    if a.action == "reduce":
        return pfaff_reduce(f, _need(a.r, "--r"), size, budget=a.budget).to_json()
    r = _need(a.r, "--r")
    prog = read_abp(a.abp) if a.abp else pfaffian_abp(_need(a.target_order, "--target-order"))
    return circuit_report(pfaff_compose(f, r, prog, size))


def cmd_derivative_dim(a) -> Any:
    return {"dim": deriv_space_dim(read_poly(a.input), a.order), "order": a.order}


def _condenser(a, n: int, r: int):
    kind = a.condenser
    if kind == "identity":
        return identity_condenser(n)
    if kind == "random":
        return random_condenser(n, r, a.size or 2 * r * (n - r) + 2, seed=a.seed)
    return fs_condenser(n, r, a.omega, size=a.size, seed=a.seed)


def cmd_pit(a) -> Any:
    if a.action == "gen":
        n = _need(a.n, "--n")
        g = MatrixGenerator(n, a.m or n, _need(a.r, "--r"))
        return {"seed_variables": [str(v) for v in g.seed], "matrix": matrix_json(expand_generator(g))}
    if a.action == "apply":
        f = read_poly(a.input)
        n0, m0 = infer_shape(f)
        g = MatrixGenerator(a.n or n0, a.m or m0, _need(a.r, "--r"))
        image = apply_generator(f, g)
        return {"image": image.to_json(), "vanishes": image.is_zero()}
    if a.action == "recursive":
        gen = recursive_generator(_need(a.n, "--n"), _need(a.k, "--k"), _ints(_need(a.schedule, "--schedule")))
        out = gen.report()
        if a.materialize:
            out["outputs"] = [p.to_json() for p in gen.materialize()]
        return out
    if a.action == "condenser":
        n, r = _need(a.n, "--n"), _need(a.r, "--r")
        return _condenser(a, n, r).to_json()
    f = read_poly(a.input)
    return {"nonzero": sz_test(f, a.trials, a.seed), "trials": a.trials, "seed": a.seed}


def _system_and_cert(data):
    try:
        return AxiomSystem.from_json(data["system"]), IPSCertificate.from_json(data["certificate"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"expected {{\"system\": ..., \"certificate\": ...}}: {exc}") from exc


def cmd_ips(a) -> Any:
    if a.action == "build-instance":
        n, r = _need(a.n, "--n"), _need(a.r, "--r")
        if r == n and a.condenser == "fs":
            system = inversion_system(n)
        else:
            system = build_rank_instance(n, r, _condenser(a, n, r), include_boolean=not a.no_boolean)
        return system.to_json()
    if a.action == "refute":
        n = _need(a.n, "--n")
        r = a.r or n
        if r == n:
            system, cert = inversion_system(n), det_inversion_refutation(n)
        elif (n, r) == (3, 2) and a.size is None:
            system, cert, _ = acceptance.rank_two_instance(a.seed)
        else:
            size = a.size or 2 * r * (n - r) + 2
            system = build_rank_instance(n, r, random_condenser(n, r, size, seed=a.seed))
            cert = compound_certificate(system)
        verify_certificate(cert, system)
        return {"system": system.to_json(), "certificate": cert.to_json()}
    system, cert = _system_and_cert(read_json(a.input))
    if a.action == "verify":
        return {"verified": verify_certificate(cert, system)}
    h = extract_ideal_element(cert, system, check_width=False)
    out = {"h": h.to_json()}
    if system.witness is not None:
        out["witness_value"] = str(h.evaluate({v: system.witness.get(v, 0) for v in system.variables}))
    if system.n is not None and system.r is not None:
        out["width_at_least_r"], out["method"] = extraction_width(h, system)
    return out


def cmd_abp(a) -> Any:
    if a.action == "det":
        return det_abp(_need(a.t, "--t")).to_json()
    if a.action == "imm":
        return imm_abp(_need(a.w, "--w"), _need(a.d, "--d")).to_json()
    if a.action == "pfaffian":
        return pfaffian_abp(_need(a.order, "--order")).to_json()
    prog = read_abp(a.input)
    if a.action == "eval":
        return {"polynomial": eval_abp(prog).to_json(), "vertices": prog.vertex_count, "length": prog.length}
    return {"matrix": matrix_json(valiant_matrix(prog))}


def cmd_accept(a) -> Any:
    only = _ints(a.only) if a.only else None
    report = acceptance.run_acceptance(a.seed, only, rerun=not a.no_rerun)
    if a.summary:
        for line in acceptance.summary_lines(report):
            print(line, file=sys.stderr)
    return report


# ---------------------------------------------------------------- parser


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--budget", type=int, default=None, help="term budget for expansions")
    common.add_argument("--output", "-o", default=None, help="write JSON here instead of stdout")
    common.add_argument("--r", type=int, default=None)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--m", type=int, default=None)
    common.add_argument("--k", type=int, default=None)
    common.add_argument("--order", type=int, default=None)

    p = argparse.ArgumentParser(prog="detideals", description="Exact tools for determinantal and Pfaffian ideals.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, actions=None, input_arg=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if actions:
            sp.add_argument("action", choices=actions)
        if input_arg:
            sp.add_argument("input", nargs="?", default="-", help="input file (default: stdin)")
        sp.set_defaults(fn=fn)
        return sp

    add("straighten", cmd_straighten, "expand a polynomial in standard bideterminants")
    add("ideal-member", cmd_ideal_member, "membership in the ideal of r x r minors")
    add("reduce", cmd_reduce, "degenerate an ideal element to a single bideterminant")
    sp = add("compose-oracle", cmd_compose, "build an oracle circuit for a small program")
    sp.add_argument("--target", choices=["det", "imm", "abp"], default="abp")
    sp.add_argument("--t", type=int, default=None, help="determinant size for --target det")
    sp.add_argument("--w", type=int, default=None, help="IMM width")
    sp.add_argument("--d", type=int, default=None, help="IMM length")
    sp.add_argument("--abp", default=None, help="program JSON for --target abp")

    sp = add("pfaffian", cmd_pfaffian, "Pfaffian tools", ["eval", "straighten", "reduce", "embed", "compose"])
    sp.add_argument("--abp", default=None, help="program JSON for compose")
    sp.add_argument("--target-order", type=int, default=None, help="compose to the Pfaffian of this order")

    add("derivative-dim", cmd_derivative_dim, "dimension of the Hasse derivative space")

    sp = add("pit", cmd_pit, "generators, condensers and random identity tests", ["gen", "apply", "recursive", "condenser", "sz"])
    sp.add_argument("--schedule", default=None, help="comma-separated ranks, one per stage")
    sp.add_argument("--materialize", action="store_true")
    sp.add_argument("--omega", default="2")
    sp.add_argument("--size", type=int, default=None)
    sp.add_argument("--condenser", choices=["fs", "random", "identity"], default="fs")
    sp.add_argument("--trials", type=int, default=10)

    sp = add("ips", cmd_ips, "ideal proof system instances and certificates", ["build-instance", "verify", "refute", "extract"])
    sp.add_argument("--condenser", choices=["fs", "random", "identity"], default="fs")
    sp.add_argument("--omega", default="2")
    sp.add_argument("--size", type=int, default=None)
    sp.add_argument("--no-boolean", action="store_true", help="omit the x^2 = x and y^2 = y axioms")

    sp = add("abp", cmd_abp, "algebraic branching programs", ["eval", "valiant", "det", "imm", "pfaffian"])
    sp.add_argument("--t", type=int, default=None)
    sp.add_argument("--w", type=int, default=None)
    sp.add_argument("--d", type=int, default=None)

    sp = add("accept", cmd_accept, "run the acceptance suite", input_arg=False)
    sp.add_argument("--only", default=None, help="comma-separated criterion ids")
    sp.add_argument("--no-rerun", action="store_true", help="skip the determinism rerun")
    sp.add_argument("--summary", action="store_true", help="also print one line per criterion to stderr")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # "pfaffian reduce --r 2 in.txt": argparse leaves the file behind the flags
    if extra:
        if len(extra) == 1 and not extra[0].startswith("-") and getattr(args, "input", None) == "-":
            args.input = extra[0]
        else:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        if args.seed is None:
            args.seed = default_seed()
        result = args.fn(args)
        emit(result, args.output)
    except BudgetExceeded as exc:
        return _fail(exc, EXIT_BUDGET)
    except ContractViolation as exc:
        return _fail(exc, EXIT_CONTRACT)
    except (InputError, DetIdealsError) as exc:
        return _fail(exc, EXIT_INPUT)
    if args.command == "accept" and not result["passed"]:
        return 1
    return 0


def _fail(exc: Exception, code: int) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit": code}, sort_keys=True),
          file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
