"""Command line: ``neron desing1 | special | linv | verify``.

Exit status is 0 on success, 2 when the bound is too small for the given
approximation (``not-well-chosen`` / ``bound-too-small``) and 1 for input or
internal errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import List, Optional, Sequence

from .cli_io import (
    ProblemFile,
    emit_json,
    failure_json,
    load_problem,
    parse_polynomial,
    presentation_json,
    special_json,
)
from .errors import InputError, NeronError, NotWellChosen
from .neron_dim1 import (
    Check,
    DesingProblem,
    Hints,
    SmoothPresentation,
    build_desingularization,
    choice_from_certificate,
    l_invariant,
    select_system,
    verify_presentation,
)
from .polycore import PolyRing, to_string

log = logging.getLogger("neron")

EXIT_OK, EXIT_ERROR, EXIT_BOUND = 0, 1, 2


def _index_list(text: str, what: str) -> List[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"{what}: expected comma separated integers, got {text!r}") from None
    if not out or any(i < 1 for i in out):
        raise InputError(f"{what}: indices are 1-based and positive")
    return out


def _apply_flags(pf: ProblemFile, args, inner: bool = False) -> ProblemFile:
    d_mode = args.d_mode or os.environ.get("NERON_D_MODE") or None
    if d_mode is not None and d_mode not in ("normalized", "exact"):
        raise InputError(f"d-mode must be 'normalized' or 'exact', got {d_mode!r}")
    h = pf.hints
    f, L, cols = h.f_indices, h.L, h.minor_cols
    ring = pf.coefficient_ring if pf.base_kind == "artinian" else pf.ring
    if args.hint_f:
        f = tuple(i - 1 for i in _index_list(args.hint_f, "--hint-f"))
    if args.hint_L:
        try:
            L = parse_polynomial(args.hint_L, ring)
        except InputError as exc:
            raise InputError(f"--hint-L: {exc.args[0]}") from None
    if args.hint_minor:
        rows, sep, colspec = args.hint_minor.partition(":")
        if not sep:
            raise InputError("--hint-minor expects rows:cols, e.g. 1,2:4,2")
        r = _index_list(rows, "--hint-minor rows")
        cols = tuple(i - 1 for i in _index_list(colspec, "--hint-minor cols"))
        if r != list(range(1, len(cols) + 1)):
            raise InputError("--hint-minor: the rows of the bordered Jacobian are those of f, "
                             f"so rows must be 1..{len(cols)}")
    return pf.with_overrides(d_mode=d_mode, hints=Hints(f, L, cols))


def _write(obj, path: Optional[str]):
    text = emit_json(obj)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_desing1(args) -> int:
    pf = _apply_flags(load_problem(args.input), args)
    problem = pf.to_desing_problem()
    choice = None
    try:
        choice = select_system(problem)
        pres = build_desingularization(problem, choice)
    except NotWellChosen as exc:
        _write(failure_json(exc, problem, choice), args.output)
        print(f"{exc.kind}: {exc} (c = {exc.c}, N = {exc.precision})", file=sys.stderr)
        return EXIT_BOUND
    _write(presentation_json(pres), args.output)
    return EXIT_OK


def cmd_special(args) -> int:
    from .neron_special import special_desingularization
    pf = _apply_flags(load_problem(args.input), args)
    sp = pf.to_special_problem()
    try:
        res = special_desingularization(sp)
    except NotWellChosen as exc:
        _write(failure_json(exc), args.output)
        print(f"{exc.kind}: {exc} (c = {exc.c}, N = {exc.precision})", file=sys.stderr)
        return EXIT_BOUND
    _write(special_json(res, sp), args.output)
    return EXIT_OK


def cmd_linv(args) -> int:
    pf = _apply_flags(load_problem(args.input), args)
    if pf.base_kind == "artinian":
        from .neron_special import flatten
        problem = flatten(pf.to_special_problem()).problem
    else:
        problem = pf.to_desing_problem()
    f = problem.hints.f_indices
    if f is None:
        q, n = len(problem.ideal_gens), len(problem.unknowns)
        f = tuple(range(q)) if q <= n else select_system(problem).f_indices
    report = l_invariant(problem, f)
    names = problem.unknowns
    print(f"f = ({', '.join(str(i + 1) for i in f)}), r = {report.r}")
    for cols, order in report.table:
        label = ",".join(names[i] for i in cols)
        print(f"  minor [{label}]  order {order}")
    print(f"l = {report.l}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification


def _presentation_from_json(problem: DesingProblem, obj: dict,
                            reserved: Sequence[str] = ()) -> SmoothPresentation:
    cert = obj["certificate"]
    L = parse_polynomial(cert["L"], problem.ring)
    choice = choice_from_certificate(problem, [i - 1 for i in cert["f_indices"]], L,
                                     [i - 1 for i in cert["minor_cols"]])
    ring = PolyRing(tuple(obj["variables"]))
    rels = tuple(parse_polynomial(r, ring) for r in obj["relations"])
    inv = tuple(parse_polynomial(q, ring) for q in obj["inverted"])
    sub = tuple((u, parse_polynomial(obj["pi"][u], ring)) for u in problem.unknowns)
    if obj["status"] == "localization":
        return SmoothPresentation("localization", problem, choice, ring, (), rels, inv, sub,
                                  ring.one)
    x = problem.ring.var(problem.x)
    from .polycore import exact_divide
    w = exact_divide(choice.d, x ** choice.c).to_ring(ring)
    aux = tuple(obj["aux_vars"])
    return SmoothPresentation("full", problem, choice, ring, aux, rels, inv, sub, w * w)


def verify_result(problem: DesingProblem, obj: dict, lift: bool = True) -> List[Check]:
    status = obj.get("status")
    cert = obj.get("certificate")
    if status in ("not-well-chosen", "bound-too-small"):
        checks = []
        if cert is not None:
            L = parse_polynomial(cert["L"], problem.ring)
            ch = choice_from_certificate(problem, [i - 1 for i in cert["f_indices"]], L,
                                         [i - 1 for i in cert["minor_cols"]])
            checks.append(Check("certificate c reproduced", ch.c == cert["c"]))
            checks.append(Check("2c+1 > N", 2 * ch.c + 1 > problem.precision,
                                f"c={ch.c}, N={problem.precision}"))
            best = select_system(problem).c
            checks.append(Check("no system with smaller c", best == ch.c, f"best={best}"))
        else:
            c = obj.get("c")
            checks.append(Check("2c+1 > N", c is not None and 2 * c + 1 > problem.precision))
        return checks
    if status not in ("smooth", "localization"):
        return [Check("result has a verifiable status", False, str(status))]
    pres = _presentation_from_json(problem, obj)
    checks = [
        Check("certificate c reproduced", pres.choice.c == cert["c"]),
        Check("certificate permutation reproduced",
              list(pres.choice.permutation) == cert["permutation"]),
        Check("certificate d reproduced", to_string(pres.choice.d) == cert["d"]),
    ]
    checks += verify_presentation(pres, lift=lift)
    return checks


def verify_special_result(pf: ProblemFile, obj: dict, lift: bool = True) -> List[Check]:
    from .neron_special import (
        check_factorization,
        descend_tensor,
        flatten,
        pi_residual_orders,
    )
    sp = pf.to_special_problem()
    status = obj.get("status")
    if status in ("not-well-chosen", "bound-too-small"):
        c = obj.get("c")
        N = flatten(sp).problem.precision
        return [Check("2c+1 > N", c is not None and 2 * c + 1 > N, f"c={c}, N={N}")]
    flat = flatten(sp)
    checks = [Check("presentation source reproduced",
                    flat.source == obj.get("presentation_source"))]
    orders = check_factorization(sp)
    checks.append(Check("g(sum T^α y_iα) ≡ 0 mod x^N", all(o >= sp.precision for o in orders),
                        ", ".join(str(o) for o in orders)))
    checks += [Check(f"inner: {c.name}", c.passed, c.detail)
               for c in verify_result(flat.problem, obj["inner"], lift)]
    inner = _presentation_from_json(flat.problem, obj["inner"])
    again = descend_tensor(inner, sp, flat)
    checks.append(Check("relations = a ∪ inner relations",
                        [to_string(r) for r in again.relations] == obj["relations"]))
    checks.append(Check("inverted reproduced",
                        [to_string(q) for q in again.inverted] == obj["inverted"]))
    checks.append(Check("π reproduced",
                        {u: to_string(q) for u, q in again.pi} == obj["pi"]))
    checks.append(Check("η = 1", obj.get("eta") == "1"))
    if lift:
        res = pi_residual_orders(again, sp)
        N = flat.problem.precision
        checks.append(Check("π well defined mod x^N", all(o >= N for o in res),
                            ", ".join(str(o) for o in res)))
    if "simplified" in obj and again.simplified is not None:
        s = again.simplified
        checks.append(Check("simplified view reproduced",
                            [to_string(r) for r in s.relations] == obj["simplified"]["relations"]
                            and to_string(s.inverted) == obj["simplified"]["inverted"]))
    return checks


def cmd_verify(args) -> int:
    pf = load_problem(args.input)
    with open(args.result, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"result file: {exc.msg}", exc.lineno, exc.colno) from None
    if pf.base_kind == "artinian":
        checks = verify_special_result(pf, obj)
    else:
        cert = obj.get("certificate", {})
        if cert.get("d_mode"):
            pf = pf.with_overrides(d_mode=cert["d_mode"])
        checks = verify_result(pf.to_desing_problem(), obj)
    for c in checks:
        tail = f"  ({c.detail})" if c.detail else ""
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}{tail}")
    ok = all(c.passed for c in checks)
    print("verified" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_ERROR


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="neron", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, output=True):
        sp.add_argument("--input", "-i", required=True, help="problem file (JSON)")
        if output:
            sp.add_argument("--output", "-o", help="result file; stdout when omitted")
        sp.add_argument("--d-mode", choices=("normalized", "exact"),
                        help="d = x^c (normalized) or d = P(y') (exact); env NERON_D_MODE")
        sp.add_argument("--hint-f", help="1-based generator indices forming f, e.g. 1,2")
        sp.add_argument("--hint-L", help="colon witness L")
        sp.add_argument("--hint-minor", help="minor position rows:cols (1-based), e.g. 1,2:4,2")

    common(sub.add_parser("desing1", help="desingularize over k[x]_(x)"))
    common(sub.add_parser("special", help="desingularize over an Artinian base"))
    common(sub.add_parser("linv", help="print the minor-order table and l"), output=False)
    v = sub.add_parser("verify", help="re-check a result file against its problem")
    v.add_argument("--input", "-i", required=True, help="problem file")
    v.add_argument("--result", "-r", required=True, help="result file")
    return p


COMMANDS = {"desing1": cmd_desing1, "special": cmd_special, "linv": cmd_linv,
            "verify": cmd_verify}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (NeronError, ValueError, KeyError, OSError) as exc:
        kind = getattr(exc, "kind", "error")
        print(f"{kind}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_cli())
