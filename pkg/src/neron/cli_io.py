"""Problem and result files, and the expression grammar they use.

Polynomials and series travel as strings::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := atom ('^' int)?
    atom   := int | name | '(' expr ')' | inv(expr) | sqrt(expr) | EXP | FACT

Series expressions are evaluated modulo ``x^N``; in polynomial strings
division is only by nonzero constants.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import InputError
from .neron_dim1 import DesingProblem, Hints
from .polycore import Polynomial, PolyRing, to_string
from .series import (
    EXP,
    FACT,
    NonUnitError,
    TruncatedSeries,
    series_inverse,
    series_sqrt,
)

# ---------------------------------------------------------------------------
# tokenizer and parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.start(m.lastindex) != pos:
            raise _error(text, pos, f"unexpected character {text[pos]!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(Token("num", num, pos))
        elif name is not None:
            out.append(Token("name", name, pos))
        else:
            out.append(Token(op if op != "**" else "^", op, pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


def _error(text: str, pos: int, message: str) -> InputError:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return InputError(message, line, col)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self, kind: Optional[str] = None) -> Token:
        tok = self.tokens[self.i]
        if kind is not None and tok.kind != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok.kind == "end" else repr(tok.text)
            raise _error(self.text, tok.pos, f"expected {want}, found {got}")
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        self.take("end")
        return node

    # sums and products are kept flat so long emitted polynomials do not
    # turn into deep trees

    def expr(self):
        pos = self.peek().pos
        items = [(1, self.term())]
        while self.peek().kind in ("+", "-"):
            op = self.take()
            items.append((1 if op.kind == "+" else -1, self.term()))
        return items[0][1] if len(items) == 1 else ("sum", items, pos)

    def term(self):
        pos = self.peek().pos
        items = [("*", self.unary(), pos)]
        while self.peek().kind in ("*", "/"):
            op = self.take()
            items.append((op.kind, self.unary(), op.pos))
        return items[0][1] if len(items) == 1 else ("prod", items, pos)

    def unary(self):
        if self.peek().kind == "-":
            op = self.take()
            return ("neg", self.unary(), op.pos)
        if self.peek().kind == "+":
            self.take()
            return self.unary()
        return self.factor()

    def factor(self):
        node = self.atom()
        if self.peek().kind == "^":
            self.take()
            tok = self.peek()
            if tok.kind != "num":
                raise _error(self.text, tok.pos, "exponent must be a nonnegative integer")
            self.take()
            node = ("pow", node, int(tok.text), tok.pos)
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return ("num", Fraction(int(tok.text)), tok.pos)
        if tok.kind == "name":
            self.take()
            if self.peek().kind == "(":
                self.take()
                arg = self.expr()
                self.take(")")
                return ("call", tok.text, arg, tok.pos)
            return ("name", tok.text, tok.pos)
        if tok.kind == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        got = "end of input" if tok.kind == "end" else repr(tok.text)
        raise _error(self.text, tok.pos, f"unexpected {got}")


def parse_expression(text: str):
    """Abstract syntax tree of an expression string."""
    if not isinstance(text, str):
        raise InputError(f"expected an expression string, got {type(text).__name__}")
    return _Parser(text).parse()


def _const_value(node) -> Optional[Fraction]:
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "neg":
        v = _const_value(node[1])
        return None if v is None else -v
    if kind == "sum":
        total = Fraction(0)
        for sign, sub in node[1]:
            v = _const_value(sub)
            if v is None:
                return None
            total += sign * v
        return total
    if kind == "prod":
        total = Fraction(1)
        for op, sub, _ in node[1]:
            v = _const_value(sub)
            if v is None or (op == "/" and v == 0):
                return None
            total = total * v if op == "*" else total / v
        return total
    if kind == "pow":
        v = _const_value(node[1])
        return None if v is None else v ** node[2]
    return None


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Evaluate a polynomial string in ``ring``; unknown names are errors."""
    tree = parse_expression(text)

    def ev(node) -> Polynomial:
        kind = node[0]
        if kind == "num":
            return ring.const(node[1])
        if kind == "name":
            if node[1] not in ring.index:
                raise _error(text, node[2], f"unknown identifier {node[1]!r}")
            return ring.var(node[1])
        if kind == "neg":
            return -ev(node[1])
        if kind == "sum":
            acc: Dict = {}
            for sign, sub in node[1]:
                for e, c in ev(sub).terms.items():
                    v = acc.get(e, 0) + sign * c
                    if v:
                        acc[e] = v
                    else:
                        acc.pop(e, None)
            return Polynomial(ring, acc)
        if kind == "prod":
            acc = ring.one
            for op, sub, pos in node[1]:
                if op == "*":
                    acc = acc * ev(sub)
                    continue
                c = _const_value(sub)
                if c is None:
                    raise _error(text, pos, "polynomials may only be divided by constants")
                if c == 0:
                    raise _error(text, pos, "division by zero")
                acc = acc / c
            return acc
        if kind == "pow":
            return ev(node[1]) ** node[2]
        raise _error(text, node[3], f"function {node[1]!r} is not allowed in a polynomial")

    return ev(tree)


def eval_series_expr(text: str, precision: int, env: Mapping[str, TruncatedSeries] = None,
                     x: str = "x") -> TruncatedSeries:
    """Value of a series expression modulo ``x^precision``.

    ``env`` supplies named series defined earlier in the problem file.
    """
    env = env or {}
    tree = parse_expression(text)

    def ev(node) -> TruncatedSeries:
        kind = node[0]
        if kind == "num":
            return TruncatedSeries.constant(node[1], precision)
        if kind == "name":
            name = node[1]
            if name == x:
                return TruncatedSeries.x_power(1, precision)
            if name == "EXP":
                return EXP(precision)
            if name == "FACT":
                return FACT(precision)
            if name in env:
                return env[name].truncate(precision)
            raise _error(text, node[2], f"unknown identifier {name!r}")
        if kind == "neg":
            return -ev(node[1])
        if kind == "sum":
            acc = TruncatedSeries.constant(0, precision)
            for sign, sub in node[1]:
                acc = acc + ev(sub) if sign > 0 else acc - ev(sub)
            return acc
        if kind == "prod":
            acc = TruncatedSeries.constant(1, precision)
            for op, sub, pos in node[1]:
                if op == "*":
                    acc = acc * ev(sub)
                    continue
                c = _const_value(sub)
                if c is not None:
                    if c == 0:
                        raise _error(text, pos, "division by zero")
                    acc = acc * (1 / c)
                else:
                    acc = acc * _call(series_inverse, ev(sub), pos)
            return acc
        if kind == "pow":
            return ev(node[1]) ** node[2]
        if kind == "call":
            if node[1] == "inv":
                return _call(series_inverse, ev(node[2]), node[3])
            if node[1] == "sqrt":
                return _call(series_sqrt, ev(node[2]), node[3])
            raise _error(text, node[3], f"unknown function {node[1]!r}")
        raise AssertionError(kind)

    def _call(fn, arg, pos):
        try:
            return fn(arg)
        except (NonUnitError, ValueError) as exc:
            raise _error(text, pos, str(exc)) from None

    return ev(tree)


def series_to_string(s: TruncatedSeries, x: str = "x") -> str:
    ring = PolyRing((x,))
    return to_string(s.to_polynomial(ring, x))


# ---------------------------------------------------------------------------
# problem files


@dataclass(frozen=True)
class ProblemFile:
    precision: int
    base_kind: str
    unknowns: Tuple[str, ...]
    ideal: Tuple[Polynomial, ...]
    point: Tuple[Tuple[object, TruncatedSeries], ...]
    t_vars: Tuple[str, ...] = ()
    relations_a: Tuple[Polynomial, ...] = ()
    hints: Hints = Hints()
    d_mode: str = "normalized"
    presentation_J: Optional[Tuple[Polynomial, ...]] = None
    coefficient_names: Tuple[Tuple[str, str, Tuple[int, ...], int], ...] = ()
    x: str = "x"
    name: str = ""

    @property
    def ring(self) -> PolyRing:
        if self.base_kind == "dvr":
            return PolyRing((self.x,) + self.unknowns)
        return PolyRing(self.t_vars + self.unknowns)

    @property
    def coefficient_ring(self) -> PolyRing:
        return PolyRing((self.x,) + tuple(n[0] for n in self._all_names()))

    def _all_names(self):
        from .neron_special import default_name
        given = {(u, a): (n, u, a, k) for n, u, a, k in self.coefficient_names}
        out = []
        for (u, a), _ in self.point:
            out.append(given.get((u, a), (default_name(u, a), u, a, 0)))
        return out

    def with_overrides(self, d_mode: Optional[str] = None, hints: Optional[Hints] = None):
        kw = {}
        if d_mode is not None:
            kw["d_mode"] = d_mode
        if hints is not None:
            kw["hints"] = hints
        return replace(self, **kw)

    def to_desing_problem(self) -> DesingProblem:
        if self.base_kind != "dvr":
            raise InputError("desing1 needs a problem over k[x]_(x); use `special`")
        X = PolyRing((self.x,))
        point = {u: s.to_polynomial(X, self.x) for u, s in self.point}
        return DesingProblem.create(self.unknowns, self.ideal, point, self.precision,
                                    self.hints, self.d_mode, self.x)

    def to_special_problem(self):
        from .neron_special import CoeffName, SpecialProblem, artinian_basis
        if self.base_kind != "artinian":
            raise InputError("special needs an Artinian base")
        base = artinian_basis(self.t_vars, self.relations_a)
        names = [CoeffName(n, u, a, k) for n, u, a, k in self.coefficient_names]
        return SpecialProblem.create(
            base, self.unknowns, self.ideal, dict(self.point), self.precision, names,
            self.presentation_J, self.hints, self.d_mode, self.x)


def _require(obj: Mapping, key: str, kind, where: str = "problem"):
    if key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise InputError(f"{where}: field {key!r} has the wrong type")
    return val


def _field_error(where: str, exc: InputError) -> InputError:
    err = InputError(f"{where}: {exc.args[0]}")
    err.line, err.column = exc.line, exc.column
    return err


def _names(seq, where) -> Tuple[str, ...]:
    if not isinstance(seq, list) or not all(isinstance(s, str) for s in seq):
        raise InputError(f"{where} must be a list of names")
    for s in seq:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", s):
            raise InputError(f"{where}: {s!r} is not a valid name")
        if s in ("EXP", "FACT", "inv", "sqrt"):
            raise InputError(f"{where}: {s!r} is reserved")
    if len(set(seq)) != len(seq):
        raise InputError(f"{where}: names must be distinct")
    return tuple(seq)


def _poly(text, ring, where) -> Polynomial:
    try:
        return parse_polynomial(text, ring)
    except InputError as exc:
        raise _field_error(where, exc) from None


def _alpha_of(text: str, t_vars: Sequence[str], where: str) -> Tuple[int, ...]:
    ring = PolyRing(tuple(t_vars))
    p = _poly(text, ring, where)
    if len(p.terms) != 1 or p.leading_coefficient() != 1:
        raise InputError(f"{where}: {text!r} is not a monomial in {', '.join(t_vars)}")
    return p.leading_monomial()


def parse_hints(obj: Optional[Mapping], unknowns: Sequence[str], ring: PolyRing) -> Hints:
    """1-based indices in files and flags become 0-based here."""
    if not obj:
        return Hints()
    f = obj.get("f")
    L = obj.get("L")
    cols = obj.get("minor_cols")
    if f is not None:
        if not isinstance(f, list) or not all(isinstance(i, int) and i >= 1 for i in f):
            raise InputError("hints.f must be a list of positive generator indices")
        f = tuple(i - 1 for i in f)
    if L is not None:
        L = _poly(L, ring, "hints.L")
    if cols is not None:
        if not isinstance(cols, list):
            raise InputError("hints.minor_cols must be a list")
        out = []
        for c in cols:
            if isinstance(c, str):
                if c not in unknowns:
                    raise InputError(f"hints.minor_cols: unknown {c!r}")
                out.append(list(unknowns).index(c))
            elif isinstance(c, int) and 1 <= c <= len(unknowns):
                out.append(c - 1)
            else:
                raise InputError(f"hints.minor_cols: bad column {c!r}")
        cols = tuple(out)
    return Hints(f, L, cols)


def parse_problem(text: str, name: str = "") -> ProblemFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(obj, dict):
        raise InputError("problem file must hold a JSON object")
    N = _require(obj, "precision", int)
    if N < 1:
        raise InputError("precision must be at least 1")
    x = obj.get("x", "x")
    base = obj.get("base", {"kind": "dvr"})
    if not isinstance(base, dict) or base.get("kind") not in ("dvr", "artinian"):
        raise InputError("base.kind must be 'dvr' or 'artinian'")
    kind = base["kind"]
    unknowns = _names(_require(obj, "unknowns", list), "unknowns")
    if x in unknowns:
        raise InputError(f"the parameter {x!r} cannot be an unknown")
    d_mode = obj.get("d_mode", "normalized")
    if d_mode not in ("normalized", "exact"):
        raise InputError("d_mode must be 'normalized' or 'exact'")
    t_vars: Tuple[str, ...] = ()
    rel_a: Tuple[Polynomial, ...] = ()
    if kind == "dvr":
        ring = PolyRing((x,) + unknowns)
    else:
        t_vars = _names(_require(base, "t_vars", list, "base"), "base.t_vars")
        if set(t_vars) & (set(unknowns) | {x}):
            raise InputError("base.t_vars overlap the unknowns or the parameter")
        tring = PolyRing(t_vars)
        rel_a = tuple(_poly(r, tring, f"base.relations_a[{i}]")
                      for i, r in enumerate(_require(base, "relations_a", list, "base")))
        ring = PolyRing(t_vars + unknowns)
    gens = _require(obj, "ideal", list)
    if not gens:
        raise InputError("ideal must list at least one generator")
    ideal = tuple(_poly(g, ring, f"ideal[{i}]") for i, g in enumerate(gens))
    if any(g.is_zero() for g in ideal):
        raise InputError("ideal generators must be nonzero")

    env: Dict[str, TruncatedSeries] = {}
    defs = obj.get("series", {})
    if not isinstance(defs, dict):
        raise InputError("series must map names to expressions")
    for sname, expr in defs.items():
        _names([sname], "series")
        if sname in unknowns or sname == x or sname in t_vars:
            raise InputError(f"series name {sname!r} clashes with a variable")
        env[sname] = _series(expr, N, env, x, f"series.{sname}")

    raw_point = _require(obj, "point", dict)
    point: List[Tuple[object, TruncatedSeries]] = []
    if kind == "dvr":
        if set(raw_point) != set(unknowns):
            raise InputError("point must assign exactly the unknowns")
        for u in unknowns:
            point.append((u, _series(raw_point[u], N, env, x, f"point.{u}")))
    else:
        for u in unknowns:
            comps = raw_point.get(u)
            if not isinstance(comps, dict):
                raise InputError(f"point.{u} must map basis monomials to series")
            for mono, expr in comps.items():
                alpha = _alpha_of(mono, t_vars, f"point.{u}")
                point.append(((u, alpha), _series(expr, N, env, x, f"point.{u}.{mono}")))
        extra = set(raw_point) - set(unknowns)
        if extra:
            raise InputError(f"point names unknown variables {sorted(extra)}")

    coeff_names = []
    for cname, spec in obj.get("coefficient_names", {}).items():
        _names([cname], "coefficient_names")
        if (not isinstance(spec, list) or len(spec) not in (2, 3)
                or not all(isinstance(s, str) for s in spec[:2])):
            raise InputError(f"coefficient_names.{cname} must be [unknown, monomial, shift]")
        shift = spec[2] if len(spec) == 3 else 0
        if not isinstance(shift, int) or shift < 0:
            raise InputError(f"coefficient_names.{cname}: shift must be a non-negative int")
        if spec[0] not in unknowns:
            raise InputError(f"coefficient_names.{cname}: unknown {spec[0]!r}")
        coeff_names.append((cname, spec[0], _alpha_of(spec[1], t_vars, cname), shift))

    pf = ProblemFile(N, kind, unknowns, ideal, tuple(point), t_vars, rel_a, Hints(), d_mode,
                     None, tuple(coeff_names), x, name or obj.get("name", ""))
    inner_ring = ring if kind == "dvr" else pf.coefficient_ring
    pj = obj.get("presentation_J")
    if pj is not None:
        if kind == "dvr":
            raise InputError("presentation_J only applies to an Artinian base")
        pj = tuple(_poly(q, inner_ring, f"presentation_J[{i}]") for i, q in enumerate(pj))
    inner_unknowns = unknowns if kind == "dvr" else inner_ring.names[1:]
    hints = parse_hints(obj.get("hints"), inner_unknowns, inner_ring)
    return ProblemFile(N, kind, unknowns, ideal, tuple(point), t_vars, rel_a, hints, d_mode,
                       pj, tuple(coeff_names), x, pf.name)


def _series(expr, N, env, x, where) -> TruncatedSeries:
    try:
        return eval_series_expr(expr, N, env, x)
    except InputError as exc:
        raise _field_error(where, exc) from None


def load_problem(path: str) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read(), name=path)


def _alpha_text(alpha, t_vars) -> str:
    parts = [v if k == 1 else f"{v}^{k}" for v, k in zip(t_vars, alpha) if k]
    return "*".join(parts) or "1"


def problem_to_json(pf: ProblemFile) -> dict:
    """Canonical JSON form; every series is written out as its polynomial."""
    obj: dict = {"precision": pf.precision}
    if pf.x != "x":
        obj["x"] = pf.x
    if pf.base_kind == "dvr":
        obj["base"] = {"kind": "dvr"}
    else:
        obj["base"] = {"kind": "artinian", "t_vars": list(pf.t_vars),
                       "relations_a": [to_string(a) for a in pf.relations_a]}
    obj["unknowns"] = list(pf.unknowns)
    obj["ideal"] = [to_string(g) for g in pf.ideal]
    if pf.base_kind == "dvr":
        obj["point"] = {u: series_to_string(s, pf.x) for u, s in pf.point}
    else:
        pt: Dict[str, Dict[str, str]] = {}
        for (u, alpha), s in pf.point:
            pt.setdefault(u, {})[_alpha_text(alpha, pf.t_vars)] = series_to_string(s, pf.x)
        obj["point"] = pt
        if pf.coefficient_names:
            obj["coefficient_names"] = {
                n: [u, _alpha_text(a, pf.t_vars), k] for n, u, a, k in pf.coefficient_names}
        if pf.presentation_J is not None:
            obj["presentation_J"] = [to_string(q) for q in pf.presentation_J]
    h = pf.hints
    hints = {}
    if h.f_indices is not None:
        hints["f"] = [i + 1 for i in h.f_indices]
    if h.L is not None:
        hints["L"] = to_string(h.L)
    if h.minor_cols is not None:
        hints["minor_cols"] = [i + 1 for i in h.minor_cols]
    if hints:
        obj["hints"] = hints
    if pf.d_mode != "normalized":
        obj["d_mode"] = pf.d_mode
    return obj


def emit_problem(pf: ProblemFile) -> str:
    return json.dumps(problem_to_json(pf), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# result files


def emit_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _order_json(o):
    return o if isinstance(o, int) else f">={o.bound}"


def certificate_json(problem: DesingProblem, choice) -> dict:
    from .neron_dim1 import l_invariant
    report = l_invariant(problem, choice.f_indices)
    return {
        "f_indices": [i + 1 for i in choice.f_indices],
        "L": to_string(choice.L),
        "minor_rows": [i + 1 for i in choice.minor_rows],
        "minor_cols": [i + 1 for i in choice.minor_cols],
        "M": to_string(choice.M),
        "P": to_string(choice.P),
        "c": choice.c,
        "d": to_string(choice.d),
        "e": to_string(choice.e),
        "d_mode": problem.d_mode,
        "permutation": list(choice.permutation),
        "l_table": [[[i + 1 for i in cols], _order_json(o)] for cols, o in report.table],
        "l": _order_json(report.l),
    }


def _matrix_json(m):
    return [[to_string(e) for e in row] for row in m.tolist()]


def presentation_json(pres) -> dict:
    prob = pres.problem
    out = {
        "status": "smooth" if pres.kind == "full" else "localization",
        "variables": list(pres.ring.names),
        "relations": [to_string(g) for g in pres.relations],
        "inverted": [to_string(q) for q in pres.inverted],
        "pi": {u: to_string(b) for u, b in pres.substitution},
        "certificate": certificate_json(prob, pres.choice),
    }
    if pres.kind == "full":
        out["aux_vars"] = list(pres.aux_vars)
        out["eta"] = to_string(pres.eta)
        out["H"] = _matrix_json(pres.H)
        out["G"] = _matrix_json(pres.G)
        out["h"] = {u: to_string(q) for u, q in zip(pres.choice.permutation, pres.h)}
    return out


def failure_json(exc, problem: Optional[DesingProblem] = None, choice=None) -> dict:
    out = {"status": exc.kind, "message": str(exc)}
    if getattr(exc, "c", None) is not None:
        out["c"] = exc.c
        out["precision"] = exc.precision
    if problem is not None and choice is not None:
        out["certificate"] = certificate_json(problem, choice)
    return out


def special_json(sp, special) -> dict:
    inner = presentation_json(sp.inner)
    out = {
        "status": inner["status"],
        "base": {"kind": "artinian", "t_vars": list(sp.base.t_vars),
                 "relations_a": [to_string(a) for a in sp.base.relations_a],
                 "basis": [_alpha_text(a, sp.base.t_vars) for a in sp.base.basis],
                 "nil_index": sp.base.nil_index},
        "variables": list(sp.ring.names),
        "relations": [to_string(r) for r in sp.relations],
        "inverted": [to_string(q) for q in sp.inverted],
        "eta": to_string(sp.eta),
        "pi": {u: to_string(q) for u, q in sp.pi},
        "presentation_source": sp.flat.source,
        "coefficient_names": {n.name: [n.unknown, _alpha_text(n.alpha, sp.base.t_vars), n.shift]
                              for n in special.names},
        "inner": inner,
    }
    if sp.simplified is not None:
        s = sp.simplified
        out["simplified"] = {
            "variables": list(s.variables),
            "relations": [to_string(r) for r in s.relations],
            "inverted": to_string(s.inverted),
            "eliminated": {v: [to_string(num), to_string(den)] for v, num, den in s.eliminated},
        }
    return out
