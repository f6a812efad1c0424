"""Staged integer program for matrix contraction, LP export and an exhaustive check.

Writing the contraction as one product of decision-dependent matrices would
need a linearisation per subset of decisions. Instead the product is cut
into ``T = p + q - 1`` stages: stage matrices ``a_t`` start from the input,
each transition consumes one decision (lines from ``p-1`` down to 1, then
columns from ``q-1`` down to 1), and every product of a stage entry with a
decision is replaced by a McCormick-linearised binary ``r``. The objective
counts neighbour pairs of the last stage through products ``z`` in the four
directions east, south, south-east and south-west.

Variable names: ``x_3``, ``y_1``, ``a_2_4_1`` (stage, line, column),
``r_2_4_1`` and ``z_se_3_2`` (direction, anchor line, anchor column).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import TextIO

from .core import BinaryMatrix, Selection, apply, density, is_valid
from .errors import GuardError, ParseError

ORACLE_LIMIT = 12

Term = tuple[int, str]

# direction tag -> (line offset, column offset)
DIRECTIONS = (("e", 0, 1), ("s", 1, 0), ("se", 1, 1), ("sw", 1, -1))


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[Term, ...]
    sense: str  # "<=", ">=" or "="
    rhs: int

    def holds(self, values: dict[str, int]) -> bool:
        lhs = sum(c * values[v] for c, v in self.terms)
        if self.sense == "<=":
            return lhs <= self.rhs
        if self.sense == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class IlpModel:
    p: int
    q: int
    vars: list[str] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: list[Term] = field(default_factory=list)

    @property
    def T(self) -> int:
        return self.p + self.q - 1

    def decision(self, t: int) -> str:
        """Decision variable consumed by the transition from stage ``t`` to ``t+1``."""
        if 1 <= t <= self.p - 1:
            return f"x_{self.p - t}"
        if self.p <= t <= self.T - 1:
            return f"y_{self.T - t}"
        raise IndexError(f"no transition leaves stage {t}")

    def count(self, prefix: str) -> int:
        return sum(1 for v in self.vars if v.startswith(prefix))


def _a(t: int, i: int, j: int) -> str:
    return f"a_{t}_{i}_{j}"


def _r(t: int, i: int, j: int) -> str:
    return f"r_{t}_{i}_{j}"


def _mccormick(name: str, prod: str, u: str, v: str) -> list[Constraint]:
    return [
        Constraint(f"{name}_1", ((1, prod), (-1, u)), "<=", 0),
        Constraint(f"{name}_2", ((1, prod), (-1, v)), "<=", 0),
        Constraint(f"{name}_3", ((1, prod), (-1, u), (-1, v)), ">=", -1),
    ]


def build_model(M: BinaryMatrix) -> IlpModel:
    """Linearised staged program whose optimum is the best contraction density of ``M``."""
    p, q = M.p, M.q
    model = IlpModel(p, q)
    T = model.T
    V, C = model.vars, model.constraints
    V.extend(f"x_{i}" for i in range(1, p))
    V.extend(f"y_{j}" for j in range(1, q))

    for i in range(1, p + 1):
        for j in range(1, q + 1):
            V.append(_a(1, i, j))
            C.append(Constraint(f"fix_{i}_{j}", ((1, _a(1, i, j)),), "=", M[i, j]))

    for t in range(1, T):
        dec = model.decision(t)
        lines = t <= p - 1
        k = int(dec.split("_")[1])
        # only entries that move (past the merged index) need a product
        prods = {}
        for i in range(1, p + 1):
            for j in range(1, q + 1):
                if (i if lines else j) > k:
                    prods[i, j] = _r(t, i, j)
                    V.append(prods[i, j])
                    C.extend(_mccormick(f"mc_{t}_{i}_{j}", prods[i, j], _a(t, i, j), dec))
        last = p if lines else q
        for i in range(1, p + 1):
            V.extend(_a(t + 1, i, j) for j in range(1, q + 1))
            for j in range(1, q + 1):
                idx = i if lines else j

                def nxt(d: int) -> tuple[int, int]:
                    return (i + d, j) if lines else (i, j + d)

                terms: list[Term] = [(1, _a(t + 1, i, j)), (-1, _a(t, i, j))]
                if idx == k:
                    terms.append((-1, prods[nxt(1)]))
                elif k < idx < last:
                    terms += [(-1, prods[nxt(1)]), (1, prods[i, j])]
                elif idx == last and idx > k:
                    terms.append((1, prods[i, j]))
                C.append(Constraint(f"st_{t}_{i}_{j}", tuple(terms), "=", 0))
                C.append(Constraint(f"ub_{t + 1}_{i}_{j}", ((1, _a(t + 1, i, j)),), "<=", 1))

    for tag, di, dj in DIRECTIONS:
        for i in range(1, p + 1):
            for j in range(1, q + 1):
                i2, j2 = i + di, j + dj
                if not (1 <= i2 <= p and 1 <= j2 <= q):
                    continue
                z = f"z_{tag}_{i}_{j}"
                V.append(z)
                C.extend(_mccormick(f"obj_{tag}_{i}_{j}", z, _a(T, i, j), _a(T, i2, j2)))
                model.objective.append((1, z))
    return model


def _expr(terms) -> str:
    out = []
    for c, v in terms:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = v if mag == 1 else f"{mag} {v}"
        out.append(f"{sign} {body}" if out or c < 0 else body)
    return " ".join(out)


def write_lp(model: IlpModel, sink: TextIO) -> None:
    """Write ``model`` in CPLEX LP format; output is byte-deterministic."""
    sink.write(f"\\ matrix contraction model p={model.p} q={model.q} T={model.T}\n")
    sink.write("Maximize\n")
    objective = model.objective or [(0, model.vars[-1])]
    chunks = [objective[k : k + 8] for k in range(0, len(objective), 8)]
    for n, chunk in enumerate(chunks):
        text = _expr(chunk)
        if n == 0:
            sink.write(f" obj: {text}\n")
        else:
            sink.write(f"   {text if text.startswith(('+', '-')) else '+ ' + text}\n")
    sink.write("Subject To\n")
    for c in model.constraints:
        sink.write(f" {c.name}: {_expr(c.terms)} {c.sense} {c.rhs}\n")
    sink.write("Binary\n")
    for v in model.vars:
        sink.write(f" {v}\n")
    sink.write("End\n")


def lp_text(model: IlpModel) -> str:
    import io

    buf = io.StringIO()
    write_lp(model, buf)
    return buf.getvalue()


_TERM = re.compile(r"([+-])?\s*(\d+)?\s*([A-Za-z_][\w]*)")


def _parse_terms(text: str, lineno: int) -> list[Term]:
    terms = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m:
            raise ParseError(f"cannot parse expression near {text[pos:]!r}", lineno)
        sign, mag, var = m.groups()
        c = int(mag) if mag else 1
        terms.append((-c if sign == "-" else c, var))
        pos = m.end()
        while pos < len(text) and text[pos] == " ":
            pos += 1
    return terms


def parse_lp(text: str) -> IlpModel:
    """Read back the subset of LP format produced by :func:`write_lp`."""
    header = re.search(r"p=(\d+) q=(\d+)", text)
    if not header:
        raise ParseError("missing model header comment", 1)
    model = IlpModel(int(header.group(1)), int(header.group(2)))
    section = None
    obj_text = ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        if line in ("Maximize", "Subject To", "Binary", "End"):
            section = line
            continue
        if section == "Maximize":
            obj_text += " " + line.split(":", 1)[1] if line.startswith("obj:") else " " + line
        elif section == "Subject To":
            name, _, body = line.partition(":")
            m = re.match(r"(.*?)\s*(<=|>=|=)\s*(-?\d+)$", body.strip())
            if not m:
                raise ParseError(f"bad constraint {line!r}", lineno)
            model.constraints.append(Constraint(name.strip(), tuple(_parse_terms(m.group(1), lineno)), m.group(2), int(m.group(3))))
        elif section == "Binary":
            model.vars.append(line)
        else:
            raise ParseError(f"unexpected line {line!r}", lineno)
    model.objective = [t for t in _parse_terms(obj_text, 2) if t[0] != 0]
    return model


class _Propagator:
    """Forward evaluation of a staged model for fixed decision values.

    Every constraint is attached to its last variable in declaration order;
    once the decisions are fixed, each remaining variable is pinned by the
    constraints attached to it, which must leave exactly one binary value.
    """

    def __init__(self, model: IlpModel):
        self.model = model
        order = {v: n for n, v in enumerate(model.vars)}
        self.decisions = [v for v in model.vars if v[0] in "xy"]
        self.attached: dict[str, list[Constraint]] = {v: [] for v in model.vars}
        for c in model.constraints:
            self.attached[max((v for _, v in c.terms), key=order.__getitem__)].append(c)

    def run(self, fixed: dict[str, int]) -> dict[str, int] | None:
        """Values of all variables, or None if the decisions are infeasible."""
        values = dict(fixed)
        for v in self.model.vars:
            cons = self.attached[v]
            if v in values:
                if not all(c.holds(values) for c in cons):
                    return None
                continue
            fits = []
            for b in (0, 1):
                values[v] = b
                if all(c.holds(values) for c in cons):
                    fits.append(b)
            if not fits:
                return None
            if len(fits) > 1:
                raise AssertionError(f"variable {v} is not determined by its constraints")
            values[v] = fits[0]
            if v[0] in "rz":
                # McCormick on binaries must reproduce the exact product
                u, w = [t for _, t in cons[0].terms[1:]] + [t for _, t in cons[1].terms[1:]]
                assert values[v] == values[u] * values[w], v
        return values

    def objective(self, values: dict[str, int]) -> int:
        return sum(c * values[v] for c, v in self.model.objective)


def check_model(model: IlpModel, M: BinaryMatrix, force: bool = False) -> bool:
    """Compare the model with direct contraction on every decision assignment."""
    prop = _Propagator(model)
    if len(prop.decisions) > ORACLE_LIMIT and not force:
        raise GuardError(f"2^{len(prop.decisions)} assignments exceed the oracle limit 2^{ORACLE_LIMIT}")
    for bits in itertools.product((0, 1), repeat=len(prop.decisions)):
        fixed = dict(zip(prop.decisions, bits))
        sel = Selection(
            [int(v[2:]) for v, b in fixed.items() if b and v[0] == "x"],
            [int(v[2:]) for v, b in fixed.items() if b and v[0] == "y"],
        )
        values = prop.run(fixed)
        valid = is_valid(M, sel)
        if (values is not None) != valid:
            return False
        if valid and prop.objective(values) != density(apply(M, sel)):
            return False
    return True


def model_oracle_check(M: BinaryMatrix, force: bool = False) -> bool:
    return check_model(build_model(M), M, force=force)


def evaluate(M: BinaryMatrix, sel: Selection) -> int | None:
    """Objective value of the model at the decisions of ``sel``; None if infeasible."""
    model = build_model(M)
    prop = _Propagator(model)
    fixed = {v: 0 for v in prop.decisions}
    fixed.update({f"x_{i}": 1 for i in sel.I})
    fixed.update({f"y_{j}": 1 for j in sel.J})
    values = prop.run(fixed)
    return None if values is None else prop.objective(values)
