#!/usr/bin/env python3
"""Solve an LP-format model with scipy's HiGHS interface.

Reads the LP file produced by `cigdp export-milp`, solves it as a pure
integer program, and prints `# objective <value>` followed by one
`name value` line per variable.
"""

import sys

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

SECTIONS = {"minimize", "subject to", "bounds", "binaries", "generals", "end"}


def read_sections(text):
    sections = {}
    current = None
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped or stripped.startswith("\\"):
            continue
        if raw[0] not in " \t" and stripped.lower() in SECTIONS:
            current = stripped.lower()
            sections.setdefault(current, [])
            continue
        if current is None:
            raise SystemExit(f"content before any section: {stripped!r}")
        sections[current].append(stripped)
    return sections


def named_rows(tokens):
    """Split a token stream on `name:` markers."""
    rows, name, cur = [], None, []
    for tok in tokens:
        if tok.endswith(":"):
            if name is not None:
                rows.append((name, cur))
            name, cur = tok[:-1], []
        else:
            cur.append(tok)
    if name is not None:
        rows.append((name, cur))
    return rows


def parse_linear(tokens):
    """One row body -> (coefficients, op, rhs); op is None for the objective."""
    coeffs, op, rhs = {}, None, None
    sign, pending = 1.0, None
    for tok in tokens:
        if tok == "+":
            continue
        if tok == "-":
            sign = -1.0
            continue
        if tok in ("<=", ">=", "="):
            op = tok
            continue
        try:
            value = float(tok)
        except ValueError:
            coeffs[tok] = coeffs.get(tok, 0.0) + sign * (
                pending if pending is not None else 1.0
            )
            sign, pending = 1.0, None
            continue
        if op is None:
            pending = sign * value
            sign = 1.0
        else:
            rhs = sign * value
            sign = 1.0
    return coeffs, op, rhs


def main():
    if len(sys.argv) != 2:
        raise SystemExit("usage: solve_lp.py MODEL.lp")
    with open(sys.argv[1]) as fh:
        sections = read_sections(fh.read())

    objective_rows = named_rows(" ".join(sections.get("minimize", [])).split())
    if len(objective_rows) != 1:
        raise SystemExit(f"expected one objective row, got {len(objective_rows)}")
    objective, _, _ = parse_linear(objective_rows[0][1])

    constraint_rows = [
        (name, parse_linear(toks))
        for name, toks in named_rows(" ".join(sections.get("subject to", [])).split())
    ]
    binaries = " ".join(sections.get("binaries", [])).split()
    generals = " ".join(sections.get("generals", [])).split()

    names, index = [], {}

    def vid(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    for v in binaries + generals:
        vid(v)
    for v in objective:
        vid(v)
    for _, (coeffs, _, _) in constraint_rows:
        for v in coeffs:
            vid(v)

    n = len(names)
    lb, ub = np.zeros(n), np.ones(n)
    for g in generals:
        ub[index[g]] = np.inf
    for line in sections.get("bounds", []):
        toks = line.split()
        if len(toks) == 3 and toks[1] == "=":
            i = vid(toks[0])
            lb[i] = ub[i] = float(toks[2])
        elif len(toks) == 5 and toks[1] == "<=" and toks[3] == "<=":
            i = vid(toks[2])
            lb[i], ub[i] = float(toks[0]), float(toks[4])
        else:
            raise SystemExit(f"unrecognized bound: {line!r}")

    c = np.zeros(n)
    for v, w in objective.items():
        c[index[v]] = w

    rows_i, cols, vals, lo, hi = [], [], [], [], []
    for r, (name, (coeffs, op, rhs)) in enumerate(constraint_rows):
        if op is None:
            raise SystemExit(f"row {name} has no relation")
        for v, w in coeffs.items():
            rows_i.append(r)
            cols.append(index[v])
            vals.append(w)
        lo.append(-np.inf if op == "<=" else rhs)
        hi.append(np.inf if op == ">=" else rhs)

    matrix = sparse.csc_matrix((vals, (rows_i, cols)), shape=(len(constraint_rows), n))
    result = milp(
        c=c,
        constraints=LinearConstraint(matrix, lo, hi),
        integrality=np.ones(n),
        bounds=Bounds(lb, ub),
    )
    if result.status != 0 or result.x is None:
        raise SystemExit(f"milp failed: status {result.status}: {result.message}")

    print(f"# objective {result.fun}")
    for name in names:
        print(name, result.x[index[name]])


if __name__ == "__main__":
    main()
