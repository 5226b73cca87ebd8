#!/usr/bin/env python3
"""Solve an LP file written by `riskrjt build` with scipy's HiGHS MILP solver.

Usage: scipy_lp_solve.py model.lp

Prints "status optimal|infeasible|unknown", "objective <v>" and one
"<name> <value>" line per variable. Only the subset of the LP format that
riskrjt writes is understood; indicator rows are rejected.
"""

import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_matrix

SECTIONS = {"maximize", "minimize", "subject to", "bounds", "binaries", "end"}


def statements(text):
    """Yields (section, statement) with continuation lines joined."""
    section = None
    current = None
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        key = line.strip().lower()
        if not line.startswith(" ") and key in SECTIONS:
            if current is not None:
                yield section, current
                current = None
            section = key
            continue
        if line.startswith("  ") and current is not None:
            current += " " + line.strip()
            continue
        if current is not None:
            yield section, current
        current = line.strip()
    if current is not None:
        yield section, current


def parse_terms(tokens, index):
    terms = []
    sign = 1.0
    coef = None
    for tok in tokens:
        if tok == "+":
            continue
        if tok == "-":
            sign = -sign
            continue
        try:
            coef = float(tok)
            continue
        except ValueError:
            pass
        if tok not in index:
            raise ValueError(f"unknown variable {tok}")
        terms.append((index[tok], sign * (1.0 if coef is None else coef)))
        sign = 1.0
        coef = None
    return terms


def parse(text):
    stmts = list(statements(text))
    names = []
    index = {}

    def declare(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)

    # Collect variable names in first-appearance order.
    name_re = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
    for section, stmt in stmts:
        body = stmt.split(":", 1)[1] if section in ("maximize", "minimize", "subject to") and ":" in stmt else stmt
        for tok in body.split():
            if name_re.fullmatch(tok) and tok not in ("free", "inf", "infinity"):
                declare(tok)

    n = len(names)
    c = np.zeros(n)
    maximize = True
    rows, cols, vals, lo, hi = [], [], [], [], []
    lower = np.zeros(n)
    upper = np.full(n, np.inf)
    integrality = np.zeros(n)
    r = 0
    for section, stmt in stmts:
        if section in ("maximize", "minimize"):
            maximize = section == "maximize"
            body = stmt.split(":", 1)[1] if ":" in stmt else stmt
            for j, v in parse_terms(body.split(), index):
                c[j] += v
        elif section == "subject to":
            body = stmt.split(":", 1)[1]
            if "->" in body:
                raise ValueError("indicator rows are not supported; build without --indicators")
            m = re.match(r"(.*?)(<=|>=|=)\s*(\S+)\s*$", body)
            if not m:
                raise ValueError(f"cannot parse row: {stmt}")
            for j, v in parse_terms(m.group(1).split(), index):
                rows.append(r)
                cols.append(j)
                vals.append(v)
            rhs = float(m.group(3))
            lo.append(-np.inf if m.group(2) == "<=" else rhs)
            hi.append(np.inf if m.group(2) == ">=" else rhs)
            r += 1
        elif section == "bounds":
            toks = stmt.split()
            if len(toks) == 2 and toks[1].lower() == "free":
                j = index[toks[0]]
                lower[j], upper[j] = -np.inf, np.inf
            elif len(toks) == 5 and toks[1] == "<=" and toks[3] == "<=":
                j = index[toks[2]]
                lower[j], upper[j] = float(toks[0]), float(toks[4])
            else:
                raise ValueError(f"cannot parse bound: {stmt}")
        elif section == "binaries":
            for tok in stmt.split():
                j = index[tok]
                integrality[j] = 1
                lower[j], upper[j] = 0.0, 1.0
    a = coo_matrix((vals, (rows, cols)), shape=(r, n)).tocsr()
    return names, c, maximize, a, np.array(lo), np.array(hi), lower, upper, integrality


def main(argv):
    if len(argv) != 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    with open(argv[1]) as f:
        names, c, maximize, a, lo, hi, lower, upper, integrality = parse(f.read())
    constraints = [LinearConstraint(a, lo, hi)] if a.shape[0] else []
    res = milp(
        -c if maximize else c,
        constraints=constraints,
        integrality=integrality,
        bounds=Bounds(lower, upper),
        options={"mip_rel_gap": 0.0, "presolve": True},
    )
    if res.status == 2:
        print("status infeasible")
        return 0
    if res.x is None or res.status != 0:
        print(f"status unknown ({res.message})")
        return 0
    print("status optimal")
    obj = float(c @ res.x)
    print(f"objective {obj!r}")
    for name, v in zip(names, res.x):
        print(f"{name} {float(v)!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
