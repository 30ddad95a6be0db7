#!/usr/bin/env python3
"""Solve an LP-format mixed integer program with scipy's HiGHS backend.

Usage: lp_solve.py MODEL.lp SOLUTION.out TIME_LIMIT_SECONDS

The solution file starts with "Status: <status>" and, when a solution
exists, "Objective: <value>", "Bound: <value>" and one "<name> <value>"
line per variable.  Reads the LP subset the toolkit exports: a minimized
single-variable objective, integer coefficients, Bounds of the form
"name >= 0" and a Binaries section.
"""

import re
import sys

import numpy as np
from scipy import optimize, sparse

SENSES = ("<=", ">=", "=")


def fail(message):
    print(message, file=sys.stderr)
    sys.exit(1)


def parse_lp(text):
    sections = {"minimize": [], "subject to": [], "bounds": [], "binaries": []}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        key = line.lower()
        if key in ("minimize", "maximize"):
            if key == "maximize":
                fail("only minimization models are supported")
            current = "minimize"
            continue
        if key in ("subject to", "st", "s.t."):
            current = "subject to"
            continue
        if key == "bounds":
            current = "bounds"
            continue
        if key in ("binaries", "binary", "bin"):
            current = "binaries"
            continue
        if key == "end":
            break
        if current is None:
            fail("content before any section: " + line)
        # Wrapped rows continue on indented lines without a row tag.
        if current in ("minimize", "subject to") and not re.match(
            r"^[\w.]+\s*:", line
        ) and sections[current]:
            sections[current][-1] += " " + line
        else:
            sections[current].append(line)
    return sections


def parse_terms(tokens, var_index):
    """tokens like ['Cmax', '-', 'C_1'] or ['3', 'x', '+', '4', 'y']."""
    terms = []
    sign = 1
    coef = None
    for tok in tokens:
        if tok == "+":
            sign, coef = 1, None
        elif tok == "-":
            sign, coef = -1, None
        elif re.fullmatch(r"[-+]?\d+(\.\d+)?", tok):
            coef = float(tok)
        else:
            index = var_index.setdefault(tok, len(var_index))
            terms.append((index, sign * (1.0 if coef is None else coef)))
            sign, coef = 1, None
    return terms


def main():
    if len(sys.argv) != 4:
        fail("usage: lp_solve.py MODEL.lp SOLUTION.out TIME_LIMIT_SECONDS")
    lp_path, sol_path, limit = sys.argv[1], sys.argv[2], float(sys.argv[3])

    with open(lp_path) as handle:
        sections = parse_lp(handle.read())

    var_index = {}
    if len(sections["minimize"]) != 1:
        fail("expected exactly one objective line")
    objective_terms = parse_terms(
        sections["minimize"][0].split(":", 1)[1].split(), var_index
    )

    row_data = []
    lower, upper = [], []
    for row in sections["subject to"]:
        body = row.split(":", 1)[1].split()
        sense = rhs = None
        for s in SENSES:
            if s in body:
                cut = body.index(s)
                sense, rhs = s, float(body[cut + 1])
                body = body[:cut]
                break
        if sense is None:
            fail("row without a sense: " + row)
        row_data.append(parse_terms(body, var_index))
        lower.append(rhs if sense in (">=", "=") else -np.inf)
        upper.append(rhs if sense in ("<=", "=") else np.inf)

    binaries = set()
    for line in sections["binaries"]:
        for name in line.split():
            binaries.add(name)
            var_index.setdefault(name, len(var_index))
    for line in sections["bounds"]:  # only "name >= 0" is ever emitted
        name = line.split()[0]
        var_index.setdefault(name, len(var_index))

    names = [None] * len(var_index)
    for name, index in var_index.items():
        names[index] = name
    count = len(names)

    c = np.zeros(count)
    for index, coef in objective_terms:
        c[index] = coef

    rows, cols, data = [], [], []
    for r, terms in enumerate(row_data):
        for index, coef in terms:
            rows.append(r)
            cols.append(index)
            data.append(coef)
    constraints = optimize.LinearConstraint(
        sparse.csr_matrix((data, (rows, cols)), shape=(len(row_data), count)),
        np.array(lower),
        np.array(upper),
    )

    integrality = np.array([1 if name in binaries else 0 for name in names])
    lb = np.zeros(count)
    ub = np.array([1.0 if name in binaries else np.inf for name in names])

    result = optimize.milp(
        c,
        constraints=constraints,
        integrality=integrality,
        bounds=optimize.Bounds(lb, ub),
        options={"time_limit": limit},
    )

    if result.status == 0:
        status = "optimal"
    elif result.status == 1:
        status = "feasible" if result.x is not None else "timeout"
    elif result.status == 2:
        status = "infeasible"
    elif result.status == 3:
        status = "unbounded"
    else:
        status = "unknown"

    with open(sol_path, "w") as out:
        out.write("Status: %s\n" % status)
        if result.x is not None:
            out.write("Objective: %.10g\n" % result.fun)
            bound = getattr(result, "mip_dual_bound", None)
            if bound is not None:
                out.write("Bound: %.10g\n" % bound)
            for name, value in zip(names, result.x):
                out.write("%s %.10g\n" % (name, value))


if __name__ == "__main__":
    main()
