#!/usr/bin/env python3
"""Run a DIMACS CNF file through a python-sat backend and print the result
in the SAT competition format (`s` status line plus `v` value lines).

Usage: pysat_solve.py [--solver cadical153] instance.cnf
"""
import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("cnf")
    ap.add_argument("--solver", default="cadical153")
    args = ap.parse_args()

    cnf = CNF(from_file=args.cnf)
    with Solver(name=args.solver, bootstrap_with=cnf.clauses) as s:
        sat = s.solve()
        if sat is None:
            print("s UNKNOWN")
            return 0
        if not sat:
            print("s UNSATISFIABLE")
            return 20
        model = {abs(x): x for x in s.get_model()}
        print("s SATISFIABLE")
        values = [model.get(v, -v) for v in range(1, cnf.nv + 1)]
        for i in range(0, len(values), 20):
            print("v " + " ".join(str(x) for x in values[i : i + 20]))
        print("v 0")
        return 10


if __name__ == "__main__":
    sys.exit(main())
