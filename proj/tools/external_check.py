#!/usr/bin/env python3
"""Solve a DIMACS file with a PySAT backend and print a competition-style status line.

Exit codes: 10 SAT, 20 UNSAT, 0 unknown (time limit), 2 bad usage / missing backend.
"""
import argparse
import multiprocessing as mp
import sys
import time


def solve(path, solver, conn):
    from pysat.formula import CNF
    from pysat.solvers import Solver

    cnf = CNF(from_file=path)
    with Solver(name=solver, bootstrap_with=cnf.clauses) as s:
        conn.send((s.solve(), cnf.nv, len(cnf.clauses)))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("cnf")
    ap.add_argument("--solver", default="cadical195")
    ap.add_argument("--time-limit", type=float, default=0, help="seconds, 0 = none")
    args = ap.parse_args()

    try:
        import pysat  # noqa: F401
    except ImportError as e:
        print(f"c pysat unavailable: {e}")
        return 2

    # some backends ignore interrupt(), so the limit is enforced on a child process
    t0 = time.monotonic()
    recv, send = mp.Pipe(duplex=False)
    child = mp.Process(target=solve, args=(args.cnf, args.solver, send))
    child.start()
    res = None
    if recv.poll(args.time_limit if args.time_limit > 0 else None):
        res, nv, nc = recv.recv()
        print(f"c solver {args.solver} vars {nv} clauses {nc}")
    child.terminate()
    child.join()
    print(f"c seconds {time.monotonic() - t0:.2f}")
    if res is True:
        print("s SATISFIABLE")
        return 10
    if res is False:
        print("s UNSATISFIABLE")
        return 20
    print("s UNKNOWN")
    return 0


if __name__ == "__main__":
    sys.exit(main())
