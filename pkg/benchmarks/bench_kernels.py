"""Benchmark: pure-Python kernels vs the compiled extension.

Runs the two hot kernels in isolation on representative workloads, then an
end-to-end satisfiability workload in subprocesses (kernel selection happens
at import time, so end-to-end needs a fresh interpreter per backend).

Usage: python3 benchmarks/bench_kernels.py [--quick]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

from elkat import _pykernels

try:
    from elkat import _speedups
except ImportError:
    _speedups = None


def time_call(fn, repeat: int):
    start = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - start) / repeat


def bench_axiom_bits(repeat: int):
    # (A & B <= some r . A) over 2 concepts / 1 role / 1 individual, domain 3:
    # 32768 concept-role combinations per evaluation
    program = (_pykernels.OP_CONCEPT, 0, _pykernels.OP_CONCEPT, 1,
               _pykernels.OP_AND, _pykernels.OP_CONCEPT, 0,
               _pykernels.OP_EXISTS, 0, _pykernels.OP_INCLUSION)
    rows = []
    for d in (2, 3):
        pure = time_call(lambda: _pykernels.axiom_bits(2, 1, 1, d, program), repeat)
        row = {"kernel": "axiom_bits d=%d" % d, "pure": pure}
        if _speedups is not None:
            fast = time_call(lambda: _speedups.axiom_bits(2, 1, 1, d, program),
                             repeat)
            assert _speedups.axiom_bits(2, 1, 1, d, program) \
                == _pykernels.axiom_bits(2, 1, 1, d, program)
            row["compiled"] = fast
        rows.append(row)
    return rows


def bench_search_kripke(repeat: int):
    # exhaustive failure at w worlds, two agents, two positives + two
    # negatives; obligations are always satisfiable but no falsification
    # ever is, so the search sweeps the entire partition space
    prefixes_true = ((0, 1), (1,))
    prefixes_false = ((0, 1, 0), (1, 0, 1))
    t, f = len(prefixes_true), len(prefixes_false)
    table = bytearray(1 << (t + f))
    for o in range(1 << t):
        table[o << f] = 1
    table = bytes(table)
    rows = []
    for w in (5, 6, 7):
        args = (w, 2, prefixes_true, prefixes_false, table, f)
        assert _pykernels.search_kripke(*args) is None
        pure = time_call(lambda: _pykernels.search_kripke(*args), repeat)
        row = {"kernel": "search_kripke w=%d (exhaust)" % w, "pure": pure}
        if _speedups is not None:
            assert _speedups.search_kripke(*args) is None
            row["compiled"] = time_call(lambda: _speedups.search_kripke(*args),
                                        repeat)
        rows.append(row)
    return rows


END_TO_END = r"""
import random, time
from elkat import kernels
from elkat.elksat import conjunctive_sat
from elkat.enumeration import brute_force_elk_sat
from elkat.syntax import render_conjunctive
import sys
sys.path.insert(0, "tests")
import gen

corpus = gen.conjunctive_corpus(99, 150)
start = time.perf_counter()
agree = 0
for instance in corpus:
    verdict = conjunctive_sat(instance)
    bound = 1 + sum(len(pb.prefix) for pb in instance.negatives)
    oracle = brute_force_elk_sat(render_conjunctive(instance), max_worlds=bound)
    agree += verdict.satisfiable == oracle.found
print("%s %.3f %d" % (kernels.BACKEND, time.perf_counter() - start, agree))
"""


def bench_end_to_end():
    rows = {}
    for pure in (True, False):
        env = dict(os.environ)
        if pure:
            env["ELKAT_PURE"] = "1"
        else:
            env.pop("ELKAT_PURE", None)
        proc = subprocess.run([sys.executable, "-c", END_TO_END],
                              capture_output=True, text=True, env=env,
                              cwd=os.path.dirname(os.path.dirname(
                                  os.path.abspath(__file__))))
        if proc.returncode != 0:
            raise RuntimeError(proc.stderr)
        backend, seconds, agree = proc.stdout.split()
        rows[backend] = (float(seconds), int(agree))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()
    repeat = 1 if args.quick else 3

    print("backend availability: pure=yes compiled=%s"
          % ("yes" if _speedups is not None else "no"))
    print()
    print("%-30s %12s %12s %9s" % ("kernel", "pure", "compiled", "speedup"))
    for row in bench_axiom_bits(repeat) + bench_search_kripke(repeat):
        pure = row["pure"]
        if "compiled" in row:
            fast = row["compiled"]
            print("%-30s %10.3fms %10.3fms %8.1fx"
                  % (row["kernel"], pure * 1e3, fast * 1e3, pure / fast))
        else:
            print("%-30s %10.3fms %12s" % (row["kernel"], pure * 1e3, "-"))

    print()
    print("end-to-end: 150-instance differential corpus "
          "(conjunctive_sat + brute-force oracle)")
    rows = bench_end_to_end()
    for backend, (seconds, agree) in sorted(rows.items()):
        print("  %-8s %6.2fs  (%d/150 agree)" % (backend, seconds, agree))
    if "c" in rows and "python" in rows:
        print("  end-to-end speedup: %.1fx"
              % (rows["python"][0] / rows["c"][0]))


if __name__ == "__main__":
    main()
