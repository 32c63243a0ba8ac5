"""Acceptance criteria, one test each, with wall-clock limits.

Each test prints one ``ACCEPTANCE <n> PASS|FAIL`` line; the conftest hook
repeats the collected lines in the terminal summary.
"""

import json
import random
import time
from itertools import permutations
from math import factorial
from pathlib import Path

from towerlab import catalog, io
from towerlab.abgroup import (Z, FgAbGroup, abelian_groups_of_order, divisibility_witness_tree,
                              p_chain, p_divisible_thread_check, p_length)
from towerlab.commutators import (abelianization, abelianization_by_cosets,
                                  abelianization_by_presentation,
                                  commutator_length_free, commutator_subgroup,
                                  commutator_width_finite, commutator_word,
                                  is_single_commutator_free)
from towerlab.eqsolve import (CommutatorLiftOracle, EquationSystem, NoSolutionBelow, Solved,
                              divisibility_system_global, recursion_grid)
from towerlab.groups import FiniteGroup, FreeWord, GroupHom
from towerlab.kernel import naive_is_commutator, rho_window, unbounded_cl_witness
from towerlab.linalg import IntMatrix, smith_normal_form
from towerlab.tower import (Thread, Tower, commutator_tower, lim1_window_surjectivity,
                            ml_certified, six_term_window_check)

INSTANCES = Path(__file__).resolve().parent.parent / "instances"
RESULTS: dict = {}


def record(n: int, ok: bool, elapsed: float, limit: float, detail: str = ""):
    line = (f"ACCEPTANCE {n:>2} {'PASS' if ok and elapsed < limit else 'FAIL'} "
            f"({elapsed:.2f}s / {limit:g}s) {detail}").rstrip()
    RESULTS[n] = line
    print(line)
    assert ok, detail
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


def _load(name):
    return json.loads((INSTANCES / name).read_text())


# ----------------------------------------------------------------------- 1

def _is_chain(d):
    return all(b % a == 0 for a, b in zip(d, d[1:]))


def test_criterion_01_snf_suite():
    rng = random.Random(20240601)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(1000):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        A = IntMatrix.from_rows([[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)])
        D = smith_normal_form(A)
        S = D.S
        off = any(S[i, j] for i in range(r) for j in range(c) if i != j)
        diag = [S[i, i] for i in range(min(r, c))]
        nonzero = [d for d in diag if d]
        ok = (D.U @ A @ D.V == S and abs(D.U.det()) == 1 and abs(D.V.det()) == 1 and not off
              and all(d > 0 for d in nonzero) and diag[:len(nonzero)] == nonzero and _is_chain(nonzero))
        bad += not ok
    record(1, bad == 0, time.perf_counter() - t0, 5, f"{bad} failures in 1000 matrices")


# ----------------------------------------------------------------------- 2

def test_criterion_02_abelianization_routes_agree():
    t0 = time.perf_counter()
    groups = catalog.groups_up_to(16)
    mismatches = [str(G) for G in groups if abelianization_by_cosets(G)[0] != abelianization_by_presentation(G)]
    record(2, not mismatches and len(groups) > 0, time.perf_counter() - t0, 5,
           f"{len(groups)} catalog groups, mismatches {mismatches}")


# ----------------------------------------------------------------------- 3

def _compose(p, q):
    # apply q then p
    return tuple(p[q[i]] for i in range(len(q)))


def _sign(p):
    s, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, n = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            n += 1
        s *= (-1) ** (n - 1)
    return s


def _hamilton(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3, a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1, a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0)


def _brute_commutators(elems, mul, inv):
    comms = {mul(mul(inv(x), inv(y)), mul(x, y)) for x in elems for y in elems}
    span = set(comms)
    while True:
        nxt = span | {mul(a, b) for a in span for b in comms}
        if nxt == span:
            return comms, span
        span = nxt


def test_criterion_03_commutator_facts():
    t0 = time.perf_counter()
    # module answers
    S3, Q8 = catalog.get("S3"), catalog.get("Q8")
    C3 = commutator_subgroup(S3)
    CQ = commutator_subgroup(Q8)
    width = commutator_width_finite(S3)
    AbQ = abelianization(Q8)[0]
    # independent enumeration on concrete permutations and unit quaternions
    perms = list(permutations(range(3)))
    inv = lambda p: tuple(sorted(range(3), key=lambda i: p[i]))
    comms, span = _brute_commutators(perms, _compose, inv)
    a3 = {p for p in perms if _sign(p) == 1}
    units = [tuple(s if i == k else 0 for i in range(4)) for k in range(4) for s in (1, -1)]
    qinv = lambda q: (q[0], -q[1], -q[2], -q[3])
    _, qspan = _brute_commutators(units, _hamilton, qinv)
    QG = FiniteGroup.from_elements(units, _hamilton)
    ok = (len(C3.members) == 3 and all(S3.element_order(x) in (1, 3) for x in C3.members)
          and span == a3 and comms == a3 and width == 1
          and qspan == {(1, 0, 0, 0), (-1, 0, 0, 0)} and len(CQ.members) == 2
          and AbQ == FgAbGroup((2, 2)) and abelianization_by_presentation(QG) == AbQ
          and all(S3.element_order(x) != 2 for x in C3.members))
    record(3, ok, time.perf_counter() - t0, 1,
           f"|C(S3)|={len(C3.members)} width={width} |C(Q8)|={len(CQ.members)} Ab(Q8)={AbQ}")


# ----------------------------------------------------------------------- 4

def test_criterion_04_wicks():
    t0 = time.perf_counter()
    ab = commutator_word(FreeWord.parse("a"), FreeWord.parse("b"))
    r = commutator_length_free(ab ** 2, factor_len_bound=8)
    prod = FreeWord((), 2)
    for x, y in r.expression:
        prod = prod * commutator_word(x, y)
    ok = (is_single_commutator_free(ab) and not is_single_commutator_free(ab ** 2)
          and naive_is_commutator(ab) and not naive_is_commutator(ab ** 2)
          and r.status == "exact" and r.lower == r.upper == 2 and prod == ab ** 2)
    record(4, ok, time.perf_counter() - t0, 10, f"cl([a,b]^2) status={r.status} [{r.lower},{r.upper}]")


# ----------------------------------------------------------------------- 5

def test_criterion_05_ml_window_surjectivity():
    t0 = time.perf_counter()
    towers = []
    for f in sorted(INSTANCES.glob("c05*.json")):
        T = io.build_tower(io.load_instance(str(f)))
        if T.is_abelian_upto(6 if T.top is None else T.top) and ml_certified(T)[0]:
            towers.append((f.name, T))
    details, ok = [], bool(towers)
    for name, T in towers:
        Nmax = 5 if T.top is None else min(5, T.top - 1)
        for N in range(Nmax + 1):
            r = lim1_window_surjectivity(T, N, budget=10 ** 7)
            ok = ok and r.mode == "exhaustive" and r.passed
        details.append(f"{name}:N<={Nmax}")
    record(5, ok, time.perf_counter() - t0, 30, ", ".join(details))


# ----------------------------------------------------------------------- 6

def test_criterion_06_six_term_q8():
    t0 = time.perf_counter()
    Q = catalog.get("Q8")
    C = commutator_subgroup(Q)
    A, pi = abelianization(Q)
    r = six_term_window_check(Tower.constant(C), Tower.constant(Q), Tower.constant(A), 4,
                              GroupHom.inclusion(C), pi)
    ok = r.injective and r.exact_middle and r.surjective and r.orders == (2, 8, 4)
    record(6, ok, time.perf_counter() - t0, 5, f"orders {r.orders}, exact={r.exact}")


# ----------------------------------------------------------------------- 7

def test_criterion_07_recursion_grid():
    t0 = time.perf_counter()
    data = _load("c07_recursion_A3.json")
    L = 8
    S3 = io.build_group(data["components"][0])
    G = Tower.product_accumulation([S3])
    H = commutator_tower(G, L)
    F = CommutatorLiftOracle(G, H, L)
    c = min(x for x in commutator_subgroup(S3).members if S3.element_order(x) == 3)
    f_seq = [Thread(tuple(tuple([c] * (l + 1)) for l in range(L + 1))) for _ in range(L + 1)]
    grid = recursion_grid(H, F, f_seq, L)
    checks = grid.checks()
    ok = all(checks.values()) and all(H.group(l).order == 3 ** (l + 1) for l in range(L + 1))
    ok = ok and len(grid.compatibility) == sum(l + 3 for l in range(L))
    record(7, ok, time.perf_counter() - t0, 10, f"checks {checks}")


# ----------------------------------------------------------------------- 8

def test_criterion_08_cotorsion_dichotomy():
    t0 = time.perf_counter()
    Z6 = FgAbGroup((6,))
    kinds = set()
    for seed in range(100):
        r = divisibility_system_global(Z6, {"random": seed})
        kinds.add(type(r).__name__)
        if isinstance(r, Solved):
            w = r.window
            S = EquationSystem.divisibility(Z6, {"random": seed})
            assert all((w[n] - (n + 1) * w[n + 1] - S.rhs(n)).is_zero() for n in range(len(w) - 1))
    z = divisibility_system_global(Z, "ones", bound=10 ** 6)
    M = factorial(11)
    residue = sum(factorial(k) for k in range(11)) % M
    ok = (kinds == {"Solved"} and isinstance(z, NoSolutionBelow) and z.N == 11 and z.verify()
          and z.bound == 10 ** 6 and z.modulus == M and z.residue == residue
          and 10 ** 6 < residue < M - 10 ** 6)
    record(8, ok, time.perf_counter() - t0, 10, f"Z/6: {sorted(kinds)}; Z: N={getattr(z, 'N', None)}")


# ----------------------------------------------------------------------- 9

def test_criterion_09_kernel_windows_and_witnesses():
    t0 = time.perf_counter()
    data = _load("c09a_kernel_products.json")
    corpus = data["corpus"] + [data["components"]]
    isos = []
    for descs in corpus:
        comps = [io.build_group(s) for s in descs]
        assert all(K.order <= 24 for K in comps)
        isos.append(rho_window(comps).is_iso)
    W = unbounded_cl_witness(2, factor_len_bound=4)
    h1 = W.levels[1]
    sound = all((lv["lower"] >= 2) == (not naive_is_commutator(FreeWord.parse(lv["word"]))) for lv in W.levels)
    ok = all(isos) and W.verified and h1["lower"] >= 2 and W.levels[0]["lower"] == 1 and sound
    record(9, ok, time.perf_counter() - t0, 20,
           f"{sum(isos)}/{len(isos)} windows iso; cl(h1) >= {h1['lower']}")


# ----------------------------------------------------------------------- 10

def _primes(n):
    return [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]


def test_criterion_10_finite_ulm_fragment():
    t0 = time.perf_counter()
    ok, count_groups, count_threads = True, 0, 0
    for n in range(1, 33):
        for A in abelian_groups_of_order(n):
            count_groups += 1
            elems = list(A.elements())
            for p in _primes(n) or [2]:
                # exhaustive p-chain
                orders, cur = [], set(elems)
                while True:
                    orders.append(len(cur))
                    nxt = {p * x for x in cur}
                    if nxt == cur:
                        break
                    cur = nxt
                lp = len(orders) - 1
                ch = p_chain(A, p, lp + 1)
                ok = ok and list(ch.orders[:lp + 1]) == orders and ch.orders[lp + 1] == orders[-1]
                ok = ok and p_length(A, p).finite == lp and ch.stabilized_at == lp
                # every thread with at least l_p steps starts in p^{l_p} A
                top = cur
                for steps in (lp, lp + 1):
                    for y in elems:
                        ys = [y]
                        for _ in range(steps):
                            ys.insert(0, p * ys[0])
                        v = p_divisible_thread_check(A, ys, p)
                        ok = ok and v.membership_checked and v.member and ys[0] in top
                        count_threads += 1
    H = FgAbGroup.cyclic(8)
    x = H.element([4])
    T = divisibility_witness_tree(H, x, 2)
    powers = {m: {(2 ** m) * y for y in H.elements()} for m in range(3)}
    tree_ok = T.nodes[()] == x and T.verify() == []
    for mu, y in T.nodes.items():
        tree_ok = tree_ok and y in powers[mu[-1] if mu else 2]
        if mu:
            tree_ok = tree_ok and 2 * y == T.nodes[mu[:-1]]
    tree_ok = tree_ok and T.nodes[(1,)].coords[0] in (2, 6)
    record(10, ok and tree_ok, time.perf_counter() - t0, 30,
           f"{count_groups} groups, {count_threads} threads, tree nodes {len(T.nodes)}")
