"""Row-finite equation systems over abelian groups and the grid recursion
that solves ``g_n = f_n + (n+1) g_{n+1}`` in a quotient of a tower limit.

A system ``sum_m l_{n,m} x_m = a_n`` is given by a row rule (row n as a
sparse dict) and a right-hand side rule.  The divisibility system has rows
``x_n - (n+1) x_{n+1} = a_n``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Protocol, Sequence

from .abgroup import AbElement, FgAbGroup, SymbolicAbGroup, is_cotorsion
from .commutators import commutator, commutator_length_table
from .groups import ProductGroup
from .tower import Thread, Tower, is_thread


class UnsupportedGroup(ValueError):
    pass


class NotUnitriangular(ValueError):
    pass


class OracleViolation(AssertionError):
    pass


class WindowTooSmall(ValueError):
    pass


# ---------------------------------------------------------------------------
# systems


def _rhs_rule(group, rhs) -> Callable[[int], AbElement]:
    if callable(rhs):
        return rhs
    if isinstance(group, SymbolicAbGroup):
        return lambda n: None
    one = group.basis()[0] if group.ngens else group.identity
    if rhs == "ones":
        return lambda n: one
    if rhs == "zeros" or rhs is None:
        return lambda n: group.identity
    if isinstance(rhs, dict) and "random" in rhs:
        seed = int(rhs["random"])
        bound = int(rhs.get("bound", 10))
        cache: dict = {}

        def rule(n, seed=seed):
            if n not in cache:
                rng = random.Random(f"{seed}:{n}")
                cache[n] = group.element([rng.randint(0, d - 1) if d else rng.randint(-bound, bound)
                                          for d in group.moduli])
            return cache[n]
        return rule
    vals = [v if isinstance(v, AbElement) else _as_element(group, v) for v in rhs]
    zero = group.identity
    return lambda n: vals[n] if n < len(vals) else zero


def _as_element(group: FgAbGroup, v) -> AbElement:
    if isinstance(v, int):
        return v * group.basis()[0]
    return group.element(v)


@dataclass
class EquationSystem:
    group: object
    row: Callable[[int], dict]       # n -> {m: l_{n,m}} with finitely many entries
    rhs: Callable[[int], AbElement]
    kind: str = "explicit_rows"
    finite_support: int | None = None   # rhs vanishes from this index on, when known
    description: dict = field(default_factory=dict)

    @classmethod
    def divisibility(cls, group, rhs="ones") -> EquationSystem:
        support = None
        if isinstance(rhs, (list, tuple)):
            support = len(rhs)
        elif rhs in ("zeros", None):
            support = 0
        return cls(group, lambda n: {n: 1, n + 1: -(n + 1)}, _rhs_rule(group, rhs),
                   "divisibility", support, {"rhs": rhs if not callable(rhs) else "rule"})

    @classmethod
    def explicit(cls, group, rows: Sequence, rhs) -> EquationSystem:
        """``rows[n]`` is a dict ``{m: coeff}`` or a dense list; rows beyond the list are x_n = a_n."""
        parsed = []
        for r in rows:
            if isinstance(r, dict):
                parsed.append({int(m): int(c) for m, c in r.items() if int(c)})
            else:
                parsed.append({m: int(c) for m, c in enumerate(r) if int(c)})
        support = len(rhs) if isinstance(rhs, (list, tuple)) else None
        return cls(group, lambda n: parsed[n] if n < len(parsed) else {n: 1},
                   _rhs_rule(group, rhs), "explicit_rows", support)

    def residual(self, x: Sequence[AbElement], n: int) -> AbElement:
        row = self.row(n)
        total = self.group.identity
        for m, c in row.items():
            if c:
                if m >= len(x):
                    raise IndexError(f"row {n} reaches variable {m} outside the window")
                total = total + c * x[m]
        return total - self.rhs(n)


def is_unitriangular(S: EquationSystem, N: int) -> bool:
    for n in range(N + 1):
        row = S.row(n)
        if row.get(n, 0) != 1:
            return False
        if any(m < n and c for m, c in row.items()):
            return False
    return True


def solve_truncated(S: EquationSystem, N: int) -> list[AbElement]:
    """Window solution with ``x_m = 0`` for ``m > N`` and back-substitution."""
    if isinstance(S.group, SymbolicAbGroup):
        raise UnsupportedGroup("window solving needs an f.g. abelian group")
    if not is_unitriangular(S, N):
        raise NotUnitriangular("system is not unitriangular on the window")
    A = S.group
    reach = max([N] + [m for n in range(N + 1) for m in S.row(n)])
    x = [A.identity] * (reach + 1)
    for n in range(N, -1, -1):
        v = S.rhs(n)
        for m, c in S.row(n).items():
            if m != n and c:
                v = v - c * x[m]
        x[n] = v
    for n in range(N + 1):
        if not S.residual(x, n).is_zero():
            raise AssertionError(f"window solution fails equation {n}")
    return x[:N + 1]


# ---------------------------------------------------------------------------
# global solvability of the divisibility system


@dataclass(frozen=True)
class Solved:
    x0: AbElement
    window: tuple                 # x_0..x_N of a global solution
    certificate: str

    kind = "solved"

    def to_json(self) -> dict:
        return {"kind": self.kind, "x0": list(self.x0.coords), "certificate": self.certificate,
                "window": [list(v.coords) for v in self.window]}


@dataclass(frozen=True)
class NoSolutionBelow:
    bound: int
    N: int
    residue: int
    modulus: int
    coordinate: int = 0

    kind = "no_solution_below"

    def verify(self) -> bool:
        """No integer of absolute value <= bound is congruent to residue mod modulus."""
        r, M, B = self.residue % self.modulus, self.modulus, self.bound
        return r > B and M - r > B

    def to_json(self) -> dict:
        return {"kind": self.kind, "bound": self.bound, "N": self.N, "residue": str(self.residue),
                "modulus": str(self.modulus), "coordinate": self.coordinate,
                "certificate": f"x_0 ≡ {self.residue} (mod {self.N}!)"}


@dataclass(frozen=True)
class Unknown:
    reason: str
    kind = "unknown"

    def to_json(self) -> dict:
        return {"kind": self.kind, "reason": self.reason}


def divisibility_system_global(A, rhs="ones", bound: int = 10 ** 6, depth: int = 20, window: int = 8):
    """Decide ``x_n - (n+1) x_{n+1} = a_n`` over ``A`` as far as exact methods allow.

    * finite torsion coordinates: ``x_n = sum_{k=n}^{n+e-1} (k!/n!) a_k`` is a
      global solution, since any e consecutive factors kill the exponent e;
    * free coordinates with finitely supported rhs: the tail is zero;
    * free coordinates otherwise: ``x_0 ≡ sum_{k<N} k! a_k (mod N!)``, and once
      that class avoids ``[-bound, bound]`` no solution has ``|x_0| <= bound``.
    """
    if isinstance(A, SymbolicAbGroup):
        raise UnsupportedGroup("global solving needs an f.g. abelian group")
    S = EquationSystem.divisibility(A, rhs)
    a = S.rhs
    k = len(A.factors)
    coords = [[0] * (window + 1) for _ in range(A.ngens)]
    notes = []
    for j, d in enumerate(A.moduli):
        if d:
            for n in range(window + 1):
                tot, c = 0, 1
                for kk in range(n, n + d):
                    tot += c * a(kk).coords[j]
                    c *= kk + 1
                coords[j][n] = tot
            if j == 0 or not notes or "torsion" not in notes[-1]:
                notes.append(f"torsion coordinates: closed formula over {d} terms")
            continue
        if S.finite_support is not None:
            for n in range(window + 1):
                coords[j][n] = sum(factorial(kk) // factorial(n) * a(kk).coords[j]
                                   for kk in range(n, max(S.finite_support, n)))
            notes.append(f"free coordinate {j - k}: rhs supported below {S.finite_support}, tail zero")
            continue
        for N in range(1, depth + 1):
            M = factorial(N)
            r = sum(factorial(kk) * a(kk).coords[j] for kk in range(N)) % M
            cert = NoSolutionBelow(bound, N, r, M, j)
            if cert.verify():
                return cert
        return Unknown(f"residue classes mod N! for N <= {depth} all meet [-{bound}, {bound}]")
    x = [A.element([coords[j][n] for j in range(A.ngens)]) for n in range(window + 1)]
    ext = x + [A.element([0] * A.ngens)]
    for n in range(window):
        if not S.residual(ext, n).is_zero():
            raise AssertionError(f"global solution fails equation {n}")
    if A.is_finite:
        ok, why = is_cotorsion(A)
        if not ok:
            raise AssertionError("finite group reported as not cotorsion")
        notes.append(f"consistent with cotorsion check: {why}")
    return Solved(x[0], tuple(x), "; ".join(notes) or "trivial group")


# ---------------------------------------------------------------------------
# lift oracles


class LiftOracle(Protocol):
    def lift(self, n: int, target) -> Thread:
        """An element of F (as a window thread) whose level-n entry is ``target``."""

    def certify(self, th: Thread):
        """Evidence that ``th`` lies in F, or None."""


def thread_mul(T: Tower, x: Thread, y: Thread) -> Thread:
    return Thread(tuple(T.group(l).mul(a, b) for l, (a, b) in enumerate(zip(x.values, y.values))))


def thread_inv(T: Tower, x: Thread) -> Thread:
    return Thread(tuple(T.group(l).inv(a) for l, a in enumerate(x.values)))


def thread_pow(T: Tower, x: Thread, k: int) -> Thread:
    return Thread(tuple(T.group(l).pow(a, k) for l, a in enumerate(x.values)))


def thread_identity(T: Tower, L: int) -> Thread:
    return Thread(tuple(T.group(l).identity for l in range(L + 1)))


class CommutatorLiftOracle:
    """F = C(lim G) inside H = lim C(G_n) for a product tower ``G_n = K_0 x ... x K_n``.

    A target in ``C(G_n)`` is written coordinatewise as products of at most
    ``width`` commutators in each factor; padding the shorter expressions
    with identities gives one expression of uniform length whose value
    extends to every level, so the lift lies in ``C(lim G)``.
    """

    def __init__(self, G: Tower, H: Tower, L: int):
        self.G, self.H, self.L = G, H, L
        self.components = [G.tail.component(i) for i in range(L + 1)]
        self._tables = {}
        for K in self.components:
            if id(K) not in self._tables:
                self._tables[id(K)] = commutator_length_table(K)
        self.width = max(max(len(e) for e in t.values()) for t in self._tables.values())

    def expression(self, value: Sequence) -> list[tuple]:
        """Padded commutator expression of ``value`` in ``K_0 x ... x K_{len-1}``."""
        es = []
        for i, v in enumerate(value):
            t = self._tables[id(self.components[i])]
            if v not in t:
                raise OracleViolation(f"coordinate {i} is not in the commutator subgroup")
            es.append(t[v])
        k = max([len(e) for e in es] + [0])
        out = []
        for j in range(k):
            X, Y = [], []
            for i, e in enumerate(es):
                K = self.components[i]
                x, y = e[j] if j < len(e) else (K.identity, K.identity)
                X.append(x)
                Y.append(y)
            out.append((tuple(X), tuple(Y)))
        return out

    def _evaluate(self, expr, size: int) -> tuple:
        P = ProductGroup(self.components[:size])
        v = P.identity
        for X, Y in expr:
            v = P.mul(v, commutator(P, X, Y))
        return v

    def lift(self, n: int, target) -> Thread:
        pad = tuple(self.components[i].identity for i in range(len(target), self.L + 1))
        top = tuple(target) + pad
        expr = self.expression(top)
        value = self._evaluate(expr, self.L + 1)
        vals = tuple(value[:l + 1] for l in range(self.L + 1))
        return Thread(vals)

    def certify(self, th: Thread):
        top = th.values[-1]
        expr = self.expression(top)
        if self._evaluate(expr, len(top)) != tuple(top):
            return None
        if len(expr) > self.width:
            return None
        return {"commutators": len(expr), "uniform_bound": self.width}


@dataclass(frozen=True)
class LiftResult:
    fbar: Thread
    fprime: Thread
    certificate: object


def lift_vanishing_below(T: Tower, F: LiftOracle, f: Thread, n: int, L: int) -> LiftResult:
    """``f̄ = (f')^-1 f`` with ``f' ∈ F`` agreeing with ``f`` at level n-1.

    Then ``F f̄ = F f`` and ``f̄`` is trivial at every level below n.
    """
    if not is_thread(T, f) or f.depth != L:
        raise ValueError("f must be a thread of depth L")
    ident = thread_identity(T, L)
    if n == 0:
        return LiftResult(f, ident, "n = 0: f̄ = f")
    target = f.values[n - 1]
    fp = F.lift(n - 1, target)
    if fp.depth != L or not is_thread(T, fp):
        raise OracleViolation("oracle output is not a window thread")
    if fp.values[n - 1] != target:
        raise OracleViolation(f"oracle lift misses the target at level {n - 1}")
    cert = F.certify(fp)
    if cert is None:
        raise OracleViolation("oracle output could not be certified as an element of F")
    fbar = thread_mul(T, thread_inv(T, fp), f)
    for i in range(n):
        if fbar.values[i] != T.group(i).identity:
            raise AssertionError(f"f̄ is not trivial at level {i}")
    return LiftResult(fbar, fp, cert)


# ---------------------------------------------------------------------------
# grid recursion


@dataclass
class RecursionGrid:
    L: int
    entries: dict                 # (n, l) -> ḡ_{n,l}, 0 <= n <= L+1, 0 <= l <= L
    fbar: list
    base_ok: bool
    recursion_ok: bool
    compatibility: dict           # (l, i) -> bool for i <= l+2
    quotient: list                # per n <= L-1: q_n ∈ F certified
    quotient_certificates: list

    @property
    def compatibility_ok(self) -> bool:
        return all(self.compatibility.values())

    @property
    def quotient_ok(self) -> bool:
        return all(self.quotient)

    @property
    def passed(self) -> bool:
        return self.base_ok and self.recursion_ok and self.compatibility_ok and self.quotient_ok

    def checks(self) -> dict:
        return {"base": self.base_ok, "recursion": self.recursion_ok,
                "compatibility": self.compatibility_ok, "quotient": self.quotient_ok}

    def thread(self, n: int) -> Thread:
        return Thread(tuple(self.entries[n, l] for l in range(self.L + 1)))


def check_lift_hypothesis(T: Tower, F: LiftOracle, L: int) -> bool:
    """``φ_n(F) = φ_n(lim)`` on the window, checked on generators of ``φ_n(lim)``."""
    from .tower import image
    for n in range(L + 1):
        S = image(T.compose(L, n))
        for g in S.generators():
            th = F.lift(n, g)
            if th.values[n] != g or F.certify(th) is None:
                return False
    return True


def recursion_grid(T: Tower, F: LiftOracle, f_seq: Sequence[Thread], L: int) -> RecursionGrid:
    """Fill ``ḡ_{n,l} = φ_l(f̄_n) ḡ_{n+1,l}^{n+1}`` (with ``ḡ_{n,l} = e`` for n > l) and check it.

    The four checks are the base case, the recursion identity, level
    compatibility ``φ_{l,l+1}(ḡ_{n,l+1}) = ḡ_{n,l}`` (recorded for each
    induction stage i <= l+2, covering n > l-i+1), and membership of
    ``q_n = ḡ_n^-1 f_n ḡ_{n+1}^{n+1}`` in F, which is the equation
    ``g_n = f_n + (n+1) g_{n+1}`` in the quotient.
    """
    if L < 2:
        raise WindowTooSmall("the recursion needs a window of at least 2")
    if len(f_seq) < L + 1:
        raise ValueError("f_n required for every n <= L")
    if not check_lift_hypothesis(T, F, L):
        raise OracleViolation("oracle does not realize φ_n(F) = φ_n(lim) on the window")
    fbar = [lift_vanishing_below(T, F, f_seq[n], n, L).fbar for n in range(L + 1)]
    e = [T.group(l).identity for l in range(L + 1)]
    g = {}
    for l in range(L + 1):
        G = T.group(l)
        for n in range(L + 1, l, -1):
            g[n, l] = e[l]
        for n in range(l, -1, -1):
            g[n, l] = G.mul(fbar[n].values[l], G.pow(g[n + 1, l], n + 1))
    base_ok = all(g[n, l] == e[l] for l in range(L + 1) for n in range(l + 1, L + 2))
    base_ok = base_ok and all(fbar[n].values[l] == e[l] for n in range(L + 1) for l in range(n))
    recursion_ok = all(
        g[n, l] == T.group(l).mul(fbar[n].values[l] if n <= L else e[l],
                                  T.group(l).pow(g[n + 1, l], n + 1))
        for l in range(L + 1) for n in range(L + 1))
    compat_point = {}
    for l in range(L):
        phi = T.map(l)
        for n in range(L + 2):
            compat_point[n, l] = phi(g[n, l + 1]) == g[n, l]
    compatibility = {}
    for l in range(L):
        for i in range(l + 3):
            compatibility[l, i] = all(compat_point[n, l] for n in range(L + 2) if n > l - i + 1)
    quotient, certs = [], []
    threads = [Thread(tuple(g[n, l] for l in range(L + 1))) for n in range(L + 2)]
    for n in range(L):
        gn, gn1 = threads[n], threads[n + 1]
        q = thread_mul(T, thread_mul(T, thread_inv(T, gn), f_seq[n]), thread_pow(T, gn1, n + 1))
        cert = F.certify(q) if is_thread(T, q) else None
        quotient.append(cert is not None)
        certs.append(cert)
    return RecursionGrid(L, g, fbar, base_ok, recursion_ok, compatibility, quotient, certs)


def diagonal_thread(T: Tower, L: int, c) -> Thread:
    """Thread whose level-l entry is ``(c, ..., c)`` with l+1 coordinates."""
    return Thread(tuple(tuple([c] * (l + 1)) for l in range(L + 1)))
