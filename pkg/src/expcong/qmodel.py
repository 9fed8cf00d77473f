"""Quantum cost models and an exact simulator of Grover/BBHT search.

Grover's iteration keeps the state in the plane spanned by the uniform
superpositions over marked and unmarked items, so after k iterations a
measurement lands on a marked item with probability sin^2((2k+1) theta),
sin^2 theta = m/t. The simulator samples exactly that distribution; it needs
the oracle's truth table, which is computed classically and not charged.
Shor's order finding and discrete logarithm are not simulated; they enter the
cost reports as a polylogarithmic placeholder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .arith import is_prime, next_prime, prev_prime
from .census import (
    COUNT_LIMIT,
    EquationInstance,
    SearchRegion,
    count_all_b,
    sqrt_log_delta,
)
from .dlog import build_table, dlog
from .errors import CapacityError, DomainError, ParameterError
from .ff import prime_field
from .solver import Case, SolveOutcome, Status, plan, verify

BBHT_LAMBDA = 6 / 5
SIM_LIMIT = 10**6
SHOR_COST = "(log q)^O(1)"


def ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def grover_closed_form(t: int, m: int, k: int) -> float:
    """Success probability after k Grover iterations with m of t items marked."""
    if t < 1 or not 1 <= m <= t:
        raise DomainError(f"need 1 <= m <= t, got m={m}, t={t}")
    theta = math.asin(math.sqrt(m / t))
    return math.sin((2 * k + 1) * theta) ** 2


def optimal_iterations(t: int, m: int) -> int:
    return math.floor(math.pi / 4 * math.sqrt(t / m))


@dataclass(frozen=True)
class KnownM:
    m: int


BBHT = "bbht"


@dataclass
class GroverRun:
    t: int
    m: int | None  # None in BBHT mode: the algorithm is not told m
    found: int | None
    oracle_queries: int
    iterations: list[int] = dc_field(default_factory=list)  # Grover iterations per round
    success_prob: float | None = None
    seed: int | None = None
    fallback_used: bool = False  # the answer came from the classical exhaustive check
    timed_out: bool = False


def _truth_table(oracle, t: int) -> np.ndarray:
    if isinstance(oracle, np.ndarray):
        table = oracle.astype(bool, copy=False)
        if table.shape != (t,):
            raise ParameterError(f"truth table has shape {table.shape}, expected ({t},)")
        return table
    if t > SIM_LIMIT:
        raise CapacityError(f"t = {t} exceeds the simulation limit {SIM_LIMIT}")
    return np.fromiter((bool(oracle(i)) for i in range(t)), dtype=bool, count=t)


class _Sampler:
    def __init__(self, table: np.ndarray, rng: np.random.Generator):
        self.table = table
        self.t = len(table)
        self.marked = np.flatnonzero(table)
        self.m = len(self.marked)
        self.theta = math.asin(math.sqrt(self.m / self.t))
        self.rng = rng

    def prob(self, k: int) -> float:
        return math.sin((2 * k + 1) * self.theta) ** 2

    def measure(self, k: int) -> int:
        """Outcome of measuring after k iterations."""
        if self.m and self.rng.random() < self.prob(k):
            return int(self.marked[self.rng.integers(self.m)])
        if self.m == self.t:
            return int(self.marked[self.rng.integers(self.m)])
        while True:
            i = int(self.rng.integers(self.t))
            if not self.table[i]:
                return i


def grover_trial(t: int, m: int, k: int, rng: np.random.Generator) -> bool:
    """One measurement after k iterations; True if a marked item came out."""
    return rng.random() < grover_closed_form(t, m, k)


def grover_search(
    oracle: Callable[[int], bool] | np.ndarray,
    t: int,
    mode: KnownM | str = BBHT,
    seed: int = 0,
    fallback: bool = True,
) -> GroverRun:
    """Search [0, t) for an index the oracle accepts.

    Every Grover iteration costs one query and every candidate check costs one
    more. BBHT stops after ceil(9/2 sqrt(t)) queries (never more than t); if
    nothing was found, the classical exhaustive check decides (``fallback``).
    """
    if t < 1:
        raise DomainError("search space must be nonempty")
    table = _truth_table(oracle, t)
    rng = np.random.default_rng(seed)
    smp = _Sampler(table, rng)
    run = GroverRun(t, None, None, 0, seed=seed)

    if isinstance(mode, KnownM):
        m = mode.m
        if not 0 <= m <= t:
            raise DomainError(f"m = {m} outside [0, {t}]")
        run.m = m
        if m == 0:
            return run
        k = optimal_iterations(t, m)
        run.success_prob = grover_closed_form(t, m, k)
        budget = max(8 * ceil_sqrt(t), 2 * (k + 1))
        while run.oracle_queries + k + 1 <= budget:
            run.iterations.append(k)
            i = smp.measure(k)
            run.oracle_queries += k + 1
            if table[i]:
                run.found = i
                return run
    elif mode == BBHT:
        budget = min(math.ceil(4.5 * math.sqrt(t)), t)
        cutoff = 1.0
        while True:
            j = int(rng.integers(math.ceil(cutoff)))
            if run.oracle_queries + j + 1 > budget:
                break
            run.iterations.append(j)
            i = smp.measure(j)
            run.oracle_queries += j + 1
            if table[i]:
                run.found = i
                return run
            cutoff = min(BBHT_LAMBDA * cutoff, math.sqrt(t))
    else:
        raise ParameterError(f"unknown search mode {mode!r}")

    run.timed_out = True
    if fallback:
        if t > SIM_LIMIT:
            raise CapacityError(f"exhaustive fallback limited to t <= {SIM_LIMIT}")
        run.fallback_used = True
        hits = np.flatnonzero(table)
        run.found = int(hits[0]) if len(hits) else None
    return run


def trial_seeds(root: int, n: int) -> list[int]:
    """Per-trial seeds split off a root seed (order-independent)."""
    return [int(s.generate_state(1, np.uint64)[0]) for s in np.random.SeedSequence(root).spawn(n)]


def empirical_success(t: int, m: int, trials: int, seed: int) -> int:
    """Successful single-shot measurements after the optimal iteration count."""
    k = optimal_iterations(t, m)
    hits = 0
    for s in trial_seeds(seed, trials):
        hits += grover_trial(t, m, k, np.random.default_rng(s))
    return hits


def bbht_queries(t: int, m: int, trials: int, seed: int) -> list[int]:
    """Oracle query counts of independent BBHT runs with m random marked items."""
    rng = np.random.default_rng(seed)
    table = np.zeros(t, dtype=bool)
    table[rng.choice(t, size=m, replace=False)] = True
    return [grover_search(table, t, BBHT, s, fallback=False).oracle_queries for s in trial_seeds(seed, trials)]


# -- the quantum solver, simulated -------------------------------------------------------


@dataclass(frozen=True)
class QuantumOutcome:
    outcome: SolveOutcome
    run: GroverRun
    marked: int  # pairs (x_2, x_3) for which the subroutine succeeds

    @property
    def oracle_queries(self) -> int:
        return self.run.oracle_queries


def quantum_solve_simulated(
    instance: EquationInstance,
    delta: float | None = None,
    mode: KnownM | str = BBHT,
    seed: int = 0,
    full_scan: bool = False,
    r: int | None = None,
) -> QuantumOutcome:
    """Grover search over the (x_2, x_3) grid with oracle "x_1 exists".

    Each oracle call stands for one run of the polynomial-time discrete-log
    subroutine and is charged one query. Pairs are flattened x_3-major. In
    ``KnownM`` mode the count passed in is ignored and the true m is used.
    """
    pl = plan(instance, delta, r)
    f = instance.field
    t1 = instance.terms[pl.perm[0]]
    s_last = pl.orders[-1]
    n_last = min(pl.r, s_last) if pl.case is Case.R_LE_S3 and not full_scan else s_last
    a1_inv = f.inv(t1.a.enc)
    b_scaled = f.mul(a1_inv, instance.b.enc)
    if instance.m == 1:
        outer = np.array([b_scaled], dtype=np.int64)
        inner = np.zeros(1, dtype=np.int64)
    else:
        last = instance.values(pl.perm[-1], n_last)
        outer = f.sub_vec(np.full_like(last, b_scaled), f.scale_vec(a1_inv, last))
        inner = f.scale_vec(a1_inv, instance.values(pl.perm[1])) if instance.m == 3 else np.zeros(1, dtype=np.int64)
    t = len(outer) * len(inner)
    if t > SIM_LIMIT:
        raise CapacityError(f"grid of {t} pairs exceeds the simulation limit {SIM_LIMIT}")
    h = f.sub_vec(outer[:, None], inner[None, :]).ravel()
    in_subgroup = np.zeros(f.q, dtype=bool)
    in_subgroup[f.powers(t1.g.enc, t1.s)] = True
    table = in_subgroup[h]
    marked = int(table.sum())
    if isinstance(mode, KnownM):
        mode = KnownM(marked)
    run = grover_search(table, t, mode, seed)

    solution = None
    if run.found is not None:
        k, j = divmod(run.found, len(inner))
        x1 = dlog(build_table(t1.g, t1.s), int(h[run.found]))
        assert x1 is not None
        sorted_xs = [x1] + ([j, k] if instance.m == 3 else [k] if instance.m == 2 else [])
        xs = [0] * instance.m
        for pos, user_idx in enumerate(pl.perm):
            xs[user_idx] = sorted_xs[pos]
        solution = tuple(xs)
        assert verify(instance, solution), "quantum search returned a non-solution"
        status = Status.FOUND
    elif n_last == s_last:
        status = Status.NO_SOLUTION
    else:
        status = Status.INCONCLUSIVE
    out = SolveOutcome(status, solution, run.oracle_queries, t, 0, 0, n_last, pl)
    return QuantumOutcome(out, run, marked)


# -- cost models -----------------------------------------------------------------------


@dataclass(frozen=True)
class CostReport:
    q: int
    orders: tuple[int, ...]  # descending
    r: int
    case: Case
    classical_cost: int
    t2_queries: int
    t2_bound: float
    t2_chain: bool | None
    t3_applicable: bool
    r3: int | None = None
    r3_le_s3: bool | None = None
    M_est: Fraction | None = None
    M: Fraction | int | None = None
    M_source: str | None = None
    t3_queries: int | None = None
    t3_bound: float | None = None
    t3_bound_as_stated: float | None = None
    shor_cost: str = SHOR_COST

    def as_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            if isinstance(v, Fraction):
                v = str(v)
            elif isinstance(v, Case):
                v = v.value
            out[k] = v
        out["orders"] = list(self.orders)
        return out


def cost_report(
    instance: EquationInstance,
    delta: float | None = None,
    M_source: str = "census",
    count_limit: int = COUNT_LIMIT,
) -> CostReport:
    """Classical work units and quantum query counts for one instance.

    classical_cost = s_2 min(r, s_3) ceil(sqrt(s_1)); t2_queries =
    ceil(sqrt(s_2 min(r, s_3))). When (s_1 s_2)^2 s_3 > q^3 log q the report
    adds t3_queries = ceil(sqrt(s_2 r / M)) with r = floor(q^3 (s_1 s_2)^-2 log q)
    and M the number of solutions in the truncated box (exact census or
    main-term estimate).
    """
    if instance.m not in (2, 3):
        raise ParameterError("cost models cover two or three terms")
    if M_source not in ("census", "main"):
        raise ParameterError(f"unknown M source {M_source!r}")
    q = instance.field.q
    pl = plan(instance, delta)
    s = pl.orders
    eff = min(pl.r, s[-1])
    enumerated = pl.search_set_size
    classical = enumerated * pl.giant_bound
    t2 = ceil_sqrt(enumerated)
    if instance.m == 3:
        t2_bound = q ** (3 / 5)
        chain = enumerated <= (s[0] ** 2 * s[1] ** 2 * eff) ** (2 / 5)
    else:
        t2_bound = q ** (1 / 3)
        chain = None
    report = dict(
        q=q,
        orders=s,
        r=pl.r,
        case=pl.case,
        classical_cost=classical,
        t2_queries=t2,
        t2_bound=t2_bound,
        t2_chain=chain,
        t3_applicable=False,
    )
    if instance.m == 3:
        s1, s2, s3 = s
        lg = math.log(q)
        applicable = (s1 * s2) ** 2 * s3 > q**3 * lg
        report["t3_applicable"] = applicable
        if applicable:
            r3 = max(math.floor(q**3 / (s1 * s2) ** 2 * lg), 1)
            M_est = Fraction(s1 * s2 * r3, q)
            if M_source == "census":
                if q > count_limit:
                    raise CapacityError(f"q = {q} exceeds the counting limit {count_limit}")
                region = SearchRegion(r3, instance.orders, pl.perm[-1])
                M = int(count_all_b(instance, region, count_limit)[instance.b.enc])
            else:
                M = M_est
            t3 = math.ceil(math.sqrt(s2 * r3 / M)) if M > 0 else None
            base = (s1**2 * s2**2 * s3) ** (-1 / 10)
            report.update(
                r3=r3,
                r3_le_s3=r3 <= s3,
                M_est=M_est,
                M=M,
                M_source=M_source,
                t3_queries=t3,
                t3_bound=math.sqrt(q) * base,
                t3_bound_as_stated=q**2 * base,
            )
    return CostReport(**report)


# -- scaling scan ------------------------------------------------------------------------

SCAN_HEADER = "q,s1,s2,s3,r,classical_cost,t2_queries,t3_queries,t2_bound,t3_bound"


@dataclass
class ScanResult:
    rows: list[CostReport]
    classical_exp: float
    quantum_exp: float
    ratio: float
    policy: str
    m: int
    warnings: list[str] = dc_field(default_factory=list)

    def csv(self) -> str:
        lines = [SCAN_HEADER]
        for c in self.rows:
            s = list(c.orders) + [""] * (3 - len(c.orders))
            t3 = "" if c.t3_queries is None else str(c.t3_queries)
            t3b = "" if c.t3_bound is None else f"{c.t3_bound:.12g}"
            lines.append(
                f"{c.q},{s[0]},{s[1]},{s[2]},{c.r},{c.classical_cost},{c.t2_queries},{t3},{c.t2_bound:.12g},{t3b}"
            )
        lines.append(f"# {self.summary()}")
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        return f"classical_exp={self.classical_exp:.12g} quantum_exp={self.quantum_exp:.12g} ratio={self.ratio:.12g}"


def worst_case_exponent(m: int) -> float:
    """Order exponent e (s ~ q^e) where the classical and quantum costs peak: m / (2m - 1)."""
    return m / (2 * m - 1)


def _nearest_divisor(n_fact, target: float) -> int:
    lt = math.log(target)
    return min(n_fact.divisors(), key=lambda d: (abs(math.log(d) - lt), d))


def scan_instance(p: int, policy: str, m: int = 3) -> EquationInstance:
    """Instance over F_p with all coefficients 1 and bases chosen by ``policy``.

    ``max-order``: every base is a primitive root (s_i = p - 1).
    ``worst-case``: every base has the order dividing p - 1 closest to
    p^(m / (2m - 1)), where the cost bounds are tight.
    """
    F = prime_field(p)
    g = F.generator
    if policy == "max-order":
        s = p - 1
    elif policy == "worst-case":
        s = _nearest_divisor(F.factor_q_minus_1, p ** worst_case_exponent(m))
    else:
        raise ParameterError(f"unknown order policy {policy!r}")
    gs = F.pow(g, (p - 1) // s)
    return EquationInstance.build(F, [(1, gs)] * m, 0)


def fit_exponent(qs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log y against log q."""
    return float(np.polyfit(np.log(np.asarray(qs, float)), np.log(np.asarray(ys, float)), 1)[0])


def ratio_scan(
    primes: Sequence[int],
    policy: str = "max-order",
    delta: float | None = None,
    m: int = 3,
) -> ScanResult:
    primes = sorted(set(primes))
    if len(primes) < 2:
        raise ParameterError("need at least two primes to fit an exponent")
    warnings = []
    if len(primes) < 5 or primes[-1] < 10 * primes[0]:
        warnings.append("fewer than 5 primes or less than a decade of range: exponents are rough")
    rows = []
    for p in primes:
        inst = scan_instance(p, policy, m)
        d = sqrt_log_delta(p) if delta is None else delta
        rows.append(cost_report(inst, d, M_source="main"))
    qs = [c.q for c in rows]
    ce = fit_exponent(qs, [c.classical_cost for c in rows])
    qe = fit_exponent(qs, [c.t2_queries for c in rows])
    ratio = ce / qe if qe else math.inf
    return ScanResult(rows, ce, qe, ratio, policy, m, warnings)


def log_spaced_primes(lo: int, hi: int, n: int) -> list[int]:
    """Primes in [lo, hi] near n log-spaced points (the next prime, or the previous one past hi)."""
    if n < 2:
        raise ParameterError("need n >= 2")
    out = set()
    for x in np.geomspace(lo, hi, n):
        p = next_prime(int(round(x)))
        out.add(p if p <= hi else prev_prime(hi))
    return sorted(out)


def worst_case_primes(lo: int, hi: int, n: int, m: int = 3) -> list[int]:
    """Log-spaced primes q for which q - 1 has a divisor close to q^(m / (2m - 1)).

    Near each of n log-spaced points x the prime is the first q >= x with
    q = 1 (mod d), d = round(x^(m / (2m - 1))); past hi the search runs downward.
    """
    if n < 2:
        raise ParameterError("need n >= 2")
    e = worst_case_exponent(m)
    out = set()
    for x in np.geomspace(lo, hi, n):
        d = max(int(round(x**e)), 1)
        k = max(-(-int(x - 1) // d), 1)
        while not is_prime(k * d + 1):
            k += 1
        if k * d + 1 > hi:
            k = (hi - 1) // d
            while k > 0 and not is_prime(k * d + 1):
                k -= 1
            if k * d + 1 < lo:
                continue
        out.add(k * d + 1)
    return sorted(out)
