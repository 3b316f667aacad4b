"""Phase-transition sweeps, delta scaling studies and the verification suite.

Every trial draws its sampling set, generator and signal from seeds derived
from ``(master_seed, tag, m, s, trial)`` alone, so a sweep gives identical
results whatever the worker count or scheduling order.
"""
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import numpy as np

from ._rng import derive_seed, rng_for
from .analysis import omega_two, orbit_constant_exact, restricted_isometry_constant
from .errors import ConfigError, EnumerationBudgetError, OrbitRipError
from .groups import (
    affine_axis_subset,
    make_affine,
    make_cyclic,
    make_direct_product,
    random_sampling_set,
    sampling_set,
)
from .recovery import iht, omp, recovery_success
from .representations import (
    affine_quasi_regular,
    fourier_realization,
    from_matrices,
    left_regular,
    representation_residuals,
    trivial,
    weyl_heisenberg,
)
from .sensing import (
    DISTRIBUTIONS,
    GeneratorSpec,
    build_measurement_matrix,
    draw_generator,
    partial_circulant_direct,
)

THREADS_ENV = "ORBIT_RIP_THREADS"
CSV_HEADER = "m,s,trials,successes,success_rate,median_rel_error,median_delta_s,seed"
SOLVERS = {"iht": iht, "omp": omp}
REPRESENTATIONS = ("left_regular", "affine_quasi_regular", "trivial", "fourier", "weyl_heisenberg")
RESTRICTIONS = (None, "affine_axis")


# --------------------------------------------------------------------- config

def build_group(spec):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"group spec must be an object with a 'kind', got {spec!r}")
    kind = spec["kind"]
    allowed = {"cyclic": {"kind", "n"}, "affine": {"kind", "p"}, "product": {"kind", "factors"}}
    if kind not in allowed:
        raise ConfigError(f"unknown group kind {kind!r}; choose from {sorted(allowed)}")
    extra = set(spec) - allowed[kind]
    missing = allowed[kind] - set(spec)
    if extra or missing:
        raise ConfigError(f"group {kind!r}: unknown keys {sorted(extra)}, missing keys {sorted(missing)}")
    try:
        if kind == "cyclic":
            return make_cyclic(spec["n"])
        if kind == "affine":
            return make_affine(spec["p"])
        factors = spec["factors"]
        if not isinstance(factors, list) or len(factors) != 2:
            raise ConfigError("product group needs exactly two factors")
        return make_direct_product(build_group(factors[0]), build_group(factors[1]))
    except ConfigError:
        raise
    except OrbitRipError as exc:
        raise ConfigError(f"invalid group spec {spec!r}: {exc}") from exc


def build_representation(group, spec, n=None):
    if not isinstance(spec, dict) or set(spec) != {"kind"}:
        raise ConfigError(f"representation spec must be {{'kind': ...}} only, got {spec!r}")
    kind = spec["kind"]
    if kind not in REPRESENTATIONS:
        raise ConfigError(f"unknown representation {kind!r}; choose from {REPRESENTATIONS}")
    try:
        if kind == "left_regular":
            rep = left_regular(group)
        elif kind == "trivial":
            if n is None:
                raise ConfigError("the trivial representation needs an explicit n")
            rep = trivial(group, n)
        elif kind == "affine_quasi_regular":
            if group.kind != "affine":
                raise ConfigError("affine_quasi_regular needs an affine group")
            rep = affine_quasi_regular(group.params[0])
        elif kind == "fourier":
            if group.kind != "cyclic":
                raise ConfigError("the Fourier realization needs a cyclic group")
            rep = fourier_realization(group.order)
        else:
            side = math.isqrt(group.order)
            rep = weyl_heisenberg(side)
            if rep.group.label != group.label:
                raise ConfigError(f"weyl_heisenberg needs Z_n x Z_n, got {group.label}")
    except ConfigError:
        raise
    except OrbitRipError as exc:
        raise ConfigError(f"cannot build {kind} on {group.label}: {exc}") from exc
    if n is not None and rep.dim != n:
        raise ConfigError(f"n = {n} does not match the representation dimension {rep.dim}")
    return rep


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep over ``m_list x sparsity_list``.

    JSON schema (all keys other than ``group``, ``representation``,
    ``m_list`` and ``sparsity_list`` are optional)::

        group              {"kind": "cyclic", "n": N} | {"kind": "affine", "p": P}
                           | {"kind": "product", "factors": [G, H]}
        representation     {"kind": "left_regular" | "affine_quasi_regular"
                                    | "trivial" | "fourier" | "weyl_heisenberg"}
        n                  ambient dimension; required for "trivial", checked otherwise
        distribution       "gaussian" | "rademacher" | "steinhaus"
        sparsity_list      [s, ...]
        m_list             [m, ...], each <= |G|
        trials_per_cell    int >= 1
        success_threshold  relative error counted as success (inclusive)
        master_seed        unsigned 64-bit int
        omega_restriction  null | "affine_axis"
        solver             "iht" | "omp"
        compute_delta      also compute the exact delta_s per trial
        rip_budget         max number of supports enumerated per delta_s
    """

    group: dict
    representation: dict
    m_list: tuple
    sparsity_list: tuple
    n: Optional[int] = None
    distribution: str = "gaussian"
    trials_per_cell: int = 50
    success_threshold: float = 1e-4
    master_seed: int = 0
    omega_restriction: Optional[str] = None
    solver: str = "iht"
    compute_delta: bool = False
    rip_budget: int = 2_000_000

    def __post_init__(self):
        object.__setattr__(self, "m_list", tuple(int(m) for m in self.m_list))
        object.__setattr__(self, "sparsity_list", tuple(int(s) for s in self.sparsity_list))
        if not self.m_list or not self.sparsity_list:
            raise ConfigError("m_list and sparsity_list must be non-empty")
        if self.distribution not in DISTRIBUTIONS:
            raise ConfigError(f"unknown distribution {self.distribution!r}")
        if self.solver not in SOLVERS:
            raise ConfigError(f"unknown solver {self.solver!r}; choose from {sorted(SOLVERS)}")
        if self.omega_restriction not in RESTRICTIONS:
            raise ConfigError(f"unknown omega_restriction {self.omega_restriction!r}")
        if int(self.trials_per_cell) != self.trials_per_cell or self.trials_per_cell < 1:
            raise ConfigError("trials_per_cell must be a positive integer")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be an unsigned 64-bit integer")
        if not self.success_threshold > 0:
            raise ConfigError("success_threshold must be positive")

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        missing = {"group", "representation", "m_list", "sparsity_list"} - set(data)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")
        return cls(**data)

    def to_dict(self):
        d = asdict(self)
        d["m_list"] = list(self.m_list)
        d["sparsity_list"] = list(self.sparsity_list)
        return d

    def with_seed(self, seed):
        return ExperimentConfig.from_dict({**self.to_dict(), "master_seed": int(seed)})


def load_config(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    return ExperimentConfig.from_dict(data)


def dump_config(config, path=None):
    text = json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


@dataclass(frozen=True, eq=False)
class Setup:
    config: ExperimentConfig
    group: object
    rep: object
    allowed: Optional[tuple]

    @property
    def n(self):
        return self.rep.dim


def prepare(config):
    """Build the group and representation and validate every cell up front."""
    group = build_group(config.group)
    rep = build_representation(group, config.representation, config.n)
    allowed = None
    if config.omega_restriction == "affine_axis":
        if group.kind != "affine":
            raise ConfigError("omega_restriction 'affine_axis' needs an affine group")
        allowed = affine_axis_subset(group.params[0])
    pool = group.order if allowed is None else len(allowed)
    for m in config.m_list:
        if not 1 <= m <= pool:
            raise ConfigError(f"m = {m} is infeasible: only {pool} admissible elements")
    for s in config.sparsity_list:
        if not 1 <= s <= rep.dim:
            raise ConfigError(f"sparsity {s} outside 1..{rep.dim}")
    # materialize shared caches before any worker touches them
    if group.order <= 4096:
        group.cayley_table
    group.inverse_table
    return Setup(config, group, rep, allowed)


# ---------------------------------------------------------------- sweeps

@dataclass(frozen=True)
class ResultRow:
    m: int
    s: int
    trials: int
    successes: int
    success_rate: float
    median_rel_error: float
    median_delta_s: Optional[float]
    seed: int


@dataclass
class ResultTable:
    rows: list
    slopes: dict = field(default_factory=dict)

    def to_csv(self):
        def num(v):
            return "" if v is None else f"{v:.17g}"

        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for r in self.rows:
            buf.write(",".join([
                str(r.m), str(r.s), str(r.trials), str(r.successes),
                num(r.success_rate), num(r.median_rel_error), num(r.median_delta_s), str(r.seed),
            ]) + "\n")
        return buf.getvalue()

    def cell(self, m, s):
        for r in self.rows:
            if r.m == m and r.s == s:
                return r
        raise KeyError((m, s))


def random_sparse_signal(n, s, rng):
    """Uniform support, complex standard normal nonzeros, unit norm."""
    x = np.zeros(n, dtype=np.complex128)
    support = rng.choice(n, size=s, replace=False)
    x[support] = (rng.standard_normal(s) + 1j * rng.standard_normal(s)) / np.sqrt(2)
    return x / np.linalg.norm(x)


def trial_matrix(setup, m, s, t):
    cfg = setup.config
    omega = random_sampling_set(setup.group, m, setup.allowed,
                                seed=derive_seed(cfg.master_seed, "omega", m, s, t))
    gen = GeneratorSpec(cfg.distribution, setup.n, derive_seed(cfg.master_seed, "xi", m, s, t))
    return build_measurement_matrix(setup.rep, omega, draw_generator(gen), gen)


def run_trial(setup, m, s, t, matrix_factory=None):
    """One recovery trial; returns ``(success, relative_error, delta_s or None)``."""
    cfg = setup.config
    if matrix_factory is None:
        phi = trial_matrix(setup, m, s, t).entries
    else:
        phi = np.asarray(matrix_factory(m, s, t), dtype=np.complex128)
    x = random_sparse_signal(phi.shape[1], s, rng_for(cfg.master_seed, "signal", m, s, t))
    result = SOLVERS[cfg.solver](phi, phi @ x, s, truth=x)
    success = recovery_success(x, result, cfg.success_threshold)
    delta = None
    if cfg.compute_delta:
        delta = restricted_isometry_constant(phi, s, budget=cfg.rip_budget).delta
    return bool(success), float(result.relative_error), delta


def worker_count(workers=None):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _sweep(config, workers=None, matrix_factory=None):
    setup = prepare(config)
    tasks = [(m, s, t) for m in config.m_list for s in config.sparsity_list
             for t in range(config.trials_per_cell)]

    def job(task):
        return run_trial(setup, *task, matrix_factory=matrix_factory)

    nworkers = worker_count(workers)
    if nworkers == 1:
        results = [job(task) for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            results = list(pool.map(job, tasks))

    by_cell = {}
    for (m, s, _), res in zip(tasks, results):
        by_cell.setdefault((m, s), []).append(res)
    rows = []
    for m in config.m_list:
        for s in config.sparsity_list:
            cell = by_cell[(m, s)]
            successes = sum(r[0] for r in cell)
            deltas = [r[2] for r in cell if r[2] is not None]
            rows.append(ResultRow(
                m=m, s=s, trials=len(cell), successes=successes,
                success_rate=successes / len(cell),
                median_rel_error=float(np.median([r[1] for r in cell])),
                median_delta_s=float(np.median(deltas)) if deltas else None,
                seed=config.master_seed,
            ))
    return ResultTable(rows)


def run_phase_transition(config, workers=None, matrix_factory=None):
    """Empirical recovery success per ``(m, s)`` cell.

    ``matrix_factory(m, s, trial)`` replaces the orbit matrix; it exists for
    debugging and fault injection.
    """
    return _sweep(config, workers, matrix_factory)


def fit_slope(ms, values):
    """Least-squares slope of ``log(value)`` against ``log(m)``; nan if undefined."""
    ms = np.asarray(ms, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(ms) < 2 or np.any(values <= 0):
        return float("nan")
    return float(np.polyfit(np.log(ms), np.log(values), 1)[0])


def run_delta_scaling(config, workers=None, matrix_factory=None):
    """Sweep with exact ``delta_s`` per trial, plus a log-log slope per s.

    Fails before doing any work if a cell would exceed the enumeration budget.
    """
    if not config.compute_delta:
        config = ExperimentConfig.from_dict({**config.to_dict(), "compute_delta": True})
    setup = prepare(config)
    for s in config.sparsity_list:
        total = math.comb(setup.n, s)
        if total > config.rip_budget:
            raise EnumerationBudgetError(
                f"binom({setup.n}, {s}) = {total} supports exceeds budget {config.rip_budget}"
            )
    table = _sweep(config, workers, matrix_factory)
    for s in config.sparsity_list:
        rows = [r for r in table.rows if r.s == s]
        table.slopes[s] = fit_slope([r.m for r in rows], [r.median_delta_s for r in rows])
    return table


def monotonicity_violations(table, slack=0.15):
    """Pairs ``(s, m1, m2)`` with ``m1 < m2`` but ``rate(m1) > rate(m2) + slack``."""
    out = []
    for s in sorted({r.s for r in table.rows}):
        rows = sorted((r for r in table.rows if r.s == s), key=lambda r: r.m)
        for i, a in enumerate(rows):
            for b in rows[i + 1:]:
                if a.success_rate > b.success_rate + slack:
                    out.append((s, a.m, b.m))
    return out


# ---------------------------------------------------------- verification

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    bound: str

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name} = {self.measured:.17g} bound: {self.bound}"


@dataclass
class VerificationReport:
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_text(self):
        return "\n".join(c.line() for c in self.checks) + "\n"


def debug_nonunitary_rep():
    """Involutive but non-unitary rep of Z2: only the unitarity check should fail."""
    G = make_cyclic(2)
    A = np.array([[1.0, 1.0], [0.0, -1.0]])
    return from_matrices(G, [np.eye(2), A], label="debug_nonunitary[Z2]")


def _invariant_reps():
    groups = [make_cyclic(n) for n in (1, 2, 5, 8, 12, 24)]
    groups += [make_direct_product(make_cyclic(2), make_cyclic(3)), make_affine(3), make_affine(5)]
    reps = [left_regular(G) for G in groups]
    reps += [affine_quasi_regular(p) for p in (2, 3, 5)]
    reps += [trivial(make_cyclic(6), 4), trivial(make_affine(5), 3)]
    reps += [fourier_realization(n) for n in (1, 2, 8, 16, 24)]
    reps += [weyl_heisenberg(n) for n in (2, 3, 4)]
    return reps


def run_verification_suite(seed=0, extra_reps=()):
    """Run the orbit-constant, circulant and representation checks.

    Failures are recorded in the report rather than raised.
    """
    checks = []

    def add(name, measured, ok, bound):
        checks.append(Check(name, bool(ok), float(measured), bound))

    # left regular: C = 1 for every sampling set
    for G in (make_cyclic(8), make_cyclic(12),
              make_direct_product(make_cyclic(2), make_cyclic(3)), make_affine(5)):
        rep = left_regular(G)
        rng = rng_for(seed, "verify.left_regular", G.label)
        for _ in range(5):
            m = int(rng.integers(2, G.order + 1))
            omega = random_sampling_set(G, m, seed=int(rng.integers(2**63)))
            value = orbit_constant_exact(rep, omega).value
            add(f"orbit_constant.left_regular[{G.label}].m={m}", value, abs(value - 1) <= 1e-9, "1 +- 1e-9")

    # affine: C <= |Omega_2|, and C = 1 on the translation axis
    for p in (5, 7):
        rep = affine_quasi_regular(p)
        G = rep.group
        rng = rng_for(seed, "verify.affine", p)
        for _ in range(10):
            m = int(rng.integers(1, G.order + 1))
            omega = random_sampling_set(G, m, seed=int(rng.integers(2**63)))
            value = orbit_constant_exact(rep, omega).value
            k = len(omega_two(omega))
            add(f"orbit_constant.affine[{G.label}].m={m}", value, value <= k + 1e-9, f"<= |Omega_2| = {k}")
        axis = affine_axis_subset(p)
        for m in (1, (p + 1) // 2, p):
            omega = random_sampling_set(G, m, axis, seed=int(rng.integers(2**63)))
            value = orbit_constant_exact(rep, omega).value
            add(f"orbit_constant.affine_axis[{G.label}].m={m}", value, abs(value - 1) <= 1e-9, "1 +- 1e-9")

    # trivial: C = m exactly
    G = make_cyclic(16)
    rep = trivial(G, 8)
    for m in (1, 4, 16):
        value = orbit_constant_exact(rep, sampling_set(G, range(m))).value
        add(f"orbit_constant.trivial[{G.label}].m={m}", value, value == m, f"== {m}")

    # Fourier realization: C = m, so no m-independent constant exists
    rep = fourier_realization(16)
    for m in (2, 4, 8):
        omega = random_sampling_set(rep.group, m, seed=derive_seed(seed, "verify.fourier", m))
        value = orbit_constant_exact(rep, omega).value
        add(f"orbit_constant.fourier[Z16].m={m}", value, abs(value - m) <= 1e-9, f"{m} +- 1e-9")

    # circulant specialization
    for n in (8, 16, 64):
        G = make_cyclic(n)
        rep = left_regular(G)
        rng = rng_for(seed, "verify.circulant", n)
        worst = 0.0
        for _ in range(20):
            m = int(rng.integers(1, n + 1))
            omega = random_sampling_set(G, m, seed=int(rng.integers(2**63)))
            xi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            diff = build_measurement_matrix(rep, omega, xi).entries - partial_circulant_direct(xi, omega)
            worst = max(worst, float(np.max(np.abs(diff))))
        add(f"circulant_equivalence[Z{n}]", worst, worst <= 1e-13, "<= 1e-13")

    # representation invariants
    for rep in list(_invariant_reps()) + list(extra_reps):
        res = representation_residuals(rep)
        add(f"unitarity[{rep.label}]", res["unitarity"], res["unitarity"] <= 1e-12, "<= 1e-12")
        add(f"homomorphism[{rep.label}]", res["homomorphism"], res["homomorphism"] <= 1e-12, "<= 1e-12")
        add(f"cocycle_modulus[{rep.label}]", res["cocycle_modulus"], res["cocycle_modulus"] <= 1e-12, "<= 1e-12")
        if rep.kind == "ordinary":
            add(f"cocycle_trivial[{rep.label}]", res["cocycle_phase"], res["cocycle_phase"] <= 1e-12, "<= 1e-12")

    return VerificationReport(checks)
