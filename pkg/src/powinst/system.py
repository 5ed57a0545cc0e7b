"""Coefficient sequences and transition-operator evaluation.

A system is the coefficient sequence A(n) of a linear recursion
x_{n+1} = A(n) x_n on a horizon [0, M].  The transition operator from
time n to time m >= n is the ordered product

    T(m, n) = A(m-1) ... A(n),        T(n, n) = I,

which satisfies the cocycle identity T(m, n) T(n, p) = T(m, p).

Three representations are supported:

* ``scalar_formula`` -- named closed-form scalar coefficient families
  (see ``powinst.catalog``); states are tracked as log magnitudes, so
  evaluation is exact up to float rounding for any window.
* ``scalar_table``   -- per-step log factors supplied directly.
* ``matrix_table``   -- per-step square matrices.  Long products are
  never formed as raw matrices: the running state (or running product)
  is renormalized at every step and the scale accumulated in log domain,
  so b**m growth cannot overflow.

The central derived quantity is the pair gain

    gain(m, n, p) = sup_x |T(n, p) x| / |T(m, p) x|,

the smallest factor G such that |T(n,p)x| <= G |T(m,p)x| for all x.
For scalar systems the supremum is exact and independent of p.  For
matrix systems in the two-norm with invertible products it reduces to
the largest singular value of T(n,p) T(m,p)^{-1}; otherwise it is
approximated from below by maximizing over a finite test-vector set,
and verifiers flag the result as a sampled lower bound.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .logmag import NEG_INF, POS_INF, LogMagnitude

NORM_ORDS = {"one": 1, "two": 2, "inf": np.inf}

UNIT_NORM_TOL = 1e-12

# Relative sigma_min/sigma_max threshold below which a normalized product
# is treated as numerically singular and the sampled fallback is used.
_SINGULAR_RTOL = 1e-12

_DEFAULT_SAMPLES = 8


# ---------------------------------------------------------------------------
# closed-form scalar coefficient families
# ---------------------------------------------------------------------------

def _steps_constant(params: dict):
    log_c = math.log(params["c"])
    return lambda j: log_c


def _steps_identity(params: dict):
    return lambda j: 0.0


def _steps_alternating(params: dict):
    # coefficient c * a_j with a_j = b**(-j) for even j, b**(j+1) for odd j
    b, c = params["b"], params["c"]
    log_b, log_c = math.log(b), math.log(c)

    def step(j: int) -> float:
        if j % 2 == 0:
            return log_c - j * log_b
        return log_c + (j + 1) * log_b

    return step


def _steps_polynomial(params: dict):
    # coefficient u(j+1)/u(j) with u(n) = n + 2
    return lambda j: math.log(j + 3) - math.log(j + 2)


def _steps_decay(params: dict):
    # coefficient u(j+1)/u(j) with u(n) = exp(-n); every step is exactly e^-1
    return lambda j: -1.0


_FORMULAS: dict[str, tuple[tuple[str, ...], object]] = {
    "constant": (("c",), _steps_constant),
    "identity": ((), _steps_identity),
    "example25": (("b", "c"), _steps_alternating),
    "example28": ((), _steps_polynomial),
    "example29": ((), _steps_decay),
}


def formula_names() -> tuple[str, ...]:
    return tuple(sorted(_FORMULAS))


# ---------------------------------------------------------------------------
# specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SystemSpec:
    """Declarative description of a system; validated by build_system."""

    kind: str  # scalar_formula | scalar_table | matrix_table
    horizon: int
    formula: str | None = None
    params: dict = field(default_factory=dict)
    log_table: tuple[float, ...] | None = None
    matrices: tuple | None = None  # (steps, dim, dim) nested tuples
    dimension: int = 1
    norm: str = "two"
    sample_count: int = _DEFAULT_SAMPLES
    seed: int = 0

    def validate(self) -> None:
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.kind == "scalar_formula":
            if self.formula not in _FORMULAS:
                raise ValueError(f"unknown formula {self.formula!r}")
            wanted, _ = _FORMULAS[self.formula]
            missing = [k for k in wanted if k not in self.params]
            if missing:
                raise ValueError(f"formula {self.formula!r} needs parameters {missing}")
            if self.dimension != 1:
                raise ValueError("scalar systems have dimension 1")
        elif self.kind == "scalar_table":
            if self.log_table is None or len(self.log_table) < self.horizon:
                have = 0 if self.log_table is None else len(self.log_table)
                raise ValueError(
                    f"scalar table has {have} steps, horizon {self.horizon} needs at least {self.horizon}"
                )
            if self.dimension != 1:
                raise ValueError("scalar systems have dimension 1")
        elif self.kind == "matrix_table":
            if self.matrices is None:
                raise ValueError("matrix_table spec needs matrices")
            mats = np.asarray(self.matrices, dtype=float)
            if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
                raise ValueError(f"matrices must be a stack of square matrices, got shape {mats.shape}")
            if mats.shape[1] != self.dimension:
                raise ValueError(
                    f"declared dimension {self.dimension} but matrices are {mats.shape[1]}x{mats.shape[2]}"
                )
            if mats.shape[0] < self.horizon:
                raise ValueError(
                    f"matrix table has {mats.shape[0]} steps, horizon {self.horizon} needs at least {self.horizon}"
                )
            if self.norm not in NORM_ORDS:
                raise ValueError(f"unknown norm {self.norm!r}; choose one of {sorted(NORM_ORDS)}")
            if self.sample_count < 0:
                raise ValueError("sample_count must be >= 0")
        else:
            raise ValueError(f"unknown system kind {self.kind!r}")

    @property
    def is_scalar(self) -> bool:
        return self.kind in ("scalar_formula", "scalar_table")


# ---------------------------------------------------------------------------
# test vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestVectorSet:
    """Canonical basis plus seeded random unit vectors.

    Stands in for the "all x" quantifier of the instability definitions:
    scalar systems need only the singleton {1} (homogeneity makes every
    vector equivalent), matrix systems check the basis directions plus a
    reproducible random sample.
    """

    vectors: np.ndarray  # (count, dim)
    seed: int
    norm: str

    @classmethod
    def scalar(cls) -> "TestVectorSet":
        return cls(vectors=np.ones((1, 1)), seed=0, norm="two")

    @classmethod
    def build(cls, dim: int, norm: str, sample_count: int, seed: int) -> "TestVectorSet":
        ord_ = NORM_ORDS[norm]
        basis = np.eye(dim)
        rng = np.random.default_rng(seed)
        rand = rng.standard_normal((sample_count, dim))
        norms = np.linalg.norm(rand, ord=ord_, axis=1, keepdims=True)
        rand = rand / norms
        return cls(vectors=np.vstack([basis, rand]), seed=seed, norm=norm)

    def __len__(self) -> int:
        return self.vectors.shape[0]


# ---------------------------------------------------------------------------
# system
# ---------------------------------------------------------------------------

class System:
    """Evaluator for transition-operator norms and gains over a window.

    Immutable after construction; evaluation caches are append-only and
    guarded by a lock, so concurrent sweeps over (base, vector)
    trajectories observe consistent values.
    """

    def __init__(self, spec: SystemSpec):
        spec.validate()
        self.spec = spec
        self.horizon = spec.horizon
        self.dim = spec.dimension if not spec.is_scalar else 1
        self._lock = threading.Lock()

        if spec.is_scalar:
            if spec.kind == "scalar_formula":
                _, factory = _FORMULAS[spec.formula]
                step = factory(spec.params)
                self._step_logs = np.array([step(j) for j in range(spec.horizon)], dtype=float)
            else:
                self._step_logs = np.asarray(spec.log_table[: spec.horizon], dtype=float)
            # prefix[k] = sum of step logs over [0, k)
            self._prefix = np.concatenate([[0.0], np.cumsum(self._step_logs)])
            self.vectors = TestVectorSet.scalar()
            self._matrices = None
        else:
            self._matrices = np.asarray(spec.matrices, dtype=float)[: spec.horizon]
            self._step_logs = None
            self._prefix = None
            self.vectors = TestVectorSet.build(self.dim, spec.norm, spec.sample_count, spec.seed)
            self._traj_cache: dict[int, np.ndarray] = {}
            self._unit_cache: dict[int, np.ndarray] = {}
            self._prod_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
            self._gain_cache: dict[int, tuple[np.ndarray, bool]] = {}

    # -- basics -----------------------------------------------------------

    @property
    def is_scalar(self) -> bool:
        return self.spec.is_scalar

    @property
    def norm_ord(self):
        return NORM_ORDS[self.spec.norm] if not self.is_scalar else 2

    def _check_window(self, *indices: int) -> None:
        for idx in indices:
            if idx < 0 or idx > self.horizon:
                raise ValueError(f"index {idx} outside window [0, {self.horizon}]")

    # -- trajectories -----------------------------------------------------

    def _trajectory(self, p: int) -> np.ndarray:
        """Log norms of T(n, p) x for every test vector; shape (V, M+1).

        Columns before p are NaN.  States are renormalized each step and
        only the accumulated scale is kept, so the values stay finite for
        arbitrarily growing products.
        """
        with self._lock:
            cached = self._traj_cache.get(p)
        if cached is not None:
            return cached
        V = len(self.vectors)
        M = self.horizon
        logs = np.full((V, M + 1), np.nan)
        units = np.full((V, M + 1, self.dim), np.nan)
        state = self.vectors.vectors.copy()
        scale = np.zeros(V)
        ord_ = self.norm_ord
        logs[:, p] = 0.0  # unit vectors
        units[:, p, :] = state
        for j in range(p, M):
            state = state @ self._matrices[j].T
            norms = np.linalg.norm(state, ord=ord_, axis=1)
            alive = norms > 0.0
            scale = scale + np.where(alive, np.log(norms, where=alive, out=np.zeros_like(norms)), NEG_INF)
            state = np.where(alive[:, None], state / np.where(alive, norms, 1.0)[:, None], 0.0)
            logs[:, j + 1] = scale
            units[:, j + 1, :] = state
        with self._lock:
            self._traj_cache[p] = logs
            self._unit_cache[p] = units
        return logs

    def unit_state(self, n: int, p: int, vector_id: int) -> np.ndarray:
        """Renormalized state T(n, p) x / |T(n, p) x| (matrix systems)."""
        if self.is_scalar:
            return np.ones(1)
        self._trajectory(p)
        return self._unit_cache[p][vector_id, n, :].copy()

    # -- norms ------------------------------------------------------------

    def state_norm_log(self, n: int, p: int, vector_id: int = 0) -> float:
        if p > n:
            raise ValueError(f"need p <= n, got p={p}, n={n}")
        self._check_window(n, p)
        if self.is_scalar:
            if vector_id != 0:
                raise ValueError("scalar systems have the single test vector 0")
            return float(self._prefix[n] - self._prefix[p])
        if not 0 <= vector_id < len(self.vectors):
            raise ValueError(f"vector id {vector_id} outside test set of size {len(self.vectors)}")
        return float(self._trajectory(p)[vector_id, n])

    def state_norm(self, n: int, p: int, vector_id: int = 0) -> LogMagnitude:
        """|T(n, p) x| for test vector x, as a log magnitude."""
        return LogMagnitude(self.state_norm_log(n, p, vector_id))

    # -- normalized products (matrix) --------------------------------------

    def _products(self, p: int) -> tuple[np.ndarray, np.ndarray]:
        """Stack of normalized products B[k] with T(k, p) = exp(s[k]) B[k]."""
        with self._lock:
            cached = self._prod_cache.get(p)
        if cached is not None:
            return cached
        M = self.horizon
        d = self.dim
        B = np.full((M + 1, d, d), np.nan)
        s = np.full(M + 1, np.nan)
        cur = np.eye(d)
        cur_log = 0.0
        B[p] = cur
        s[p] = 0.0
        for j in range(p, M):
            cur = self._matrices[j] @ cur
            f = np.linalg.norm(cur)  # Frobenius keeps entries O(1)
            if f > 0.0:
                cur = cur / f
                cur_log += math.log(f)
            else:
                cur_log = NEG_INF
            B[j + 1] = cur
            s[j + 1] = cur_log
        result = (B, s)
        with self._lock:
            self._prod_cache[p] = result
        return result

    # -- gains --------------------------------------------------------------

    def _gains_scalar_row(self, m: int) -> np.ndarray:
        """Log gains gain(m, n) for n = 0..m (p-independent)."""
        ps = self._prefix
        row = ps[: m + 1] - ps[m]
        # a dead state at n (only possible via -inf table entries) imposes
        # nothing on the inequality: treat 0/0 as gain 0
        return np.where(np.isnan(row), NEG_INF, row)

    def _gains_sampled(self, p: int) -> np.ndarray:
        """Lower-bound gains from the test set; shape (M+1, M+1), [m, n]."""
        logs = self._trajectory(p)  # (V, M+1)
        M = self.horizon
        G = np.full((M + 1, M + 1), np.nan)
        for m in range(p, M + 1):
            denom = logs[:, m][:, None]  # (V, 1)
            diffs = logs[:, p : m + 1] - denom  # (V, m-p+1)
            both_dead = np.isneginf(logs[:, p : m + 1]) & np.isneginf(denom)
            diffs = np.where(both_dead, NEG_INF, diffs)
            G[m, p : m + 1] = np.max(diffs, axis=0)
        return G

    def gains_for_base(self, p: int) -> tuple[np.ndarray, bool]:
        """All log gains with base p: array [m, n] valid for p <= n <= m.

        Returns (gains, exact).  Exact evaluation (operator norm of
        T(n,p) T(m,p)^{-1} via singular values) is available in the
        two-norm while the products stay invertible; otherwise the gains
        are maxima over the test set and ``exact`` is False.
        """
        if self.is_scalar:
            raise RuntimeError("scalar systems use p-independent pair gains")
        with self._lock:
            cached = self._gain_cache.get(p)
        if cached is not None:
            return cached
        M = self.horizon
        if self.spec.norm != "two":
            result = (self._gains_sampled(p), False)
            with self._lock:
                self._gain_cache[p] = result
            return result
        B, s = self._products(p)
        G = np.full((M + 1, M + 1), np.nan)
        exact = True
        sampled = None
        for m in range(p, M + 1):
            block = B[p : m + 1]
            svals = np.linalg.svd(B[m], compute_uv=False)
            if s[m] == NEG_INF or svals[-1] <= _SINGULAR_RTOL * svals[0]:
                # numerically singular product: fall back to sampled gains
                if sampled is None:
                    sampled = self._gains_sampled(p)
                G[m, p : m + 1] = sampled[m, p : m + 1]
                exact = False
                continue
            inv_m = np.linalg.inv(B[m])
            ratios = block @ inv_m  # (m-p+1, d, d)
            top = np.linalg.svd(ratios, compute_uv=False)[:, 0]
            G[m, p : m + 1] = (s[p : m + 1] - s[m]) + np.log(top)
        result = (G, exact)
        with self._lock:
            self._gain_cache[p] = result
        return result

    def pair_gain_ex(self, m: int, n: int, p: int) -> tuple[LogMagnitude, bool]:
        """Pair gain plus a flag: True when every gain computed for this
        base p is an exact supremum (scalar systems always; two-norm
        matrix systems while the normalized products stay numerically
        invertible)."""
        if not p <= n <= m:
            raise ValueError(f"need p <= n <= m, got p={p}, n={n}, m={m}")
        self._check_window(m)
        if self.is_scalar:
            return LogMagnitude(float(self._gains_scalar_row(m)[n])), True
        G, exact = self.gains_for_base(p)
        return LogMagnitude(float(G[m, n])), exact

    def pair_gain(self, m: int, n: int, p: int) -> LogMagnitude:
        """sup_x |T(n,p)x| / |T(m,p)x|; +inf magnitude means the
        denominator vanished for a tested direction (instant refutation)."""
        return self.pair_gain_ex(m, n, p)[0]

    # -- sweep helpers ------------------------------------------------------

    @property
    def prefix_logs(self) -> np.ndarray:
        """Scalar prefix log sums; prefix[k] = log |T(k, 0) x|."""
        if not self.is_scalar:
            raise RuntimeError("prefix logs exist for scalar systems only")
        return self._prefix

    def trajectory_logs(self, p: int) -> np.ndarray:
        """Per-vector log norms from base p; shape (V, M+1) (matrix) or
        (1, M+1) (scalar)."""
        if self.is_scalar:
            row = self._prefix - self._prefix[p]
            row = row.copy()
            row[:p] = np.nan
            return row[None, :]
        return self._trajectory(p)


def build_system(spec: SystemSpec) -> System:
    """Validate a spec and return its evaluator."""
    return System(spec)


# ---------------------------------------------------------------------------
# conorm
# ---------------------------------------------------------------------------

def conorm(matrix: np.ndarray, norm: str = "two", sample_count: int = 32, seed: int = 0) -> LogMagnitude:
    """inf over unit x of |T x|.

    Exact in the two-norm (smallest singular value; for invertible T this
    equals 1 / |T^{-1}|).  For the one- and inf-norms the infimum is
    approximated from above by minimizing over basis plus seeded random
    unit vectors.
    """
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"conorm needs a square matrix, got shape {mat.shape}")
    if norm not in NORM_ORDS:
        raise ValueError(f"unknown norm {norm!r}")
    if norm == "two":
        smin = np.linalg.svd(mat, compute_uv=False)[-1]
        return LogMagnitude.from_value(float(smin))
    vecs = TestVectorSet.build(mat.shape[0], norm, sample_count, seed).vectors
    images = vecs @ mat.T
    norms = np.linalg.norm(images, ord=NORM_ORDS[norm], axis=1)
    return LogMagnitude.from_value(float(norms.min()))
