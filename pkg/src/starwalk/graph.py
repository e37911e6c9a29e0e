"""
Edge-state graph model for quantum walks on a star graph with a marked subgraph.
===============================================================================

Basis states live on directed edges.  The star has a degree-N "diffusive" hub;
one (or M identical) of its edges carries an attached subgraph G described by a
``SubgraphSpec``; the remaining edges end in phase-phi reflectors.

Two operator builders are provided:

* ``build_full``      — the literal N-edge walk (oracle, dense, small N only);
* ``build_collapsed`` — the symmetry-collapsed walk on the fixed basis
                        ``[|out>, |in>, |0,1>, |1,0>, G-interior...]``.

``lift_collapsed_state`` / ``restrict_full_state`` map between the two pictures.
"""
from __future__ import annotations

import cmath
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

logger = logging.getLogger(__name__)

# Fixed labels of the four hub-facing collapsed states.
OUT = "out"
IN = "in"
MARKED_OUT = "0->1"   # hub -> attachment vertex
MARKED_IN = "1->0"    # attachment vertex -> hub

VERTEX_UNITARITY_TOL = 1e-12
OPERATOR_UNITARITY_TOL = 1e-10
FULL_SIZE_GUARD = 5000


class SpecError(ValueError):
    """A subgraph/hub description violates the wiring or unitarity contract."""


class NumericsError(RuntimeError):
    """A numerical diagnostic fired (ambiguous, ill-conditioned or inconsistent)."""


# ---------------------------------------------------------------------------
# Subgraph description
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Vertex:
    """One subgraph vertex: ordered in/out ports and the local scattering matrix.

    ``matrix[i, j]`` is the amplitude sent from incoming state ``ports_in[j]``
    to outgoing state ``ports_out[i]``.
    """
    id: str
    ports_in: tuple[str, ...]
    ports_out: tuple[str, ...]
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class SubgraphSpec:
    """Declarative description of the marked subgraph G.

    The attachment vertex consumes |0,1> and produces |1,0>; every other
    directed edge-state inside G appears in ``interior`` and has exactly one
    producer and one consumer (a label may be produced and consumed by the
    same vertex, which encodes arms that return in a single step).
    """
    vertices: tuple[Vertex, ...]
    attachment: str
    interior: tuple[str, ...]

    def __post_init__(self):
        self.validate()

    # -- validation ---------------------------------------------------------
    def validate(self) -> None:
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise SpecError(f"duplicate vertex ids: {ids}")
        if self.attachment not in ids:
            raise SpecError(f"attachment vertex {self.attachment!r} not defined")
        if len(set(self.interior)) != len(self.interior):
            raise SpecError("duplicate interior labels")

        consumed: dict[str, str] = {}
        produced: dict[str, str] = {}
        for v in self.vertices:
            m = np.asarray(v.matrix, dtype=complex)
            if m.shape != (len(v.ports_out), len(v.ports_in)) or m.shape[0] != m.shape[1]:
                raise SpecError(f"vertex {v.id}: matrix shape {m.shape} does not match ports")
            res = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))
            if res > VERTEX_UNITARITY_TOL:
                raise SpecError(f"vertex {v.id}: scattering matrix not unitary (residual {res:.2e})")
            for lab in v.ports_in:
                if lab in consumed:
                    raise SpecError(f"state {lab!r} consumed by both {consumed[lab]} and {v.id}")
                consumed[lab] = v.id
            for lab in v.ports_out:
                if lab in produced:
                    raise SpecError(f"state {lab!r} produced by both {produced[lab]} and {v.id}")
                produced[lab] = v.id

        want_in = set(self.interior) | {MARKED_OUT}
        want_out = set(self.interior) | {MARKED_IN}
        if set(consumed) != want_in:
            raise SpecError(f"consumed labels {sorted(consumed)} != expected {sorted(want_in)}")
        if set(produced) != want_out:
            raise SpecError(f"produced labels {sorted(produced)} != expected {sorted(want_out)}")
        if consumed[MARKED_OUT] != self.attachment:
            raise SpecError("|0,1> must be consumed by the attachment vertex")
        if produced[MARKED_IN] != self.attachment:
            raise SpecError("|1,0> must be produced by the attachment vertex")

    # -- convenience --------------------------------------------------------
    @property
    def n_interior(self) -> int:
        return len(self.interior)

    @property
    def dim_collapsed(self) -> int:
        return 4 + self.n_interior

    @property
    def dim_right(self) -> int:
        return 2 + self.n_interior

    # -- (de)serialization --------------------------------------------------
    @classmethod
    def from_dict(cls, data: dict) -> "SubgraphSpec":
        try:
            vertices = tuple(
                Vertex(
                    id=str(v["id"]),
                    ports_in=tuple(v["ports_in"]),
                    ports_out=tuple(v["ports_out"]),
                    matrix=_matrix_from_json(v["matrix"]),
                )
                for v in data["vertices"]
            )
            return cls(
                vertices=vertices,
                attachment=str(data["attachment"]),
                interior=tuple(data["interior"]),
            )
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed subgraph description: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "vertices": [
                {
                    "id": v.id,
                    "ports_in": list(v.ports_in),
                    "ports_out": list(v.ports_out),
                    "matrix": _matrix_to_json(v.matrix),
                }
                for v in self.vertices
            ],
            "attachment": self.attachment,
            "interior": list(self.interior),
        }


def _matrix_from_json(rows) -> np.ndarray:
    out = []
    for row in rows:
        r = []
        for entry in row:
            if isinstance(entry, (int, float)):
                r.append(complex(entry))
            else:
                re, im = entry
                r.append(complex(re, im))
        out.append(r)
    return np.array(out, dtype=complex)


def _matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def load_spec(name_or_path: str) -> SubgraphSpec:
    """Load a subgraph description from a JSON file or a bundled name.

    ``"grover"`` and ``"bolo"`` (with or without ``.json``) resolve to the
    bundled fixtures; anything else is treated as a filesystem path.
    """
    base = str(name_or_path)
    short = base[:-5] if base.endswith(".json") else base
    if short in ("grover", "bolo") and "/" not in base:
        text = resources.files("starwalk.specs").joinpath(short + ".json").read_text()
    else:
        try:
            with open(base) as fh:
                text = fh.read()
        except OSError as exc:
            raise SpecError(f"cannot read spec file {base!r}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec file {base!r} is not valid JSON: {exc}") from exc
    return SubgraphSpec.from_dict(data)


# ---------------------------------------------------------------------------
# Hub coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HubModel:
    """Reflection/transmission data of the degree-N hub, raw and collapsed.

    ``r``/``t`` act per edge; ``R_L``/``R_R``/``T`` act between the collapsed
    unmarked (Left) and marked (Right) channels.  ``epsilon_exact`` keeps
    M/N as an exact rational so sweeps do not accumulate drift.
    """
    n_edges: int
    copies: int
    phase_x: float
    phase_y: float
    r: complex
    t: complex
    R_L: complex
    R_R: complex
    T: complex
    epsilon_exact: Fraction

    @property
    def epsilon(self) -> float:
        return float(self.epsilon_exact)


def _is_standard_hub(x: float, y: float) -> bool:
    """True when (x, y) selects the standard diffusive solution (x=pi, y=0)."""
    return (abs(math.sin(x - math.pi)) < 1e-15 and abs(math.sin(y)) < 1e-15
            and math.cos(x) < 0 and math.cos(y) > 0)


def hub_coefficients(N: int, M: int = 1, x: float = math.pi, y: float = 0.0) -> HubModel:
    """Hub coefficients for N edges, M marked copies, solution-family phases (x, y).

    ``x=pi, y=0`` selects the standard diffusive hub r = -1 + 2/N, t = 2/N;
    other phases pick the generalized one-parameter-family solution, defined
    only when cos(x-y) < 1.
    """
    if not (isinstance(N, (int, np.integer)) and N >= 2):
        raise SpecError(f"N must be an integer >= 2, got {N!r}")
    if not (isinstance(M, (int, np.integer)) and 1 <= M < N):
        raise SpecError(f"need 1 <= M < N, got M={M!r}, N={N!r}")
    if math.cos(x - y) >= 1.0 - 1e-15:
        raise SpecError(f"hub family undefined: cos(x-y) must be < 1 (x={x}, y={y})")

    e = 1.0 / N  # per-edge epsilon entering r, t
    if _is_standard_hub(x, y):
        r = complex(-1.0 + 2.0 * e)
        t = complex(2.0 * e)
    else:
        denom = math.sqrt(1.0 - 4.0 * math.sin(x - y) ** 2 * (e - e * e))
        r = (1.0 - 2.0 * e) * cmath.exp(1j * x) / denom
        t = -2.0 * math.cos(x - y) * e * cmath.exp(1j * y) / denom

    R_R = r + (M - 1) * t
    R_L = r + (N - M - 1) * t
    T = t * math.sqrt(M * (N - M))

    hub = HubModel(
        n_edges=int(N), copies=int(M), phase_x=float(x), phase_y=float(y),
        r=r, t=t, R_L=R_L, R_R=R_R, T=T,
        epsilon_exact=Fraction(int(M), int(N)),
    )
    _check_hub_invariants(hub)
    return hub


def _check_hub_invariants(hub: HubModel, tol: float = 1e-12) -> None:
    N, r, t = hub.n_edges, hub.r, hub.t
    c1 = abs(abs(r) ** 2 + (N - 1) * abs(t) ** 2 - 1.0)
    c2 = abs(2.0 * (r.conjugate() * t).real + (N - 2) * abs(t) ** 2)
    c3 = abs(abs(hub.R_R) ** 2 + abs(hub.T) ** 2 - 1.0)
    c4 = abs(abs(hub.R_L) ** 2 + abs(hub.T) ** 2 - 1.0)
    c5 = abs(hub.T ** 2 - hub.R_R * hub.R_L - cmath.exp(2j * hub.phase_y))
    worst = max(c1, c2, c3, c4, c5)
    if worst > tol:
        raise NumericsError(f"hub coefficient invariants violated (worst residual {worst:.2e})")


# ---------------------------------------------------------------------------
# Bases, operators, states
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EdgeBasis:
    """Ordered edge-state labels; ``kind`` is "full" or "collapsed"."""
    labels: tuple[str, ...]
    kind: str
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        idx = {lab: i for i, lab in enumerate(self.labels)}
        if len(idx) != len(self.labels):
            raise SpecError("basis labels are not unique")
        object.__setattr__(self, "_index", idx)

    def index(self, label: str) -> int:
        return self._index[label]

    def __len__(self) -> int:
        return len(self.labels)

    def matches(self, other: "EdgeBasis") -> bool:
        return self.kind == other.kind and self.labels == other.labels


def collapsed_basis(spec: SubgraphSpec) -> EdgeBasis:
    return EdgeBasis(labels=(OUT, IN, MARKED_OUT, MARKED_IN) + spec.interior, kind="collapsed")


def full_basis(spec: SubgraphSpec, N: int, M: int) -> EdgeBasis:
    labels = [f"0->{j}" for j in range(1, N + 1)]
    labels += [f"{j}->0" for j in range(1, N + 1)]
    for k in range(1, M + 1):
        labels += [f"{lab}#{k}" for lab in spec.interior]
    return EdgeBasis(labels=tuple(labels), kind="full")


@dataclass(frozen=True, eq=False)
class UnitaryOperator:
    """Dense one-step operator bound to an ordered edge basis."""
    matrix: np.ndarray
    basis: EdgeBasis
    epsilon: float
    phi: float

    def __post_init__(self):
        m = self.matrix
        res = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))
        if res > OPERATOR_UNITARITY_TOL:
            raise SpecError(f"constructed operator not unitary (residual {res:.2e})")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes aligned with an EdgeBasis."""
    amplitudes: np.ndarray
    basis: EdgeBasis

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, label: str) -> complex:
        return complex(self.amplitudes[self.basis.index(label)])


# ---------------------------------------------------------------------------
# Collapsed operator
# ---------------------------------------------------------------------------

def _vertex_columns(spec: SubgraphSpec, U: np.ndarray, index: dict[str, int]) -> None:
    """Fill the columns of U owned by subgraph vertices (in-place)."""
    for v in spec.vertices:
        rows = [index[lab] for lab in v.ports_out]
        for j, lab in enumerate(v.ports_in):
            col = index[lab]
            for i, row in enumerate(rows):
                U[row, col] += v.matrix[i, j]


def collapsed_coefficients(eps, x: float = math.pi, y: float = 0.0, trans_sqrt=None):
    """(R_L, R_R, T) of the collapsed hub as analytic functions of epsilon.

    ``eps`` may be complex (used for monodromy loops and double-root hunting).
    ``trans_sqrt`` overrides sqrt(eps - eps^2) with an explicitly continued
    branch value; by default the principal branch is taken.
    """
    eps = complex(eps)
    w = cmath.sqrt(eps - eps * eps) if trans_sqrt is None else complex(trans_sqrt)
    if _is_standard_hub(x, y):
        return 1.0 - 2.0 * eps, -1.0 + 2.0 * eps, 2.0 * w
    s = cmath.sqrt(1.0 - 4.0 * math.sin(x - y) ** 2 * w * w)
    ex, ey = cmath.exp(1j * x), cmath.exp(1j * y)
    R_R = (1.0 - 2.0 * eps) * ex / s
    R_L = (1.0 - 2.0 * eps) * (ex - 2.0 * math.cos(x - y) * ey) / s
    T = -2.0 * math.cos(x - y) * w * ey / s
    return R_L, R_R, T


def _assemble_collapsed(spec: SubgraphSpec, R_L, R_R, T, phi: float) -> np.ndarray:
    d = spec.dim_collapsed
    basis = collapsed_basis(spec)
    index = {lab: basis.index(lab) for lab in basis.labels}
    U = np.zeros((d, d), dtype=complex)
    U[index[IN], index[OUT]] = cmath.exp(1j * phi)
    U[index[OUT], index[IN]] = R_L
    U[index[MARKED_OUT], index[IN]] = T
    U[index[MARKED_OUT], index[MARKED_IN]] = R_R
    U[index[OUT], index[MARKED_IN]] = T
    _vertex_columns(spec, U, index)
    return U


def collapsed_matrix(spec: SubgraphSpec, eps, phi: float,
                     x: float = math.pi, y: float = 0.0, trans_sqrt=None) -> np.ndarray:
    """Collapsed one-step matrix at (possibly complex) epsilon.

    Returns a bare ndarray: for complex or negative epsilon the matrix is not
    unitary and intentionally skips the UnitaryOperator contract.
    """
    R_L, R_R, T = collapsed_coefficients(eps, x=x, y=y, trans_sqrt=trans_sqrt)
    return _assemble_collapsed(spec, R_L, R_R, T, phi)


def build_collapsed(spec: SubgraphSpec, hub: HubModel, phi: float) -> UnitaryOperator:
    """Symmetry-collapsed time-step operator for the given spec and hub."""
    U = _assemble_collapsed(spec, hub.R_L, hub.R_R, hub.T, phi)
    return UnitaryOperator(matrix=U, basis=collapsed_basis(spec),
                           epsilon=hub.epsilon, phi=float(phi))


# ---------------------------------------------------------------------------
# Full operator (oracle)
# ---------------------------------------------------------------------------

def build_full(spec: SubgraphSpec, N: int, M: int = 1, phi: float = 0.0,
               x: float = math.pi, y: float = 0.0) -> UnitaryOperator:
    """Literal N-edge walk operator with M disjoint copies of G (dense oracle)."""
    nstates = 2 * N + M * spec.n_interior
    if nstates > FULL_SIZE_GUARD:
        raise SpecError(f"full graph would need {nstates} states (guard {FULL_SIZE_GUARD})")
    hub = hub_coefficients(N, M=M, x=x, y=y)
    basis = full_basis(spec, N, M)
    index = {lab: basis.index(lab) for lab in basis.labels}
    U = np.zeros((len(basis), len(basis)), dtype=complex)

    # hub: |j,0> -> r|0,j> + t sum_{k != j} |0,k>
    for j in range(1, N + 1):
        col = index[f"{j}->0"]
        for k in range(1, N + 1):
            U[index[f"0->{k}"], col] = hub.r if k == j else hub.t

    # unmarked edges reflect with phase phi
    for j in range(M + 1, N + 1):
        U[index[f"{j}->0"], index[f"0->{j}"]] = cmath.exp(1j * phi)

    # marked edges: one copy of G each
    for k in range(1, M + 1):
        remap = {MARKED_OUT: f"0->{k}", MARKED_IN: f"{k}->0"}
        remap.update({lab: f"{lab}#{k}" for lab in spec.interior})
        sub_index = {lab: index[remap[lab]] for lab in remap}
        _vertex_columns(spec, U, sub_index)

    return UnitaryOperator(matrix=U, basis=basis, epsilon=hub.epsilon, phi=float(phi))


# ---------------------------------------------------------------------------
# Lift / restrict between pictures
# ---------------------------------------------------------------------------

def _parse_full_basis(basis: EdgeBasis) -> tuple[int, int, tuple[str, ...]]:
    """Recover (N, M, interior labels) from a full basis produced here."""
    if basis.kind != "full":
        raise SpecError("expected a full-basis state")
    N = sum(1 for lab in basis.labels if lab.startswith("0->") and "#" not in lab)
    copies = {int(lab.rsplit("#", 1)[1]) for lab in basis.labels if "#" in lab}
    interior = tuple(lab.rsplit("#", 1)[0] for lab in basis.labels if lab.endswith("#1"))
    M_interior = max(copies) if copies else 0
    return N, M_interior, interior


def lift_collapsed_state(state: StateVector, N: int, M: int = 1) -> StateVector:
    """Embed a collapsed state into the full basis (inverse of restriction)."""
    if state.basis.kind != "collapsed":
        raise SpecError("expected a collapsed-basis state")
    labels = state.basis.labels
    interior = labels[4:]
    a = state.amplitudes
    fb_labels = [f"0->{j}" for j in range(1, N + 1)] + [f"{j}->0" for j in range(1, N + 1)]
    for k in range(1, M + 1):
        fb_labels += [f"{lab}#{k}" for lab in interior]
    basis = EdgeBasis(labels=tuple(fb_labels), kind="full")
    full = np.zeros(len(basis), dtype=complex)
    wL = 1.0 / math.sqrt(N - M)
    wR = 1.0 / math.sqrt(M)
    for j in range(M + 1, N + 1):
        full[basis.index(f"0->{j}")] = a[0] * wL      # |out>
        full[basis.index(f"{j}->0")] = a[1] * wL      # |in>
    for k in range(1, M + 1):
        full[basis.index(f"0->{k}")] = a[2] * wR      # |0,1>
        full[basis.index(f"{k}->0")] = a[3] * wR      # |1,0>
        for i, lab in enumerate(interior):
            full[basis.index(f"{lab}#{k}")] = a[4 + i] * wR
    return StateVector(amplitudes=full, basis=basis)


def restrict_full_state(state: StateVector, M: int | None = None) -> tuple[StateVector, float]:
    """Project a full state onto the symmetric (collapsed) subspace.

    Returns the collapsed state and the leakage norm of the discarded
    asymmetric component (0 for symmetric states).  ``M`` is inferred from the
    interior-copy labels when the subgraph has interior states; for
    interior-free subgraphs pass it explicitly (default 1).
    """
    N, M_inferred, interior = _parse_full_basis(state.basis)
    if M_inferred > 0:
        M = M_inferred
    elif M is None:
        M = 1
    b = state.basis
    a = state.amplitudes
    wL = 1.0 / math.sqrt(N - M)
    wR = 1.0 / math.sqrt(M)
    out = wL * sum(a[b.index(f"0->{j}")] for j in range(M + 1, N + 1))
    inn = wL * sum(a[b.index(f"{j}->0")] for j in range(M + 1, N + 1))
    mo = wR * sum(a[b.index(f"0->{k}")] for k in range(1, M + 1))
    mi = wR * sum(a[b.index(f"{k}->0")] for k in range(1, M + 1))
    coll = [out, inn, mo, mi]
    for lab in interior:
        coll.append(wR * sum(a[b.index(f"{lab}#{k}")] for k in range(1, M + 1)))
    coll = np.array(coll, dtype=complex)
    # leakage = norm of the component outside the symmetric subspace, computed
    # by re-embedding the projection (a norm-difference would cancel badly)
    sym = np.zeros_like(a)
    for j in range(M + 1, N + 1):
        sym[b.index(f"0->{j}")] = coll[0] * wL
        sym[b.index(f"{j}->0")] = coll[1] * wL
    for k in range(1, M + 1):
        sym[b.index(f"0->{k}")] = coll[2] * wR
        sym[b.index(f"{k}->0")] = coll[3] * wR
        for i, lab in enumerate(interior):
            sym[b.index(f"{lab}#{k}")] = coll[4 + i] * wR
    leakage = float(np.linalg.norm(a - sym))
    if leakage > 1e-8:
        logger.debug("restrict_full_state: asymmetric leakage norm %.3e", leakage)
    basis = EdgeBasis(labels=(OUT, IN, MARKED_OUT, MARKED_IN) + tuple(interior),
                      kind="collapsed")
    return StateVector(amplitudes=coll, basis=basis), leakage


# ---------------------------------------------------------------------------
# Evolution
# ---------------------------------------------------------------------------

def apply(U: UnitaryOperator, s: StateVector) -> StateVector:
    """One time step."""
    if not U.basis.matches(s.basis):
        raise SpecError("operator/state basis mismatch")
    return StateVector(amplitudes=U.matrix @ s.amplitudes, basis=s.basis)


def evolve(U: UnitaryOperator, s: StateVector, m: int) -> StateVector:
    """m time steps (m >= 0)."""
    if not U.basis.matches(s.basis):
        raise SpecError("operator/state basis mismatch")
    if m < 0:
        raise ValueError("step count must be nonnegative")
    if m > 2000:
        amp = np.linalg.matrix_power(U.matrix, m) @ s.amplitudes
        return StateVector(amplitudes=amp, basis=s.basis)
    amp = s.amplitudes
    for _ in range(m):
        amp = U.matrix @ amp
    return StateVector(amplitudes=amp, basis=s.basis)
