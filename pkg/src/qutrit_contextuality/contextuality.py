"""Nine-ray witness set, inequality forms and classical bounds.

The nine rays sit on the vertices of a 13-edge orthogonality graph. Each ray
gives a projector ``P_i`` and a dichotomous observable ``A_i = I - 2 P_i``.
Three equivalent noncontextual inequalities follow:

* projector form     ``sum <P_i> <= 3``
* dichotomous form   ``sum <A_i> >= 3``
* correlation form   ``sum_{edges} <A_i A_j> + <A_9> >= -4``

and their traceless rewrite ``<W> >= 0`` with
``W = -2 sqrt2 L1 - 3 L3 + 2 sqrt2 L4 + 6 L6 - sqrt3 L8``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import (
    ATOL,
    IDENTITY,
    PSD_ATOL,
    SQRT2,
    SQRT3,
    QutritState,
    ValidationError,
    conjugate,
    decompose,
    expectation,
    is_unitary,
    ket,
    random_state,
    reconstruct,
)

CONTEXTUAL_THRESHOLD = -1e-9
AUDIT_ATOL = 1e-9

STANDARD_EDGES = (
    (1, 2), (1, 3), (1, 4), (2, 3), (2, 5), (3, 6), (4, 7),
    (4, 8), (5, 7), (5, 9), (6, 8), (6, 9), (7, 8),
)

_H = np.sqrt(0.5)
STANDARD_RAYS = (
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (0, _H, -_H),
    (1 / SQRT3, 0, -np.sqrt(2 / 3)),
    (1 / SQRT3, np.sqrt(2 / 3), 0),
    (_H, 0.5, 0.5),
    (_H, -0.5, -0.5),
    (_H, -0.5, 0.5),
)

# Gell-Mann coefficients of W, keyed by matrix index.
WITNESS_COEFFS = {1: -2 * SQRT2, 3: -3.0, 4: 2 * SQRT2, 6: 6.0, 8: -SQRT3}


@dataclass(frozen=True)
class OrthogonalityGraph:
    vertex_count: int
    edges: frozenset

    def __post_init__(self):
        norm = set()
        for i, j in self.edges:
            if i == j:
                raise ValidationError(f"self-loop at vertex {i}")
            if not (1 <= i <= self.vertex_count and 1 <= j <= self.vertex_count):
                raise ValidationError(f"edge ({i}, {j}) outside 1..{self.vertex_count}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_independent(self, chosen) -> bool:
        """True when no edge has both endpoints in ``chosen`` (1-based vertices)."""
        chosen = set(chosen)
        return not any(i in chosen and j in chosen for i, j in self.edges)


@dataclass(frozen=True, eq=False)
class WitnessSet:
    """Rays, graph and derived operators.

    ``frame`` is the unitary that maps the standard rays onto these rays; it is
    the identity for :func:`standard_witness_set` and accumulates under
    :func:`rotate_witness`.
    """

    rays: tuple
    graph: OrthogonalityGraph
    frame: np.ndarray = field(default_factory=lambda: IDENTITY.copy())
    projectors: np.ndarray = field(init=False)
    observables: np.ndarray = field(init=False)

    def __post_init__(self):
        rays = tuple(ket(r) for r in self.rays)
        if len(rays) != self.graph.vertex_count:
            raise ValidationError(f"{len(rays)} rays for a {self.graph.vertex_count}-vertex graph")
        for i, j in self.graph.edges:
            overlap = abs(np.vdot(rays[i - 1], rays[j - 1]))
            if overlap > ATOL:
                raise ValidationError(f"rays {i} and {j} share an edge but overlap {overlap:.3e}")
        proj = np.array([np.outer(r, np.conj(r)) for r in rays])
        obs = IDENTITY[None, :, :] - 2 * proj
        proj.setflags(write=False)
        obs.setflags(write=False)
        frame = np.array(self.frame, dtype=complex)
        frame.setflags(write=False)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "projectors", proj)
        object.__setattr__(self, "observables", obs)

    def __len__(self):
        return len(self.rays)

    def observable(self, i: int) -> np.ndarray:
        """``A_i`` with 1-based index."""
        return self.observables[i - 1]

    def projector(self, i: int) -> np.ndarray:
        return self.projectors[i - 1]

    def edge_product(self, i: int, j: int) -> np.ndarray:
        return self.observable(i) @ self.observable(j)


@dataclass(frozen=True)
class InequalityReport:
    projector_sum: float
    dichotomous_sum: float
    correlation_value: float
    witness_value: float
    contextual: bool

    def as_dict(self) -> dict:
        return {
            "projector_sum": self.projector_sum,
            "dichotomous_sum": self.dichotomous_sum,
            "correlation_value": self.correlation_value,
            "witness_value": self.witness_value,
            "contextual": self.contextual,
        }


@dataclass(frozen=True)
class ClassicalBounds:
    """Extremes of each inequality over deterministic noncontextual assignments.

    ``correlation_min`` uses the same exclusivity-respecting assignments as the
    other two forms. ``correlation_min_unconstrained`` drops the exclusivity
    rule and ranges over every +-1 assignment.
    """

    projector_max: int
    dichotomous_min: int
    correlation_min: int
    correlation_min_unconstrained: int

    def __iter__(self):
        return iter((self.projector_max, self.dichotomous_min, self.correlation_min))


def standard_witness_set() -> WitnessSet:
    return WitnessSet(
        rays=STANDARD_RAYS,
        graph=OrthogonalityGraph(9, frozenset(STANDARD_EDGES)),
    )


def projector_form_lhs(state: QutritState, w: WitnessSet) -> float:
    return sum(expectation(state, p) for p in w.projectors)


def dichotomous_form_lhs(state: QutritState, w: WitnessSet) -> float:
    return sum(expectation(state, a) for a in w.observables)


def correlation_operator(w: WitnessSet) -> np.ndarray:
    """``sum_{(i,j) in E} A_i A_j + A_last`` built from the projectors."""
    total = sum(w.edge_product(i, j) for i, j in w.graph.sorted_edges())
    return total + w.observable(len(w))


def correlation_form_lhs(state: QutritState, w: WitnessSet) -> float:
    return sum(expectation(state, w.edge_product(i, j)) for i, j in w.graph.sorted_edges()) + expectation(
        state, w.observable(len(w))
    )


def literal_witness_operator() -> np.ndarray:
    """W assembled from its five Gell-Mann coefficients."""
    c = np.zeros(8)
    for k, v in WITNESS_COEFFS.items():
        c[k - 1] = v
    return reconstruct(c)


def witness_operator(w: WitnessSet) -> np.ndarray:
    return conjugate(w.frame, literal_witness_operator())


def evaluate_witness(state: QutritState, w: WitnessSet) -> float:
    return expectation(state, witness_operator(w))


def is_contextual(witness_value: float) -> bool:
    return bool(witness_value < CONTEXTUAL_THRESHOLD)


def evaluate(state: QutritState, w: WitnessSet) -> InequalityReport:
    wv = evaluate_witness(state, w)
    return InequalityReport(
        projector_sum=projector_form_lhs(state, w),
        dichotomous_sum=dichotomous_form_lhs(state, w),
        correlation_value=correlation_form_lhs(state, w),
        witness_value=wv,
        contextual=is_contextual(wv),
    )


def _correlation_of(assignment, edges, last: int) -> int:
    return sum(assignment[i - 1] * assignment[j - 1] for i, j in edges) + assignment[last - 1]


def noncontextual_bounds_bruteforce(w: WitnessSet) -> ClassicalBounds:
    """Enumerate every 0/1 assignment to the vertices.

    An assignment is admissible when no edge has both endpoints set to 1
    (orthogonal projectors cannot both click). The dichotomous values are
    ``a_i = 1 - 2 v_i``.
    """
    n = len(w)
    edges = w.graph.sorted_edges()
    proj_max = None
    dich_min = None
    corr_min = None
    corr_min_all = None
    for bits in itertools.product((0, 1), repeat=n):
        a = [1 - 2 * b for b in bits]
        corr = _correlation_of(a, edges, n)
        corr_min_all = corr if corr_min_all is None else min(corr_min_all, corr)
        if any(bits[i - 1] and bits[j - 1] for i, j in edges):
            continue
        proj_max = sum(bits) if proj_max is None else max(proj_max, sum(bits))
        dich_min = sum(a) if dich_min is None else min(dich_min, sum(a))
        corr_min = corr if corr_min is None else min(corr_min, corr)
    return ClassicalBounds(proj_max, dich_min, corr_min, corr_min_all)


def rotate_witness(w: WitnessSet, u) -> WitnessSet:
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, PSD_ATOL):
        raise ValidationError("rotation matrix is not unitary")
    return WitnessSet(
        rays=tuple(u @ r for r in w.rays),
        graph=w.graph,
        frame=u @ w.frame,
    )


# Coefficients as printed, (identity, {Gell-Mann index: coefficient}).
PRINTED_OBSERVABLES = {
    "A1": (1 / 3, {3: -1.0, 8: -1 / SQRT3}),
    "A2": (1 / 3, {3: 1.0, 8: -1 / SQRT3}),
    "A3": (1 / 3, {8: 2 / SQRT3}),
    "A4": (1 / 3, {3: 0.5, 6: 1.0, 8: 0.5 / SQRT3}),
    "A5": (1 / 3, {3: -1 / 3, 4: 2 * SQRT2 / 3, 8: SQRT3 / 3}),
    "A6": (1 / 3, {1: -2 * SQRT2 / 3, 3: 1 / 3, 8: -SQRT3 / 3}),
    "A7": (1 / 3, {1: -SQRT2 / 2, 3: -0.25, 4: -SQRT2 / 2, 6: -0.5, 8: -0.25 / SQRT3}),
    "A8": (1 / 3, {1: SQRT2 / 2, 3: -0.25, 4: SQRT2 / 2, 6: -0.5, 8: -0.25 / SQRT3}),
    "A9": (1 / 3, {1: SQRT2 / 2, 3: -0.25, 4: -SQRT2 / 2, 6: 0.5, 8: -0.25 / SQRT3}),
}

PRINTED_PRODUCTS = {
    (1, 2): (-1 / 3, {8: -2 / SQRT3}),
    (1, 3): (-1 / 3, {3: -1.0, 8: 1 / SQRT3}),
    (1, 4): (-1 / 3, {3: -0.5, 6: 1.0, 8: -0.5 / SQRT3}),
    (2, 3): (-1 / 3, {3: 1.0, 8: 1 / SQRT3}),
    (2, 5): (-1 / 3, {3: 2 / 3, 4: 2 * SQRT2 / 3}),
    (3, 6): (-1 / 3, {1: -1 / (3 * SQRT2), 3: 1 / 3, 8: np.sqrt(6) / (3 * SQRT2)}),
    (4, 7): (-1 / 3, {1: -SQRT2 / 2, 3: 0.25, 4: -SQRT2 / 2, 6: 0.5, 8: SQRT3 / 12}),
    (4, 8): (-1 / 3, {1: SQRT2 / 2, 3: 0.25, 4: SQRT2 / 2, 6: 0.5, 8: SQRT3 / 12}),
    (5, 7): (-1 / 3, {1: -SQRT2 / 2, 3: -7 / 12, 4: SQRT2 / 6, 6: -0.5, 8: SQRT3 / 4}),
    (5, 9): (-1 / 3, {1: SQRT2 / 2, 3: -7 / 12, 4: SQRT2 / 6, 6: 0.5, 8: SQRT3 / 4}),
    (6, 8): (-1 / 3, {1: -SQRT2 / 6, 3: 1 / 12, 4: SQRT2 / 2, 6: -0.5, 8: -5 * SQRT3 / 12}),
    (6, 9): (-1 / 3, {1: -SQRT2 / 6, 3: 1 / 12, 4: -SQRT2 / 2, 6: 0.5, 8: -5 * SQRT3 / 12}),
    (7, 8): (-1 / 3, {3: -0.5, 6: -1.0, 8: -0.5 / SQRT3}),
}


@dataclass(frozen=True)
class Discrepancy:
    term: str
    component: str
    printed: float
    computed: float

    @property
    def delta(self) -> float:
        return self.computed - self.printed

    def as_dict(self) -> dict:
        return {
            "term": self.term,
            "component": self.component,
            "printed": self.printed,
            "computed": self.computed,
            "delta": self.delta,
        }


def _printed_vector(entry) -> np.ndarray:
    identity, coeffs = entry
    v = np.zeros(9)
    v[0] = identity
    for k, c in coeffs.items():
        v[k] = c
    return v


def _computed_vector(m) -> np.ndarray:
    ident, c = decompose(m)
    return np.concatenate([[ident], c])


_COMPONENTS = ("I",) + tuple(f"L{k}" for k in range(1, 9))


def _diff(term: str, printed: np.ndarray, computed: np.ndarray, atol: float) -> list[Discrepancy]:
    return [
        Discrepancy(term, _COMPONENTS[k], float(printed[k]), float(computed[k]))
        for k in range(9)
        if abs(printed[k] - computed[k]) > atol
    ]


def verify_printed_expansions(w: WitnessSet | None = None, atol: float = AUDIT_ATOL) -> list[Discrepancy]:
    """Diff the printed Gell-Mann expansions against projector-derived ones.

    Covers the nine observables, the 13 edge products, and the combined budget
    ``sum_E A_i A_j + A_9 + 4I`` (from printed terms) against ``W/4``. The
    result is a list of term-by-term mismatches; an empty list means the
    printed tables agree with the computation.
    """
    w = standard_witness_set() if w is None else w
    out: list[Discrepancy] = []
    for name, entry in PRINTED_OBSERVABLES.items():
        i = int(name[1:])
        out += _diff(name, _printed_vector(entry), _computed_vector(w.observable(i)), atol)
    printed_total = np.zeros(9)
    for (i, j), entry in PRINTED_PRODUCTS.items():
        pv = _printed_vector(entry)
        printed_total += pv
        out += _diff(f"A{i}A{j}", pv, _computed_vector(w.edge_product(i, j)), atol)
    printed_total += _printed_vector(PRINTED_OBSERVABLES["A9"])
    printed_total[0] += 4.0
    out += _diff("sum(AiAj)+A9+4I vs W/4", printed_total, _computed_vector(witness_operator(w) / 4), atol)
    return out


def fit_correlation_scale(w: WitnessSet, n_states: int = 200, seed: int = 0) -> tuple[float, float]:
    """Least-squares ``(offset, slope)`` of the correlation form against ``<W>``.

    The standard set gives ``(-4, 1/4)`` up to round-off.
    """
    xs, ys = [], []
    for k in range(n_states):
        s = random_state(seed + k)
        xs.append(evaluate_witness(s, w))
        ys.append(correlation_form_lhs(s, w))
    design = np.column_stack([np.ones(n_states), xs])
    (offset, slope), *_ = np.linalg.lstsq(design, np.array(ys), rcond=None)
    return float(offset), float(slope)
