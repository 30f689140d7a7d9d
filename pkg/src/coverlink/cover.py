"""Cut-and-stack cyclic covers of annular words.

The m-fold cover branched over the implicit axis is the same rectangle
concatenated m times, with only the outermost seam re-glued. Components whose
winding is divisible by m lift to exactly m closed components; the deck
transformation shifts copies by one. All lifted linking and framing data is
read off the cover word by the same counting rules as in the base.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diagram import AnnularWord, ComponentId, WordAnalysis, _sweep, analyze
from .linalg import IntMatrix


class WindingNotDivisibleError(Exception):
    """A component's winding is not divisible by the cover degree."""

    def __init__(self, component: str, winding: int, m: int):
        self.component = component
        self.winding = winding
        self.m = m
        super().__init__(
            f"component {component} has winding {winding}, not divisible by m={m}; "
            "its preimage is not m closed lifts"
        )


class LiftStructureError(Exception):
    """Internal inconsistency in the lift bookkeeping."""


@dataclass(frozen=True)
class CoverDiagram:
    """The m-fold cover of ``base`` with lift labels and deck action.

    ``lift_map[(c, j)]`` is the cover component holding copy j's strand at
    base component c's base-point seam height; the preferred lift of c is
    ``lift_map[(c, 0)]`` and the deck generator sends lift j to lift j+1.
    """

    base: AnnularWord
    m: int
    word: AnnularWord
    lift_map: dict[tuple[ComponentId, int], ComponentId]
    deck: dict[ComponentId, ComponentId]

    @property
    def analysis(self) -> WordAnalysis:
        return analyze(self.word)

    def lift(self, base_cid: ComponentId, copy: int) -> ComponentId:
        return self.lift_map[(base_cid, copy % self.m)]

    def lifts_of(self, base_cid: ComponentId) -> tuple[ComponentId, ...]:
        return tuple(self.lift_map[(base_cid, j)] for j in range(self.m))


def build_cover(base: AnnularWord, m: int) -> CoverDiagram:
    """Concatenate m copies and label the lifts.

    Requires m >= 1 and winding(c) divisible by m for every component c.
    """
    if m < 1:
        raise ValueError(f"cover degree must be at least 1, got {m}")
    base_ana = analyze(base)
    base_labels = base_ana.labels()
    for comp in base_ana.components:
        if comp.winding % m != 0:
            raise WindingNotDivisibleError(
                base_labels.get(comp.cid, f"component {comp.cid}"), comp.winding, m
            )

    cover_labels: list[tuple[str, int]] = []
    events = base.events * m
    word_plain = AnnularWord(base.seam_orientations, events)
    n_ev = len(base.events)
    sweep = _sweep(word_plain, frozenset(j * n_ev for j in range(m)))

    # Resolve components of the plain cover word once, then name the lifts.
    cover_ana = analyze(word_plain)
    lift_map: dict[tuple[ComponentId, int], ComponentId] = {}
    for comp in base_ana.components:
        h = min(comp.seam_positions)
        for j in range(m):
            seg = sweep.snapshots[j * n_ev][h - 1]
            lift_map[(comp.cid, j)] = cover_ana.component_of_segment(seg)
    if len(set(lift_map.values())) != len(lift_map) or len(lift_map) != len(
        cover_ana.components
    ):
        raise LiftStructureError("lifts are not m distinct components per base component")

    deck: dict[ComponentId, ComponentId] = {}
    for (cid, j), cover_cid in lift_map.items():
        deck[cover_cid] = lift_map[(cid, (j + 1) % m)]
    x = sorted(deck)
    for _ in range(m):
        x = [deck[c] for c in x]
    if x != sorted(deck):
        raise LiftStructureError("deck action is not of order dividing m")

    # Carry lift names into the cover word so it serializes self-describing.
    for name, pos in base.labels:
        cid = base_ana.component_of_seam(pos)
        base_point = min(base_ana.components[cid].seam_positions)
        if pos != base_point:
            continue
        for j in range(m):
            cover_cid = lift_map[(cid, j)]
            positions = cover_ana.components[cover_cid].seam_positions
            if positions:
                cover_labels.append((f"{name}.{j}", min(positions)))
    word = AnnularWord(base.seam_orientations, events, tuple(sorted(cover_labels)))
    return CoverDiagram(base, m, word, lift_map, deck)


def deck_translate(cd: CoverDiagram, cover_cid: ComponentId, k: int) -> ComponentId:
    """Apply the deck permutation k times (k may be any integer)."""
    out = cover_cid
    for _ in range(k % cd.m):
        out = cd.deck[out]
    return out


def lifted_eta_linkings(cd: CoverDiagram) -> dict[tuple[int, int], Fraction]:
    """Pairwise linkings of the eta lifts in the cover, keyed by lift indices."""
    ana = cd.analysis
    base_ana = analyze(cd.base)
    eta = base_ana.component_by_name("eta")
    lifts = cd.lifts_of(eta)
    out: dict[tuple[int, int], Fraction] = {}
    for j in range(cd.m):
        for k in range(cd.m):
            if j != k:
                out[(j, k)] = ana.linking(lifts[j], lifts[k])
    return out


@dataclass(frozen=True)
class LiftedData:
    """Lifted surgery data in lift-major order: L1^1..Lk^1, L1^2..Lk^2, ...

    ``matrix`` has lifted framings on the diagonal and pairwise lift linkings
    off it; ``eta_vs_surgery[j]`` is the vector of linkings of eta lift j with
    each surgery lift; ``eta_linkings`` are the eta-lift pairwise linkings
    (integers here: the cover of the cable is a 3-sphere).
    """

    m: int
    labels: tuple[str, ...]
    matrix: IntMatrix
    eta_vs_surgery: tuple[tuple[int, ...], ...]
    eta_linkings: dict[tuple[int, int], Fraction]


def lifted_linking_matrix(cd: CoverDiagram) -> LiftedData:
    ana = cd.analysis
    base_ana = analyze(cd.base)
    base_labels = base_ana.labels()
    surgery = sorted(
        (cid for cid, name in base_labels.items() if name != "eta"),
        key=lambda cid: base_labels[cid],
    )
    k = len(surgery)
    order: list[tuple[ComponentId, str]] = []
    for a in range(cd.m):
        for cid in surgery:
            order.append((cd.lift(cid, a), f"{base_labels[cid]}.{a}"))
    size = k * cd.m
    rows = [[0] * size for _ in range(size)]
    for i, (ci, _) in enumerate(order):
        rows[i][i] = ana.framing(ci)
        for j in range(i + 1, size):
            cj = order[j][0]
            lk = ana.linking(ci, cj)
            assert lk.denominator == 1
            rows[i][j] = rows[j][i] = int(lk)
    eta_lifts = cd.lifts_of(base_ana.component_by_name("eta"))
    eta_rows = []
    for j in range(cd.m):
        row = []
        for ci, _ in order:
            lk = ana.linking(eta_lifts[j], ci)
            assert lk.denominator == 1
            row.append(int(lk))
        eta_rows.append(tuple(row))
    return LiftedData(
        cd.m,
        tuple(name for _, name in order),
        IntMatrix.from_rows(rows) if size else IntMatrix.zeros(0, 0),
        tuple(eta_rows),
        lifted_eta_linkings(cd),
    )
