"""Annular diagrams of oriented curves in the cut-open complement of an unknotted axis.

A diagram is a rectangle read left to right whose right edge re-glues to its
left edge (the seam). Curves appear as horizontal strands transformed by
events: crossings between adjacent strands, births (cups), deaths (caps) and
framing kinks. The branch axis itself is implicit — it is the core of the
identified seam and never a component.

Conventions:

* Strand positions are 1-based, bottom to top. A ``Cross`` at gap p involves
  the strands at positions p and p+1.
* Each strand carries an orientation: +1 for a curve running rightward
  (in the reading direction), -1 for leftward.
* Crossing signs are never stored; they are computed from the two strand
  orientations and the over/under flag:
  ``sign = o_lower * o_upper * (-1 if upper_over else +1)``.
* A component's framing is its writhe: signed kinks plus signed
  self-crossings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache


class DiagramError(Exception):
    """Base class for diagram-level failures."""


class DiagramSyntaxError(DiagramError):
    def __init__(self, message: str, line: int, col: int = 1):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")


class StrandCountMismatch(DiagramError):
    """An event addresses a strand position that does not exist."""


class SeamMismatch(DiagramError):
    """Strands at the right edge do not re-glue to the left edge."""


class OrientationMismatch(DiagramError):
    """A cap joins two strands running the same way."""


class SameComponentError(DiagramError):
    """Pairwise linking requested for a single component."""


class UnknownComponentError(DiagramError):
    """No component with the requested id or label."""


@dataclass(frozen=True)
class Cross:
    position: int
    upper_over: bool


@dataclass(frozen=True)
class Cup:
    position: int
    sign: int = 1  # +1: lower newborn strand runs rightward


@dataclass(frozen=True)
class Cap:
    position: int


@dataclass(frozen=True)
class Kink:
    position: int
    sign: int


Event = Cross | Cup | Cap | Kink


@dataclass(frozen=True)
class AnnularWord:
    """Event-word presentation of curves relative to the seam.

    ``labels`` attaches names to components via a seam strand they contain,
    as ``(name, seam_position)`` pairs.
    """

    seam_orientations: tuple[int, ...]
    events: tuple[Event, ...] = ()
    labels: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        for o in self.seam_orientations:
            if o not in (-1, 1):
                raise ValueError("seam orientations must be +1 or -1")
        for name, pos in self.labels:
            if not 1 <= pos <= self.seam_width:
                raise ValueError(f"label {name!r} references seam strand {pos}")

    @property
    def seam_width(self) -> int:
        return len(self.seam_orientations)


def crossing_sign(o_lower: int, o_upper: int, upper_over: bool) -> int:
    return o_lower * o_upper * (-1 if upper_over else 1)


class _UnionFind:
    def __init__(self):
        self.parent: list[int] = []

    def make(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass
class _SweepResult:
    seg_count: int
    uf: _UnionFind
    seam_segments: tuple[int, ...]  # segment at each seam position (left edge)
    crossings: list[tuple[int, int, int, int]]  # (seg_lower, seg_upper, sign, event_index)
    kinks: list[tuple[int, int]]  # (segment, sign)
    snapshots: dict[int, tuple[int, ...]]  # event index -> live segments, bottom to top


def _sweep(word: AnnularWord, snapshot_at: frozenset[int] = frozenset()) -> _SweepResult:
    """Run the word left to right, type-checking it and recording incidences."""
    uf = _UnionFind()
    live: list[tuple[int, int]] = []  # (segment, orientation), bottom to top
    for o in word.seam_orientations:
        live.append((uf.make(), o))
    seam_segments = tuple(seg for seg, _ in live)
    crossings: list[tuple[int, int, int, int]] = []
    kinks: list[tuple[int, int]] = []
    snapshots: dict[int, tuple[int, ...]] = {}

    def snap(idx: int) -> None:
        if idx in snapshot_at:
            snapshots[idx] = tuple(seg for seg, _ in live)

    for idx, ev in enumerate(word.events):
        snap(idx)
        if isinstance(ev, Cross):
            p = ev.position
            if not 1 <= p <= len(live) - 1:
                raise StrandCountMismatch(
                    f"event {idx}: crossing at gap {p} with {len(live)} live strands"
                )
            lo, up = live[p - 1], live[p]
            crossings.append((lo[0], up[0], crossing_sign(lo[1], up[1], ev.upper_over), idx))
            live[p - 1], live[p] = up, lo
        elif isinstance(ev, Cup):
            p = ev.position
            if not 1 <= p <= len(live) + 1:
                raise StrandCountMismatch(
                    f"event {idx}: cup at position {p} with {len(live)} live strands"
                )
            if ev.sign not in (-1, 1):
                raise ValueError(f"event {idx}: cup sign must be +1 or -1")
            lower, upper = uf.make(), uf.make()
            uf.union(lower, upper)
            live[p - 1 : p - 1] = [(lower, ev.sign), (upper, -ev.sign)]
        elif isinstance(ev, Cap):
            p = ev.position
            if not 1 <= p <= len(live) - 1:
                raise StrandCountMismatch(
                    f"event {idx}: cap at position {p} with {len(live)} live strands"
                )
            lo, up = live[p - 1], live[p]
            if lo[1] + up[1] != 0:
                raise OrientationMismatch(
                    f"event {idx}: cap joins strands with orientations {lo[1]}, {up[1]}"
                )
            uf.union(lo[0], up[0])
            del live[p - 1 : p + 1]
        elif isinstance(ev, Kink):
            p = ev.position
            if not 1 <= p <= len(live):
                raise StrandCountMismatch(
                    f"event {idx}: kink at position {p} with {len(live)} live strands"
                )
            if ev.sign not in (-1, 1):
                raise ValueError(f"event {idx}: kink sign must be +1 or -1")
            kinks.append((live[p - 1][0], ev.sign))
        else:  # pragma: no cover - exhaustive by construction
            raise TypeError(f"unknown event {ev!r}")
    snap(len(word.events))

    if len(live) != word.seam_width:
        raise SeamMismatch(
            f"word ends with {len(live)} strands, seam has {word.seam_width}"
        )
    for h, (seg, o) in enumerate(live):
        if o != word.seam_orientations[h]:
            raise SeamMismatch(
                f"seam strand {h + 1} re-glues with orientation {o}, "
                f"expected {word.seam_orientations[h]}"
            )
        uf.union(seg, seam_segments[h])
    return _SweepResult(len(uf.parent), uf, seam_segments, crossings, kinks, snapshots)


ComponentId = int


@dataclass(frozen=True)
class Component:
    cid: ComponentId
    seam_positions: tuple[int, ...]  # 1-based
    winding: int
    wrapping: int


@dataclass
class WordAnalysis:
    """Connectivity closure of a word plus the tallies derived from it."""

    word: AnnularWord
    components: tuple[Component, ...]
    _comp_of_root: dict[int, ComponentId] = field(repr=False, default_factory=dict)
    _sweep: _SweepResult = field(repr=False, default=None)
    _tables: tuple[dict, dict, dict] | None = field(repr=False, default=None)

    def component_of_segment(self, segment: int) -> ComponentId:
        return self._comp_of_root[self._sweep.uf.find(segment)]

    def component_of_seam(self, position: int) -> ComponentId:
        if not 1 <= position <= self.word.seam_width:
            raise UnknownComponentError(f"seam position {position} out of range")
        return self.component_of_segment(self._sweep.seam_segments[position - 1])

    def labels(self) -> dict[ComponentId, str]:
        out: dict[ComponentId, str] = {}
        for name, pos in self.word.labels:
            out[self.component_of_seam(pos)] = name
        return out

    def component_by_name(self, name: str) -> ComponentId:
        for cid, label in self.labels().items():
            if label == name:
                return cid
        raise UnknownComponentError(f"no component labeled {name!r}")

    def winding(self, cid: ComponentId) -> int:
        return self._component(cid).winding

    def wrapping(self, cid: ComponentId) -> int:
        return self._component(cid).wrapping

    def _crossing_tables(self) -> tuple[dict, dict, dict]:
        # One pass over all crossings and kinks; queries are then O(1).
        if self._tables is None:
            pair_sign: dict[tuple[int, int], int] = {}
            pair_count: dict[tuple[int, int], int] = {}
            framing: dict[int, int] = {c.cid: 0 for c in self.components}
            for lo, up, sign, _ in self._sweep.crossings:
                a = self.component_of_segment(lo)
                b = self.component_of_segment(up)
                if a == b:
                    framing[a] += sign
                else:
                    key = (a, b) if a < b else (b, a)
                    pair_sign[key] = pair_sign.get(key, 0) + sign
                    pair_count[key] = pair_count.get(key, 0) + 1
            for seg, sign in self._sweep.kinks:
                framing[self.component_of_segment(seg)] += sign
            self._tables = (pair_sign, pair_count, framing)
        return self._tables

    def linking(self, c1: ComponentId, c2: ComponentId) -> Fraction:
        if c1 == c2:
            raise SameComponentError("linking requires two distinct components")
        self._component(c1), self._component(c2)
        pair_sign, pair_count, _ = self._crossing_tables()
        key = (c1, c2) if c1 < c2 else (c2, c1)
        total = pair_sign.get(key, 0)
        half, rem = divmod(total, 2)
        assert rem == 0 and pair_count.get(key, 0) % 2 == 0, "closed curves must cross evenly"
        return Fraction(half)

    def framing(self, cid: ComponentId) -> int:
        self._component(cid)
        return self._crossing_tables()[2][cid]

    def _component(self, cid: ComponentId) -> Component:
        if not 0 <= cid < len(self.components):
            raise UnknownComponentError(f"no component {cid}")
        return self.components[cid]


@lru_cache(maxsize=256)
def analyze(word: AnnularWord) -> WordAnalysis:
    """Validate a word and compute its component structure (cached)."""
    sweep = _sweep(word)
    roots: dict[int, list[int]] = {}
    order: list[int] = []
    for seg in range(sweep.seg_count):
        r = sweep.uf.find(seg)
        if r not in roots:
            roots[r] = []
            order.append(r)
        # Segments are created seam-first, bottom to top, so this order is
        # deterministic and stable under serialization round-trips.
    for h, seg in enumerate(sweep.seam_segments):
        roots[sweep.uf.find(seg)].append(h + 1)
    components = []
    comp_of_root: dict[int, ComponentId] = {}
    for cid, r in enumerate(order):
        positions = tuple(roots[r])
        winding = sum(word.seam_orientations[p - 1] for p in positions)
        components.append(Component(cid, positions, winding, len(positions)))
        comp_of_root[r] = cid
    return WordAnalysis(word, tuple(components), comp_of_root, sweep)


def components(word: AnnularWord) -> tuple[Component, ...]:
    return analyze(word).components


def winding(word: AnnularWord, cid: ComponentId) -> int:
    return analyze(word).winding(cid)


def wrapping(word: AnnularWord, cid: ComponentId) -> int:
    return analyze(word).wrapping(cid)


def linking(word: AnnularWord, c1: ComponentId, c2: ComponentId) -> Fraction:
    return analyze(word).linking(c1, c2)


def framing(word: AnnularWord, cid: ComponentId) -> int:
    return analyze(word).framing(cid)


# ---------------------------------------------------------------------------
# Text DSL


_HEADER = "annular v1"


def serialize(word: AnnularWord) -> str:
    """Canonical text form; one event per line, in order."""
    lines = [_HEADER]
    marks = "".join("+" if o == 1 else "-" for o in word.seam_orientations)
    lines.append(f"seam {word.seam_width} {marks}" if word.seam_width else "seam 0")
    for name, pos in word.labels:
        lines.append(f"label {name} seam {pos}")
    for ev in word.events:
        if isinstance(ev, Cross):
            lines.append(f"x {ev.position} {'over' if ev.upper_over else 'under'}")
        elif isinstance(ev, Cup):
            lines.append(f"cup {ev.position} {'+' if ev.sign == 1 else '-'}")
        elif isinstance(ev, Cap):
            lines.append(f"cap {ev.position}")
        elif isinstance(ev, Kink):
            lines.append(f"kink {ev.position} {'+' if ev.sign == 1 else '-'}")
    return "\n".join(lines) + "\n"


def _sign_token(tok: str, lineno: int) -> int:
    if tok == "+":
        return 1
    if tok == "-":
        return -1
    raise DiagramSyntaxError(f"expected + or -, got {tok!r}", lineno)


def _int_token(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DiagramSyntaxError(f"expected {what}, got {tok!r}", lineno) from None


def parse(text: str) -> AnnularWord:
    """Parse the annular DSL; rejects ill-typed words with located errors."""
    seam: tuple[int, ...] | None = None
    labels: list[tuple[str, int]] = []
    events: list[Event] = []
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if not saw_header:
            if line != _HEADER:
                raise DiagramSyntaxError(f"expected {_HEADER!r} header", lineno)
            saw_header = True
            continue
        kind = toks[0]
        if kind == "seam":
            if seam is not None:
                raise DiagramSyntaxError("duplicate seam line", lineno)
            if len(toks) < 2:
                raise DiagramSyntaxError("seam needs a width", lineno)
            width = _int_token(toks[1], lineno, "seam width")
            if width == 0:
                if len(toks) > 2:
                    raise DiagramSyntaxError("seam 0 takes no orientations", lineno, 3)
                seam = ()
                continue
            if len(toks) != 3:
                raise DiagramSyntaxError("seam needs width and orientation marks", lineno)
            marks = toks[2]
            if len(marks) != width or any(ch not in "+-" for ch in marks):
                raise DiagramSyntaxError(
                    f"orientation marks {marks!r} do not match width {width}", lineno, 3
                )
            seam = tuple(1 if ch == "+" else -1 for ch in marks)
        elif seam is None:
            raise DiagramSyntaxError("seam line must precede events and labels", lineno)
        elif kind == "label":
            if len(toks) != 4 or toks[2] != "seam":
                raise DiagramSyntaxError("usage: label NAME seam POSITION", lineno)
            pos = _int_token(toks[3], lineno, "seam position")
            if not 1 <= pos <= len(seam):
                raise DiagramSyntaxError(f"label seam position {pos} out of range", lineno, 4)
            labels.append((toks[1], pos))
        elif kind == "x":
            if len(toks) != 3 or toks[2] not in ("over", "under"):
                raise DiagramSyntaxError("usage: x GAP over|under", lineno)
            events.append(Cross(_int_token(toks[1], lineno, "gap"), toks[2] == "over"))
        elif kind == "cup":
            if len(toks) == 2:
                events.append(Cup(_int_token(toks[1], lineno, "position"), 1))
            elif len(toks) == 3:
                events.append(
                    Cup(_int_token(toks[1], lineno, "position"), _sign_token(toks[2], lineno))
                )
            else:
                raise DiagramSyntaxError("usage: cup POSITION [+|-]", lineno)
        elif kind == "cap":
            if len(toks) != 2:
                raise DiagramSyntaxError("usage: cap POSITION", lineno)
            events.append(Cap(_int_token(toks[1], lineno, "position")))
        elif kind == "kink":
            if len(toks) != 3:
                raise DiagramSyntaxError("usage: kink POSITION +|-", lineno)
            events.append(
                Kink(_int_token(toks[1], lineno, "position"), _sign_token(toks[2], lineno))
            )
        else:
            raise DiagramSyntaxError(f"unknown directive {kind!r}", lineno)
    if not saw_header:
        raise DiagramSyntaxError(f"missing {_HEADER!r} header", 1)
    if seam is None:
        raise DiagramSyntaxError("missing seam line", 1)
    word = AnnularWord(seam, tuple(events), tuple(labels))
    analyze(word)  # type-check: strand counts, seam re-gluing, cap orientations
    return word
