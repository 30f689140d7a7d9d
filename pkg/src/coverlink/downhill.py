"""Normalizing a one-component annular diagram to cable-plus-clasps form.

The traversal walks the curve from the bottom seam strand, flipping each
crossing that is first reached on the under strand; a diagram in which every
crossing is first reached on the over strand (the downhill property) is
isotopic to the standard cable, so the flips are exactly the crossing
changes separating the input from the cable, and each one is emitted as a
clasp gadget. Returning strands (arcs entering and leaving the rectangle on
the same side) are removed pairwise by merging them into their neighbors;
the reduced word is returned in straightened canonical form, where the
wrapping number equals the absolute winding number.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .diagram import AnnularWord, Cap, Cross, Cup, Kink, _sweep, analyze
from .pattern import ClaspPresentation, ClaspSpec, cable_template


class MultiComponentError(Exception):
    """The traversal needs a single-component diagram."""


class NotDownhillError(Exception):
    """A crossing is first reached on the under strand."""


class WindingTooSmallError(Exception):
    """Normalization needs |winding| >= 2."""


@dataclass(frozen=True)
class _Passage:
    event: int  # event index, or -1 for a seam crossing
    kind: str  # "over" | "under" | "turn" | "kink" | "seam"
    direction: int = 0  # seam crossings only: +1 rightward, -1 leftward


def _build_graph(word: AnnularWord):
    """Directed curve graph: edges are strand slots, links follow orientation."""
    next_id = 0

    def new_edge() -> int:
        nonlocal next_id
        next_id += 1
        return next_id - 1

    live: list[tuple[int, int]] = [(new_edge(), o) for o in word.seam_orientations]
    first = [e for e, _ in live]
    succ: dict[int, tuple[int, _Passage]] = {}
    pred: dict[int, tuple[int, _Passage]] = {}

    def link(a: int, b: int, passage: _Passage) -> None:
        succ[a] = (b, passage)
        pred[b] = (a, passage)

    def advance(old: int, new: int, orient: int, passage: _Passage) -> None:
        if orient == 1:
            link(old, new, passage)
        else:
            link(new, old, passage)

    for idx, ev in enumerate(word.events):
        if isinstance(ev, Cross):
            p = ev.position
            (lo, o_lo), (up, o_up) = live[p - 1], live[p]
            lo2, up2 = new_edge(), new_edge()
            advance(lo, lo2, o_lo, _Passage(idx, "under" if ev.upper_over else "over"))
            advance(up, up2, o_up, _Passage(idx, "over" if ev.upper_over else "under"))
            live[p - 1], live[p] = (up2, o_up), (lo2, o_lo)
        elif isinstance(ev, Cup):
            lo, up = new_edge(), new_edge()
            live[ev.position - 1 : ev.position - 1] = [(lo, ev.sign), (up, -ev.sign)]
            # The curve flows in on the leftward newborn and out on the other.
            if ev.sign == 1:
                link(up, lo, _Passage(idx, "turn"))
            else:
                link(lo, up, _Passage(idx, "turn"))
        elif isinstance(ev, Cap):
            p = ev.position
            (lo, o_lo), (up, _) = live[p - 1], live[p]
            if o_lo == 1:
                link(lo, up, _Passage(idx, "turn"))
            else:
                link(up, lo, _Passage(idx, "turn"))
            del live[p - 1 : p + 1]
        elif isinstance(ev, Kink):
            e, o = live[ev.position - 1]
            e2 = new_edge()
            advance(e, e2, o, _Passage(idx, "kink"))
            live[ev.position - 1] = (e2, o)
    for h, (e, o) in enumerate(live):
        if o == 1:
            link(e, first[h], _Passage(-1, "seam", direction=1))
        else:
            link(first[h], e, _Passage(-1, "seam", direction=-1))
    return first, succ, pred


def _curve(word: AnnularWord, forward: bool = True) -> list[_Passage]:
    """Ordered passages of the single closed curve.

    Starts at the bottom seam strand at the word start (the diagram's unique
    minimal point) and follows the curve's own orientation; ``forward=False``
    walks against it, which mirrors seam directions.
    """
    ana = analyze(word)
    if len(ana.components) != 1:
        raise MultiComponentError(f"diagram has {len(ana.components)} components")
    first, succ, pred = _build_graph(word)
    passages: list[_Passage] = []
    # Base point: the bottom seam strand; for a seamless circle, the first
    # edge created (the earliest cup's lower newborn).
    start = first[0] if first else 0
    edge = start
    table = succ if forward else pred
    while True:
        edge, passage = table[edge]
        if passage.kind == "seam" and not forward:
            passage = _Passage(-1, "seam", -passage.direction)
        passages.append(passage)
        if edge == start:
            break
    return passages


def _first_visit_flips(passages: list[_Passage]) -> list[int]:
    """Event indices of crossings first reached on the under strand."""
    seen: set[int] = set()
    flips: list[int] = []
    for p in passages:
        if p.kind in ("over", "under") and p.event not in seen:
            seen.add(p.event)
            if p.kind == "under":
                flips.append(p.event)
    return flips


def _flip_events(word: AnnularWord, flips: list[int]) -> AnnularWord:
    if not flips:
        return word
    events = list(word.events)
    for idx in flips:
        ev = events[idx]
        assert isinstance(ev, Cross)
        events[idx] = Cross(ev.position, not ev.upper_over)
    return AnnularWord(word.seam_orientations, tuple(events), word.labels)


def force_downhill(word: AnnularWord) -> tuple[AnnularWord, tuple[int, ...]]:
    """Flip crossings so every crossing is first reached as an overcrossing.

    Returns the adjusted word and the flipped event indices, in traversal
    order. Kinks are exempt: a kink flips by an isotopy of the curve, never
    by a crossing change. Idempotent: the output re-traverses with no flips.
    """
    flips = _first_visit_flips(_curve(word))
    return _flip_events(word, flips), tuple(flips)


def is_downhill(word: AnnularWord) -> bool:
    return not _first_visit_flips(_curve(word))


def reduce_returning(word: AnnularWord) -> AnnularWord:
    """Remove returning strands pairwise; the result has wrapping = |winding|.

    Requires a downhill single-component word. The output is the reduced
    diagram in straightened canonical form (strands pulled straight along
    the removal isotopies, which introduce no crossings): the |w|-strand
    cable word for winding w, orientation-reversed when w < 0, and a
    seamless circle in the degenerate winding-0 case.
    """
    if not is_downhill(word):
        raise NotDownhillError("input must satisfy the downhill property")
    ana = analyze(word)
    w = ana.components[0].winding
    if w == 0:
        return AnnularWord((), (Cup(1, 1), Cap(1)))
    template = cable_template(abs(w))
    if w > 0:
        return template
    flipped = tuple(-o for o in template.seam_orientations)
    return AnnularWord(flipped, template.events, template.labels)


def _strand_heights(passages: list[_Passage], n: int) -> list[int]:
    """Straightened cable height for every passage position.

    Seam crossings split the closed walk into arcs. Adjacent seam crossings
    of opposite direction bound a returning arc; removing one merges three
    consecutive arcs. The surviving n arcs are the cable strands, with the
    base-point arc as the shifting strand (height 1) and the j-th later arc
    at height n+1-j.
    """
    arc_of_passage: list[int] = []
    arc = 0
    for p in passages:
        arc_of_passage.append(arc)
        if p.kind == "seam":
            arc += 1
    total = arc
    arc_of_passage = [a % total for a in arc_of_passage]

    parent = list(range(total))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(child: int, keep: int) -> None:
        rc, rk = find(child), find(keep)
        if rc != rk:
            parent[rc] = rk

    # segs[i] = (arc before crossing i, direction of crossing i), walk order.
    dirs = [p.direction for p in passages if p.kind == "seam"]
    segs: list[tuple[int, int]] = [((i) % total, dirs[i]) for i in range(total)]
    # Arc k precedes crossing k in walk order (arc 0 holds the start point).
    while len(segs) > n:
        length = len(segs)
        for i in range(length):
            j = (i + 1) % length
            if segs[i][1] + segs[j][1] == 0:
                k = (j + 1) % length
                union(segs[i][0], segs[k][0])
                union(segs[j][0], segs[k][0])
                for idx in sorted((i, j), reverse=True):
                    del segs[idx]
                break
        else:
            raise AssertionError("no cancelling seam pair found below target count")
    assert all(d == segs[0][1] for _, d in segs)

    order = [find(a) for a, _ in segs]
    start_root = find(0)
    rot = order.index(start_root)
    order = order[rot:] + order[:rot]
    heights = {order[0]: 1}
    for j, root in enumerate(order[1:], start=1):
        heights[root] = n + 1 - j
    return [heights[find(a)] for a in arc_of_passage]


def _event_signs(word: AnnularWord) -> dict[int, int]:
    sweep = _sweep(word)
    return {idx: sign for _, _, sign, idx in sweep.crossings}


@dataclass(frozen=True)
class ChangeRecord:
    """One emitted crossing change and the clasp gadget realizing it."""

    event: int
    strand_low: int  # straightened cable heights of the two crossing strands
    strand_high: int
    clasp: ClaspSpec


@dataclass(frozen=True)
class NormalizeResult:
    presentation: ClaspPresentation
    orientation: str  # "Standard" | "Reversed"
    changes: tuple[ChangeRecord, ...]
    word: AnnularWord  # the downhill word the changes were read from

    def __iter__(self):
        return iter((self.presentation, self.orientation))


def normalize(word: AnnularWord) -> NormalizeResult:
    """Emit the cable-plus-clasps presentation realizing the input pattern.

    Kinks are stripped first (isotopies; the pattern curve carries no framing
    data). The crossing-change traversal runs both along and against the
    curve's orientation and keeps whichever needs fewer changes (ties prefer
    along); the result is Reversed exactly when the emitted data describes
    the input curve run backwards.
    """
    stripped = AnnularWord(
        word.seam_orientations,
        tuple(ev for ev in word.events if not isinstance(ev, Kink)),
        word.labels,
    )
    ana = analyze(stripped)
    if len(ana.components) != 1:
        raise MultiComponentError(f"diagram has {len(ana.components)} components")
    w = ana.components[0].winding
    if abs(w) < 2:
        raise WindingTooSmallError(f"winding {w}; need |winding| >= 2")
    input_reversed = False
    if w < 0:
        stripped = AnnularWord(
            tuple(-o for o in stripped.seam_orientations),
            tuple(
                Cup(ev.position, -ev.sign) if isinstance(ev, Cup) else ev
                for ev in stripped.events
            ),
            stripped.labels,
        )
        input_reversed = True
        w = -w

    forward = _curve(stripped, forward=True)
    backward = _curve(stripped, forward=False)
    flips_fwd = _first_visit_flips(forward)
    flips_bwd = _first_visit_flips(backward)
    use_backward = len(flips_bwd) < len(flips_fwd)
    passages = backward if use_backward else forward
    flips = flips_bwd if use_backward else flips_fwd
    downhill_word = _flip_events(stripped, flips)

    heights = _strand_heights(passages, w)
    by_event: dict[int, list[int]] = {}
    for pos, p in enumerate(passages):
        if p.kind in ("over", "under"):
            by_event.setdefault(p.event, []).append(pos)
    signs = _event_signs(stripped)
    changes: list[ChangeRecord] = []
    for slot, ev_idx in enumerate(flips):
        pos1, pos2 = by_event[ev_idx]
        h1, h2 = sorted((heights[pos1], heights[pos2]))
        g_e, g_x = h1 - 1, h2
        levels = range(g_e + 1, g_x + 1)
        flags_in = "".join("u" if lev in (h1, h2) else "o" for lev in levels)
        clasp = ClaspSpec(
            slot=slot,
            gap_enter=g_e,
            gap_exit=g_x,
            weave=flags_in + flags_in[::-1],
            clasp_sign=1,
            framing=-signs[ev_idx],
        )
        changes.append(ChangeRecord(ev_idx, h1, h2, clasp))
    presentation = ClaspPresentation(w, tuple(c.clasp for c in changes), name="normalized")
    orientation = "Reversed" if (input_reversed != use_backward) else "Standard"
    return NormalizeResult(presentation, orientation, tuple(changes), downhill_word)


def random_annular_word(n: int, seed: int) -> AnnularWord:
    """Deterministic single-component word of winding n, wrapping n, n+2 or n+4.

    Starts from the cable skeleton and splices in up to two seam fingers
    (a strand diverted backwards through the seam and re-joined, raising the
    wrapping by two and creating returning arcs), with random over/under
    flags everywhere and random extra crossing pairs.
    """

    class _S:
        __slots__ = ("orient",)

        def __init__(self, orient: int):
            self.orient = orient

    rng = random.Random(("annular", n, seed).__repr__())
    fingers = rng.randint(0, 2)
    etas = [_S(1) for _ in range(n)]
    finger_pairs = []
    seam_order: list[_S] = list(etas)
    for _ in range(fingers):
        t_in, t_out = _S(1), _S(-1)
        gap = rng.randint(0, len(seam_order))
        seam_order[gap:gap] = [t_in, t_out]
        finger_pairs.append((t_in, t_out))

    stack = list(seam_order)
    events: list[Cross | Cup | Cap | Kink] = []

    def idx(s: _S) -> int:
        return next(i for i, t in enumerate(stack) if t is s)

    def cross(lower_index: int) -> None:
        events.append(Cross(lower_index + 1, rng.random() < 0.5))
        stack[lower_index], stack[lower_index + 1] = (
            stack[lower_index + 1],
            stack[lower_index],
        )

    def move_adjacent(s: _S, target: _S) -> None:
        while abs(idx(s) - idx(target)) > 1:
            i = idx(s)
            cross(i if idx(target) > i else i - 1)

    def move_to(s: _S, target_index: int) -> None:
        while idx(s) != target_index:
            i = idx(s)
            cross(i if target_index > i else i - 1)

    home = {s: i for i, s in enumerate(seam_order)}
    pending = {s for pair in finger_pairs for s in pair}
    for t_in, t_out in finger_pairs:
        pending -= {t_in, t_out}
        victim = rng.choice([s for s in stack if s.orient == 1 and s not in pending and s is not t_in])
        move_adjacent(victim, t_out)
        lower = victim if idx(victim) < idx(t_out) else t_out
        lower_i = idx(lower)
        events.append(Cap(lower_i + 1))
        del stack[lower_i : lower_i + 2]
        home[t_in] = home.pop(victim)
        home.pop(t_out)
        # The splice strand takes over the victim's slot in seam order.
        move_to(t_in, sum(1 for s in stack if s is not t_in and home[s] < home[t_in]))

    # One-shift braid with random flags, finger-free stack of n strands.
    mover = stack[0]
    for _ in range(n - 1):
        cross(idx(mover))
    # Random extra crossing pairs keep the permutation but add crossings.
    for _ in range(rng.randint(0, 4)):
        p = rng.randint(0, n - 2)
        cross(p)
        cross(p)

    # Re-birth the finger pairs at their seam heights, bottom-up.
    for t_in, t_out in sorted(finger_pairs, key=lambda pair: seam_order.index(pair[0])):
        at = seam_order.index(t_in)
        w_in, w_out = _S(1), _S(-1)
        events.append(Cup(at + 1, 1))
        stack[at:at] = [w_in, w_out]

    word = AnnularWord(
        tuple(s.orient for s in seam_order), tuple(events), (("pattern", 1),)
    )
    ana = analyze(word)
    assert len(ana.components) == 1 and ana.components[0].winding == n
    return word
