"""Cable-plus-clasps presentations of patterns and their compiler to annular words.

A presentation is the n-strand one-shift positive cable braid (one component,
``eta``, winding n) together with parameterized clasp gadgets. A gadget is a
closed curve crossing the seam twice with opposite signs (winding 0, wrapping
2): its enter strand weaves across the intermediate cable strands to meet its
exit strand at a cap, a cup re-births the pair, and the return weave restores
the seam heights. The framing field becomes a single kink, so each compiled
gadget carries framing exactly +1 or -1.

Gadget bookkeeping rules that keep incidental crossings balanced:

* weave flags apply only to crossings with ``eta`` strands; transit crossings
  with other gadgets' strands are weaver-over when the parked gadget has a
  smaller index and weaver-under otherwise (this asymmetry is what makes a
  cancelling pair's mutual lift linkings vanish identically);
* in the braid section ``eta`` strands always cross over parked gadget
  strands (once on the shifting strand's way up, once on the displaced
  strand's way down, with cancelling signs).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace

from .diagram import AnnularWord, Cap, Cross, Cup, Event, Kink, analyze


class PatternError(Exception):
    """Base class for presentation-level failures."""


class PatternSyntaxError(PatternError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class SlotOutOfRangeError(PatternError):
    pass


class GapOutOfRangeError(PatternError):
    pass


class WeaveLengthError(PatternError):
    pass


@dataclass(frozen=True)
class ClaspSpec:
    """One clasp gadget.

    ``gap_enter``/``gap_exit`` are gaps between cable strands (0 = below all,
    n = above all); ``weave`` holds one ``o``/``u`` flag per cable strand
    crossed on the full round trip, so its length is twice the gap distance;
    ``clasp_sign`` orients the gadget (the enter seam strand's direction).
    """

    slot: int
    gap_enter: int
    gap_exit: int
    weave: str
    clasp_sign: int = 1
    framing: int = -1

    def __post_init__(self):
        if self.slot < 0:
            raise SlotOutOfRangeError(f"slot {self.slot} is negative")
        if self.clasp_sign not in (-1, 1):
            raise PatternError(f"clasp sign must be +1 or -1, got {self.clasp_sign}")
        if self.framing not in (-1, 1):
            raise PatternError(f"framing must be +1 or -1, got {self.framing}")
        if any(ch not in "ou" for ch in self.weave):
            raise WeaveLengthError(f"weave {self.weave!r} may only contain 'o' and 'u'")
        d = abs(self.gap_exit - self.gap_enter)
        if len(self.weave) != 2 * d:
            raise WeaveLengthError(
                f"weave {self.weave!r} has {len(self.weave)} flags, "
                f"gap distance {d} needs {2 * d}"
            )


@dataclass(frozen=True)
class ClaspPresentation:
    n: int
    clasps: tuple[ClaspSpec, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.n < 2:
            raise PatternError(f"cable winding must be at least 2, got {self.n}")
        for c in self.clasps:
            for g in (c.gap_enter, c.gap_exit):
                if not 0 <= g <= self.n:
                    raise GapOutOfRangeError(f"gap {g} outside 0..{self.n}")


class _Strand:
    __slots__ = ("kind", "level", "clasp", "role", "orient")

    def __init__(self, kind: str, orient: int, level: int = 0, clasp: int = -1, role: str = ""):
        self.kind = kind  # "eta" | "clasp"
        self.level = level
        self.clasp = clasp
        self.role = role
        self.orient = orient


class _Assembler:
    def __init__(self, stack: list[_Strand]):
        self.stack = stack
        self.events: list[Event] = []

    def idx(self, s: _Strand) -> int:
        return next(i for i, t in enumerate(self.stack) if t is s)

    def cross_up(self, s: _Strand, s_over: bool) -> None:
        """Cross s with the strand directly above it."""
        i = self.idx(s)
        other = self.stack[i + 1]
        self.events.append(Cross(i + 1, upper_over=not s_over))
        self.stack[i], self.stack[i + 1] = other, s

    def cross_down(self, s: _Strand, s_over: bool) -> None:
        i = self.idx(s)
        other = self.stack[i - 1]
        self.events.append(Cross(i, upper_over=s_over))
        self.stack[i - 1], self.stack[i] = s, other

    def cap(self, lower: _Strand) -> None:
        i = self.idx(lower)
        self.events.append(Cap(i + 1))
        del self.stack[i : i + 2]

    def cup(self, at: int, lower: _Strand, upper: _Strand) -> None:
        self.events.append(Cup(at + 1, lower.orient))
        self.stack[at:at] = [lower, upper]

    def kink(self, s: _Strand, sign: int) -> None:
        self.events.append(Kink(self.idx(s) + 1, sign))


def _compile_word(n: int, clasps: tuple[ClaspSpec, ...]) -> AnnularWord:
    if n < 1:
        raise PatternError(f"cable winding must be at least 1, got {n}")
    # Seam stack, bottom to top: gap-0 strands, cable level 1, gap-1 strands,
    # ..., cable level n, gap-n strands. Within a gap: by clasp index, enter
    # below exit.
    gap_members: list[list[_Strand]] = [[] for _ in range(n + 1)]
    enters: list[_Strand] = []
    exits: list[_Strand] = []
    for i, c in enumerate(clasps):
        e = _Strand("clasp", c.clasp_sign, clasp=i, role="enter")
        x = _Strand("clasp", -c.clasp_sign, clasp=i, role="exit")
        enters.append(e)
        exits.append(x)
        gap_members[c.gap_enter].append((0, e))
        gap_members[c.gap_exit].append((1, x))
    etas = [_Strand("eta", 1, level=l) for l in range(1, n + 1)]
    seam_order: list[_Strand] = []
    for g in range(n + 1):
        if g > 0:
            seam_order.append(etas[g - 1])
        for _, s in sorted(
            ((role, s) for role, s in gap_members[g]), key=lambda rs: (rs[1].clasp, rs[0])
        ):
            seam_order.append(s)
    asm = _Assembler(list(seam_order))
    home = {s: i for i, s in enumerate(seam_order)}

    for i in sorted(range(len(clasps)), key=lambda i: (clasps[i].slot, i)):
        c = clasps[i]
        e, x = enters[i], exits[i]
        asm.kink(e, c.framing)
        d = abs(c.gap_exit - c.gap_enter)
        flags_in, flags_out = c.weave[:d], c.weave[d:]
        used = 0
        while abs(asm.idx(e) - asm.idx(x)) > 1:
            going_up = asm.idx(x) > asm.idx(e)
            neighbor = asm.stack[asm.idx(e) + 1] if going_up else asm.stack[asm.idx(e) - 1]
            if neighbor.kind == "eta":
                over = flags_in[used] == "o"
                used += 1
            else:
                assert neighbor.clasp != i
                over = neighbor.clasp < i  # transit: over earlier gadgets only
            (asm.cross_up if going_up else asm.cross_down)(e, over)
        assert used == d, "weave must cross each intermediate cable strand once"
        ascending = asm.idx(e) < asm.idx(x)
        lower = e if ascending else x
        at = asm.idx(lower)
        asm.cap(lower)
        e2 = _Strand("clasp", c.clasp_sign, clasp=i, role="enter")
        x2 = _Strand("clasp", -c.clasp_sign, clasp=i, role="exit")
        asm.cup(at, e2 if ascending else x2, x2 if ascending else e2)
        used = 0
        while asm.idx(e2) != home[e]:
            going_up = home[e] > asm.idx(e2)
            neighbor = asm.stack[asm.idx(e2) + 1] if going_up else asm.stack[asm.idx(e2) - 1]
            if neighbor.kind == "eta":
                over = flags_out[used] == "o"
                used += 1
            else:
                assert neighbor.clasp != i
                over = neighbor.clasp < i
            (asm.cross_up if going_up else asm.cross_down)(e2, over)
        assert used == d
        # The reborn pair now sits exactly where the seam expects it.
        home[e2], home[x2] = home.pop(e), home.pop(x)

    # Braid section: the bottom cable strand shifts over everything to the
    # top; every other cable strand steps down one level, re-crossing over the
    # parked gadget strands of the gap it lands above.
    mover = etas[0]
    for l in range(1, n):
        passed = 0
        while True:
            above = asm.stack[asm.idx(mover) + 1]
            if above.kind == "eta":
                break
            asm.cross_up(mover, True)  # cable over gadget
            passed += 1
        descending = asm.stack[asm.idx(mover) + 1]
        asm.cross_up(mover, True)  # positive cable crossing: shifting strand over
        for _ in range(passed):
            asm.cross_down(descending, True)  # cable over gadget

    orientations = tuple(s.orient for s in seam_order)
    labels = [("eta", seam_order.index(etas[0]) + 1)]
    for i in range(len(clasps)):
        pos = next(
            h for h, s in enumerate(seam_order)
            if s.kind == "clasp" and s.clasp == i and s.role == "enter"
        )
        labels.append((f"L{i + 1}", pos + 1))
    word = AnnularWord(orientations, tuple(asm.events), tuple(labels))
    analyze(word)  # structural self-check; raises on assembler bugs
    return word


def cable_template(n: int) -> AnnularWord:
    """The (n,1)-cable word: one component ``eta`` of winding n."""
    return _compile_word(n, ())


def compile(p: ClaspPresentation) -> AnnularWord:
    """Compile a presentation to an annular word with components eta, L1..Lk."""
    return _compile_word(p.n, p.clasps)


@dataclass(frozen=True)
class ValidationItem:
    name: str
    component: str
    ok: bool
    warning: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    items: tuple[ValidationItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.ok or item.warning for item in self.items)

    def failures(self) -> tuple[ValidationItem, ...]:
        return tuple(i for i in self.items if not i.ok and not i.warning)

    def warnings(self) -> tuple[ValidationItem, ...]:
        return tuple(i for i in self.items if not i.ok and i.warning)


def validate(word: AnnularWord) -> ValidationReport:
    """Check the surgery-curve contracts on a word with a component named eta.

    Hard checks per labeled non-eta component L: winding(L) = 0,
    linking(L, eta) = 0, framing(L) in {+1, -1}. Advisory warnings:
    wrapping(L) != 2 and nonzero mutual gadget linkings.
    """
    ana = analyze(word)
    labels = ana.labels()
    eta = ana.component_by_name("eta")
    surgery = [(cid, name) for cid, name in sorted(labels.items()) if name != "eta"]
    items: list[ValidationItem] = []
    for cid, name in surgery:
        w = ana.winding(cid)
        items.append(
            ValidationItem("WindingNonzero", name, w == 0, False, f"winding {w}")
        )
        lk = ana.linking(cid, eta)
        items.append(
            ValidationItem("EtaLinkingNonzero", name, lk == 0, False, f"linking with eta {lk}")
        )
        fr = ana.framing(cid)
        items.append(
            ValidationItem("FramingNotUnit", name, fr in (-1, 1), False, f"framing {fr}")
        )
        wr = ana.wrapping(cid)
        items.append(
            ValidationItem("WrappingNotTwo", name, wr == 2, True, f"wrapping {wr}")
        )
    for a in range(len(surgery)):
        for b in range(a + 1, len(surgery)):
            lk = ana.linking(surgery[a][0], surgery[b][0])
            items.append(
                ValidationItem(
                    "ClaspClaspLinking",
                    f"{surgery[a][1]},{surgery[b][1]}",
                    lk == 0,
                    True,
                    f"mutual linking {lk}",
                )
            )
    return ValidationReport(tuple(items))


def add_cancelling_pair(p: ClaspPresentation, template: ClaspSpec) -> ClaspPresentation:
    """Append two parallel copies of ``template`` with opposite sign and framing.

    Surgery on the pair cancels, so every downstream linking number is
    unchanged; this is the differential-testing hook.
    """
    twin = replace(template, clasp_sign=-template.clasp_sign, framing=-template.framing)
    return replace(p, clasps=p.clasps + (template, twin))


def random_presentation(n: int, k: int, seed: int) -> ClaspPresentation:
    """Deterministic generator of valid presentations (balanced weaves)."""
    rng = random.Random(("presentation", n, k, seed).__repr__())
    clasps = []
    for i in range(k):
        g1 = rng.randint(0, n)
        g2 = rng.randint(0, n)
        d = abs(g2 - g1)
        flags_in = "".join(rng.choice("ou") for _ in range(d))
        clasps.append(
            ClaspSpec(
                slot=i,
                gap_enter=g1,
                gap_exit=g2,
                weave=flags_in + flags_in[::-1],
                clasp_sign=rng.choice((-1, 1)),
                framing=rng.choice((-1, 1)),
            )
        )
    return ClaspPresentation(n, tuple(clasps), name=f"random-n{n}-k{k}-s{seed}")


# ---------------------------------------------------------------------------
# Text DSL and JSON mirror


_HEADER = "pattern v1"


def serialize(p: ClaspPresentation) -> str:
    lines = [_HEADER]
    if p.name:
        lines.append(f"name {p.name}")
    lines.append(f"cable {p.n}")
    for c in p.clasps:
        parts = [f"clasp slot {c.slot} enter {c.gap_enter} exit {c.gap_exit}"]
        if c.weave:
            parts.append(f"weave {c.weave}")
        parts.append(f"sign {'+' if c.clasp_sign == 1 else '-'}")
        parts.append(f"framing {'+1' if c.framing == 1 else '-1'}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse(text: str) -> ClaspPresentation:
    name = ""
    n: int | None = None
    clasps: list[ClaspSpec] = []
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if not saw_header:
            if line != _HEADER:
                raise PatternSyntaxError(f"expected {_HEADER!r} header", lineno)
            saw_header = True
            continue
        if toks[0] == "name":
            if len(toks) != 2:
                raise PatternSyntaxError("usage: name NAME", lineno)
            name = toks[1]
        elif toks[0] == "cable":
            if n is not None:
                raise PatternSyntaxError("duplicate cable line", lineno)
            if len(toks) != 2 or not toks[1].lstrip("-").isdigit():
                raise PatternSyntaxError("usage: cable N", lineno)
            n = int(toks[1])
        elif toks[0] == "clasp":
            if n is None:
                raise PatternSyntaxError("cable line must precede clasps", lineno)
            fields: dict[str, str] = {}
            if len(toks) % 2 == 0:
                raise PatternSyntaxError("clasp takes key-value pairs", lineno)
            for key, val in zip(toks[1::2], toks[2::2]):
                if key in fields:
                    raise PatternSyntaxError(f"duplicate clasp key {key!r}", lineno)
                fields[key] = val
            unknown = set(fields) - {"slot", "enter", "exit", "weave", "sign", "framing"}
            if unknown:
                raise PatternSyntaxError(f"unknown clasp keys {sorted(unknown)}", lineno)
            try:
                sign_tok = fields.get("sign", "+")
                if sign_tok not in "+-" or not sign_tok:
                    raise ValueError(f"sign must be + or -, got {sign_tok!r}")
                clasps.append(
                    ClaspSpec(
                        slot=int(fields["slot"]),
                        gap_enter=int(fields["enter"]),
                        gap_exit=int(fields["exit"]),
                        weave=fields.get("weave", ""),
                        clasp_sign=1 if sign_tok == "+" else -1,
                        framing=int(fields.get("framing", "-1")),
                    )
                )
            except (KeyError, ValueError, PatternError) as exc:
                raise PatternSyntaxError(str(exc), lineno) from exc
        else:
            raise PatternSyntaxError(f"unknown directive {toks[0]!r}", lineno)
    if not saw_header:
        raise PatternSyntaxError(f"missing {_HEADER!r} header", 1)
    if n is None:
        raise PatternSyntaxError("missing cable line", 1)
    try:
        return ClaspPresentation(n, tuple(clasps), name=name)
    except PatternError as exc:
        raise PatternSyntaxError(str(exc), 1) from exc


def to_json(p: ClaspPresentation) -> str:
    doc = {
        "pattern": "v1",
        "name": p.name,
        "cable": p.n,
        "clasps": [
            {
                "slot": c.slot,
                "enter": c.gap_enter,
                "exit": c.gap_exit,
                "weave": c.weave,
                "sign": c.clasp_sign,
                "framing": c.framing,
            }
            for c in p.clasps
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def from_json(text: str) -> ClaspPresentation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PatternSyntaxError(f"invalid JSON: {exc}", exc.lineno) from exc
    if not isinstance(doc, dict) or doc.get("pattern") != "v1":
        raise PatternSyntaxError('expected {"pattern": "v1", ...}', 1)
    try:
        clasps = tuple(
            ClaspSpec(
                slot=int(c["slot"]),
                gap_enter=int(c["enter"]),
                gap_exit=int(c["exit"]),
                weave=str(c.get("weave", "")),
                clasp_sign=int(c.get("sign", 1)),
                framing=int(c.get("framing", -1)),
            )
            for c in doc.get("clasps", [])
        )
        return ClaspPresentation(int(doc["cable"]), clasps, name=str(doc.get("name", "")))
    except (KeyError, TypeError, ValueError, PatternError) as exc:
        raise PatternSyntaxError(str(exc), 1) from exc
