"""Exact Mondrian search over the n x n square.

A tiling is a set of pairwise incongruent integer-sided rectangles covering
the square exactly; its defect is max piece area minus min piece area.  The
solver finds the minimum defect by iterating candidate defects and running an
exact-cover backtracker over candidate piece sets.  The board lives in a
single Python integer used as a bitboard, one bit per cell in row-major
order, so "find the first uncovered cell" is a couple of bit operations and a
placement test is one shift and one AND.

Key search facts the code relies on:

* The first empty cell in row-major order must be the top-left corner of the
  piece covering it (everything above and to its left is already covered),
  so each tiling is generated exactly once.
* The defect of a tiling equals the spread (max - min) of its piece-area
  multiset, so candidate defect w only ever needs piece sets whose area
  spread is exactly w; smaller spreads were exhausted at earlier w.
* Reflecting a tiling in the main diagonal preserves validity, incongruence
  and defect, so the piece placed at cell (0, 0) may be restricted to
  width >= height without losing any achievable defect.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import BudgetExceededError
from .numtheory import FactorTable, _divisor_tau_pairs, _factorize, witness_report

__all__ = [
    "Rect",
    "Placement",
    "Tiling",
    "VerificationReport",
    "PerfectVerdict",
    "PerfectCheckOutcome",
    "canonical_rect",
    "rects_with_area",
    "enumerate_piece_sets",
    "exact_cover_tile",
    "verify_tiling",
    "scale_tiling",
    "solve_m",
    "check_perfect",
    "tiling_to_json",
    "tiling_from_json",
]

DEFAULT_NODE_BUDGET = 10**8


@dataclass(frozen=True, order=True)
class Rect:
    """A congruence class of integer rectangles, stored short side first."""

    w: int
    h: int

    def __post_init__(self) -> None:
        if not 1 <= self.w <= self.h:
            raise ValueError(f"rectangle sides must satisfy 1 <= w <= h, got {self.w}x{self.h}")

    @property
    def area(self) -> int:
        return self.w * self.h


def canonical_rect(a: int, b: int) -> Rect:
    """The congruence class of an a x b rectangle."""
    if a < 1 or b < 1:
        raise ValueError(f"sides must be positive, got {a}x{b}")
    return Rect(min(a, b), max(a, b))


@dataclass(frozen=True)
class Placement:
    """One rectangle pinned to the grid by its top-left cell.

    ``rotated`` means the long side runs horizontally.
    """

    rect: Rect
    x: int
    y: int
    rotated: bool = False

    @property
    def width(self) -> int:
        return self.rect.h if self.rotated else self.rect.w

    @property
    def height(self) -> int:
        return self.rect.w if self.rotated else self.rect.h


@dataclass(frozen=True)
class Tiling:
    """A claimed tiling of the n x n square; ``verify_tiling`` re-derives everything."""

    n: int
    placements: tuple[Placement, ...]
    defect: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "placements", tuple(self.placements))


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    defect: int
    min_area: int
    max_area: int
    reason: str | None = None


class PerfectVerdict(Enum):
    FILTER_EXCLUDED = "FilterExcluded"
    EXHAUSTED = "Exhausted"
    PERFECT_FOUND = "PerfectFound"


@dataclass(frozen=True)
class PerfectCheckOutcome:
    """Answer to "does the n x n square admit an equal-area tiling?"."""

    n: int
    verdict: PerfectVerdict
    witness_d: int | None
    certificate: Tiling | None
    nodes_searched: int


def rects_with_area(d: int, n: int) -> list[Rect]:
    """All congruence classes with area d fitting inside n, ascending short side."""
    if d < 1 or n < 1:
        raise ValueError(f"d and n must be positive, got d={d}, n={n}")
    out = []
    for w in range(1, math.isqrt(d) + 1):
        if d % w == 0 and d // w <= n:
            out.append(Rect(w, d // w))
    return out


def _area_candidates(n: int, lo: int, hi: int) -> list[Rect]:
    """Fitting rects with area in [lo, hi], largest area first, then lexicographic."""
    cands: list[Rect] = []
    for area in range(hi, lo - 1, -1):
        cands.extend(rects_with_area(area, n))
    return cands


def enumerate_piece_sets(n: int, lo: int, hi: int) -> Iterator[tuple[Rect, ...]]:
    """Every set of distinct fitting rects with areas in [lo, hi] summing to n².

    Deterministic order: sets appear in lexicographic order of the candidate
    list sorted by descending area then short side.  Distinct rects may share
    an area (1x6 and 2x3 both count as area 6).
    """
    if not 1 <= lo <= hi <= n * n:
        raise ValueError(f"need 1 <= lo <= hi <= n^2, got lo={lo}, hi={hi}, n={n}")
    cands = _area_candidates(n, lo, hi)
    areas = [r.area for r in cands]
    suffix = [0] * (len(cands) + 1)
    for i in range(len(cands) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + areas[i]
    chosen: list[Rect] = []

    def rec(start: int, remaining: int) -> Iterator[tuple[Rect, ...]]:
        if remaining == 0:
            yield tuple(chosen)
            return
        for j in range(start, len(cands)):
            if areas[j] > remaining:
                continue
            if suffix[j] < remaining:
                return
            chosen.append(cands[j])
            yield from rec(j + 1, remaining - areas[j])
            chosen.pop()

    yield from rec(0, n * n)


def _piece_sets_with_spread(n: int, lo: int, hi: int) -> Iterator[tuple[Rect, ...]]:
    """Like enumerate_piece_sets but keeping only sets whose area range is exactly [lo, hi]."""
    cands = _area_candidates(n, lo, hi)
    if not cands or cands[0].area != hi or cands[-1].area != lo:
        return
    areas = [r.area for r in cands]
    suffix = [0] * (len(cands) + 1)
    for i in range(len(cands) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + areas[i]
    chosen: list[Rect] = []

    def rec(start: int, remaining: int, has_hi: bool, has_lo: bool) -> Iterator[tuple[Rect, ...]]:
        if remaining == 0:
            if has_hi and has_lo:
                yield tuple(chosen)
            return
        if not has_lo and remaining < lo:
            return
        for j in range(start, len(cands)):
            a = areas[j]
            if not has_hi and a < hi:
                return
            if a > remaining:
                continue
            if suffix[j] < remaining:
                return
            chosen.append(cands[j])
            yield from rec(j + 1, remaining - a, has_hi or a == hi, has_lo or a == lo)
            chosen.pop()

    yield from rec(0, n * n, False, False)


def _base_mask(n: int, width: int, height: int) -> int:
    row = (1 << width) - 1
    mask = 0
    for r in range(height):
        mask |= row << (r * n)
    return mask


def _sorted_pieces(pieces: Iterable[Rect]) -> tuple[Rect, ...]:
    return tuple(sorted(pieces, key=lambda r: (-r.area, r.w, r.h)))


class _CoverSearch:
    """One exact-cover run: place every piece exactly once, first found wins."""

    def __init__(self, n: int, pieces: tuple[Rect, ...], budget: int | None = None):
        self.n = n
        self.pieces = pieces
        self.budget = budget
        self.nodes = 0
        self.orients: list[list[tuple[int, int, int, bool]]] = []
        for r in pieces:
            variants = [(r.w, r.h, _base_mask(n, r.w, r.h), False)]
            if r.w != r.h:
                variants.append((r.h, r.w, _base_mask(n, r.h, r.w), True))
            self.orients.append(variants)

    def search(self) -> Tiling | None:
        n = self.n
        full = (1 << (n * n)) - 1
        piece_count = len(self.pieces)
        orients = self.orients
        budget = self.budget
        out: list[Placement] = []

        def rec(occ: int, used: int) -> bool:
            if occ == full:
                return True
            cell = ((~occ) & (occ + 1)).bit_length() - 1
            x = cell % n
            max_w = n - x
            max_h = n - cell // n
            at_root = occ == 0
            for idx in range(piece_count):
                if used & (1 << idx):
                    continue
                for width, height, base, rot in orients[idx]:
                    if width > max_w or height > max_h:
                        continue
                    if at_root and width < height:
                        continue  # a diagonal reflection supplies the other orientation
                    self.nodes += 1
                    if budget is not None and self.nodes > budget:
                        raise BudgetExceededError(
                            f"node budget {budget} exhausted", nodes=self.nodes
                        )
                    mask = base << cell
                    if mask & occ:
                        continue
                    out.append(Placement(self.pieces[idx], x, cell // n, rot))
                    if rec(occ | mask, used | (1 << idx)):
                        return True
                    out.pop()
            return False

        if not rec(0, 0):
            return None
        areas = [p.rect.area for p in out]
        return Tiling(n=n, placements=tuple(out), defect=max(areas) - min(areas))


def exact_cover_tile(
    n: int, pieces: Iterable[Rect], *, node_budget: int | None = None
) -> Tiling | None:
    """Tile the n x n square using each piece exactly once, or None.

    Each piece may be used in either orientation.  The result is a
    deterministic function of (n, pieces).
    """
    plist = _sorted_pieces(pieces)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if len(set(plist)) != len(plist):
        raise ValueError("pieces must be pairwise incongruent")
    if any(r.h > n for r in plist):
        raise ValueError("every piece must fit inside the square")
    total = sum(r.area for r in plist)
    if total != n * n:
        raise ValueError(f"piece areas sum to {total}, expected {n * n}")
    return _CoverSearch(n, plist, budget=node_budget).search()


def _placement_mask(n: int, p: Placement) -> int:
    return _base_mask(n, p.width, p.height) << (p.y * n + p.x)


def verify_tiling(t: Tiling) -> VerificationReport:
    """Recheck a claimed tiling from scratch; never raises.

    Failure reasons, in the order tested: out-of-bounds, congruent-pair,
    overlap, gap.  The reported defect is always recomputed from the
    placements, independent of the ``defect`` field on the input.
    """
    areas = [p.rect.area for p in t.placements]
    min_area = min(areas) if areas else 0
    max_area = max(areas) if areas else 0
    defect = max_area - min_area

    def fail(reason: str) -> VerificationReport:
        return VerificationReport(False, defect, min_area, max_area, reason)

    n = t.n
    if n < 1:
        return fail("out-of-bounds")
    for p in t.placements:
        if p.x < 0 or p.y < 0 or p.x + p.width > n or p.y + p.height > n:
            return fail("out-of-bounds")
    rect_classes = [p.rect for p in t.placements]
    if len(set(rect_classes)) != len(rect_classes):
        return fail("congruent-pair")
    occupied = 0
    for p in t.placements:
        mask = _placement_mask(n, p)
        if occupied & mask:
            return fail("overlap")
        occupied |= mask
    if occupied != (1 << (n * n)) - 1:
        return fail("gap")
    return VerificationReport(True, defect, min_area, max_area, None)


def scale_tiling(t: Tiling, k: int) -> Tiling:
    """Blow a valid tiling up by an integer factor k; defect scales by k²."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    report = verify_tiling(t)
    if not report.valid:
        raise ValueError(f"input tiling is invalid ({report.reason})")
    scaled = tuple(
        Placement(Rect(p.rect.w * k, p.rect.h * k), p.x * k, p.y * k, p.rotated)
        for p in t.placements
    )
    return Tiling(n=t.n * k, placements=scaled, defect=report.defect * k * k)


def solve_m(n: int, node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[int, Tiling]:
    """Minimum defect over all tilings of the n x n square by >= 2 incongruent rects.

    Iterates candidate defect w = 0, 1, 2, ... and, within each w, area
    windows [a, a+w] with a descending; a window only enumerates piece sets
    whose smallest and largest areas hit both endpoints, so every candidate
    set is searched exactly once, at the w equal to its spread.  The first w
    admitting a tiling is therefore the minimum, and the certificate returned
    with it verifies at that defect.

    Raises ``BudgetExceededError`` once ``node_budget`` placement attempts
    have been spent; the error carries the proven lower bound (the defect
    level being processed) and the trivial two-strip upper bound n(n-2).
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if node_budget < 1:
        raise ValueError(f"node_budget must be positive, got {node_budget}")
    target = n * n
    # availability prefix: cum[a] = total area of distinct fitting rects with area <= a
    cum = [0] * (target + 1)
    fitting: list[int] = [0] * (target + 1)
    for a in range(1, target + 1):
        fitting[a] = len(rects_with_area(a, n))
        cum[a] = cum[a - 1] + a * fitting[a]
    spent = 0
    trivial_bound = n * (n - 2)  # defect of the {1 x n, (n-1) x n} two-strip tiling
    for w in range(trivial_bound + 1):
        for a in range(target // 2, 0, -1):
            hi = a + w
            if hi > target or not fitting[a] or not fitting[hi]:
                continue
            if cum[hi] - cum[a - 1] < target:
                continue
            for pset in _piece_sets_with_spread(n, a, hi):
                if len(pset) < 2:
                    continue  # the untiled square itself is not a tiling
                engine = _CoverSearch(n, pset, budget=node_budget - spent)
                try:
                    found = engine.search()
                except BudgetExceededError:
                    spent += engine.nodes
                    raise BudgetExceededError(
                        f"node budget {node_budget} exhausted while testing defect {w} for n={n}",
                        nodes=spent,
                        lower_bound=w,
                        upper_bound=trivial_bound,
                    ) from None
                spent += engine.nodes
                if found is not None:
                    return w, found
    raise AssertionError("unreachable: the two-strip tiling bounds the defect")


def _perfect_candidates(
    n: int, t: FactorTable
) -> Iterator[tuple[int, int, list[Rect]]]:
    """(d, piece_count, rects) for each equal-area candidate, ascending d.

    A perfect tiling with piece area d needs d to be a proper divisor of n²
    with d*tau(d) >= n², and needs n²/d distinct congruence classes of area d
    fitting the square, which caps the piece count at ceil(tau(d)/2).
    """
    factors = _factorize(n, t.spf)
    n2 = n * n
    for d, tau_d in sorted(_divisor_tau_pairs(factors, square=True)):
        if d == n2 or d * tau_d < n2:
            continue
        s = n2 // d
        rects = rects_with_area(d, n)
        if s > len(rects):
            continue
        yield d, s, rects


def check_perfect(
    n: int, t: FactorTable, node_budget: int = DEFAULT_NODE_BUDGET
) -> PerfectCheckOutcome:
    """Decide whether the n x n square admits an equal-area (defect 0) tiling.

    If no proper divisor of n² satisfies d*tau(d) >= n², no such tiling can
    exist and the search is skipped entirely (FilterExcluded).  Otherwise
    every surviving divisor's piece-set combinations are tiled exhaustively:
    PerfectFound with a certificate, or Exhausted.
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if n > t.limit:
        raise ValueError(f"n={n} exceeds table limit {t.limit}")
    if node_budget < 1:
        raise ValueError(f"node_budget must be positive, got {node_budget}")
    report = witness_report(n, t)
    if report.p1:
        return PerfectCheckOutcome(n, PerfectVerdict.FILTER_EXCLUDED, None, None, 0)
    spent = 0
    candidates = list(_perfect_candidates(n, t))
    for i, (d, s, rects) in enumerate(candidates):
        for combo in itertools.combinations(rects, s):
            engine = _CoverSearch(n, _sorted_pieces(combo), budget=node_budget - spent)
            try:
                found = engine.search()
            except BudgetExceededError:
                spent += engine.nodes
                raise BudgetExceededError(
                    f"node budget {node_budget} exhausted at piece area {d} for n={n}",
                    nodes=spent,
                    unresolved=tuple(dd for dd, _, _ in candidates[i:]),
                ) from None
            spent += engine.nodes
            if found is not None:
                return PerfectCheckOutcome(
                    n, PerfectVerdict.PERFECT_FOUND, report.witness, found, spent
                )
    return PerfectCheckOutcome(n, PerfectVerdict.EXHAUSTED, report.witness, None, spent)


def tiling_to_json(t: Tiling) -> str:
    """Certificate JSON: {"n", "defect", "pieces": [{"w","h","x","y","rot"}...]}."""
    obj = {
        "n": t.n,
        "defect": t.defect,
        "pieces": [
            {"w": p.rect.w, "h": p.rect.h, "x": p.x, "y": p.y, "rot": p.rotated}
            for p in t.placements
        ],
    }
    return json.dumps(obj)


def tiling_from_json(source: str | bytes) -> Tiling:
    """Parse a certificate emitted by ``tiling_to_json`` (lossless round trip)."""
    obj = json.loads(source)
    try:
        n = obj["n"]
        defect = obj["defect"]
        pieces = obj["pieces"]
        if not isinstance(n, int) or not isinstance(defect, int):
            raise TypeError
        placements = []
        for item in pieces:
            w, h, x, y, rot = item["w"], item["h"], item["x"], item["y"], item["rot"]
            if not all(isinstance(v, int) for v in (w, h, x, y)) or not isinstance(rot, bool):
                raise TypeError
            placements.append(Placement(Rect(w, h), x, y, rot))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed tiling certificate: {source!r:.120}") from exc
    return Tiling(n=n, placements=tuple(placements), defect=defect)
