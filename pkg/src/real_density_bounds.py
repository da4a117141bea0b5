# real_density_bounds.py
"""
Real density of binary quartics: 1 - rho(inf) is the chance that a quartic with
coefficients uniform in [-1, 1] is negative definite
Rigorous bounds come from an exact dyadic branch-and-bound over boxes of coefficients;
Monte Carlo estimates cover both the plain and the generalized model
"""

import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from errors import CertificateError, CheckpointError, DomainError, ResourceError
from exact_math import (
    DEFAULT_PRECISION, Dyadic, DyadicInterval, as_fraction, format_decimal,
    negative_on_positive_halfline,
)
from local_density_recursion import ModelKind
from settings import SETTINGS

logger = logging.getLogger(__name__)

CHECKPOINT_VERSION = 'locsol-ckpt v1'
CLASSIFY_CHUNK = 2048
MC_BLOCK_SIZE = 1 << 16
CUBE_VOLUME = 32


class BoxVerdict(Enum):
    ALL_NEG_DEF = 'all'
    NONE_NEG_DEF = 'none'
    UNDECIDED = 'undecided'


class BoundsMethod(Enum):
    PLAIN5D = 'plain5d'
    SCALED4D = 'scaled4d'


@dataclass(frozen=True)
class Quartic5:
    """a x^4 + b x^3 + c x^2 + d x + e with exact rational coefficients"""
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction

    def __post_init__(self):
        for name in 'abcde':
            object.__setattr__(self, name, as_fraction(getattr(self, name)))

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return (self.a, self.b, self.c, self.d, self.e)


# ---------------------------------------------------------------------------
# No-real-roots criterion
# ---------------------------------------------------------------------------

def discriminant(a, b, c, d, e):
    """Discriminant of a x^4 + b x^3 + c x^2 + d x + e; works on exact scalars and numpy arrays"""
    return (256 * a**3 * e**3 - 192 * a**2 * b * d * e**2 - 128 * a**2 * c**2 * e**2
            + 144 * a**2 * c * d**2 * e - 27 * a**2 * d**4 + 144 * a * b**2 * c * e**2
            - 6 * a * b**2 * d**2 * e - 80 * a * b * c**2 * d * e + 18 * a * b * c * d**3
            + 16 * a * c**4 * e - 4 * a * c**3 * d**2 - 27 * b**4 * e**2 + 18 * b**3 * c * d * e
            - 4 * b**3 * d**3 - 4 * b**2 * c**3 * e + b**2 * c**2 * d**2)


def _criterion(a, b, c, d, e):
    delta = discriminant(a, b, c, d, e)
    h = 8 * a * c - 3 * b**2
    q = 3 * b**4 - 16 * a * b**2 * c + 16 * a**2 * c**2 + 16 * a**2 * b * d - 64 * a**3 * e
    return delta, h, q


def criterion_quantities(f: Quartic5) -> Tuple[Fraction, Fraction, Fraction]:
    """(Delta, H, Q) evaluated exactly"""
    return _criterion(*f.coefficients)


def no_real_roots(f: Quartic5) -> bool:
    if f.a == 0:
        raise DomainError("No-real-roots criterion needs a nonzero leading coefficient")
    delta, h, q = criterion_quantities(f)
    return delta > 0 and (h > 0 or q < 0)


def is_negative_definite(f: Quartic5) -> bool:
    """a < 0 and no real roots; a = 0 counts as not negative definite"""
    if f.a >= 0:
        return False
    return no_real_roots(f)


def symmetry_images(f: Quartic5) -> List[Quartic5]:
    """Coefficient reversal and x -> -x, both preserving negative definiteness"""
    a, b, c, d, e = f.coefficients
    return [Quartic5(e, d, c, b, a), Quartic5(a, -b, c, -d, e)]


def negative_definite_mask(coefficients: np.ndarray) -> np.ndarray:
    """Vectorised float version of is_negative_definite over rows (a, b, c, d, e)"""
    a, b, c, d, e = (coefficients[:, i] for i in range(5))
    delta, h, q = _criterion(a, b, c, d, e)
    return (a < 0) & (delta > 0) & ((h > 0) | (q < 0))


# ---------------------------------------------------------------------------
# Boxes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DyadicBox:
    """Box l <= (a, b, c, d, e) <= u; fixed_face = (index, sign) pins one coordinate to +-1"""
    l: Tuple[Dyadic, ...]
    u: Tuple[Dyadic, ...]
    fixed_face: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        object.__setattr__(self, 'l', tuple(Dyadic.from_fraction(x) for x in self.l))
        object.__setattr__(self, 'u', tuple(Dyadic.from_fraction(x) for x in self.u))
        if len(self.l) != 5 or len(self.u) != 5:
            raise DomainError("A box needs five lower and five upper bounds")
        if any(lo > hi for lo, hi in zip(self.l, self.u)):
            raise DomainError(f"Box has l > u: {self}")
        if self.fixed_face is not None:
            index, sign = self.fixed_face
            if sign not in (1, -1) or not self.l[index] == self.u[index] == Dyadic(sign):
                raise DomainError(f"Fixed coordinate {index} must equal {sign} at both ends")

    @classmethod
    def from_integers(cls, k: int, l: Sequence[int], u: Sequence[int],
                      fixed_face: Tuple[int, int] = None) -> 'DyadicBox':
        return cls(tuple(Dyadic(x, -k) for x in l), tuple(Dyadic(x, -k) for x in u), fixed_face)

    def to_integers(self) -> Tuple[int, Tuple[int, ...], Tuple[int, ...]]:
        """(k, l, u) with every bound equal to an integer over 2^k"""
        k = max(0, max(-x.exponent for x in self.l + self.u))
        return (k, tuple(x.scaled_numerator(-k) for x in self.l),
                tuple(x.scaled_numerator(-k) for x in self.u))

    def volume(self) -> Fraction:
        """Volume in the free coordinates"""
        total = Fraction(1)
        for i, (lo, hi) in enumerate(zip(self.l, self.u)):
            if self.fixed_face is None or i != self.fixed_face[0]:
                total *= (hi - lo).to_fraction()
        return total

    def bisect(self) -> Tuple['DyadicBox', 'DyadicBox']:
        k, l, u = self.to_integers()
        (k, l1, u1), (_, l2, u2) = _bisect_ints(k, l, u)
        return (DyadicBox.from_integers(k, l1, u1, self.fixed_face),
                DyadicBox.from_integers(k, l2, u2, self.fixed_face))

    def contains(self, f: Quartic5) -> bool:
        return all(lo.to_fraction() <= x <= hi.to_fraction()
                   for lo, x, hi in zip(self.l, f.coefficients, self.u))


def _bisect_ints(k: int, l: Sequence[int], u: Sequence[int]):
    """Halve the longest edge (lowest index on ties) at its dyadic midpoint"""
    widths = [hi - lo for lo, hi in zip(l, u)]
    i = max(range(5), key=lambda j: (widths[j], -j))
    if (l[i] + u[i]) % 2:
        k += 1
        l = [2 * x for x in l]
        u = [2 * x for x in u]
    mid = (l[i] + u[i]) // 2
    left_u = list(u)
    left_u[i] = mid
    right_l = list(l)
    right_l[i] = mid
    return (k, tuple(l), tuple(left_u)), (k, tuple(right_l), tuple(u))


def _classify_corners(l: Sequence[int], u: Sequence[int]) -> BoxVerdict:
    """Verdict for the box l <= (a..e) <= u given as integers over a common power of two"""
    l0, l1, l2, l3, l4 = l
    u0, u1, u2, u3, u4 = u

    # cheap witnesses of a non-negative value: a >= 0, f(0) >= 0, f_l(1) >= 0, f_s(-1) >= 0
    if l0 >= 0 or l4 >= 0:
        return BoxVerdict.NONE_NEG_DEF
    if l0 + l1 + l2 + l3 + l4 >= 0 or l0 - u1 + l2 - u3 + l4 >= 0:
        return BoxVerdict.NONE_NEG_DEF

    # f <= f_u on x >= 0 and f <= f_t on x <= 0, t = (u0, l1, u2, l3, u4)
    if u0 < 0 and u4 < 0:
        if (negative_on_positive_halfline([u4, u3, u2, u1, u0])
                and negative_on_positive_halfline([u4, -l3, u2, -l1, u0])):
            return BoxVerdict.ALL_NEG_DEF

    # f >= f_l on x >= 0 and f >= f_s on x <= 0, s = (l0, u1, l2, u3, l4)
    if (not negative_on_positive_halfline([l4, l3, l2, l1, l0])
            or not negative_on_positive_halfline([l4, -u3, l2, -u1, l0])):
        return BoxVerdict.NONE_NEG_DEF
    return BoxVerdict.UNDECIDED


def classify_box(box: DyadicBox) -> BoxVerdict:
    _, l, u = box.to_integers()
    return _classify_corners(l, u)


def _classify_chunk(boxes: List[Tuple[Tuple[int, ...], Tuple[int, ...]]]) -> List[BoxVerdict]:
    return [_classify_corners(l, u) for l, u in boxes]


# ---------------------------------------------------------------------------
# Branch and bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """
    A region searched by branch and bound; index/sign pin one coordinate in the scaled method
    On a scaled face the half-spaces a > 0 and e > 0 are left out of the search (f(1, 0) or f(0, 1)
    is positive there), and a mirrored face only searches b >= 0, counting each box twice
    """
    name: str
    index: Optional[int]
    sign: int
    weight: int
    mirrored: bool = False

    @property
    def volume_exponent(self) -> int:
        return 5 if self.index is None else 4

    def start_box(self) -> Tuple[int, Tuple[int, ...], Tuple[int, ...]]:
        l = [-1] * 5
        u = [1] * 5
        if self.index is not None:
            l[self.index] = u[self.index] = self.sign
            for i in (0, 4):
                if i != self.index:
                    u[i] = 0
            if self.mirrored:
                l[1] = 0
        return 0, tuple(l), tuple(u)

    @property
    def start_exponent(self) -> int:
        """log2 of the volume the start box stands for"""
        _, l, u = self.start_box()
        return sum(1 for lo, hi in zip(l, u) if hi - lo == 2) + int(self.mirrored)

    def trimmed_volume(self) -> Dyadic:
        """Face volume settled as not negative definite before the search starts"""
        return Dyadic(1, self.volume_exponent) - Dyadic(1, self.start_exponent)

    def box_volume(self, level: int) -> Dyadic:
        return Dyadic(1, self.start_exponent - level)


# The scaled method splits the cube by which coefficient has the largest absolute value
# and its sign; homogeneity turns each piece into a 4D face weighted by 1/5.
# Reversal maps a=-1 to e=-1 and x -> -x with reversal maps b=+1 to b=-1, d=+1, d=-1.
# Faces a=+1 and e=+1 hold no negative definite quartics.
# x -> -x fixes a, c and e and flips the signs of b and d, so it maps a-, c+ and c- onto themselves.
FACES = {
    BoundsMethod.PLAIN5D: (Face('cube', None, 0, 1),),
    BoundsMethod.SCALED4D: (
        Face('a-', 0, -1, 2, mirrored=True),
        Face('b+', 1, 1, 4),
        Face('c+', 2, 1, 1, mirrored=True),
        Face('c-', 2, -1, 1, mirrored=True),
    ),
}
SCALED_FACE_COUNT = 10


@dataclass
class FaceTally:
    v1: Dyadic = field(default_factory=lambda: Dyadic(0))
    v2: Dyadic = field(default_factory=lambda: Dyadic(0))
    undecided: Dyadic = field(default_factory=lambda: Dyadic(0))


@dataclass
class CheckpointState:
    """Everything needed to continue a bounds run after a completed level"""
    method: BoundsMethod
    depth: int
    processed: int
    tallies: Dict[str, FaceTally]
    pending: List[Tuple[str, int, int, Tuple[int, ...], Tuple[int, ...]]]

    def accounted_volume(self, face: Face) -> Dyadic:
        """v1 + v2 + undecided + pending volume; equals the face volume at every level"""
        tally = self.tallies[face.name]
        total = tally.v1 + tally.v2 + tally.undecided
        for name, level, _, _, _ in self.pending:
            if name == face.name:
                total = total + face.box_volume(level)
        return total


def save_checkpoint(path: str, state: CheckpointState) -> None:
    """Write the state as text, replacing any previous file only once fully written"""
    lines = [f"{CHECKPOINT_VERSION} method={state.method.value} depth={state.depth}",
             f"processed {state.processed}"]
    for name, tally in state.tallies.items():
        lines.append(f"v1 {name} {tally.v1.format()}")
        lines.append(f"v2 {name} {tally.v2.format()}")
        lines.append(f"undecided {name} {tally.undecided.format()}")
    for name, level, k, l, u in state.pending:
        bounds = ' '.join(Dyadic(x, -k).format() for x in tuple(l) + tuple(u))
        lines.append(f"box {name} {level} {bounds}")

    tmp = f"{path}.tmp"
    with open(tmp, 'w') as handle:
        handle.write('\n'.join(lines) + '\n')
    os.replace(tmp, path)
    logger.info(f"Checkpoint written to {path} ({len(state.pending)} pending boxes)")


def load_checkpoint(path: str) -> CheckpointState:
    try:
        with open(path) as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise CheckpointError(f"Cannot read checkpoint {path}: {exc}") from exc
    if not lines:
        raise CheckpointError(f"Checkpoint {path} is empty")

    header = lines[0].split()
    if ' '.join(header[:2]) != CHECKPOINT_VERSION or len(header) != 4:
        raise CheckpointError(f"Unrecognised checkpoint header {lines[0]!r}")
    try:
        method = BoundsMethod(header[2].removeprefix('method='))
        depth = int(header[3].removeprefix('depth='))
    except ValueError as exc:
        raise CheckpointError(f"Bad checkpoint header {lines[0]!r}") from exc

    face_names = {face.name for face in FACES[method]}
    tallies = {name: FaceTally() for name in face_names}
    processed = 0
    pending = []
    for number, line in enumerate(lines[1:], start=2):
        parts = line.split()
        try:
            if parts[0] == 'processed':
                processed = int(parts[1])
            elif parts[0] in ('v1', 'v2', 'undecided'):
                if parts[1] not in face_names:
                    raise ValueError(f"unknown face {parts[1]}")
                setattr(tallies[parts[1]], parts[0], Dyadic.parse(parts[2]))
            elif parts[0] == 'box':
                if parts[1] not in face_names or len(parts) != 13:
                    raise ValueError("malformed box")
                bounds = [Dyadic.parse(x) for x in parts[3:]]
                box = DyadicBox(bounds[:5], bounds[5:])
                k, l, u = box.to_integers()
                pending.append((parts[1], int(parts[2]), k, l, u))
            else:
                raise ValueError(f"unknown record {parts[0]}")
        except (ValueError, IndexError, DomainError) as exc:
            raise CheckpointError(f"{path} line {number}: {exc}") from exc

    state = CheckpointState(method, depth, processed, tallies, pending)
    for face in FACES[method]:
        if state.accounted_volume(face) != Dyadic(1, face.volume_exponent):
            raise CheckpointError(f"{path}: volumes on face {face.name} do not add up")
    return state


@dataclass
class BoundsReport:
    method: BoundsMethod
    depth: int
    v1: Fraction
    v2: Fraction
    undecided: Fraction
    faces: Dict[str, FaceTally]
    boxes_processed: int
    seconds: float = 0.0

    @property
    def rho_inf_lower(self) -> Fraction:
        return self.v2 / CUBE_VOLUME

    @property
    def rho_inf_upper(self) -> Fraction:
        return 1 - self.v1 / CUBE_VOLUME

    @property
    def width(self) -> Fraction:
        return self.rho_inf_upper - self.rho_inf_lower

    def check_accounting(self) -> None:
        if self.v1 + self.v2 + self.undecided != CUBE_VOLUME:
            raise CertificateError(f"Volumes {self.v1} + {self.v2} + {self.undecided} != 32")

    def enclosure(self, precision: int = DEFAULT_PRECISION) -> DyadicInterval:
        return DyadicInterval.from_bounds(self.rho_inf_lower, self.rho_inf_upper, precision)

    def to_dict(self, places: int = 6) -> dict:
        return {
            'method': self.method.value,
            'depth': self.depth,
            'v1': str(self.v1),
            'v2': str(self.v2),
            'undecided': str(self.undecided),
            'faces': {name: {'v1': t.v1.format(), 'v2': t.v2.format(), 'undecided': t.undecided.format()}
                      for name, t in self.faces.items()},
            'rho_inf_lower': str(self.rho_inf_lower),
            'rho_inf_upper': str(self.rho_inf_upper),
            'rho_inf_lower_decimal': format_decimal(self.rho_inf_lower, places, 'down'),
            'rho_inf_upper_decimal': format_decimal(self.rho_inf_upper, places, 'up'),
            'boxes_processed': self.boxes_processed,
        }


def _combine(method: BoundsMethod, tallies: Dict[str, FaceTally]) -> Tuple[Fraction, Fraction, Fraction]:
    """(v1, v2, undecided) as 5D volumes"""
    if method is BoundsMethod.PLAIN5D:
        tally = tallies['cube']
        return tally.v1.to_fraction(), tally.v2.to_fraction(), tally.undecided.to_fraction()

    # the scaled integral of x^4 over [0, 1] is 1/5
    negdef_lower = Fraction(0)
    undecided = Fraction(0)
    for face in FACES[method]:
        tally = tallies[face.name]
        negdef_lower += face.weight * tally.v1.to_fraction()
        undecided += face.weight * tally.undecided.to_fraction()
    v1 = negdef_lower / 5
    undecided = undecided / 5
    return v1, CUBE_VOLUME - v1 - undecided, undecided


def default_checkpoint_path(method: BoundsMethod, depth: int) -> str:
    return f"locsol-{method.value}-d{depth}.ckpt"


def _initial_state(method: BoundsMethod, depth: int) -> CheckpointState:
    pending = []
    for face in FACES[method]:
        k, l, u = face.start_box()
        pending.append((face.name, 0, k, l, u))
    tallies = {face.name: FaceTally(v2=face.trimmed_volume()) for face in FACES[method]}
    return CheckpointState(method, depth, 0, tallies, pending)


def run_bounds(depth: int, method: BoundsMethod = BoundsMethod.SCALED4D, workers: int = None,
               checkpoint: str = None, resume: bool = False, max_pending_boxes: int = None,
               progress: bool = None) -> BoundsReport:
    """
    Breadth-first branch and bound to `depth` bisections
    Every level is classified completely before the next one starts, so the final
    tallies and the checkpoint contents do not depend on the worker count
    """
    if depth < 0:
        raise DomainError(f"Depth must be non-negative, got {depth}")
    workers = SETTINGS.workers if workers is None else workers
    max_pending_boxes = SETTINGS.max_pending_boxes if max_pending_boxes is None else max_pending_boxes
    progress = SETTINGS.progress if progress is None else progress
    faces = {face.name: face for face in FACES[method]}

    if resume:
        if checkpoint is None or not os.path.exists(checkpoint):
            raise CheckpointError(f"No checkpoint to resume from at {checkpoint}")
        state = load_checkpoint(checkpoint)
        if state.method is not method or state.depth != depth:
            raise CheckpointError(f"Checkpoint is for {state.method.value} depth {state.depth}, "
                                  f"not {method.value} depth {depth}")
        logger.info(f"Resuming {method.value} depth {depth} with {len(state.pending)} pending boxes")
    else:
        state = _initial_state(method, depth)

    started = time.perf_counter()
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        level = state.pending[0][1] if state.pending else depth
        with tqdm(total=depth + 1, initial=level, desc=f"{method.value} levels", disable=not progress) as bar:
            while state.pending:
                level = state.pending[0][1]
                boxes = [(l, u) for _, _, _, l, u in state.pending]
                chunks = [boxes[i:i + CLASSIFY_CHUNK] for i in range(0, len(boxes), CLASSIFY_CHUNK)]
                results = pool.map(_classify_chunk, chunks) if pool else map(_classify_chunk, chunks)
                verdicts = [verdict for chunk in results for verdict in chunk]

                next_level = []
                for (name, _, k, l, u), verdict in zip(state.pending, verdicts):
                    tally = state.tallies[name]
                    volume = faces[name].box_volume(level)
                    if verdict is BoxVerdict.ALL_NEG_DEF:
                        tally.v1 = tally.v1 + volume
                    elif verdict is BoxVerdict.NONE_NEG_DEF:
                        tally.v2 = tally.v2 + volume
                    elif level == depth:
                        tally.undecided = tally.undecided + volume
                    else:
                        left, right = _bisect_ints(k, l, u)
                        next_level.append((name, level + 1) + left)
                        next_level.append((name, level + 1) + right)

                state.processed += len(verdicts)
                state.pending = next_level
                logger.info(f"Level {level}: classified {len(verdicts)} boxes, {len(next_level)} to refine")
                bar.update(1)

                if len(next_level) > max_pending_boxes:
                    path = checkpoint or default_checkpoint_path(method, depth)
                    save_checkpoint(path, state)
                    logger.error(f"{len(next_level)} pending boxes exceed the bound {max_pending_boxes}")
                    raise ResourceError(f"Work queue of {len(next_level)} boxes exceeds {max_pending_boxes}; "
                                        f"partial state saved to {path}", checkpoint_path=path)
                if checkpoint:
                    save_checkpoint(checkpoint, state)
    finally:
        if pool is not None:
            pool.shutdown()

    v1, v2, undecided = _combine(method, state.tallies)
    report = BoundsReport(method, depth, v1, v2, undecided, state.tallies, state.processed,
                          time.perf_counter() - started)
    report.check_accounting()
    logger.info(f"{method.value} depth {depth}: {format_decimal(report.rho_inf_lower, 6, 'down')} "
                f"<= rho(inf) <= {format_decimal(report.rho_inf_upper, 6, 'up')} "
                f"after {report.boxes_processed} boxes")
    return report


def bounds_table(depths: Iterable[int], method: BoundsMethod = BoundsMethod.SCALED4D,
                 workers: int = None, places: int = 6) -> pd.DataFrame:
    """Depth / Time / Lower bound / Upper bound, one bounds run per depth"""
    rows = []
    for depth in depths:
        report = run_bounds(depth, method, workers=workers)
        rows.append({
            'Depth': depth,
            'Time': f"{report.seconds:.1f}s",
            'Lower bound': format_decimal(report.rho_inf_lower, places, 'down'),
            'Upper bound': format_decimal(report.rho_inf_upper, places, 'up'),
        })
    return pd.DataFrame(rows)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

@dataclass
class RealSampleReport:
    model: ModelKind
    n: int
    seed: int
    soluble: int

    @property
    def estimate(self) -> float:
        return self.soluble / self.n

    def error_bar(self, sigmas: float = 4.0) -> float:
        f = self.estimate
        return sigmas * math.sqrt(max(f * (1 - f), 1e-12) / self.n)

    def enclosure(self, precision: int = DEFAULT_PRECISION, sigmas: float = 4.0) -> DyadicInterval:
        """estimate +/- error_bar clipped to [0, 1]; a confidence interval, not a certified one"""
        estimate = Fraction(self.soluble, self.n)
        spread = Fraction(self.error_bar(sigmas))
        return DyadicInterval.from_bounds(max(estimate - spread, 0), min(estimate + spread, 1), precision)

    def to_dict(self, places: int = 6) -> dict:
        return {
            'model': self.model.value,
            'n': self.n,
            'seed': self.seed,
            'soluble': self.soluble,
            'negative_definite': self.n - self.soluble,
            'estimate': str(Fraction(self.soluble, self.n)),
            'estimate_decimal': f"{self.estimate:.{places}f}",
            'error_bar_4sigma': f"{self.error_bar():.{places}f}",
        }


def _discriminant_form_coefficients(samples: np.ndarray) -> np.ndarray:
    """Coefficients of h^2 + 4 f for rows (l, m, n, a, b, c, d, e)"""
    l, m, n, a, b, c, d, e = (samples[:, i] for i in range(8))
    return np.stack([
        l * l + 4 * a,
        2 * l * m + 4 * b,
        m * m + 2 * l * n + 4 * c,
        2 * m * n + 4 * d,
        n * n + 4 * e,
    ], axis=1)


def _count_soluble_block(model: ModelKind, seed: int, block: int, count: int) -> int:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))
    if model is ModelKind.PLAIN:
        quartics = rng.uniform(-1.0, 1.0, size=(count, 5))
    else:
        quartics = _discriminant_form_coefficients(rng.uniform(-1.0, 1.0, size=(count, 8)))
    return count - int(np.count_nonzero(negative_definite_mask(quartics)))


def monte_carlo_real(model: ModelKind, n: int, seed: int, progress: bool = None) -> RealSampleReport:
    """
    Estimate rho(inf) (plain) or rho'(inf) (generalized) from n uniform samples
    Blocks of MC_BLOCK_SIZE are keyed by (seed, block index)
    """
    if n < 1:
        raise DomainError(f"Sample count must be positive, got {n}")
    if seed < 0:
        raise DomainError(f"Seed must be non-negative, got {seed}")
    progress = SETTINGS.progress if progress is None else progress

    soluble = 0
    blocks = range(0, n, MC_BLOCK_SIZE)
    for block, start in tqdm(enumerate(blocks), total=len(blocks), desc=f"{model.value} real samples",
                             disable=not progress):
        soluble += _count_soluble_block(model, seed, block, min(MC_BLOCK_SIZE, n - start))

    report = RealSampleReport(model, n, seed, soluble)
    logger.info(f"Real density {model.value}: {report.estimate:.6f} +/- {report.error_bar():.6f} from {n} samples")
    return report


# Usage example
if __name__ == "__main__":
    from settings import configure_logging

    configure_logging()
    print(is_negative_definite(Quartic5(-1, 0, 0, 0, -1)))
    print(bounds_table([8, 12], BoundsMethod.SCALED4D))
    print(monte_carlo_real(ModelKind.PLAIN, 100_000, seed=1).to_dict())
