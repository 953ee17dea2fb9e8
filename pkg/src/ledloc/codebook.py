"""Spatial color-code identifiers: counting, enumeration, orientation decoding.

A landmark code is an M x N grid of red/green/blue LEDs with two design
rules: the colors are balanced (M*N/3 of each, so the landmark glows
white), and row 0 is an all-red header that gives the code an absolute
compass direction. So that no rotated view can imitate a header, the
opposite edge row must not be all red; the closed-form count subtracts
exactly those both-edge-red arrangements:

    count(M, N) = multinomial((M-1)N; (M-3)N/3, MN/3, MN/3)
                - multinomial((M-2)N; (M-6)N/3, MN/3, MN/3)   [M >= 6]

Interior rows may incidentally be all red; only the edges are
constrained. ``has_interior_full_red_row`` flags such codes for callers
that want the stricter reading, and ``enumerate_identifiers`` can drop
mirror twins for registries where reflected views must also be unique.

Codes are ordered lexicographically over row-major strings with
R < G < B, and ids are dense ranks in that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

from .errors import (
    AmbiguousHeaderError,
    CapExceededError,
    InfeasibleShapeError,
    NoHeaderError,
)

COLOR_ORDER = "RGB"
DEFAULT_ENUMERATION_CAP = 10_000_000


@dataclass(frozen=True)
class ColorCode:
    """Row-major grid of LED colors, one string of R/G/B per row."""

    rows: tuple[str, ...]

    @property
    def rows_m(self) -> int:
        return len(self.rows)

    @property
    def cols_n(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows_m, self.cols_n

    def rowmajor(self) -> str:
        return "".join(self.rows)


@dataclass(frozen=True)
class CodebookEntry:
    code: ColorCode
    id: int


def _check_grid(code: ColorCode) -> None:
    if not code.rows:
        raise ValueError("code has no rows")
    n = len(code.rows[0])
    for row in code.rows:
        if len(row) != n:
            raise ValueError("code rows have unequal lengths")
        if any(ch not in COLOR_ORDER for ch in row):
            raise ValueError(f"invalid color in row {row!r}")


def is_balanced(code: ColorCode) -> bool:
    flat = code.rowmajor()
    third = len(flat) // 3
    return all(flat.count(c) == third for c in COLOR_ORDER) and len(flat) % 3 == 0


def is_valid_identifier(code: ColorCode) -> bool:
    """Balanced, all-red header row, opposite edge row not all red."""
    _check_grid(code)
    if not is_balanced(code):
        return False
    n = code.cols_n
    if code.rows[0] != "R" * n:
        return False
    if code.rows_m > 1 and code.rows[-1] == "R" * n:
        return False
    return True


def has_interior_full_red_row(code: ColorCode) -> bool:
    """True when a non-edge row is accidentally all red (strict check)."""
    n = code.cols_n
    return any(row == "R" * n for row in code.rows[1:-1])


def mirror_code(code: ColorCode) -> ColorCode:
    """Left-right reflection; preserves the header row."""
    return ColorCode(tuple(row[::-1] for row in code.rows))


def rotate_code(code: ColorCode, quarter_turns: int) -> ColorCode:
    """Rotate the grid counterclockwise by 90-degree steps (rot90 semantics)."""
    k = quarter_turns % 4
    rows = code.rows
    if k == 0:
        return code
    m, n = len(rows), len(rows[0])
    if k == 2:
        return ColorCode(tuple(row[::-1] for row in reversed(rows)))
    if k == 1:
        return ColorCode(
            tuple("".join(rows[j][n - 1 - i] for j in range(m)) for i in range(n))
        )
    return ColorCode(
        tuple("".join(rows[m - 1 - j][i] for j in range(m)) for i in range(n))
    )


def _check_shape(m: int, n: int) -> None:
    if m < 3 or n < 1:
        raise InfeasibleShapeError(
            f"shape ({m}, {n}) cannot host a header row plus balanced fill"
        )
    if (m * n) % 3 != 0:
        raise InfeasibleShapeError(
            f"{m}x{n} = {m * n} cells is not divisible by 3 colors"
        )
    if (m - 3) * n < 0:
        raise InfeasibleShapeError(f"shape ({m}, {n}) leaves negative red cells")


def count_identifiers(m: int, n: int) -> int:
    """Exact number of valid M x N identifiers (big-integer arithmetic)."""
    _check_shape(m, n)
    per_color = (m * n) // 3
    reds_left = ((m - 3) * n) // 3
    first = math.factorial((m - 1) * n) // (
        math.factorial(reds_left)
        * math.factorial(per_color)
        * math.factorial(per_color)
    )
    if m < 6:
        return first
    both_edges = math.factorial((m - 2) * n) // (
        math.factorial(((m - 6) * n) // 3)
        * math.factorial(per_color)
        * math.factorial(per_color)
    )
    return first - both_edges


def _multiset_permutations(symbols: list[str]) -> Iterator[tuple[str, ...]]:
    # Classic next-permutation walk over a sorted multiset: lexicographic,
    # each distinct arrangement exactly once.
    a = sorted(symbols)
    size = len(a)
    while True:
        yield tuple(a)
        i = size - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = size - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1 :] = reversed(a[i + 1 :])


def enumerate_identifiers(
    m: int,
    n: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    exclude_mirrors: bool = False,
) -> Iterator[ColorCode]:
    """Yield every valid identifier in lexicographic (R < G < B) order.

    With ``exclude_mirrors`` only the lexicographically smaller member of
    each {code, mirror} pair is kept (self-mirrored codes always pass).
    """
    _check_shape(m, n)
    total = count_identifiers(m, n)
    if total > cap:
        raise CapExceededError(
            f"shape ({m}, {n}) has {total} identifiers, above the cap {cap}"
        )
    per_color = (m * n) // 3
    reds_left = ((m - 3) * n) // 3
    header = "R" * n
    # Sort key must follow R < G < B, not ASCII; map through rank digits.
    rank = {c: str(i) for i, c in enumerate(COLOR_ORDER)}
    unrank = {str(i): c for i, c in enumerate(COLOR_ORDER)}
    symbols = (
        [rank["R"]] * reds_left + [rank["G"]] * per_color + [rank["B"]] * per_color
    )
    red_row = rank["R"] * n
    for perm in _multiset_permutations(symbols):
        if m > 1 and all(ch == red_row[0] for ch in perm[-n:]):
            continue  # all-red opposite edge would fake a second header
        body = "".join(perm)
        rows = (header,) + tuple(
            "".join(unrank[ch] for ch in body[i : i + n])
            for i in range(0, len(body), n)
        )
        code = ColorCode(rows)
        if exclude_mirrors:
            mirrored = mirror_code(code)
            if mirrored.rows < code.rows:
                continue
        yield code


def codebook_entries(
    m: int,
    n: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    exclude_mirrors: bool = False,
) -> Iterator[CodebookEntry]:
    """Enumerated identifiers wrapped with their dense lexicographic ids."""
    for i, code in enumerate(
        enumerate_identifiers(m, n, cap=cap, exclude_mirrors=exclude_mirrors)
    ):
        yield CodebookEntry(code=code, id=i)


def decode_orientation(
    grid: ColorCode | Iterable[str],
    shapes: set[tuple[int, int]] | None = None,
) -> tuple[ColorCode, int]:
    """Find the rotation that exposes the header; return (canonical, degrees).

    The returned rotation maps the observed grid onto the canonical one
    (counterclockwise quarter turns). Quarter-turn candidates are only
    admitted when their shape is registered, since a rectangular codebook
    cannot contain its own transpose.
    """
    code = grid if isinstance(grid, ColorCode) else ColorCode(tuple(grid))
    _check_grid(code)
    candidates = []
    for k in range(4):
        cand = rotate_code(code, k)
        if k % 2 == 1 and shapes is not None and cand.shape not in shapes:
            continue
        if cand.rows[0] == "R" * cand.cols_n:
            candidates.append((k, cand))
    if not candidates:
        raise NoHeaderError("no rotation of the grid exposes an all-red header row")
    if len(candidates) > 1:
        raise AmbiguousHeaderError(
            f"{len(candidates)} rotations expose a header row; code is invalid"
        )
    k, canonical = candidates[0]
    return canonical, 90 * k


def export_lines(entries: Iterable[CodebookEntry]) -> Iterator[str]:
    """One export line per entry: ``id,M,N,<row-major RGB string>``."""
    for entry in entries:
        m, n = entry.code.shape
        yield f"{entry.id},{m},{n},{entry.code.rowmajor()}"


def write_codebook(entries: Iterable[CodebookEntry], stream: TextIO) -> int:
    """Write export lines with LF endings; returns the number of entries."""
    count = 0
    for line in export_lines(entries):
        stream.write(line + "\n")
        count += 1
    return count


def parse_codebook_line(line: str) -> CodebookEntry:
    ident, m_s, n_s, flat = line.strip().split(",", 3)
    m, n = int(m_s), int(n_s)
    if len(flat) != m * n:
        raise ValueError(f"line holds {len(flat)} cells, expected {m * n}")
    code = ColorCode(tuple(flat[i : i + n] for i in range(0, m * n, n)))
    _check_grid(code)
    return CodebookEntry(code=code, id=int(ident))
