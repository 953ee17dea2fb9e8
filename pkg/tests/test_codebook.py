"""Codebook counting, enumeration, rotation decoding, export format.

The independent oracle is a brute-force scan over every fill of the
(M-1) x N body cells, checking the same three design rules from scratch:
all-red header, balanced colors, opposite edge row not all red. The
closed-form count and the lexicographic enumerator must both agree with
it on every shape small enough to scan.
"""

import io
from itertools import product

import numpy as np
import pytest

from ledloc import (
    ColorCode,
    codebook_entries,
    count_identifiers,
    decode_orientation,
    enumerate_identifiers,
    is_valid_identifier,
    mirror_code,
    rotate_code,
)
from ledloc.codebook import (
    has_interior_full_red_row,
    parse_codebook_line,
    write_codebook,
)
from ledloc.errors import (
    AmbiguousHeaderError,
    CapExceededError,
    InfeasibleShapeError,
    NoHeaderError,
)


def brute_force_count(m: int, n: int) -> int:
    """Exhaustive oracle over all 3^((m-1)n) body fills."""
    per_color = m * n // 3
    total = 0
    for body in product("RGB", repeat=(m - 1) * n):
        flat = "R" * n + "".join(body)
        if flat.count("R") != per_color or flat.count("G") != per_color:
            continue
        if "".join(body[-n:]) == "R" * n:
            continue
        total += 1
    return total


class TestCount:
    def test_reference_landmark_shape(self):
        assert count_identifiers(6, 3) == 419496

    def test_small_shapes_frozen_oracle_values(self):
        # brute_force_count(3,3) == 20 and brute_force_count(4,3) == 630
        assert count_identifiers(3, 3) == 20
        assert count_identifiers(4, 3) == 630

    @pytest.mark.parametrize("m,n", [(3, 3), (4, 3), (3, 2), (6, 1), (3, 1)])
    def test_formula_matches_brute_force(self, m, n):
        assert count_identifiers(m, n) == brute_force_count(m, n)

    def test_infeasible_shapes(self):
        with pytest.raises(InfeasibleShapeError):
            count_identifiers(2, 3)  # no room for a header
        with pytest.raises(InfeasibleShapeError):
            count_identifiers(4, 4)  # 16 cells not divisible by 3

    def test_big_shape_exact_integer(self):
        # exact big-integer arithmetic; value frozen from the multinomials
        # 27!/(7!*10!*10!) - 24!/(4!*10!*10!)
        assert count_identifiers(10, 3) == 162105653424
        assert isinstance(count_identifiers(10, 3), int)


class TestEnumerate:
    def test_three_by_three_set(self):
        codes = list(enumerate_identifiers(3, 3))
        assert len(codes) == 20
        assert len(set(codes)) == 20
        assert all(is_valid_identifier(c) for c in codes)

    def test_lexicographic_order_with_rgb_ranks(self):
        rank = {"R": 0, "G": 1, "B": 2}
        keys = [
            tuple(rank[ch] for ch in code.rowmajor())
            for code in enumerate_identifiers(4, 3)
        ]
        assert keys == sorted(keys)

    @pytest.mark.parametrize("m,n", [(3, 3), (4, 3), (5, 3), (3, 6), (6, 2)])
    def test_length_equals_count(self, m, n):
        assert sum(1 for _ in enumerate_identifiers(m, n)) == count_identifiers(m, n)

    def test_cap(self):
        with pytest.raises(CapExceededError):
            list(enumerate_identifiers(6, 3, cap=1000))

    def test_ids_dense(self):
        entries = list(codebook_entries(3, 3))
        assert [e.id for e in entries] == list(range(20))

    def test_exclude_mirrors_partition(self):
        full = list(enumerate_identifiers(3, 3))
        kept = list(enumerate_identifiers(3, 3, exclude_mirrors=True))
        self_mirrored = [c for c in full if mirror_code(c) == c]
        # each non-self-mirrored pair contributes exactly one representative
        assert len(kept) == (len(full) - len(self_mirrored)) // 2 + len(self_mirrored)
        assert all(mirror_code(c) == c or mirror_code(c) not in kept for c in kept)


class TestRotation:
    def test_matches_numpy_rot90(self, code63):
        arr = np.array([list(r) for r in code63.rows])
        for k in range(4):
            expected = ["".join(row) for row in np.rot90(arr, k)]
            assert list(rotate_code(code63, k).rows) == expected

    def test_four_turns_identity(self, code63):
        assert rotate_code(code63, 4) == code63

    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_decode_inverts_rotation(self, code63, k):
        observed = rotate_code(code63, k)
        canonical, rotation = decode_orientation(observed)
        assert canonical == code63
        assert rotation == (-90 * k) % 360

    def test_decode_no_header(self):
        with pytest.raises(NoHeaderError):
            decode_orientation(ColorCode(("GGG", "GGG", "GGG")))

    def test_decode_ambiguous_both_edges_red(self):
        with pytest.raises(AmbiguousHeaderError):
            decode_orientation(ColorCode(("RRR", "GGB", "RRR")))

    def test_shape_filter_rejects_unregistered_quarter_turns(self, code63):
        observed = rotate_code(code63, 1)  # 3x6 view of a 6x3 code
        canonical, rotation = decode_orientation(observed, shapes={(6, 3)})
        assert canonical == code63 and rotation == 270
        with pytest.raises(NoHeaderError):
            decode_orientation(observed, shapes={(3, 6)})

    def test_no_code_collides_with_a_rotation_of_another(self):
        for m, n in [(3, 3), (4, 3)]:
            codes = set(enumerate_identifiers(m, n))
            for code in codes:
                for k in (1, 2, 3):
                    twin = rotate_code(code, k)
                    if twin.shape == code.shape and twin != code:
                        assert twin not in codes or twin == code


class TestValidity:
    def test_interior_red_row_is_loose_valid_but_flagged(self):
        code = ColorCode(("RRR", "RRR", "GGG", "GGG", "BBB", "BBB"))
        assert is_valid_identifier(code)
        assert has_interior_full_red_row(code)

    def test_bottom_red_row_invalid(self):
        code = ColorCode(("RRR", "GGG", "GGG", "BBB", "BBB", "RRR"))
        assert not is_valid_identifier(code)

    def test_unbalanced_invalid(self):
        assert not is_valid_identifier(ColorCode(("RRR", "GGG", "GGB")))

    def test_strict_count_6x3(self):
        # Codes whose three free reds all land in one interior row: 5 rows
        # times 924 green/blue fills = 4620 flagged out of 419496.
        flagged = 0
        total = 0
        for code in enumerate_identifiers(6, 3):
            total += 1
            if has_interior_full_red_row(code):
                flagged += 1
        assert total == 419496
        assert flagged == 4620
        assert total - flagged == 415800


class TestExport:
    def test_line_format_and_round_trip(self):
        entries = list(codebook_entries(3, 3))
        buf = io.StringIO()
        assert write_codebook(entries, buf) == 20
        lines = buf.getvalue().splitlines()
        assert lines[0].startswith("0,3,3,RRR")
        assert all(len(line.split(",", 3)) == 4 for line in lines)
        parsed = [parse_codebook_line(line) for line in lines]
        assert [p.code for p in parsed] == [e.code for e in entries]
        assert [p.id for p in parsed] == [e.id for e in entries]

    def test_lf_endings(self):
        buf = io.StringIO()
        write_codebook(codebook_entries(3, 3), buf)
        assert "\r" not in buf.getvalue()
        assert buf.getvalue().endswith("\n")
