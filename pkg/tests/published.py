"""Published class counts: ``{(t, cap): {v: {volume: (all, nondeg, simple, nondeg_simple)}}}``.

Rows list every nonzero cell; a volume absent from a row has count zero.
The extended ``cap = 12`` table only covers volumes 8 to 12.
"""

from __future__ import annotations

TABLES: dict[tuple[int, int], dict[int, dict[int, tuple[int, int, int, int]]]] = {
    (1, 3): {
        2: {2: (1, 1, 1, 1)},
        3: {2: (2, 1, 2, 1), 3: (1, 1, 0, 0)},
        4: {2: (4, 1, 4, 1), 3: (5, 4, 3, 3)},
        5: {2: (6, 1, 6, 1), 3: (17, 8, 13, 7)},
        6: {2: (9, 1, 9, 1), 3: (51, 12, 44, 11)},
        7: {2: (12, 1, 12, 1), 3: (126, 14, 115, 13)},
    },
    (2, 7): {
        3: {4: (1, 1, 1, 1)},
        4: {4: (2, 1, 2, 1), 6: (2, 2, 0, 0)},
        5: {4: (4, 1, 4, 1), 6: (12, 9, 7, 7), 7: (7, 7, 0, 0)},
        6: {4: (7, 1, 7, 1), 6: (43, 17, 32, 15), 7: (88, 63, 52, 52)},
        7: {4: (11, 1, 11, 1), 6: (130, 24, 109, 22), 7: (515, 161, 391, 148)},
    },
    (3, 15): {
        4: {8: (1, 1, 1, 1)},
        5: {8: (2, 1, 2, 1), 12: (2, 2, 0, 0), 15: (1, 1, 0, 0)},
        6: {8: (4, 1, 4, 1), 12: (15, 11, 9, 9), 14: (14, 14, 0, 0), 15: (7, 6, 0, 0)},
        7: {8: (7, 1, 7, 1), 12: (56, 20, 41, 18), 14: (165, 110, 89, 89), 15: (74, 51, 0, 0)},
    },
    (4, 31): {
        5: {16: (1, 1, 1, 1)},
        6: {16: (2, 1, 2, 1), 24: (2, 2, 0, 0), 30: (2, 2, 0, 0)},
        7: {16: (4, 1, 4, 1), 24: (15, 11, 9, 9), 28: (17, 17, 0, 0), 30: (15, 12, 0, 0)},
    },
    (2, 12): {
        3: {8: (1, 1, 0, 0), 12: (1, 1, 0, 0)},
        4: {8: (7, 6, 2, 2), 9: (2, 2, 0, 0), 10: (3, 3, 0, 0), 12: (18, 17, 0, 0)},
        5: {8: (94, 80, 39, 36), 9: (85, 82, 0, 0), 10: (479, 471, 20, 20),
            11: (771, 771, 0, 0), 12: (3195, 3154, 26, 26)},
    },
}

# volumes a table reports on (the extended one omits the smaller volumes)
VOLUMES = {
    (1, 3): (2, 3),
    (2, 7): (4, 6, 7),
    (3, 15): (8, 12, 14, 15),
    (4, 31): (16, 24, 28, 30, 31),
    (2, 12): (8, 9, 10, 11, 12),
}


def expected(t: int, cap: int, v: int, vol: int) -> tuple[int, int, int, int]:
    return TABLES[(t, cap)].get(v, {}).get(vol, (0, 0, 0, 0))
