"""Built-in one-parameter families: the template specializations and test families."""

from __future__ import annotations

from .families import CurveFamily, T, family, poly


def builtin_corpus() -> list[CurveFamily]:
    """The standard 16-family corpus: 9 + 3 template specializations, the
    torsion family y^2 = x^3 - t^2 x + t^4, and three generic rank 0/1/2 families."""
    return [
        family("1_0_0_-1_t", 1, 0, 0, -1, T, expected_rank=0),
        family("1_0_-2_1_t", 1, 0, -2, 1, T, expected_rank=0),
        family("1_0_1_-1_t", 1, 0, 1, -1, T, expected_rank=0),
        family("1_1_-1_1_t", 1, 1, -1, 1, T, expected_rank=0),
        family("1_1_-3_1_t", 1, 1, -3, 1, T, expected_rank=0),
        family("1_0_-3_1_t", 1, 0, -3, 1, T, expected_rank=0),
        family("1_1_-2_1_t", 1, 1, -2, 1, T, expected_rank=0),
        family("0_1_1_1_t", 0, 1, 1, 1, T, expected_rank=0),
        family("0_1_3_1_t", 0, 1, 3, 1, T, expected_rank=0),
        family("1_0_0_t_0", 1, 0, 0, T, 0, expected_rank=0),
        family("1_-2_0_t_0", 1, -2, 0, T, 0, expected_rank=0),
        family("1_1_0_t_0", 1, 1, 0, T, 0, expected_rank=0),
        family("0_0_0_-t2_t4", 0, 0, 0, (0, 0, -1), (0, 0, 0, 0, 1), expected_rank=2),
        family("1_0_0_1_t", 1, 0, 0, 1, T, expected_rank=0),
        family("1_t_-1_-t-1_0", 1, T, -1, (-1, -1), 0, expected_rank=1),
        family("1_t_-19_-t-1_0", 1, T, -19, (-1, -1), 0, expected_rank=2),
    ]


def corpus_family(name: str) -> CurveFamily:
    for fam in builtin_corpus():
        if fam.name == name:
            return fam
    raise KeyError(name)


def rank6_family() -> CurveFamily:
    """Rank 6 family with 21-digit coefficients; exercises big-integer reduction."""
    k = poly((-8916100448255999999, 2, 1))
    a2 = poly((811365140824616222208, 2 * 16660111104))
    a4 = poly((-26497490347321493520384, 2 * -1603174809600)) * k
    a6 = poly((343107594345448813363200, 2 * 2149908480000)) * k * k
    return CurveFamily("rank6_big", poly(0), a2, poly(0), a4, a6, expected_rank=6)
