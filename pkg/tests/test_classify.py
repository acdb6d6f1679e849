import itertools

import pytest

from wigweyl.classify import Diagnostics, Region, classify, diagnose_beamsplitter, diagnose_displaced_pair
from wigweyl.phase_space import SUBVACUUM_PARAMS, HYBRID_PARAMS

TRI = (True, False, None)


def expected_region(rs, ppt, pos, wig):
    # written as a lookup independent of the branch order in classify
    if ppt is None:
        return Region.UNDETERMINED
    if ppt:
        return Region.SEPARABLE
    table = {
        (False, True): Region.RE,
        (False, False): Region.RE,
        (False, None): Region.RE,
        (True, True): Region.HE,
        (True, False): Region.GE,
    }
    return table.get((pos, wig), Region.UNDETERMINED)


@pytest.mark.parametrize("rs, ppt, pos, wig", list(itertools.product(TRI, repeat=4)))
def test_truth_table(rs, ppt, pos, wig):
    assert classify(Diagnostics(rs, ppt, pos, wig)) is expected_region(rs, ppt, pos, wig)


def test_entangled_combinations_disjoint():
    labels = {classify(Diagnostics(True, False, pos, wig)) for pos in (True, False) for wig in (True, False)}
    assert labels == {Region.RE, Region.HE, Region.GE}


def test_rs_does_not_branch():
    for ppt, pos, wig in itertools.product(TRI, repeat=3):
        assert len({classify(Diagnostics(rs, ppt, pos, wig)) for rs in TRI}) == 1


def test_region_strings():
    assert [str(r) for r in Region] == ["SEPARABLE", "RE", "HE", "GE", "UNDETERMINED"]


def test_subvacuum_d1_is_representational():
    diag = diagnose_displaced_pair(SUBVACUUM_PARAMS.with_d(1.0))
    assert diag.rs_pass is True and diag.ppt_pass is False and diag.operator_positive is False
    assert classify(diag) is Region.RE


@pytest.mark.parametrize("d", [0.8, 1.4])
def test_subvacuum_rs_region_is_representational(d):
    from wigweyl.grids import GridSpec

    diag = diagnose_displaced_pair(SUBVACUUM_PARAMS.with_d(d), GridSpec(-8, 8, 40, 2))
    assert diag.rs_pass
    assert classify(diag) is Region.RE


def test_hybrid_point():
    assert classify(diagnose_displaced_pair(HYBRID_PARAMS.with_d(0.5))) is Region.HE


@pytest.mark.parametrize(
    "p, region",
    [(0.0, Region.GE), (0.25, Region.GE), (0.5, Region.HE), (0.75, Region.HE), (1.0, Region.SEPARABLE)],
)
def test_beamsplitter_regions(p, region):
    diag = diagnose_beamsplitter(p)
    assert diag.operator_positive is True
    assert classify(diag) is region
