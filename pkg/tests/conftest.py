import pytest

from modrep.ffield import GF
from modrep.fixtures import (a8_group, a8_simple, hprime_group,
                             hprime_reference_simples, hprime_subgroup,
                             q_subgroup, r_subgroup, sylow_p)
from modrep.perm import Subgroup
from modrep.prng import Prng
from modrep.rep import regular_module
from modrep.structure import indec_decompose


@pytest.fixture(scope="session")
def F3():
    return GF(3)


@pytest.fixture(scope="session")
def F9():
    return GF(3, 2)


@pytest.fixture(scope="session")
def a8():
    return a8_group()


@pytest.fixture(scope="session")
def p_sub():
    return sylow_p()


@pytest.fixture(scope="session")
def hprime():
    return hprime_group()


@pytest.fixture(scope="session")
def hp_sub():
    return hprime_subgroup()


@pytest.fixture(scope="session")
def hp_refs3(F3):
    return hprime_reference_simples(F3)


@pytest.fixture(scope="session")
def hp_refs9(F9):
    return hprime_reference_simples(F9)


@pytest.fixture(scope="session")
def hp_regular9(F9, hprime):
    return regular_module(hprime, F9, label="regular")


@pytest.fixture(scope="session")
def hp_pims9(hp_regular9):
    """All PIM copies of the one-block order-72 algebra, keyed by top label."""
    from modrep.fixtures import label_hprime_module
    from modrep.structure import radical_series_layers
    from modrep.fixtures import hprime_reference_simples
    dec = indec_decompose(hp_regular9, Prng(0))
    refs = hprime_reference_simples(GF(3, 2))
    simples = [refs[lab] for lab in ("1a", "1b", "1c", "1d", "2")]
    out = {}
    for s in dec.summands:
        head = radical_series_layers(s.rep, simples)[0]
        out[head[0]] = s
    return out


@pytest.fixture(scope="session")
def s7(F3):
    return a8_simple(7, F3)


@pytest.fixture(scope="session")
def s13(F3):
    return a8_simple(13, F3)
