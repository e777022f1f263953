import pytest
from mpmath import mp

from src.specialfn.quadrature import PrecisionPolicy, QuadratureSpec
from src.utils import make_rng


@pytest.fixture
def rng():
    return make_rng(20240601)


@pytest.fixture
def prec():
    return PrecisionPolicy(128, 32)


@pytest.fixture
def quad():
    return QuadratureSpec()


@pytest.fixture(autouse=True)
def _mp_precision():
    saved = mp.prec
    mp.prec = 160
    yield
    mp.prec = saved


@pytest.fixture(scope='session')
def delta_form():
    from src.modforms.eigenform import dim1_cuspform
    return dim1_cuspform(12, 400)
