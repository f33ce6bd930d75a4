import os
import subprocess
import sys

import numpy as np
import pytest

from so3inv.jones import _link_key, _plan, figure8, whitehead
from so3inv.kernels import HAVE_NUMBA, contract, default_backend


@pytest.mark.parametrize("link,colors", [(figure8(), (5,)), (whitehead(), (3, 4))])
def test_backends_agree_on_random_lanes(link, colors):
    plan, entries, pivots = _plan(_link_key(link), colors)
    rng = np.random.default_rng(7)
    p = 1000003
    coef = rng.integers(0, p, size=(len(entries), 4), dtype=np.int64)
    piv = rng.integers(0, p, size=(len(pivots), 4), dtype=np.int64)
    ref = contract(plan, coef, piv, p, "numpy")
    assert ref.shape == (4,)
    if HAVE_NUMBA:
        assert np.array_equal(ref, contract(plan, coef, piv, p, "numba"))


def test_float_mode_bounds_modular_mode():
    plan, entries, pivots = _plan(_link_key(figure8()), (4,))
    ones = np.ones((len(entries), 1))
    bound = contract(plan, ones, np.ones((len(pivots), 1)), 0, "numpy")[0]
    assert bound >= 1.0


def test_env_flag_selects_numpy():
    env = dict(os.environ, SO3INV_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from so3inv.kernels import default_backend; print(default_backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_default_backend_reflects_availability():
    assert default_backend() == ("numba" if HAVE_NUMBA else "numpy")
