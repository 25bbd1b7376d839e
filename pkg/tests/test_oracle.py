import itertools

import numpy as np
import pytest

from socbound.oracle import InstanceTooLarge, brute_force_interference_count
from socbound.system import same_type_count

GRID_LIMIT = 32


def test_examples():
    assert brute_force_interference_count([4], 4) == 4
    assert brute_force_interference_count([4], 4) == min(same_type_count([4], 4))
    assert brute_force_interference_count([], 3) == 0
    assert brute_force_interference_count([], 3, V=3) == 2
    assert brute_force_interference_count([8], 4, V=3) == 9
    assert brute_force_interference_count([2, 3], 8) == 5
    assert brute_force_interference_count([3], 1) == 2
    assert brute_force_interference_count([2], 1, V=3) == 4


def test_invalid():
    with pytest.raises(ValueError):
        brute_force_interference_count([1], 0)
    with pytest.raises(ValueError):
        brute_force_interference_count([-1], 1)
    with pytest.raises(ValueError):
        brute_force_interference_count([1], 1, V=0)
    with pytest.raises(InstanceTooLarge):
        brute_force_interference_count([8, 8], 8)


def test_sound_grid():
    for psi in range(3):
        for phi in itertools.product(range(9), repeat=psi):
            for chi in range(1, 9):
                for V in range(1, 5):
                    oracle = brute_force_interference_count(list(phi), chi, V, limit=GRID_LIMIT)
                    assert oracle <= min(same_type_count(phi, chi, V)), (phi, chi, V)


def test_exact_single_transaction():
    # every interferer can still issue, so both arms are reachable
    for psi in range(3):
        for phi in itertools.product(range(1, 7), repeat=psi):
            for chi in range(1, 9):
                oracle = brute_force_interference_count(list(phi), chi, limit=GRID_LIMIT)
                assert oracle == min(same_type_count(phi, chi)), (phi, chi)


def test_single_transaction_form():
    rng = np.random.default_rng(2024)
    for _ in range(10000):
        psi = int(rng.integers(0, 5))
        phi = [int(x) for x in rng.integers(0, 33, psi)]
        chi = int(rng.integers(1, 33))
        assert min(same_type_count(phi, chi, 1)) == min(sum(phi), chi + len(phi))
