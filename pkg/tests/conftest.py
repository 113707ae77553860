import pytest

from mbcr.codec import derive_points, validate_params
from mbcr.gf import Field, smallest_prime_at_least


def parameter_grid(n_max):
    """All valid (n, k, d, r) with n <= n_max."""
    for n in range(2, n_max + 1):
        for d in range(1, n):
            for r in range(1, n - d + 1):
                for k in range(1, d + 1):
                    yield (n, k, d, r)


@pytest.fixture
def toy_code():
    """(n=3, k=1, d=1, r=1) over GF(7): F = 1 + Y with data (1, 1)."""
    params = validate_params(3, 1, 1, 1, Field.prime(7))
    return params, derive_points(params)


@pytest.fixture
def fig_code():
    """(n=5, k=2, d=3, r=2) over GF(7)."""
    params = validate_params(5, 2, 3, 2, Field.prime(7))
    return params, derive_points(params)


def prime_for(n):
    return Field.prime(smallest_prime_at_least(n))
