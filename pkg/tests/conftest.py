from __future__ import annotations

import pytest

from zetakms import arith


@pytest.fixture(scope="session")
def table_10k() -> arith.ArithTable:
    """Shared sieve table for the mid-size checks."""
    return arith.sieve(10_000)
