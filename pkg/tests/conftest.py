from __future__ import annotations

import pytest

from rankeval.simulate import ClickModel, SimConfig, generate_logs


@pytest.fixture(scope="session")
def corpus_small_n4():
    """20k uniformly shuffled records with n=4, default click model."""
    cfg = SimConfig(num_queries=20_000, n=4, seed=11)
    return generate_logs(cfg), cfg


@pytest.fixture(scope="session")
def corpus_60k_n3():
    """60k records with n=3, used for presentation-order frequency laws."""
    cfg = SimConfig(num_queries=60_000, n=3, seed=13)
    return generate_logs(cfg), cfg


@pytest.fixture(scope="session")
def default_model():
    return ClickModel()
