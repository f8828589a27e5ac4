import math

import pytest

import qghot.spectral as spectral
from qghot import catalog


@pytest.fixture(scope="session")
def corpus():
    return catalog.standard_corpus(seed=7)


@pytest.fixture(scope="session")
def pair_cache():
    """mu_2 pairs computed once per session, keyed by corpus name."""
    return {}


def get_mu2(cache, name, g):
    if name not in cache:
        cache[name] = spectral.mu2_pair(g)
    return cache[name]


@pytest.fixture(scope="session", autouse=True)
def linfty_bounds_on_every_eigenfunction():
    """Hard harness assertion: every eigenfunction the solver ever produces
    satisfies sup|psi| <= sqrt(mu L) and sup|psi'| <= mu L sup|psi|."""
    original = spectral.eigenvalues

    def checked(g, count, backend="secular", h=1e-3):
        pairs = original(g, count, backend=backend, h=h)
        Ltot = g.total_length
        for p in pairs:
            if p.mu <= 0:
                continue
            for f in p.basis:
                sup = f.sup_abs()
                assert sup <= math.sqrt(p.mu * Ltot) * (1 + 1e-9), (
                    f"value bound violated: sup={sup} vs sqrt(mu L)="
                    f"{math.sqrt(p.mu * Ltot)}"
                )
                assert f.sup_abs_derivative() <= p.mu * Ltot * sup * (1 + 1e-9), (
                    "derivative bound violated"
                )
        return pairs

    # catalog binds the name at import time; patch both references.
    spectral.eigenvalues = checked
    catalog.eigenvalues = checked
    yield
    spectral.eigenvalues = original
    catalog.eigenvalues = original
