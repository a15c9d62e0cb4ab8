from __future__ import annotations

import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cactus_split import kernels

IMPLS = kernels.backends()
coeffs = st.lists(st.integers(-(10**30), 10**30), min_size=1, max_size=30)


def test_python_backend_always_present():
    assert "python" in IMPLS
    assert kernels.BACKEND in IMPLS


@pytest.mark.skipif(len(IMPLS) < 2, reason="compiled backend not built")
@given(coeffs, coeffs, st.integers(0, 40))
def test_convolve_agrees(a, b, n):
    ref = IMPLS["python"].convolve(a, b, n)
    assert IMPLS["cython"].convolve(a, b, n) == ref


@pytest.mark.skipif(len(IMPLS) < 2, reason="compiled backend not built")
@given(coeffs, st.data())
def test_dot_agrees(a, data):
    b = data.draw(st.lists(st.integers(-(10**30), 10**30), min_size=len(a), max_size=len(a)))
    k = len(a) - 1
    lo = data.draw(st.integers(0, k))
    hi = data.draw(st.integers(lo, k))
    assert IMPLS["cython"].dot(a, b, k, lo, hi) == IMPLS["python"].dot(a, b, k, lo, hi)


@pytest.mark.skipif(len(IMPLS) < 2, reason="compiled backend not built")
@pytest.mark.parametrize("n", range(0, 7))
def test_census_agrees(n):
    assert IMPLS["cython"].cactus_census(n) == IMPLS["python"].cactus_census(n)


def test_pure_fallback_selected_by_environment():
    env = dict(os.environ, CACTUS_SPLIT_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from cactus_split import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_counts_identical_under_pure_backend():
    code = (
        "from cactus_split.templates import FamilySpec, family_counts;"
        "from cactus_split.grammar import OmegaSpec;"
        "print(family_counts(FamilySpec('plane','unrooted','unlabeled',OmegaSpec.parse('{5}')),45).counts)"
    )
    env = dict(os.environ, CACTUS_SPLIT_PURE="1")
    pure = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    fast = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert pure.stdout == fast.stdout
