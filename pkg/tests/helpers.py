"""Shared utilities for the test suite."""
import numpy as np

from hyproj import Pair, Singleton, SphereFamily


def random_pair(rng, dim, scale=1.0):
    return Pair(scale * rng.standard_normal(dim), scale * rng.standard_normal(dim))


def max_pair_diff(a: Pair, b: Pair) -> float:
    return max(
        float(np.max(np.abs(a.first - b.first))),
        float(np.max(np.abs(a.second - b.second))),
    )


def assert_pair_close(a: Pair, b: Pair, tol: float):
    diff = max_pair_diff(a, b)
    assert diff <= tol, f"pairs differ by {diff:.3e} > {tol:.3e}"


def assert_results_close(r1, r2, tol: float, rng, members: int = 8):
    """Memberwise comparison of two projection results.

    Families describe the same set when their bases, radii, and coefficient
    vectors agree up to the sphere symmetry w -> -w; members are compared
    at `members` shared random directions after aligning that orientation.
    Mixing a singleton with a family fails.
    """
    if isinstance(r1, Singleton) and isinstance(r2, Singleton):
        assert_pair_close(r1.point, r2.point, tol)
        return
    assert isinstance(r1, SphereFamily) and isinstance(r2, SphereFamily), (
        f"result kinds differ: {type(r1).__name__} vs {type(r2).__name__}"
    )
    assert abs(r1.radius - r2.radius) <= tol
    assert_pair_close(Pair(r1.base_first, r1.base_second),
                      Pair(r2.base_first, r2.base_second), tol)
    if r1.radius == 0.0 and r2.radius == 0.0:
        return
    dot = r1.coeff_first * r2.coeff_first + r1.coeff_second * r2.coeff_second
    sign = 1.0 if dot >= 0.0 else -1.0
    assert abs(r1.coeff_first - sign * r2.coeff_first) <= tol
    assert abs(r1.coeff_second - sign * r2.coeff_second) <= tol
    for _ in range(members):
        d = rng.standard_normal(r1.dim)
        while float(np.linalg.norm(d)) == 0.0:
            d = rng.standard_normal(r1.dim)
        assert_pair_close(r1.member(d), r2.member(sign * d), tol)


def bisect_h_reference(p, q, c, width_tol=1e-13):
    """Plain textbook bisection on H, independent of the library code."""

    def h(lam):
        return ((lam * lam + 1.0) * p - 2.0 * lam * q) / (
            2.0 * (1.0 - lam * lam) ** 2) - c

    lo, hi = -1.0 + 1e-9, 1.0 - 1e-9
    flo, fhi = h(lo), h(hi)
    assert flo > 0.0 > fhi, "reference bracket has no sign change"
    for _ in range(200):
        if hi - lo <= width_tol:
            break
        mid = 0.5 * (lo + hi)
        fm = h(mid)
        if fm > 0.0:
            lo = mid
        elif fm < 0.0:
            hi = mid
        else:
            return mid
    return 0.5 * (lo + hi)
