"""Smoke test for the lumpspace_py extension module.

Build first with `cargo build -p lumpspace-py --release` (or without
`--release`), then run `python3 python/smoke_test.py`. A path to the shared
library may be given as the first argument.
"""

import importlib.machinery
import importlib.util
import math
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load(path=None):
    if path is None:
        candidates = [ROOT / "target" / p / "liblumpspace_py.so" for p in ("release", "debug")]
        found = [c for c in candidates if c.exists()]
        if not found:
            sys.exit("liblumpspace_py.so not found; run `cargo build -p lumpspace-py` first")
        path = max(found, key=lambda c: c.stat().st_mtime)
    loader = importlib.machinery.ExtensionFileLoader("lumpspace_py", str(path))
    spec = importlib.util.spec_from_loader("lumpspace_py", loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def close(a, b, tol):
    return abs(a - b) <= tol * max(abs(b), 1.0)


def main():
    lp = load(sys.argv[1] if len(sys.argv) > 1 else None)
    pi = math.pi

    l2 = lp.KahlerProfile.l2(4.0, 4.0)
    assert l2.label == "l2"
    assert close(l2.b, pi / 2, 1e-15)
    assert close(l2.a(2.0), pi * (15 - 16 * math.log(2)) / 9, 1e-13)

    grid = lp.QuadGrid(64, 16, 4.0)
    assert close(grid.total_weight(), pi, 1e-13)
    a, b = lp.measure_profile(2, 2.0, grid)
    assert close(a, l2.a(2.0), 1e-12) and close(b, pi / 2, 1e-12)
    _, b1 = lp.measure_profile(1, 2.0, grid)
    assert b1 is None

    names, gram = lp.canonical_gram(2, 1.5, grid)
    a0, _, _, a3, a4 = l2.coefficients(1.5)
    assert names[0] == "d_mu" and close(gram[0][0], a0, 1e-10)
    assert close(gram[4][4], a3, 1e-10) and close(gram[5][5], a4, 1e-10)
    assert all(abs(gram[i][j]) < 1e-10 for i in range(6) for j in range(6) if i != j)

    residuals = l2.kahler_residuals(2.0, 2)
    assert max(abs(r) for r in residuals.values()) < 1e-8, residuals

    assert close(lp.total_volume(l2, 2), (2 * l2.b * pi) ** 5 / 120, 1e-12)
    assert close(lp.total_volume_numeric(l2, 2), lp.total_volume(l2, 2), 1e-9)
    _, _, ratio = lp.vol_g_mod_k(3)
    assert close(ratio, 8.0, 1e-12)
    assert close(lp.volume_factor_gram(2, 2.0, grid), lp.volume_factor_closed(l2, 2.0, 2), 1e-9)

    assert close(lp.baptista_volume(1, 2, 0, 4.0, pi), pi**10 / 120, 1e-13)
    assert close(lp.cylinder_volume(2), pi**2, 1e-8)
    assert close(lp.cylinder_volume(3, mu=0.5 + 0.5j), pi**2, 1e-8)
    assert math.isfinite(lp.ray_length(l2, math.inf))

    fs = lp.KahlerProfile.fubini_study(4.0)
    half = lp.KahlerProfile.custom(lambda m: (m * m - 1) / (m * m + 1), lambda m: 4 * m / (m * m + 1) ** 2, 1.0, 1.0)
    assert close(lp.total_volume_numeric(half, 2), lp.total_volume(half, 2), 1e-8)
    assert lp.total_volume(half, 2) < lp.total_volume(lp.KahlerProfile.fubini_study(1.0), 2)
    assert close(lp.fs_norm_sq([1, 0], [0, 1], 4.0), 1.0, 1e-15)
    assert fs.label == "fs"

    for bad in (lambda: l2.coefficients(0.5), lambda: lp.QuadGrid(0, 4), lambda: lp.fs_norm_sq([0, 0], [1, 0])):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("lumpspace_py smoke test passed")


if __name__ == "__main__":
    main()
