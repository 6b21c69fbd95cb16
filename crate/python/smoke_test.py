"""Smoke test for the edgelab extension module. Build with `maturin develop` first."""

import math

import edgelab


def main():
    ai, aip = edgelab.airy(0.0)
    assert abs(ai - 0.3550280538878172) < 1e-14
    assert abs(aip + 0.2588194037928068) < 1e-14

    assert abs(edgelab.f_beta(0.0, 0.0) - math.pi**2 / 12) < 1e-12

    eq = edgelab.Equilibrium([0.0, 0.0, 2.0])
    assert abs(eq.c_v - 2.0) < 1e-8
    assert abs(eq.mass() - 1.0) < 1e-10

    g = edgelab.log_lstat(eq, 16, 0.0, route="gamma")
    d = edgelab.log_lstat(eq, 16, 0.0, route="det")
    assert abs(g - d) < 1e-6 * (1 + abs(g))

    ens = edgelab.Ensemble(eq, 8, 1.0)
    assert abs(ens.kernel(-0.3, 0.2) - ens.kernel_sum(-0.3, 0.2)) < 1e-10

    det = edgelab.fredholm_det_ft(0.0, 1.0, 40)
    assert 0.0 < det <= 1.0

    sol = edgelab.solve_idpii(1.0)
    assert not sol.truncation_flag
    assert sol.i_at(0.0) > 0.0

    try:
        edgelab.fredholm_det_ft(0.0, -1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative T accepted")

    records = edgelab.run_study("eqmeasure", "potential = [0.0, 0.0, 2.0]")
    assert all(r["verdict"] != "error" for r in records)

    print("smoke test passed")


if __name__ == "__main__":
    main()
