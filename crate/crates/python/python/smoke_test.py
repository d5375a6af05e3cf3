"""Smoke test for the dec_py extension module.

Build and install first, e.g. `maturin develop --release -m crates/python/Cargo.toml`.
"""

import math

import dec_py


def main():
    mesh = dec_py.Mesh.symmetric(3)
    assert [mesh.count(k) for k in range(3)] == [45, 108, 64]
    assert mesh.well_centered()[0]

    dual = dec_py.Dual(mesh)
    star1 = dual.hodge_star(1)
    interior = [s for s, b in zip(star1, mesh.boundary_flags(1)) if not b]
    assert all(abs(s - 1 / math.sqrt(3)) < 1e-12 for s in interior)

    d0, d1 = mesh.coboundary(0), mesh.coboundary(1)
    assert d1.matmul(d0).max_abs() == 0.0
    m = dual.system_matrix(1)
    assert m.shape == (108, 108)
    assert max(abs(a - b) for a, b in zip(sum(m.to_dense(), []), sum(m.transpose().to_dense(), []))) < 1e-12

    ok, dev = dual.centroid_condition(1)
    assert ok and dev < 1e-12
    perturbed = dec_py.Dual(dec_py.Mesh.perturbed(3, seed=1))
    assert not perturbed.centroid_condition(1)[0]

    x, residual, iterations = dec_py.cg_solve(m, [1.0] * 108)
    assert residual <= 1e-12 and iterations > 0
    ax = m.matvec(x)
    assert max(abs(v - 1.0) for v in ax) < 1e-9

    sol = dual.solve_manufactured(2)
    assert set(sol["errors"]) == {"e_u", "e_rho"}
    assert sol["residual"] <= 1e-12

    report = dec_py.convergence(1, "symmetric", [2, 3, 4, 5, 6])
    norms = report.norms()
    assert abs(norms["de_u"][4] / 1.85e-2 - 1) < 0.03
    assert abs(norms["e_rho"][4] / 3.14e-4 - 1) < 0.05
    assert abs(report.rates()["e_u"][-1] - 2.0) < 0.1
    table = report.render("markdown")
    assert table.splitlines()[2].startswith("| 2^-2 |")

    assert all(passed for _, passed, _, _ in dec_py.selftest_forms())

    try:
        dec_py.Mesh([[0, 0], [1, 0], [2, 0]], [[0, 1, 2]])
    except ValueError:
        pass
    else:
        raise AssertionError("degenerate cell accepted")

    print(table, end="")
    print("smoke test passed")


if __name__ == "__main__":
    main()
