"""Smoke test for the fracnambu extension module.

Build and install first, e.g. `pip install --no-build-isolation ./crates/py`
or `maturin develop -m crates/py/Cargo.toml`.
"""

import math

import fracnambu as fn


def main():
    spec = fn.CantorSpec(0.0, 1.0, 1.0 / 3.0)
    dim = fn.estimate_dimension(spec, 16)
    assert abs(dim - math.log(2) / math.log(3)) < 0.01, dim
    assert len(fn.build_cantor(spec, 3)) == 8

    st = fn.Staircase(spec, depth=20)
    assert st(0.0) == 0.0
    assert st(0.4) == st(0.6)
    assert abs(st(0.2) - 0.5 * st(0.6)) < 1e-6
    x = st.inverse(0.5 * st.total_measure)
    assert abs(st(x) - 0.5 * st.total_measure) < 1e-12
    assert abs(st.derivative(lambda t: st(t) ** 2 / 2, 0.25) - st(0.25)) < 1e-9

    top = fn.System.euler_top(1.0, 2.0, 3.0)
    assert top.velocity([1.0, 2.0, 3.0]) == [1.0, -2.0, 1.0]
    assert abs(top.liouville_divergence([0.3, -0.2, 0.9])) < 1e-12

    coords = [fn.Field.coordinate(3, i) for i in range(3)]
    assert fn.nambu_bracket(coords, [0.1, 0.2, 0.3]) == 1.0
    h = fn.oscillator4_fields()
    assert abs(fn.nambu_bracket(h, [0.3, -0.5, 0.7, 0.2])) < 1e-10

    nahm = fn.System.nahm()
    grid = [i * 0.05 for i in range(41)]
    run = fn.simulate(nahm, [1.0, 1.0, 1.0], grid, alpha=0.63)
    assert len(run["states"]) == len(grid)
    h0 = run["invariants"][0]
    for hs in run["invariants"]:
        assert all(abs(a - b) < 1e-6 for a, b in zip(hs, h0))

    report = fn.check(seeds=[1], tuples=10, points=3)
    assert all(r["pass"] for r in report), report
    print(f"smoke test ok: dimension {dim:.5f}, {len(report)} suites passed")


if __name__ == "__main__":
    main()
