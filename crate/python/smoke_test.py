"""Smoke test for the pymatgame extension module."""

import math

import pymatgame as mg

RPS = [[0, -1, 1], [1, 0, -1], [-1, 1, 0]]


def close(a, b, tol=1e-7):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def main():
    s = mg.solve_game(RPS)
    assert abs(s.value) <= 1e-9, s
    assert close(s.row_strategy, [1 / 3] * 3) and close(s.col_strategy, [1 / 3] * 3)

    o = mg.oracle_solve(mg.GameMatrix(RPS))
    assert o.row_support == [0, 1, 2]

    a = mg.GameMatrix([[1, 2], [3, 4]])
    c = mg.perron(a)
    assert abs(c.perron_root - (5 + math.sqrt(33)) / 2) <= 1e-9

    assert mg.gordan(RPS).branch == "NonnegativeKernel"
    assert len(mg.null_space(RPS)) == 1
    assert close(mg.stochastic_eigenvector(RPS, 0.0), [1 / 3] * 3)
    assert mg.is_optimal_dominated([[1, 0], [0, 2]], [2 / 3, 1 / 3], 2 / 3)

    (report,) = mg.check_claim("PositiveDominatedThm4", a)
    assert report["verdict"] == "Violated", report
    assert mg.check_positive_dominated([[2, 1], [1, 2]])["verdict"] == "Holds"
    assert mg.check_diagonal([1, 2])["verdict"] == "Holds"

    skews = mg.generate_ensemble("Skew", 4, 5, seed=7)
    assert all(mg.check_skew(m)["verdict"] == "Holds" for m in skews)

    for fmt in ("csv", "json"):
        assert mg.parse_matrix(mg.render_matrix(a, fmt), fmt) == a

    try:
        mg.parse_matrix("1,2\n3")
    except ValueError:
        pass
    else:
        raise AssertionError("ragged input accepted")

    print("pymatgame smoke test passed")


if __name__ == "__main__":
    main()
