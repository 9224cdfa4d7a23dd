"""Smoke test for the quadwalk extension module.

Build and install it first:
    pip install -e crates/python --no-build-isolation
"""

from fractions import Fraction

import quadwalk


def main():
    kre = quadwalk.Model.kreweras()
    report = kre.classify(series_order=40)
    assert report["verdict"]["outcome"] == "Algebraic", report["verdict"]
    assert report["verdict"]["certainty"] == "Proved"
    assert report["group"]["groupOrder"] == 6

    q11, q00 = kre.counts(7)
    assert q00 == [1, 0, 0, 2, 0, 0, 16]
    assert q11[:4] == [1, 1, 3, 7]

    simple = quadwalk.Model([(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert simple == quadwalk.Model.simple()
    assert simple.decouple(degree=4) is None
    assert len(simple.base_points()) == 4
    guess = simple.guess("q11", "ode", terms=80)
    assert guess["kind"] == "LinearOde", guess

    weighted = quadwalk.Model([(-1, -1, "2/3"), (-1, 0, Fraction(1, 2)), (0, 1, 3), (1, 0)])
    assert weighted.steps[0] == (-1, -1, Fraction(2, 3))
    assert weighted.verify_feq(15)
    cert = weighted.decouple()
    assert cert is not None and cert["f"], cert
    verdict = weighted.classify(series_order=0)["verdict"]
    assert verdict["outcome"] == "DAlgebraicNotDFinite"
    assert verdict["certainty"] == "ConditionalOnInfiniteGroup"
    assert weighted.transpose().classify(series_order=0)["verdict"]["outcome"] == verdict["outcome"]

    assert quadwalk.Model.from_json(weighted.to_json()) == weighted
    for bad in ([(2, 0)], [(1, 0, 0.5)]):
        try:
            quadwalk.Model(bad)
        except ValueError:
            pass
        else:
            raise AssertionError(f"accepted {bad}")

    print("quadwalk smoke test passed")


if __name__ == "__main__":
    main()
