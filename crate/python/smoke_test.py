"""Quick end-to-end check of the pyzchain extension module."""

import json

import pyzchain as z


def main():
    z2 = z.Group.cyclic(2)
    s = z.Complex.sphere(0, z2)
    assert str(s.homology(0)) == str(z2)
    assert s.homology(1).is_trivial()

    # Γ(Σ^0 Z/2): free of rank 1 in degrees 0 and 1 with d = [[2]]
    p = z.gamma(s)
    assert p.source.support() == (0, 1)
    assert p.source.differential(1) == [[2]]
    assert p.is_quasi_iso()

    # ×2 on Σ^0 Z is injective but not surjective
    zz = z.Complex.sphere(0, z.Group.free(1))
    two = z.Map(zz, zz, [[[2]]])
    c = two.classify()
    assert c["injective"] and not c["surjective"] and c["labels"] == []

    # Z/4 -> Z/2 factored through a cofibration and an acyclic fibration
    proj = z.Map(z.Complex.sphere(0, z.Group.cyclic(4)), s, [[[1]]])
    left, middle, right = proj.factor("cof-afb")
    assert right.compose(left).equals(proj)
    assert "cofibration" in left.classify()["labels"]
    assert "acyclic_fibration" in right.classify()["labels"]

    big = 2**80 + 1
    d = z.snf([[big, 2], [4, 2 * big]])
    f1, f2 = d["invariant_factors"]
    assert d["rank"] == 2 and f1 * f2 == 2 * big * big - 8 and f2 % f1 == 0

    back = z.Complex.from_json(p.source.to_json())
    assert back.differential(1) == [[2]]
    assert json.loads(two.to_json())["components"]["0"] == [["2"]]

    try:
        z.Complex(0, [z.Group.free(1)] * 3, [[[1]], [[1]]])
    except z.ZchainError:
        pass
    else:
        raise AssertionError("d^2 != 0 accepted")

    report = z.verify(seed=1, cases=3)
    assert report["all_passed"], report
    print("pyzchain smoke test passed:", len(report["suites"]), "suites")


if __name__ == "__main__":
    main()
