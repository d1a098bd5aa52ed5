"""Smoke test for the `wordeq` extension module.

Build the module first, e.g. with `pip install ./crates/python` (maturin),
or copy `target/release/libwordeq_py.so` to `wordeq.so` on the import path.
"""

from fractions import Fraction

import wordeq


def main():
    s = wordeq.Equation("X aXb X aabb ab aXb abaabbab = abaabbab aXb ab aabb X aXb X").classify()
    assert s.kind == "finite", s
    assert s.solutions == ["", "ab", "abaabbab"], s.solutions

    family = wordeq.Equation("Xab = abX").classify()
    assert family.kind == "infinite"
    assert family.family == ("", "ab")
    assert "abab" in family and "aba" not in family
    assert family.members_up_to(4) == ["", "ab", "abab"]

    a = wordeq.Alphabet("a=1,b=2,c=-3")
    assert a.psw("bbcaac") == [2, 4, 1, 2, 3, 0]
    fig = wordeq.Alphabet("a=1,b=-2")
    assert fig.sum("aaabbaa") == 1
    assert fig.height("aaabbaa") == 3
    assert fig.area("aaabbaa") == 7
    assert fig.height("") is None
    assert isinstance(fig.area("ab"), Fraction)

    nf = wordeq.Equation("XaXbab = abaXbX").normal_form(values="a=1,b=-1")
    assert all(nf["checks"][k] for k in ("n1", "n2", "n3")), nf

    verdict = wordeq.Equation("XaXbab = abaXbX").reduce()
    assert verdict["result"] == "verdict", verdict

    pair = ["XYZ = ZYX", "XYYZ = ZYYX"]
    assert wordeq.solves_system(pair, "a", "b", "a")
    report = wordeq.independence_check(pair, 6)
    assert report["independent"], report
    assert report["witnesses"] == [["a", "b", "abba"], ["a", "b", "aba"]], report["witnesses"]

    search = wordeq.search_independent_systems(max_eq_len=5, max_size=3, image_len=4)
    assert search["max_size"] == 2, search["max_size"]

    campaign = wordeq.campaign(max_const_len=2)
    assert campaign["violations"] == 0

    try:
        wordeq.Equation("Xa = a?")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed equation accepted")

    print("wordeq smoke test passed")


if __name__ == "__main__":
    main()
