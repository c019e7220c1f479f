"""One test per acceptance criterion; each prints its PASS/FAIL line."""

import inspect

import pytest

from filtdist import acceptance as acc


def _defaults(fn):
    return {k: v.default for k, v in inspect.signature(fn).parameters.items()}


def test_pinned_parameters():
    c7 = _defaults(acc.c7_gs_oracle)
    assert c7["count"] >= 50 and c7["n_max"] == 6 and c7["N"] >= c7["n_max"] + 4
    c11 = _defaults(acc.c11_beta_lambda)
    assert c11["depth"] <= 4 and c11["t_max"] == 4
    c12 = _defaults(acc.c12_calculus)
    assert c12["trials"] >= 100 and c12["depth"] <= 6


@pytest.mark.parametrize("number,title", [(n, t) for n, t, _ in acc.CRITERIA],
                         ids=[f"criterion_{n:02d}" for n, _, _ in acc.CRITERIA])
def test_criterion(number, title, capsys):
    res = acc.run_one(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.ok, res.detail
