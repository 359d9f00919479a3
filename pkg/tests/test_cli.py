import io
import json
import subprocess
import sys

import pytest

from iacprob.cli import run


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_limit_condorcet_three():
    code, text = invoke("limit", "--event", "condorcet-winner", "--m", "3", "--threads", "1")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "5/16 (0.3125000000)"
    assert "condorcet-paradox: 1/16 (0.0625000000)" in lines
    assert "condorcet-existence: 15/16 (0.9375000000)" in lines


def test_positional_event_form():
    assert invoke("limit", "condorcet-winner", "--m", "3")[1].splitlines()[0] == "5/16 (0.3125000000)"


def test_limit_runoff_four():
    code, text = invoke("limit", "--event", "runoff-reversal", "--m", "4")
    assert code == 0
    assert text.splitlines()[0] == "2988379676768359/12173449145352192 (0.2454833992)"


def test_count_small():
    assert invoke("count", "--event", "condorcet-winner", "--m", "3", "--n", "2")[1].splitlines()[0] == "3"


@pytest.mark.parametrize("event", ["condorcet-winner", "condorcet-efficiency-violation", "runoff-reversal"])
@pytest.mark.parametrize("m", ["3", "4"])
def test_count_reduced_flag_agrees(event, m):
    for n in ("0", "3", "4"):
        plain = invoke("count", "--event", event, "--m", m, "--n", n)[1].splitlines()[0]
        reduced = invoke("count", "--event", event, "--m", m, "--n", n, "--reduced")[1].splitlines()[0]
        assert plain == reduced


def test_json_report():
    code, text = invoke("prob", "--event", "condorcet-winner", "--m", "3", "--n", "3", "--json", "--digits", "4")
    assert code == 0
    report = json.loads(text)
    assert report["result"] == "9/28"
    assert report["decimal"] == "0.3214"
    assert report["reduction"]["D"] == 4 and report["reduction"]["weight_degree"] == 2
    assert report["inputs"] == {"event": "condorcet-winner", "m": 3, "n": 3}
    assert isinstance(report["ms"], int)


def test_reduce_report():
    code, text = invoke("reduce", "--event", "condorcet-winner", "--m", "4")
    assert code == 0
    assert text.splitlines()[0].startswith("binom(n_a+5,5)")
    assert "weight degree 16" in text
    assert "n_a [6]: abcd, abdc, acbd, acdb, adbc, adcb" in text


def test_quasipoly_report():
    code, text = invoke("quasipoly", "--event", "condorcet-winner", "--m", "3")
    assert code == 0
    assert text.startswith("   1/384 * n^5\n + ( 1/64 * { 1/2 * n } + 1/32 ) * n^4")
    assert "n = 1 mod 2:" in text


def test_quasipoly_too_small_period():
    assert invoke("quasipoly", "--event", "condorcet-winner", "--m", "3", "--period", "1")[0] == 2


def test_volume_both_ways():
    assert invoke("volume", "--event", "condorcet-winner", "--m", "3")[1].startswith("1/384 ")
    assert invoke("volume", "--event", "condorcet-winner", "--m", "3", "--unreduced")[1].startswith("1/384 ")


def test_event_file(tmp_path):
    path = tmp_path / "cw.json"
    path.write_text(json.dumps({"m": 3, "rows": [{"pairwise": ["a", "b"]}, {"pairwise": ["a", "c"]}]}))
    code, text = invoke("limit", "--event", str(path))
    assert code == 0 and text.startswith("5/16 ")
    assert invoke("limit", "--event", str(path), "--m", "4")[0] == 2


def test_bad_input_exit_codes(tmp_path):
    assert invoke("limit", "--event", "no-such-event", "--m", "3")[0] == 2
    assert invoke("limit", "--event", "condorcet-winner")[0] == 2
    assert invoke("limit", "--event", "runoff-reversal", "--m", "2")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert invoke("limit", "--event", str(bad))[0] == 2
    with pytest.raises(SystemExit) as exc:
        invoke("count", "--event", "condorcet-winner", "--m", "3", "--n", "-1")
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        invoke("frobnicate")
    assert exc.value.code == 2


def test_degenerate_exit_code(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"m": 3, "rows": [{"pairwise": ["a", "b"]}, {"pairwise": ["b", "a"]}]}))
    assert invoke("limit", "--event", str(path))[0] == 3
    assert invoke("volume", "--event", str(path), "--unreduced")[0] == 3
    assert invoke("prob", "--event", "condorcet-efficiency-violation", "--m", "3", "--n", "0")[0] == 3


def test_threads_do_not_change_output():
    one = invoke("count", "--event", "condorcet-winner", "--m", "4", "--n", "7", "--threads", "1")[1]
    many = invoke("count", "--event", "condorcet-winner", "--m", "4", "--n", "7", "--threads", "4")[1]
    assert one.splitlines()[0] == many.splitlines()[0]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "iacprob", "limit", "--event", "condorcet-winner", "--m", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "5/16 (0.3125000000)"
