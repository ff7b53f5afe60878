import json
import subprocess
import sys

import pytest

from frtbialg.cli import main
from frtbialg.instance import InstanceError, load_instance, parse_instance


def run(*args):
    return subprocess.run([sys.executable, "-m", "frtbialg", *args], capture_output=True, text=True)


def test_check_bundled_exit_zero(capsys):
    assert main(["check", "example-4-1-i1"]) == 0
    assert "pass" in capsys.readouterr().out


def test_module_entry_point():
    out = run("dims", "example-4-1-i1")
    assert out.returncode == 0 and "dims: 4 16 32" in out.stdout


def test_mutated_sigma_exit_one(tmp_path, i1):
    p = tmp_path / "bad.toml"
    p.write_text(i1.text.replace('["0", "0", "0", "0", "0", ["1"]],',
                                 '["0", "0", "0", "0", "0", ["1"]],\n  ["0", "0", "0", "1", "0", ["1"]],'))
    rep = tmp_path / "r.json"
    assert main(["check", str(p), "--report", str(rep)]) == 1
    data = json.loads(rep.read_text())
    assert data["status"] == "fail"
    assert any(r["witness"].get("violations") for r in data["records"])


@pytest.mark.parametrize("patch,msg,line", [
    (('psi = ["1"]', 'psi = ["1/0"]'), "zero denominator", 23),
    (('psi = ["1"]', 'psi = ["1"]\nextra = 1'), "unknown key", 24),
    (("[options]", "[opts]"), "unknown section", 43),
    (('labels = ["0", "1"]\n\n[x]', 'labels = ["0", "1"\n\n[x]'), "", 0),
])
def test_parse_errors_have_locations(patch, msg, line, i1, tmp_path):
    text = i1.text.replace(*patch, 1)
    assert text != i1.text
    with pytest.raises(InstanceError) as ei:
        parse_instance(text, "bad.toml")
    assert msg in ei.value.message
    assert ei.value.line > 0 and (not line or ei.value.line == line)
    p = tmp_path / "bad.toml"
    p.write_text(text)
    assert main(["check", str(p)]) == 3


def test_usage_errors_exit_three(capsys):
    with pytest.raises(SystemExit) as e:
        main(["verify", "nonsense", "example-4-1-i1"])
    assert e.value.code == 3
    assert main(["check", "/nonexistent/file.toml"]) == 3


def test_face_only_instance_needs_sigma_for_phi(tmp_path, i1):
    text = i1.text.split("[sigma]")[0] + '[face_w]\nentries = [["0,0", "0,0", "0,0", "0,0", ["1"]]]\n'
    p = tmp_path / "face.toml"
    p.write_text(text)
    assert main(["dims", str(p), "--degree-cap", "1"]) == 0
    assert main(["verify", "phi", str(p)]) == 3


def test_report_is_deterministic_and_thread_free(tmp_path):
    paths = []
    for k, threads in enumerate(("1", "8", "1")):
        p = tmp_path / f"r{k}.json"
        assert main(["verify", "rigidity", "example-4-1-i2", "--threads", threads, "--report", str(p)]) == 0
        paths.append(p.read_bytes())
    assert paths[0] == paths[1] == paths[2]
    assert b"threads" not in paths[0]


def test_digest_tracks_flags(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", "rigidity", "example-4-1-i1", "--report", str(a)])
    main(["verify", "rigidity", "example-4-1-i1", "--membership-bound", "4", "--report", str(b)])
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    assert da["instance_digest"] == db["instance_digest"] and da["digest"] != db["digest"]


def test_bundled_names_resolve():
    assert load_instance("example-4-1-m2").alg.dimension == 4
