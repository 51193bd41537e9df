import json
import os

import numpy as np
import pytest

from modrep.cli import main
from modrep.errors import InputError
from modrep.ffield import GF, Mat
from modrep.io_formats import (parse_manifest, parse_matrix_file, parse_perm_file,
                               parse_word_file, write_matrix_file, write_perm_file,
                               write_word_file)
from modrep.perm import Perm
from modrep.prng import Prng


def test_matrix_format_a_roundtrip(tmp_path, F3):
    m = Mat.identity(F3, 3)
    path = tmp_path / "id3.mx"
    write_matrix_file(path, m, fmt="A")
    assert parse_matrix_file(path) == m
    m9 = Mat.random(GF(3, 2), 5, 7, Prng(3))
    path9 = tmp_path / "r.mx"
    write_matrix_file(path9, m9, fmt="A")
    assert parse_matrix_file(path9) == m9


def test_matrix_format_b(tmp_path, F3):
    # compatibility header `1 3 8 8` parses an 8x8 matrix over GF(3)
    m = Mat.random(F3, 8, 8, Prng(1))
    path = tmp_path / "b.mx"
    write_matrix_file(path, m, fmt="B")
    first = open(path).readline().split()
    assert first == ["1", "3", "8", "8"]
    assert parse_matrix_file(path) == m
    # wide rows wrap at 80 columns
    wide = Mat.random(F3, 2, 100, Prng(2))
    wpath = tmp_path / "wide.mx"
    write_matrix_file(wpath, wide, fmt="B")
    lines = open(wpath).read().splitlines()
    assert max(len(l) for l in lines[1:]) <= 80
    assert parse_matrix_file(wpath) == wide


def test_matrix_entry_out_of_range(tmp_path):
    path = tmp_path / "bad.mx"
    path.write_text("matrix q=9 rows=1 cols=2\n3 9\n")
    with pytest.raises(InputError) as exc:
        parse_matrix_file(path)
    assert "not below q=9" in str(exc.value)


def test_matrix_truncation_diagnostics(tmp_path):
    path = tmp_path / "short.mx"
    path.write_text("matrix q=3 rows=3 cols=2\n1 2\n")
    with pytest.raises(InputError) as exc:
        parse_matrix_file(path)
    assert "truncated" in str(exc.value)


def test_perm_format_roundtrips(tmp_path):
    p = Perm.from_cycles(8, [(0, 1, 2), (5, 6)])
    for fmt in ("A", "B"):
        path = tmp_path / f"p.{fmt}"
        write_perm_file(path, [p, p.inverse()], fmt=fmt)
        assert parse_perm_file(path) == [p, p.inverse()]


def test_perm_format_b_large_degree(tmp_path):
    images = list(range(704))
    images[0], images[1] = 1, 0
    images[700], images[703] = images[703], images[700]
    p = Perm(images)
    path = tmp_path / "big.pb"
    write_perm_file(path, [p], fmt="B")
    assert open(path).readline().strip() == "12 1 704 1"
    got = parse_perm_file(path)
    assert got == [p]


def test_perm_repeated_image_error(tmp_path):
    path = tmp_path / "bad.p"
    path.write_text("permutation degree=3\n1 1 2\n")
    with pytest.raises(InputError) as exc:
        parse_perm_file(path)
    assert "repeated image" in str(exc.value)


def test_word_file_roundtrip(tmp_path):
    words = [(), (0, 1, -1), (2, -3, 0)]
    path = tmp_path / "w.words"
    write_word_file(path, words)
    assert parse_word_file(path) == words


def test_builtin_manifests_resolve():
    from importlib import resources
    for name in ("hprime", "a8", "c4xhp", "twohs"):
        ref = resources.files("modrep.data").joinpath(f"{name}.manifest")
        m = parse_manifest(str(ref))
        assert m.field.p == 3


def test_cli_order(capsys):
    rc = main(["order", "--manifest", "builtin:hprime.manifest"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "group order 72" in out
    assert "P: order 9" in out
    rc = main(["order", "--manifest", "builtin:a8.manifest"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "group order 20160" in out
    assert "Hp: order 72" in out


def test_cli_chop_report_determinism(tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    rc = main(["chop", "--manifest", "builtin:hprime.manifest", "--module", "kP",
               "--out", str(out1)])
    assert rc == 0
    rc = main(["chop", "--manifest", "builtin:hprime.manifest", "--module", "kP",
               "--out", str(out2)])
    assert rc == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["task"] == "chop"
    assert doc["seed"] == 0
    assert {f["iso_label"]: f["multiplicity"] for f in doc["results"]["factors"]} == \
        {"1a": 1, "1b": 1, "1c": 1, "1d": 1, "2": 2}


def test_cli_decompose_and_socle(tmp_path, capsys):
    rc = main(["decompose", "--manifest", "builtin:hprime.manifest", "--module", "kP"])
    assert rc == 0
    rc = main(["socle", "--manifest", "builtin:hprime.manifest", "--module", "ref2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "2" in out


def test_cli_hom_end(tmp_path):
    rc = main(["hom", "--manifest", "builtin:hprime.manifest",
               "--source", "ref1a", "--target", "ref1a"])
    assert rc == 0
    rc = main(["end", "--manifest", "builtin:hprime.manifest", "--module", "ref2"])
    assert rc == 0


def test_cli_input_error_exit_code():
    rc = main(["chop", "--manifest", "builtin:hprime.manifest", "--module", "nope"])
    assert rc == 2


def test_cli_cap_failure_exit_code():
    # a tiny cap makes the transversal computation refuse
    rc = main(["vertex", "--manifest", "builtin:a8.manifest", "--module", "s1",
               "--sylow", "P", "--cap", "10"])
    assert rc == 1


def test_cli_trivsrc(tmp_path):
    rc = main(["trivsrc", "--manifest", "builtin:hprime.manifest",
               "--module", "ref1a", "--vertex-subgroup", "P"])
    assert rc == 0


def test_cli_blocks_and_cartan(tmp_path):
    out = tmp_path / "cartan.json"
    rc = main(["cartan", "--manifest", "builtin:hprime.manifest", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["results"]["cartan"] == [
        [3, 0, 1, 1, 2], [0, 3, 1, 1, 2], [1, 1, 3, 0, 2],
        [1, 1, 0, 3, 2], [2, 2, 2, 2, 5]]
    rc = main(["blocks", "--manifest", "builtin:c4xhp.manifest"])
    assert rc == 0


def test_cli_induce_writes_matrices(tmp_path):
    prefix = str(tmp_path / "ind")
    rc = main(["induce", "--manifest", "builtin:hprime.manifest",
               "--subgroup", "P", "--write-prefix", prefix])
    assert rc == 0
    m = parse_matrix_file(prefix + ".g1.mx")
    assert m.nrows == 8  # index of P in the order-72 group
