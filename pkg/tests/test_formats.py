import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from betatw.ensembles import EnsembleSpec, SampleBatch
from betatw.formats import batch_csv, read_batch, read_table, sidecar_path, table_csv, write_batch
from betatw.montecarlo import run_batch

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(values=st.lists(finite, min_size=1, max_size=50))
def test_batch_roundtrip_is_lossless(values, tmp_path_factory):
    path = tmp_path_factory.mktemp("b") / "batch.csv"
    batch = SampleBatch(EnsembleSpec(beta=3.0, n_dim=7), 11, np.sort(values), {"version": "x"})
    write_batch(batch, path)
    back = read_batch(path)
    assert np.array_equal(back.samples, batch.samples)
    assert back.spec == batch.spec and back.seed == 11


def test_sidecar_contents(tmp_path):
    batch = run_batch(EnsembleSpec(n_dim=10), 5, 3, threads=1)
    path = tmp_path / "b.csv"
    write_batch(batch, path)
    meta = json.loads(open(sidecar_path(path)).read())
    assert set(meta) >= {"spec", "seed", "n", "version"}
    assert meta["n"] == 5 and meta["spec"]["kind"] == "beta_hermite"
    assert open(path).read() == batch_csv(batch)


def test_primary_csv_has_no_timestamp():
    a = run_batch(EnsembleSpec(n_dim=10), 5, 3)
    b = run_batch(EnsembleSpec(n_dim=10), 5, 3)
    assert batch_csv(a) == batch_csv(b)


def test_read_batch_rejects_bad_files(tmp_path):
    batch = run_batch(EnsembleSpec(n_dim=10), 5, 3)
    path = tmp_path / "b.csv"
    write_batch(batch, path)
    path.write_text("value\n1.0\n")
    with pytest.raises(ValueError):
        read_batch(path)
    path.write_text("index,scaled_value\n0,1.0\n")
    with pytest.raises(ValueError):
        read_batch(path)


@given(rows=st.lists(st.tuples(finite, finite), max_size=20))
def test_table_roundtrip(rows, tmp_path_factory):
    path = tmp_path_factory.mktemp("t") / "t.csv"
    path.write_text(table_csv(("x", "y"), rows))
    header, back = read_table(path)
    assert header == ["x", "y"]
    assert [tuple(float(v) for v in r) for r in back] == [tuple(r) for r in rows]


def test_table_keeps_strings():
    assert table_csv(("x", "side"), [(1.0, "left")]) == "x,side\n1.0,left\n"
