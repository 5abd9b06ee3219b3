"""On-disk formats: batch CSV plus JSON sidecar, and the plain CSV tables.

Numbers are written with ``repr`` (shortest round-trip decimal), so every
CSV parses back to the identical doubles. Timestamps only ever go into the
sidecar, keeping the CSV byte-identical across reruns.
"""

import json

import numpy as np

from betatw import __version__
from betatw.ensembles import EnsembleSpec, SampleBatch


def sidecar_path(path):
    return f"{path}.json"


def batch_csv(batch):
    lines = ["index,scaled_value"]
    lines += [f"{i},{float(v)!r}" for i, v in enumerate(batch.samples)]
    return "\n".join(lines) + "\n"


def batch_sidecar(batch):
    return {
        "spec": batch.spec.to_dict(),
        "seed": batch.seed,
        "n": batch.n,
        "version": batch.metadata.get("version", __version__),
        "timestamp": batch.metadata.get("timestamp"),
    }


def write_batch(batch, path):
    with open(path, "w") as fh:
        fh.write(batch_csv(batch))
    with open(sidecar_path(path), "w") as fh:
        json.dump(batch_sidecar(batch), fh, indent=2)


def read_batch(path):
    with open(sidecar_path(path)) as fh:
        meta = json.load(fh)
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "index,scaled_value":
            raise ValueError(f"unexpected batch header {header!r}")
        values = [float(line.split(",")[1]) for line in fh if line.strip()]
    if len(values) != meta["n"]:
        raise ValueError(f"sidecar says n={meta['n']} but CSV has {len(values)} rows")
    return SampleBatch(
        EnsembleSpec(**meta["spec"]),
        meta["seed"],
        np.array(values),
        {"version": meta.get("version"), "timestamp": meta.get("timestamp")},
    )


def table_csv(header, rows):
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(v if isinstance(v, str) else repr(float(v)) for v in row))
    return "\n".join(out) + "\n"


def read_table(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return header, rows
