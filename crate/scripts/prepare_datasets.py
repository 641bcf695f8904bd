#!/usr/bin/env python3
"""Convert public benchmark graphs into the paire text formats.

Supported sources:
  cora       LINQS release (cora.content / cora.cites)
  cuneiform  TU Dortmund graph-kernel release (Cuneiform_*.txt)
  webkb      Geom-GCN release of Cornell / Wisconsin
             (out1_graph_edges.txt / out1_node_feature_label.txt)

When no raw directory is given for cora or cuneiform, the script looks for
copies shipped inside the `pgl` and `grakel` wheels on the package index.
"""

import argparse
import os
import subprocess
import sys
import tempfile
import zipfile


def write_matrix(path, rows, fmt=str):
    with open(path, "w") as f:
        f.write(f"{len(rows)} {len(rows[0]) if rows else 0}\n")
        for r in rows:
            f.write(" ".join(fmt(v) for v in r))
            f.write("\n")


def write_edges(path, edges, note):
    with open(path, "w") as f:
        f.write(f"# {note}\n")
        for s, t in edges:
            f.write(f"{s}\t{t}\n")


def one_hot(idx, k):
    row = [0] * k
    row[idx] = 1
    return row


def fetch_from_wheel(package, member_prefix, dest):
    tmp = tempfile.mkdtemp()
    subprocess.run(
        [sys.executable, "-m", "pip", "download", package, "--no-deps", "-q", "-d", tmp],
        check=True,
    )
    wheel = next(os.path.join(tmp, w) for w in os.listdir(tmp) if w.endswith(".whl"))
    with zipfile.ZipFile(wheel) as z:
        members = [m for m in z.namelist() if m.startswith(member_prefix)]
        if not members:
            raise SystemExit(f"{package}: no members under {member_prefix}")
        z.extractall(dest, members)
    return os.path.join(dest, member_prefix)


def convert_cora(raw, out):
    ids, feats, classes = {}, [], []
    with open(os.path.join(raw, "cora.content")) as f:
        for line in f:
            parts = line.split()
            ids[parts[0]] = len(ids)
            feats.append([int(v) for v in parts[1:-1]])
            classes.append(parts[-1])
    names = sorted(set(classes))
    edges = []
    with open(os.path.join(raw, "cora.cites")) as f:
        for line in f:
            cited, citing = line.split()
            edges.append((ids[citing], ids[cited]))
    os.makedirs(out, exist_ok=True)
    write_edges(os.path.join(out, "edges.tsv"), edges, "cora citing -> cited (LINQS order)")
    write_matrix(os.path.join(out, "features.txt"), feats)
    write_matrix(
        os.path.join(out, "node_labels.txt"),
        [one_hot(names.index(c), len(names)) for c in classes],
    )
    print(f"cora: {len(feats)} nodes, {len(edges)} edges, {len(feats[0])} features")


def read_rows(path):
    with open(path) as f:
        return [[v.strip() for v in line.split(",")] for line in f if line.strip()]


def convert_cuneiform(raw, out):
    p = lambda name: os.path.join(raw, f"Cuneiform_{name}.txt")
    edges = [(int(a) - 1, int(b) - 1) for a, b in read_rows(p("A"))]
    feats = [[float(v) for v in r] for r in read_rows(p("node_attributes"))]
    node_lab = read_rows(p("node_labels"))
    edge_lab = read_rows(p("edge_labels"))
    # node label components: vertex role (4 values) and wedge type (3 values)
    nl = [one_hot(int(r[0]), 4) + one_hot(int(r[1]), 3) for r in node_lab]
    el = [one_hot(int(r[0]), 2) for r in edge_lab]
    os.makedirs(out, exist_ok=True)
    write_edges(os.path.join(out, "edges.tsv"), edges, "cuneiform (TU), both orientations listed")
    write_matrix(os.path.join(out, "features.txt"), feats, repr)
    write_matrix(os.path.join(out, "node_labels.txt"), nl)
    write_matrix(os.path.join(out, "edge_labels.txt"), el)
    print(f"cuneiform: {len(feats)} nodes, {len(edges)} edges, {len(feats[0])} features")


def convert_webkb(raw, out, name):
    feats, classes = {}, {}
    with open(os.path.join(raw, "out1_node_feature_label.txt")) as f:
        next(f)
        for line in f:
            nid, fv, lab = line.rstrip("\n").split("\t")
            feats[int(nid)] = [int(v) for v in fv.split(",")]
            classes[int(nid)] = int(lab)
    n = len(feats)
    k = max(classes.values()) + 1
    edges = []
    with open(os.path.join(raw, "out1_graph_edges.txt")) as f:
        next(f)
        for line in f:
            a, b = line.split()
            edges.append((int(a), int(b)))
    os.makedirs(out, exist_ok=True)
    write_edges(os.path.join(out, "edges.tsv"), edges, f"{name} (geom-gcn release)")
    write_matrix(os.path.join(out, "features.txt"), [feats[i] for i in range(n)])
    write_matrix(os.path.join(out, "node_labels.txt"), [one_hot(classes[i], k) for i in range(n)])
    print(f"{name}: {n} nodes, {len(edges)} edges, {len(feats[0])} features")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="data")
    ap.add_argument("--cora-raw")
    ap.add_argument("--cuneiform-raw")
    ap.add_argument("--cornell-raw")
    ap.add_argument("--wisconsin-raw")
    ap.add_argument("--skip-wheels", action="store_true", help="do not fetch raw data from wheels")
    args = ap.parse_args()

    scratch = tempfile.mkdtemp()
    cora = args.cora_raw
    if cora is None and not args.skip_wheels:
        cora = fetch_from_wheel("pgl", "pgl/data/cora/", scratch)
    if cora:
        convert_cora(cora, os.path.join(args.out, "cora"))

    cune = args.cuneiform_raw
    if cune is None and not args.skip_wheels:
        cune = fetch_from_wheel("grakel", "grakel/tests/data/Cuneiform/", scratch)
    if cune:
        convert_cuneiform(cune, os.path.join(args.out, "cuneiform"))

    for name in ("cornell", "wisconsin"):
        raw = getattr(args, f"{name}_raw")
        if raw:
            convert_webkb(raw, os.path.join(args.out, name), name)


if __name__ == "__main__":
    main()
