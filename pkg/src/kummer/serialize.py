"""Deterministic CSV/JSON writers for every result type.

CSV files carry a `# schema=1` header comment; floats are written with
17 significant digits so doubles round-trip bit exactly.
"""

from __future__ import annotations

import json
import os


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_csv(path, header_fields, rows, comments=()):
    with open(path, "w") as fh:
        fh.write("# schema=1\n")
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header_fields) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def read_csv(path):
    """Rows of a schema=1 CSV as (header, list-of-string-tuples)."""
    header = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split(",")
            else:
                rows.append(tuple(line.split(",")))
    return header, rows


def _spec_dict(spec):
    return {"m": spec.m, "n": spec.n, "N": spec.N, "eps": spec.eps, "v": spec.v}


def write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def write_spectrum(result, stem):
    write_csv(
        stem + ".csv",
        ("index", "raw", "scaled"),
        [
            (i, raw, sc)
            for i, (raw, sc) in enumerate(
                zip(result.raw_eigenvalues, result.scaled_eigenvalues)
            )
        ],
    )
    write_json(
        stem + ".json",
        {
            "spec": _spec_dict(result.spec),
            "raw_eigenvalues": list(result.raw_eigenvalues),
            "scaled_eigenvalues": list(result.scaled_eigenvalues),
        },
    )


def write_fixed_points(spec, fps, stem):
    write_csv(
        stem + ".csv",
        ("p", "q", "sx", "energy", "stability", "rate", "location"),
        [(fp.p, fp.q, fp.sx, fp.energy, fp.stability, fp.rate, fp.location) for fp in fps],
    )
    write_json(
        stem + ".json",
        {
            "spec": _spec_dict(spec),
            "fixed_points": [
                {
                    "p": fp.p,
                    "q": fp.q,
                    "sx": fp.sx,
                    "energy": fp.energy,
                    "stability": fp.stability,
                    "rate": fp.rate,
                    "location": fp.location,
                }
                for fp in fps
            ],
        },
    )


def write_bifurcations(spec, events, stem):
    write_csv(
        stem + ".csv",
        ("eps_critical", "kind", "location", "energy"),
        [(ev.eps_critical, ev.kind, ev.location, ev.energy) for ev in events],
    )
    write_json(
        stem + ".json",
        {
            "spec": {k: v for k, v in _spec_dict(spec).items() if k != "eps"},
            "events": [
                {
                    "eps_critical": ev.eps_critical,
                    "kind": ev.kind,
                    "location": ev.location,
                    "energy": ev.energy,
                }
                for ev in events
            ],
        },
    )


def write_sweep(table, stem):
    rows = []
    for eps, levels in zip(table.eps_values, table.scaled_levels):
        for i, e in enumerate(levels):
            rows.append((eps, i, e))
    write_csv(stem + "_levels.csv", ("eps", "index", "scaled_energy"), rows)
    rows = []
    for eps, energies, kinds in zip(
        table.eps_values, table.fixed_point_energies, table.fixed_point_kinds
    ):
        for e, k in zip(energies, kinds):
            rows.append((eps, e, k))
    write_csv(stem + "_fixed_points.csv", ("eps", "energy", "stability"), rows)
    write_json(
        stem + ".json",
        {
            "spec": {k: v for k, v in _spec_dict(table.spec).items() if k != "eps"},
            "eps": list(table.eps_values),
            "scaled_levels": [list(v) for v in table.scaled_levels],
            "fixed_point_energies": [list(v) for v in table.fixed_point_energies],
            "fixed_point_kinds": list(table.fixed_point_kinds),
        },
    )


def write_trajectory(spec, record, stem):
    write_csv(
        stem + ".csv",
        ("t", "sx", "sy", "sz"),
        [(t, s[0], s[1], s[2]) for t, s in zip(record.times, record.states)],
        comments=(f"drift_H={record.drift_h!r}", f"drift_C={record.drift_c!r}"),
    )
    write_json(
        stem + ".json",
        {
            "spec": _spec_dict(spec),
            "times": list(record.times),
            "states": [list(s) for s in record.states],
            "drift_H": record.drift_h,
            "drift_C": record.drift_c,
        },
    )


def write_mesh(spec, mesh, stem):
    n_p, n_theta, _ = mesh.shape
    rows = []
    for i in range(n_p):
        for j in range(n_theta):
            rows.append(tuple(mesh[i, j]))
    write_csv(
        stem + ".csv",
        ("sx", "sy", "sz"),
        rows,
        comments=(
            f"grid: {n_p} heights (south to north pole), {n_theta} azimuths per height",
            "row order: height-major, azimuth fastest",
        ),
    )


def write_semiclassical(result, stem, exact=None):
    if exact is None:
        rows = [(lv.nu, lv.energy, lv.regime) for lv in result.levels]
        fields = ("nu", "scaled_energy", "regime")
    else:
        rows = [
            (lv.nu, lv.energy, ex, abs(lv.energy - ex), lv.regime)
            for lv, ex in zip(result.levels, exact)
        ]
        fields = ("nu", "scaled_energy", "exact", "abs_deviation", "regime")
    write_csv(stem + ".csv", fields, rows)
    write_json(
        stem + ".json",
        {
            "spec": _spec_dict(result.spec),
            "levels": [
                {"nu": lv.nu, "energy": lv.energy, "regime": lv.regime}
                for lv in result.levels
            ],
        },
    )


def write_dos(spec, hist, curve_energies, curve_values, stem, saddle_energies=()):
    centers = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
    write_csv(
        stem + "_histogram.csv",
        ("bin_left", "bin_right", "bin_center", "density"),
        [
            (hist.bin_edges[i], hist.bin_edges[i + 1], centers[i], hist.density[i])
            for i in range(len(hist.density))
        ],
    )
    comments = ()
    if len(saddle_energies):
        listed = ", ".join(_fmt(float(s)) for s in saddle_energies)
        comments = (f"log-divergent saddle energies (curve masked within 1e-6): {listed}",)
    write_csv(
        stem + "_curve.csv",
        ("scaled_energy", "period_over_2pi"),
        list(zip(curve_energies, curve_values)),
        comments=comments,
    )


def ensure_dir(path):
    if path and not os.path.isdir(path):
        os.makedirs(path, exist_ok=True)
