#!/usr/bin/env python3
"""Generate the bundled test fixtures and their independently summed totals.

Everything here is computed with plain Python floats and its own copies of
the volume/mass formulas so the expected values stay independent of the
C++ implementation they check. Re-run from the repository root:

    python3 scripts/make_fixtures.py
"""

import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "tests" / "fixtures"
CAT = ROOT / "data" / "catalogs"

SECTIONS = [
    ("W310×79", 0.0101, 80.661),
    ("W310×118", 0.0151, 119.68),
    ("W250×49.1", 0.00626, 49.1),
    ("W200×46.1", 0.00589, 46.1),
    ("SQ300", 0.09, 706.5),
]
PIPES = [
    ("24", "S-60", 0.6096, 0.02461),
    ("4", "S-40", 0.1143, 0.00602),
    ("6", "S-40", 0.1683, 0.00711),
    ("8", "S-40", 0.2191, 0.00818),
    ("12", "STD", 0.3238, 0.00953),
]
MATERIALS = [
    ("CS-PIPE", 7.853753057),
    ("STEEL", 7.85),
    ("CONCRETE", 2.4),
]


def g9(x):
    return "%.9g" % x


def write_obj(path, vertices, triangles, header):
    lines = ["# " + header]
    lines += ["v %s %s %s" % (g9(x), g9(y), g9(z)) for x, y, z in vertices]
    lines += ["f %d %d %d" % (a + 1, b + 1, c + 1) for a, b, c in triangles]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def cuboid(lo, hi):
    # z-major binary corner order: index = ix + 2*iy + 4*iz
    v = []
    for iz in (0, 1):
        for iy in (0, 1):
            for ix in (0, 1):
                v.append((hi[0] if ix else lo[0], hi[1] if iy else lo[1], hi[2] if iz else lo[2]))
    t = [(0, 2, 3), (0, 3, 1), (4, 5, 7), (4, 7, 6), (0, 1, 5), (0, 5, 4),
         (2, 6, 7), (2, 7, 3), (0, 4, 6), (0, 6, 2), (1, 3, 7), (1, 7, 5)]
    return v, t


def cylinder_y(radius, height, n, origin=(0.0, 0.0, 0.0)):
    """Cylinder along +y with its bbox min at origin."""
    ox, oy, oz = origin
    v = []
    for ring_y in (0.0, height):
        for k in range(n):
            a = 2.0 * math.pi * k / n
            v.append((ox + radius + radius * math.cos(a), oy + ring_y, oz + radius + radius * math.sin(a)))
    bottom_c = len(v)
    v.append((ox + radius, oy, oz + radius))
    top_c = len(v)
    v.append((ox + radius, oy + height, oz + radius))
    t = []
    for k in range(n):
        k2 = (k + 1) % n
        b0, b1, t0, t1 = k, k2, n + k, n + k2
        t.append((b0, t0, t1))
        t.append((b0, t1, b1))
        t.append((bottom_c, b0, b1))
        t.append((top_c, t1, t0))
    return v, t


def signed_volume(v, t):
    s = 0.0
    for a, b, c in t:
        ax, ay, az = v[a]
        bx, by, bz = v[b]
        cx, cy, cz = v[c]
        s += ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx)
    return s / 6.0


def bbox(v):
    return [min(p[i] for p in v) for i in range(3)], [max(p[i] for p in v) for i in range(3)]


def rotation(rng):
    # Uniform random rotation via a normalized quaternion.
    q = [rng.gauss(0, 1) for _ in range(4)]
    n = math.sqrt(sum(c * c for c in q))
    w, x, y, z = (c / n for c in q)
    return [
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ]


def write_catalogs():
    CAT.mkdir(parents=True, exist_ok=True)
    (CAT / "sections.csv").write_text(
        "name,area_m2,linear_mass_kg_per_m\n" + "".join("%s,%r,%r\n" % r for r in SECTIONS), encoding="utf-8")
    (CAT / "pipes.csv").write_text(
        "npd,schedule,outer_diameter_m,thickness_m\n" + "".join("%s,%s,%r,%r\n" % r for r in PIPES),
        encoding="utf-8")
    (CAT / "materials.csv").write_text(
        "name,density_ton_per_m3\n" + "".join("%s,%r\n" % r for r in MATERIALS), encoding="utf-8")


def module_sample():
    out = FIX / "module_sample"
    sections = {n: (a, m) for n, a, m in SECTIONS}
    pipes = {(n, s): (od, t) for n, s, od, t in PIPES}
    dens = dict(MATERIALS)
    elements = []

    def add(name, props, lo, hi, mesh=None):
        e = {"id": "E%03d" % (len(elements) + 1), "name": name, "properties": props}
        if mesh is None:
            e["aabb"] = {"min": list(lo), "max": list(hi)}
        else:
            e["mesh"] = mesh
        elements.append((e, lo, hi))

    steel = {"discipline": "structural-steel", "material": "STEEL"}
    xs = [0.0, 6.0, 12.0, 18.0]
    ys = [0.0, 6.0, 12.0]
    # Reference beam first: horizontal W310x79 along x at the top level.
    for level in (3.3, 6.6):
        for y in ys:
            for x0, x1 in zip(xs, xs[1:]):
                add("W310×79", dict(steel), (x0, y - 0.15, level), (x1, y + 0.15, level + 0.3))
        for x in xs:
            for y0, y1 in zip(ys, ys[1:]):
                add("W310×79", dict(steel), (x - 0.15, y0, level), (x + 0.15, y1, level + 0.3))
    for x in xs:
        for y in ys:
            add("W310×118", dict(steel), (x - 0.15, y - 0.15, 0.0), (x + 0.15, y + 0.15, 6.9))
    # Secondary beams with a narrow flange.
    for x in (3.0, 9.0, 15.0, 21.0):
        add("W310×79", dict(steel), (x - 0.1, 0.0, 6.6), (x + 0.1, 6.0, 6.9))
    # Vertical bracing, tagged as rotated.
    for x0 in (0.0, 6.0, 12.0):
        for y in (0.0, 12.0):
            add("W310×79", dict(steel, orientation="rotated"), (x0, y - 0.15, 0.0), (x0 + 6.0, y + 0.15, 6.9))
    plate_lo, plate_hi = (0.25, 0.25, 0.0), (0.75, 0.75, 0.025)
    v, t = cuboid(plate_lo, plate_hi)
    write_obj(out / "meshes" / "base_plate.obj", v, t, "base plate 0.5 x 0.5 x 0.025")
    add("PL-BASE", dict(steel, shape="box"), plate_lo, plate_hi, mesh="meshes/base_plate.obj")
    piping = {"discipline": "piping", "material": "CS-PIPE"}
    # Bounding box of the validated 24" line.
    add("PIPE-24", dict(piping, npd="24", schedule="S-60"),
        (2.0, 0.0, 4.0), (2.0 + 0.60957497, 14.94404489, 4.0 + 0.60957497))
    add("PIPE-6", dict(piping, npd="6", schedule="S-40"), (0.0, 3.0, 5.0), (8.0, 3.1683, 5.1683))
    add("PIPE-4", dict(piping, npd="4", schedule="S-40"), (10.0, 10.0, 0.5), (10.1143, 10.1143, 5.5))
    add("ROD-SUPPORT", {"discipline": "piping", "material": "STEEL"}, (4.0, 4.0, 0.0), (4.05, 4.05, 1.2))
    assert len(elements) == 61, len(elements)

    scene = {"units": "m", "elements": [e for e, _, _ in elements]}
    (out / "scene.json").write_text(json.dumps(scene, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")

    filters = {
        "structural-steel": {"pred": {"key": "discipline", "op": "equals", "value": "structural-steel"}},
        "piping": {"pred": {"key": "discipline", "op": "equals", "value": "piping"}},
        "w310-straight": {"and": [
            {"pred": {"key": "name", "op": "prefix", "value": "W310"}},
            {"not": {"pred": {"key": "orientation", "op": "equals", "value": "rotated"}}},
        ]},
        "all": {"or": [
            {"pred": {"key": "discipline", "op": "equals", "value": "structural-steel"}},
            {"pred": {"key": "discipline", "op": "equals", "value": "piping"}},
        ]},
    }
    (out / "filters.json").write_text(json.dumps(filters, indent=2) + "\n", encoding="utf-8")
    areas = [
        {"name": "WA-SOUTH", "priority": 1, "min": [-1.0, -1.0, -1.0], "max": [25.0, 6.0, 10.0]},
        {"name": "WA-NORTH", "priority": 2, "min": [-1.0, 6.0, -1.0], "max": [25.0, 16.0, 10.0]},
    ]
    (out / "workareas.json").write_text(json.dumps(areas, indent=2) + "\n", encoding="utf-8")

    # Independent estimate of every element, then totals in element-id order.
    rows = []
    for e, lo, hi in elements:
        p = e["properties"]
        ext = [hi[i] - lo[i] for i in range(3)]
        lmax = max(ext)
        if p.get("shape") == "box":
            vol = ext[0] * ext[1] * ext[2]
            mass = vol * dens[p["material"]] * 1000.0
        elif "npd" in p:
            od, t = pipes[(p["npd"], p["schedule"])]
            idia = od - 2.0 * t
            area = math.pi / 4.0 * (od * od - idia * idia)
            vol = area * lmax
            mass = vol * dens[p["material"]] * 1000.0
        elif e["name"] in sections:
            area, lin = sections[e["name"]]
            length = math.sqrt(ext[0] ** 2 + ext[1] ** 2 + ext[2] ** 2) if p.get("orientation") == "rotated" else lmax
            vol = area * length
            mass = lin * length
        else:
            # solid round bar: the two equal extents are x and y
            d = (ext[0] + ext[1]) / 2.0
            vol = math.pi * d * d / 4.0 * ext[2]
            mass = vol * dens[p["material"]] * 1000.0
        rows.append((e["id"], p["discipline"], vol, mass))

    def totals(sel):
        vol = 0.0
        kg = 0.0
        n = 0
        for rid, disc, v_, m_ in sorted(rows):
            if sel(disc):
                vol += v_
                kg += m_
                n += 1
        return {"count": n, "total_volume_m3": "%.4f" % vol, "total_mass_ton": "%.4f" % (kg / 1000.0)}

    expected = {
        "element_count": len(rows),
        "structural_steel_ids": [e["id"] for e, _, _ in elements if e["properties"]["discipline"] == "structural-steel"],
        "piping_ids": [e["id"] for e, _, _ in elements if e["properties"]["discipline"] == "piping"],
        "groups": {
            "discipline:piping": totals(lambda d: d == "piping"),
            "discipline:structural-steel": totals(lambda d: d == "structural-steel"),
        },
        "total": totals(lambda d: True),
    }
    (out / "expected_totals.json").write_text(json.dumps(expected, indent=2) + "\n", encoding="utf-8")


def validation_scenes():
    out = FIX / "validation"
    rng = random.Random(20160401)
    steel = {"discipline": "validation", "material": "STEEL"}

    cub = []
    for i in range(5):
        lo = [rng.uniform(-10, 10) for _ in range(3)]
        hi = [lo[k] + rng.uniform(0.1, 8) for k in range(3)]
        v, t = cuboid(lo, hi)
        write_obj(out / "meshes" / ("cuboid_%d.obj" % i), v, t, "cuboid %d" % i)
        cub.append({"id": "C%d" % i, "name": "BLOCK", "properties": dict(steel, shape="box"),
                    "mesh": "meshes/cuboid_%d.obj" % i})
    (out / "cuboids.json").write_text(json.dumps({"units": "m", "elements": cub}, indent=2) + "\n")

    cyl = []
    for i in range(5):
        d = rng.uniform(0.05, 1.5)
        h = rng.uniform(0.5, 15)
        v, t = cylinder_y(d / 2.0, h, 256, (rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)))
        assert signed_volume(v, t) > 0
        write_obj(out / "meshes" / ("cylinder_%d.obj" % i), v, t, "cylinder %d, 256 segments" % i)
        cyl.append({"id": "Y%d" % i, "name": "ROD", "properties": dict(steel, shape="cylinder"),
                    "mesh": "meshes/cylinder_%d.obj" % i})
    (out / "cylinders.json").write_text(json.dumps({"units": "m", "elements": cyl}, indent=2) + "\n")

    rot = []
    expected = {}
    size = (10.0, 0.3, 0.3)
    for i in range(5):
        r = rotation(rng)
        v0, t = cuboid([-s / 2 for s in size], [s / 2 for s in size])
        v = [tuple(sum(r[a][b] * p[b] for b in range(3)) for a in range(3)) for p in v0]
        write_obj(out / "meshes" / ("prism_%d.obj" % i), v, t, "0.3 x 0.3 x 10 prism, rotated")
        # Analytic bbox extents of the rotated prism: sum_j |R_ij| * size_j
        ext = [sum(abs(r[a][b]) * size[b] for b in range(3)) for a in range(3)]
        diag = math.sqrt(sum(e * e for e in ext))
        expected["R%d" % i] = (0.09 * diag - 0.9) / 0.9
        rot.append({"id": "R%d" % i, "name": "SQ300", "properties": dict(steel, orientation="rotated"),
                    "mesh": "meshes/prism_%d.obj" % i})
    (out / "rotated.json").write_text(json.dumps({"units": "m", "elements": rot}, indent=2) + "\n")
    (out / "expected_rotated.json").write_text(json.dumps(expected, indent=2) + "\n")


def standalone_meshes():
    out = FIX / "meshes"
    v, t = cuboid((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))
    write_obj(out / "unit_cube.obj", v, t, "unit cube")
    write_obj(out / "open_cube.obj", v, t[:-2], "unit cube with one face removed")
    write_obj(out / "tetra.obj", [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)],
              [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)], "unit right tetrahedron")
    v, t = cylinder_y(0.3048, 14.944, 256)
    assert len(v) == 514 and len(t) == 1024
    write_obj(out / "cylinder_256.obj", v, t, "D 0.6096 x L 14.944 along y, 256 segments")


if __name__ == "__main__":
    write_catalogs()
    module_sample()
    validation_scenes()
    standalone_meshes()
