#!/usr/bin/env python3
"""Regenerates the bundled mesh fixtures in data/meshes/.

Run from the repository root:  python3 data/gen_fixtures.py
"""
import math
import os

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "meshes")


def write(path, text):
    with open(path, "w") as fh:
        fh.write(text)
    print("wrote", path)


def msh22(nodes, quads, lines=(), points=()):
    """nodes: list of (x, y); quads/lines: 1-based node tags."""
    out = ["$MeshFormat", "2.2 0 8", "$EndMeshFormat", "$Nodes", str(len(nodes))]
    for i, (x, y) in enumerate(nodes, 1):
        out.append(f"{i} {x:.16g} {y:.16g} 0")
    out.append("$EndNodes")
    elems = []
    eid = 1
    for tag in points:
        elems.append(f"{eid} 15 2 0 1 {tag}")
        eid += 1
    for a, b in lines:
        elems.append(f"{eid} 1 2 0 1 {a} {b}")
        eid += 1
    for q in quads:
        elems.append(f"{eid} 3 2 0 2 {' '.join(map(str, q))}")
        eid += 1
    out += ["$Elements", str(len(elems))] + elems + ["$EndElements", ""]
    return "\n".join(out)


def msh41(nodes, quads, lines=()):
    """Single-entity-block layout per dimension."""
    out = ["$MeshFormat", "4.1 0 8", "$EndMeshFormat"]
    n_blocks = 1
    out += ["$Nodes", f"{n_blocks} {len(nodes)} 1 {len(nodes)}"]
    out.append(f"2 1 0 {len(nodes)}")
    for i in range(1, len(nodes) + 1):
        out.append(str(i))
    for x, y in nodes:
        out.append(f"{x:.16g} {y:.16g} 0")
    out.append("$EndNodes")
    blocks = []
    total = 0
    eid = 1
    if lines:
        body = []
        for a, b in lines:
            body.append(f"{eid} {a} {b}")
            eid += 1
        blocks.append((f"1 1 1 {len(lines)}", body))
        total += len(lines)
    body = []
    for q in quads:
        body.append(f"{eid} {' '.join(map(str, q))}")
        eid += 1
    blocks.append((f"2 1 3 {len(quads)}", body))
    total += len(quads)
    out += ["$Elements", f"{len(blocks)} {total} 1 {total}"]
    for head, body in blocks:
        out.append(head)
        out += body
    out += ["$EndElements", ""]
    return "\n".join(out)


def structured(nx, ny, warp=None):
    nodes, quads = [], []
    for j in range(ny + 1):
        for i in range(nx + 1):
            x, y = i / nx, j / ny
            if warp:
                x, y = warp(x, y)
            nodes.append((x, y))
    nid = lambda i, j: j * (nx + 1) + i + 1
    for j in range(ny):
        for i in range(nx):
            quads.append((nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)))
    return nodes, quads


def quad_area(nodes, q):
    pts = [nodes[t - 1] for t in q]
    s = 0.0
    for k in range(4):
        x0, y0 = pts[k]
        x1, y1 = pts[(k + 1) % 4]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def check_valid(nodes, quads, name):
    bad = [q for q in quads if quad_area(nodes, q) <= 0]
    if bad:
        raise SystemExit(f"{name}: {len(bad)} non-positive quads")


def main():
    os.makedirs(OUT, exist_ok=True)

    # 2x2 structured square, v2.2, no boundary tags (reader must derive them).
    nodes, quads = structured(2, 2)
    write(os.path.join(OUT, "square_2x2_v22.msh"), msh22(nodes, quads))

    # Single quad, v4.1, with tagged boundary lines.
    nodes = [(0, 0), (1, 0), (1, 1), (0, 1)]
    quads = [(1, 2, 3, 4)]
    lines = [(1, 2), (2, 3), (3, 4), (4, 1)]
    write(os.path.join(OUT, "square_1x1_v41.msh"), msh41(nodes, quads, lines))

    # Deliberately broken fixtures for the error paths.
    write(
        os.path.join(OUT, "bad_triangle_v22.msh"),
        "\n".join(
            [
                "$MeshFormat", "2.2 0 8", "$EndMeshFormat",
                "$Nodes", "3", "1 0 0 0", "2 1 0 0", "3 0 1 0", "$EndNodes",
                "$Elements", "1", "1 2 2 0 1 1 2 3", "$EndElements", "",
            ]
        ),
    )
    write(
        os.path.join(OUT, "bad_dangling_v22.msh"),
        "\n".join(
            [
                "$MeshFormat", "2.2 0 8", "$EndMeshFormat",
                "$Nodes", "4", "1 0 0 0", "2 1 0 0", "3 1 1 0", "4 0 1 0",
                "$EndNodes",
                "$Elements", "1", "1 3 2 0 2 1 2 3 9", "$EndElements", "",
            ]
        ),
    )
    write(
        os.path.join(OUT, "bad_binary_v22.msh"),
        "\n".join(["$MeshFormat", "2.2 1 8", "$EndMeshFormat", ""]),
    )

    # Smoothly skewed 12x12 grid (144 elements) on the unit square: interior
    # nodes displaced by a sine field, boundary nodes kept in place.
    def warp(x, y):
        a = 0.045
        dx = a * math.sin(2 * math.pi * y) * math.sin(math.pi * x)
        dy = a * math.sin(2 * math.pi * x) * math.sin(math.pi * y)
        return x + dx, y + dy

    nodes, quads = structured(12, 12, warp)
    check_valid(nodes, quads, "skewed_12x12")
    write(os.path.join(OUT, "skewed_12x12_v22.msh"), msh22(nodes, quads))

    # Gear-like annulus, v4.1: n_r rings by n_t angular segments, outer radius
    # modulated by teeth.  Boundary edges tagged on both rims.
    n_r, n_t = 6, 96
    teeth, amp = 12, 0.06
    r_in, r_out = 0.35, 1.0
    nodes = []
    for j in range(n_r + 1):
        s = j / n_r
        for i in range(n_t):
            th = 2 * math.pi * i / n_t
            r = r_in + s * (r_out + amp * math.sin(teeth * th) - r_in)
            nodes.append((r * math.cos(th), r * math.sin(th)))
    nid = lambda i, j: j * n_t + (i % n_t) + 1
    quads = []
    for j in range(n_r):
        for i in range(n_t):
            # (radial, angular) traversal keeps the winding counter-clockwise
            quads.append((nid(i, j), nid(i, j + 1), nid(i + 1, j + 1), nid(i + 1, j)))
    check_valid(nodes, quads, "gearlike")
    lines = [(nid(i, 0), nid(i + 1, 0)) for i in range(n_t)]
    lines += [(nid(i, n_r), nid(i + 1, n_r)) for i in range(n_t)]
    write(os.path.join(OUT, "gearlike_v41.msh"), msh41(nodes, quads, lines))


if __name__ == "__main__":
    main()
