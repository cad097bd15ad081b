#!/usr/bin/env python3
"""Regenerates the files in data/. Matrices use the (x, y) ordering, J0 = [[0, -I], [I, 0]]."""
import itertools
import json
import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def rotation(theta):
    # e^{theta J0} for n = 1
    c, s = math.cos(theta), math.sin(theta)
    return [[c, -s], [s, c]]


def path_doc(fn, steps):
    return {"n": 1, "kind": "path",
            "samples": [{"t": k / steps, "matrix": fn(k / steps)} for k in range(steps + 1)]}


def write(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=1) + "\n")


def simplicial(facets):
    """Generators and boundary entries of the simplicial chain complex spanned by `facets`."""
    simplices = set()
    for f in facets:
        for r in range(1, len(f) + 1):
            simplices.update(itertools.combinations(sorted(f), r))
    name = lambda s: "s" + "_".join(map(str, s))
    ordered = sorted(simplices, key=lambda s: (len(s), s))
    gens = [{"id": name(s), "doubled_degree": 2 * (len(s) - 1)} for s in ordered]
    boundary = [[name(s), name(s[:i] + s[i + 1:])] for s in ordered if len(s) > 1 for i in range(len(s))]
    return {"generators": gens, "boundary": boundary}


def main():
    OUT.mkdir(exist_ok=True)
    write("rotation_half.path", path_doc(lambda t: rotation(0.5 * t), 64))
    write("degenerate_end.path", path_doc(lambda t: rotation(2 * math.pi * t), 128))
    write("loop_2pi.path", path_doc(lambda t: rotation(2 * math.pi * t), 128))

    # S(s) = diag(s - 1/2, 1): one eigenvalue crosses zero upward.
    write("shift.family", {"n": 1, "kind": "symmetric_family",
                           "samples": [{"t": k / 8, "matrix": [[k / 8 - 0.5, 0.0], [0.0, 1.0]]}
                                       for k in range(9)]})
    # S(s, t) = ((1 - s)(-pi/2) + s pi/2) I, constant in t.
    rows = []
    for k in range(5):
        s = k / 4
        v = (1 - s) * (-math.pi / 2) + s * math.pi / 2
        rows.append({"s": s, "rows": [{"t": t, "matrix": [[v, 0.0], [0.0, v]]} for t in (0.0, 1.0)]})
    write("theta.family2d", {"n": 1, "kind": "symmetric_family", "samples_2d": rows})

    # Tangent bundle of a genus-2 surface: one clutching loop of degree 2 - 2g = -2.
    write("genus2.clutching", {"rank": 2, "genus": 2,
                               "loops": [path_doc(lambda t: rotation(-4 * math.pi * t), 256)]})

    write("pendulum.system", {"phase_space": "cylinder", "j_convention": "canonical",
                              "hamiltonian": {"builtin": "pendulum", "parameters": {"scale": 0.1}}})
    write("harmonic.system", {"phase_space": "plane", "j_convention": "standard",
                              "hamiltonian": {"builtin": "harmonic", "parameters": {"omega": 1.0}}})
    # Anharmonic oscillator H = x^2 / 2 + y^2 / 2 + x^4 / 4.
    write("quartic.system", {"phase_space": "plane", "hamiltonian": {"polynomial": [
        {"coefficient": 0.5, "exponents": [2, 0]},
        {"coefficient": 0.5, "exponents": [0, 2]},
        {"coefficient": 0.25, "exponents": [4, 0]}]}})

    # Boundary of the tetrahedron.
    write("s2.complex", simplicial(list(itertools.combinations(range(4), 3))))
    # Seven-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
    write("t2.complex", simplicial([(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)] +
                                   [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]))
    # One cell per dimension; the edge is a loop and the disk wraps it twice, so both
    # boundary entries appear twice and cancel mod 2.
    write("rp2.complex", {"generators": [{"id": "v", "doubled_degree": 0},
                                         {"id": "e", "doubled_degree": 2},
                                         {"id": "f", "doubled_degree": 4}],
                          "boundary": [["e", "v"], ["e", "v"], ["f", "e"], ["f", "e"]]})

    # Cascade data of the unit sphere bundle for n = 4 and |k| <= 1.
    n, window = 4, 1
    comps = []
    for k in range(-window, window + 1):
        cid = f"C{k}"
        comps.append({"id": cid, "dim": 2 * n - 1, "action": float(k), "rs_trans_doubled": 4 * k * (n - 1),
                      "morse_points": [{"id": f"{cid}.m{i}", "morse_index": i} for i in (0, n - 1, n, 2 * n - 1)]})
    write("sphere_n4_w1.morse_bott", {"components": comps, "cascades": [], "morse_flows": []})

    write("unit_sphere_rs_trans.json", {
        "normalization": "standard",
        "formula": "rs_trans_doubled = 4 k (n - 1)",
        "derivation": [
            "The k-fold great circle on the round unit sphere has length 2 pi |k|.",
            "Normal Jacobi fields solve J'' + J = 0 in each of the n - 1 normal directions.",
            "Conjugate points to t = 0 sit at t = m pi, 0 < m < 2|k|: Morse index (2|k| - 1)(n - 1).",
            "At t = 2 pi |k| every normal Jacobi field closes up: transverse nullity 2 (n - 1), counted with weight 1/2.",
            "RS^trans = sign(k) ((2|k| - 1)(n - 1) + (n - 1)) = 2 k (n - 1).",
            "With the opposite sign no n gives a lacunary complex; this sign makes exactly n >= 4 lacunary."],
        "entries": [{"n": n, "k": k, "rs_trans_doubled": 4 * k * (n - 1)}
                    for n in (4, 5, 6) for k in range(-3, 4)]})


if __name__ == "__main__":
    main()
