"""Write the JSON inputs used by the command-line demos into ./inputs."""

import json
from pathlib import Path

import numpy as np

from tkk import CartanI, build_tkk
from tkk.algebra import element_to_json
from tkk.functor import identity_map, linear_map, transpose_map

OUT = Path(__file__).parent / "inputs"


def dump(name, data):
    (OUT / name).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    print("wrote", OUT / name)


def main():
    OUT.mkdir(exist_ok=True)
    V = CartanI(2, 2)
    dump("cartan1_2x2.json", V.config())
    dump("run_sum.json", {"space": {"type": "sum", "parts": [V.config(), V.config()]}, "suites": "jordan,tkk,atomic", "samples": 50, "seed": 7})

    # rank-2 frame E11, E22 in degree -1: 0 < E11, E22 < E11 + E22
    alg = build_tkk(V)
    E11, E22 = V.from_matrix(np.diag([1, 0])), V.from_matrix(np.diag([0, 1]))
    diamond = [alg.zero(), alg.element(x=E11), alg.element(x=E22), alg.element(x=E11 + E22)]
    dump("diamond.json", [element_to_json(z) for z in diamond])
    dump("not_tripotent.json", [element_to_json(alg.element(x=E11)), element_to_json(alg.element(x=2 * E11))])

    dump("phi_identity.json", identity_map(V).to_json())
    dump("phi_transpose.json", transpose_map(CartanI(2, 3)).to_json())
    # still complex-linear and bijective, but no longer a triple homomorphism
    A = np.eye(V.dim, dtype=complex)
    A[0, 1] = 1e-3
    dump("phi_tampered.json", linear_map(V, V, A).to_json())
    dump("phi_singular.json", linear_map(V, V, np.diag([0, 1, 1, 1])).to_json())

if __name__ == "__main__":
    main()
