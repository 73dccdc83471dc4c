"""Hasse diagrams of sub-tripotents of a frame, printed as DOT."""

import numpy as np

from tkk import CartanI, CartanIII, build_poset, build_tkk
from tkk.order import sub_tripotents


def show(space, degree):
    alg = build_tkk(space)
    frame = space.frame(np.random.default_rng(0))
    H = build_poset(alg, sub_tripotents(alg, frame, degree))
    print(f"# {space!r}, rank {len(frame)}: {len(H.nodes)} nodes, {len(H.edges)} covering edges")
    print(H.to_dot())


if __name__ == "__main__":
    show(CartanI(2, 2), -1)
    show(CartanIII(3), 1)
