"""Transport a triple automorphism to the TKK algebra and read it back."""

import numpy as np

from tkk import CartanI, build_tkk, f_morphism, isometry_residual, recover_triple_map, verify_graded_iso
from tkk.functor import random_automorphism


def main():
    V = CartanI(2, 3)
    alg = build_tkk(V)
    print(f"L({V!r}): complex dim {alg.dim}, degree-zero dim {alg.g0_dim}")

    rng = np.random.default_rng(1)
    phi = random_automorphism(V, rng)
    T = f_morphism(phi, alg, alg)
    print(verify_graded_iso(T, samples=20, seed=1))
    print(f"isometry residual {isometry_residual(T, samples=20):.2e}")

    back = recover_triple_map(T)
    print(f"recovered phi differs by {np.abs(back.op.real_matrix - phi.op.real_matrix).max():.1e}")

    bad = T.perturb_block(0, 1e-3, rng)
    print("perturbed map passes:", verify_graded_iso(bad, samples=20, seed=1).passed)


if __name__ == "__main__":
    main()
