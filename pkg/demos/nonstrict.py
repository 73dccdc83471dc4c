"""Lie tripotents in degrees -1 and 1 that are not sums of triple tripotents."""

import numpy as np

from tkk import CartanI, build_tkk, is_strict
from tkk.order import search_nonstrict


def main():
    V = CartanI(2, 2)
    alg = build_tkk(V)
    s = np.sqrt(2)
    E11 = V.from_matrix(np.array([[1, 0], [0, 0]]))
    E12 = V.from_matrix(np.array([[0, 1], [0, 0]]))
    cert = is_strict(alg, alg.element(x=s * E11, y=s * E12))
    print("(sqrt2 E11, 0, sqrt2 E12):", {k: round(float(v), 3) for k, v in cert.residuals.items()})
    print("  Lie tripotent:", cert.is_tripotent, " strict:", cert.is_strict)

    found = search_nonstrict(alg, trials=10, seed=0)
    print(f"search: {found.converged}/{found.trials} converged, {len(found.candidates)} not strict, "
          f"largest strictness gap {found.best_strictness_gap:.3f}")


if __name__ == "__main__":
    main()
