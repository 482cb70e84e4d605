"""Expansion-coefficient error against the exact path, by outer Laguerre exponent.

With exponent N - 1 the outer integrand is polynomial for polynomial f; with
N - 3/2 a stray sqrt(s) survives and Gauss-Laguerre converges slowly.
"""
import random
from dataclasses import dataclass

from qhp.polycore import random_poly
from qhp.transforms import build_rule, expansion_coeffs_exact, expansion_coeffs_quadrature, poly_function


@dataclass
class AlphaConfig:
    degree: int = 10
    y: str = "5/2"
    N_values: tuple[int, ...] = (1, 2, 4)
    counts: tuple[int, ...] = (16, 32, 64)
    seed: int = 11


def max_error(p, y, N, alpha, count) -> float:
    exact = expansion_coeffs_exact(p, y, N, p.degree)
    series = expansion_coeffs_quadrature(poly_function(p), y, N, p.degree,
                                         outer_rule=build_rule("laguerre", alpha, count))
    return max(abs(float(series[k]) - float(exact[k])) for k in range(p.degree + 1))


def main(cfg: AlphaConfig = AlphaConfig()) -> None:
    rng = random.Random(cfg.seed)
    p = random_poly(rng, cfg.degree)
    while p.degree < cfg.degree:
        p = random_poly(rng, cfg.degree)
    print(f"f = {p}")
    for N in cfg.N_values:
        for alpha in (N - 1.0, N - 1.5):
            if alpha <= -1:
                continue
            errs = "  ".join(f"{max_error(p, cfg.y, N, alpha, c):.2e}" for c in cfg.counts)
            print(f"N={N} alpha={alpha:4.1f}  nodes {cfg.counts}: {errs}")


if __name__ == "__main__":
    main()
