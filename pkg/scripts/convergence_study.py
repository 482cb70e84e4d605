"""How fast H_n(x,y;N) and F(0,y;N) approach their N -> infinity limits."""
from dataclasses import dataclass
from fractions import Fraction

from qhp.families import hermite2, qhp_explicit
from qhp.transforms import glaisher_F, glaisher_limit


@dataclass
class ConvergenceConfig:
    degrees: tuple[int, ...] = (4, 8, 12)
    y: Fraction = Fraction(1)
    N_list: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64)
    glaisher_ys: tuple[float, ...] = (0.3, 1.3)


def polynomial_gaps(cfg: ConvergenceConfig) -> dict[int, list[float]]:
    """Largest coefficient gap to the two-variable Hermite polynomial."""
    out = {}
    for n in cfg.degrees:
        ref = hermite2(n, cfg.y)
        out[n] = [float(max(abs(c) for c in (ref - qhp_explicit(n, N, cfg.y)).coeffs))
                  for N in cfg.N_list]
    return out


def glaisher_gaps(cfg: ConvergenceConfig) -> dict[float, list[float]]:
    return {y: [abs(float(glaisher_F(0.0, y, N) - glaisher_limit(0.0, y))) for N in cfg.N_list]
            for y in cfg.glaisher_ys}


def main() -> None:
    cfg = ConvergenceConfig()
    print("N:", ", ".join(map(str, cfg.N_list)))
    for n, gaps in polynomial_gaps(cfg).items():
        scaled = [g * N for g, N in zip(gaps, cfg.N_list)]
        print(f"n={n:2d}  gap*N: " + "  ".join(f"{v:10.4g}" for v in scaled))
    for y, gaps in glaisher_gaps(cfg).items():
        print(f"y={y}  |F(0)-limit|: " + "  ".join(f"{v:.3e}" for v in gaps))


if __name__ == "__main__":
    main()
