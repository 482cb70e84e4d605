"""Emit the Glaisher-curve tables for y = 0.3 and y = 1.3 as CSV files."""
import argparse
from dataclasses import dataclass, field
from pathlib import Path

from qhp.transforms import figure1_table, parse_grid


@dataclass
class FigureConfig:
    ys: tuple[float, ...] = (0.3, 1.3)
    N_list: tuple[int, ...] = (1, 2, 4, 8, 16, 32)
    grid: str = "-3:3:121"
    out_dir: Path = field(default_factory=lambda: Path("results"))


def run(cfg: FigureConfig) -> list[Path]:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for y in cfg.ys:
        table = figure1_table(y, cfg.N_list, parse_grid(cfg.grid))
        path = cfg.out_dir / f"glaisher_y{y}.csv"
        path.write_text(table.to_csv())
        centre = len(table.x) // 2
        peaks = ", ".join(f"N={N}: {float(table.columns[N][centre]):.4f}" for N in cfg.N_list)
        print(f"y={y}  F(0) {peaks}  limit {float(table.limit[centre]):.4f}")
        written.append(path)
    return written


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument("--grid", default="-3:3:121")
    args = parser.parse_args()
    for p in run(FigureConfig(grid=args.grid, out_dir=args.out_dir)):
        print("wrote", p)
