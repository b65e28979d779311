"""Write the synthetic availability profiles shipped with the fixtures."""

import argparse
from pathlib import Path

from rreh.optimize.profiles import synthetic_profile, write_profile_csv

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--steps", type=int, default=24)
    ap.add_argument("--out", type=Path, default=ROOT / "fixtures" / "profiles" / "australia")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for pid in ("pv", "wind"):
        path = args.out / f"{pid}.csv"
        path.write_text(write_profile_csv(synthetic_profile(pid, args.steps, args.seed)), encoding="utf-8")
        print(path.relative_to(ROOT) if path.is_relative_to(ROOT) else path)


if __name__ == "__main__":
    main()
