#!/usr/bin/env python3
"""
Smoke script to verify altgda is working correctly.

Run with: python test_run.py
Runs every figure preset and the shipped configs into a temporary directory.
"""

import tempfile
from pathlib import Path

from altgda.harness import PRESETS, ExperimentRunner, load_experiment_from_yaml
from altgda.models import RunStatus

CONFIG_DIR = Path(__file__).parent / "config"


def main() -> int:
    print("=" * 60)
    print("altgda smoke test")
    print("=" * 60)

    failures = 0
    with tempfile.TemporaryDirectory() as tmpdir:
        runner = ExperimentRunner(output_root=Path(tmpdir))

        print("\n1. Reproducing figure presets...")
        for name in PRESETS:
            for result in runner.figures(name):
                ok = result.status == RunStatus.COMPLETED
                failures += not ok
                mark = "✅" if ok else "❌"
                print(f"   {mark} {result.name} [{result.command}]: {result.status.value}")

        print("\n2. Running shipped configs...")
        for path in sorted(CONFIG_DIR.glob("*.yaml")):
            config = load_experiment_from_yaml(path)
            result = runner.run(config)
            ok = result.status == RunStatus.COMPLETED
            failures += not ok
            mark = "✅" if ok else "❌"
            print(f"   {mark} {path.name}: {result.status.value}")
            if result.error:
                print(f"      {result.error}")

        print("\n3. Checking fig1 energy...")
        report = runner.run(load_experiment_from_yaml(CONFIG_DIR / "fig1.yaml"))
        drift = report.summary.get("perturbed_energy_drift")
        print(f"   perturbed energy drift: {drift:.3e}")

    print("\n" + "=" * 60)
    print("All checks passed" if failures == 0 else f"{failures} run(s) did not complete")
    print("=" * 60)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
