import importlib.util
import sys
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def load(name):
    found = importlib.util.spec_from_file_location(name, SCRIPTS / f"{name}.py")
    mod = importlib.util.module_from_spec(found)
    sys.modules[name] = mod  # dataclasses resolve their module at class creation
    found.loader.exec_module(mod)
    return mod


def test_pipeline_sweep_smoke():
    mod = load("pipeline_sweep")
    cfg = mod.SweepConfig(models=["complete", "dense"], sizes=[200], seeds=[1])
    rows = mod.sweep(cfg)
    assert len(rows) == 2 and all(r["accepted"] for r in rows)
    assert "accepted 1/1" in mod.summarize(rows)


def test_oracle_crosscheck_smoke():
    mod = load("oracle_crosscheck")
    rows = mod.run(mod.CrossCheckConfig(orders=[4, 5], per_order=5))
    assert [r["n"] for r in rows] == [4, 5] and all(r["mismatches"] == 0 for r in rows)
