"""Smoke test for the Python bindings.

Build first:  cargo build -p supergas-py --features extension-module
Then run:     python3 python/smoke_test.py
"""

import importlib.machinery
import importlib.util
import pathlib
import sys


def load():
    try:
        import supergas

        return supergas
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent / "target"
    for profile in ("release", "debug"):
        lib = root / profile / "libsupergas.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("supergas", str(lib))
            spec = importlib.util.spec_from_loader("supergas", loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("supergas extension not found; build it with cargo first")


sg = load()

assert sg.normalize("theta1*theta1") == "0"
assert sg.normalize("theta2*theta1") == "-theta1*theta2"

d1, d2 = sg.residual("3", "5")
assert (d1, d2) == ("0", "0")
d1, d2 = sg.residual("t", "1", gamma=2)
assert d2 != "0"

assert sg.bracket("Q1", "Q1") == "-2*P1", sg.bracket("Q1", "Q1")
assert len(sg.catalog()) == 24

try:
    sg.residual("1", "1", gamma=-1)
except ValueError as e:
    assert "gamma+1" in str(e)
else:
    raise AssertionError("gamma = -1 accepted")

records = sg.run_checks("table1")
assert all(status == "pass" for _, _, status, _ in records), records

reduced = sg.reduce("L8", gamma=3)
print("L8 reduced:", reduced[1])
print("ok")
