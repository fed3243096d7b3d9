"""The instance file format, round-tripped and fed to the command line.

An instance is one JSON document: target coordinates, vehicles (speed plus
depot, ids implicit by position), and optional required-target sets keyed by
vehicle id.  Written files load back bit-for-bit equal.
"""

import pathlib
import subprocess
import sys

from minmaxtsp import Instance, Point, Vehicle, load_instance, save_instance

inst = Instance(
    targets=(Point(12.5, 3.0), Point(4.0, 18.25), Point(20.0, 20.0)),
    vehicles=(Vehicle(1, 1.0, Point(0.0, 0.0)), Vehicle(2, 1.5, Point(25.0, 0.0))),
    required={1: [2]},
)

path = pathlib.Path(__file__).parent / "tiny_instance.json"
save_instance(inst, path)
print(f"wrote {path}:")
print(path.read_text())

assert load_instance(path) == inst
print("load(save(instance)) == instance  # exact, repr-precision floats")

# The same file drives the CLI; `minmaxtsp gen` produces files in this format.
cmd = [sys.executable, "-m", "minmaxtsp.cli", "solve", "--instance", str(path)]
print("+ python " + " ".join(cmd[1:]))
subprocess.run(cmd, check=True)
