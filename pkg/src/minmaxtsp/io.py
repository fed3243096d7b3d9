"""Instance serialization: a small JSON document, stable under round-trips.

Layout::

    {
      "targets":  [[x, y], ...],
      "vehicles": [{"speed": s, "depot": [x, y]}, ...],
      "required": {"1": [3, 5], ...}
    }

Vehicle ids are implicit list positions (1-based).  Floats are written with
``repr`` precision, so load(dump(inst)) reproduces the instance exactly.
"""

import json

from .model import Instance, InvalidInstanceError, Point, Vehicle


def instance_to_json(inst: Instance) -> str:
    doc = {
        "targets": [[t.x, t.y] for t in inst.targets],
        "vehicles": [{"speed": v.speed, "depot": [v.depot.x, v.depot.y]}
                     for v in inst.vehicles],
        "required": {str(vid): sorted(ids)
                     for vid, ids in sorted(inst.required.items())},
    }
    return json.dumps(doc, indent=2) + "\n"


def instance_from_json(text: str) -> Instance:
    try:
        doc = json.loads(text)
        targets = tuple(Point(float(x), float(y)) for x, y in doc["targets"])
        vehicles = tuple(
            Vehicle(i, float(v["speed"]), Point(float(v["depot"][0]), float(v["depot"][1])))
            for i, v in enumerate(doc["vehicles"], start=1)
        )
        required = {int(vid): [int(t) for t in ids]
                    for vid, ids in doc.get("required", {}).items()}
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise InvalidInstanceError(f"malformed instance document: {exc}") from exc
    return Instance(targets, vehicles, required)


def save_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(instance_to_json(inst))


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_json(fh.read())
