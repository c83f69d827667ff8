#!/usr/bin/env python
import sys
from pathlib import Path

import yaml

if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from twistcalc.const import CATALOG_PATH  # noqa: E402
from twistcalc.genus3 import CaseLabel, parse_atom, validate_catalog  # noqa: E402


def get_catalog_problems(path: Path = CATALOG_PATH) -> list[str]:
    data = yaml.safe_load(path.read_text(encoding="utf-8"))
    return validate_catalog(data)


def get_unused_roles(path: Path = CATALOG_PATH) -> dict[str, list[str]]:
    """Roles that no condition of their case mentions."""
    cases = yaml.safe_load(path.read_text(encoding="utf-8"))["cases"]
    result: dict[str, list[str]] = {}
    for label in CaseLabel:
        case = cases.get(str(label))
        if case is None:
            continue
        text = repr(case.get("hyp")) + repr(case.get("odd"))
        for role in case["roles"]:
            if f"{role}:" not in text:
                result.setdefault(str(label), []).append(role)
    return result


def check_atoms(path: Path = CATALOG_PATH) -> int:
    cases = yaml.safe_load(path.read_text(encoding="utf-8"))["cases"]
    count = 0
    for case in cases.values():
        for which in ("hyp", "odd"):
            stack = [case[which]]
            while stack:
                item = stack.pop()
                if isinstance(item, str):
                    parse_atom(item)
                    count += 1
                elif isinstance(item, dict):
                    for inner in item.values():
                        stack.extend(inner if isinstance(inner, list) else [inner])
    return count


if __name__ == "__main__":
    problems = get_catalog_problems()
    for problem in problems:
        print(f"ERROR - {CATALOG_PATH.name} - {problem}")
    if problems:
        sys.exit(1)
    for label, roles in sorted(get_unused_roles().items()):
        for role in roles:
            print(f"WARNING - case {label} - Role {role} is never used")
    print(f"{check_atoms()} conditions parsed")
