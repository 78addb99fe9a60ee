#!/usr/bin/env python3
"""Regenerate the shipped TOML grid configs from the built-in tables.

Usage: python scripts/make_configs.py [configs_dir]
"""

import dataclasses
import os
import sys

from dlmtrial.engine import TrialConfig
from dlmtrial.tables import (PLANNING_SCENARIOS, TABLES, table2_grid)


def _toml_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return f'"{v}"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {v!r}")


def _config_items(cfg: TrialConfig, defaults: TrialConfig):
    for f in dataclasses.fields(TrialConfig):
        value = getattr(cfg, f.name)
        if value == getattr(defaults, f.name):
            continue
        if f.name == "bf":
            for bf_field in dataclasses.fields(value):
                yield (f"bf.{bf_field.name}",
                       getattr(value, bf_field.name))
        elif f.name == "rule":
            yield f.name, value.value
        elif f.name == "m0":
            yield f.name, list(value)
        else:
            yield f.name, value


def write_grid(path: str, scenarios, header: str) -> None:
    defaults = TrialConfig()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {header}\n# Regenerate with scripts/make_configs.py\n\n")
        fh.write(f"replications = {scenarios[0].replications}\n")
        for scenario in scenarios:
            fh.write(f"\n[[scenario]]\nlabel = \"{scenario.label}\"\n")
            bf_lines = []
            for key, value in _config_items(scenario.config, defaults):
                if key.startswith("bf."):
                    bf_lines.append((key.split(".", 1)[1], value))
                else:
                    fh.write(f"{key} = {_toml_value(value)}\n")
            if bf_lines:
                fh.write("bf = { ")
                fh.write(", ".join(f"{k} = {_toml_value(v)}"
                                   for k, v in bf_lines))
                fh.write(" }\n")


def main() -> None:
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "configs"
    os.makedirs(out_dir, exist_ok=True)
    # table1: the raw planning scenarios under both rules (what the
    # planning table defines; the table-2 grid runs them calibrated).
    write_grid(os.path.join(out_dir, "table1.conf"), table2_grid(),
               "Planning scenarios (difference, SD, budget): "
               + ", ".join(map(str, PLANNING_SCENARIOS)))
    for table_id in ("2", "3", "4", "5"):
        grid_fn, _ = TABLES[table_id]
        write_grid(os.path.join(out_dir, f"table{table_id}.conf"), grid_fn(),
                   f"Reproduction grid for summary table {table_id}")
    write_grid(os.path.join(out_dir, "sensitivity.conf"),
               TABLES["sensitivity"][0](),
               "Allocation sensitivity grid (delta x omega, no stopping)")
    print(f"wrote configs to {out_dir}/")


if __name__ == "__main__":
    main()
