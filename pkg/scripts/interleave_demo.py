#!/usr/bin/env python3
"""Print the first few placements of one interval under each policy.

Handy for eyeballing external/internal nesting on a small instance.
"""

import argparse

from parsched.energy import TransmitterState
from parsched.model import RadarTask, WorkingMode, table_template
from parsched.scenario import ScenarioConfig, WaitMode, generate_scenario
from parsched.scheduler import Policy, SchedulerConfig, schedule_interval


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-precision", type=int, default=120)
    ap.add_argument("--range-derived", action="store_true")
    ap.add_argument("--rows", type=int, default=25)
    args = ap.parse_args()

    wait = WaitMode.RangeDerived if args.range_derived else WaitMode.TableFixed
    scen = ScenarioConfig(horizon_ms=50.0, n_precision_tracking=args.n_precision, seed=args.seed,
                          wait_mode=wait)
    tasks = generate_scenario(scen)
    modes = {t.id: t.mode.value for t in tasks}
    for policy in Policy:
        out, _ = schedule_interval(tasks, (0.0, 50.0), SchedulerConfig(), policy, TransmitterState())
        print(f"\n{policy.value}: {len(out.executed)} placed, {len(out.delayed)} delayed, "
              f"{len(out.deleted)} deleted")
        for p in out.executed[:args.rows]:
            host = "" if p.host_id is None else f" in {p.host_id}"
            print(f"  {p.t_s:8.3f}  {modes[p.task_id]:<20} {p.mode_used.value}{host}")


if __name__ == "__main__":
    main()
