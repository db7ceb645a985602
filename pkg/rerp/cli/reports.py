'''Files written by the command-line tools: plan JSON, Benders trace,
dispatch table, Monte-Carlo samples/summary/tests and the chi sweep, all
under one output directory.
'''
import json
import os
import pandas as pd

from rerp.model.plan import CommitmentPlan
from rerp.robust.master import master_violations
from rerp.evaluation.compare import combined_frames

def _ensure(out_dir):
    if not os.path.exists(out_dir):
        os.makedirs(out_dir)
    return out_dir

def write_plan(out_dir, plan, value=None, status=None, name="plan.json"):
    doc = {"on": plan.on.tolist(), "start": plan.start.tolist(), "stop": plan.stop.tolist(),
            "curtail": plan.curtail.tolist(), "value": value, "status": status}
    path = os.path.join(_ensure(out_dir), name)
    with open(path, 'w') as fp:
        json.dump(doc, fp, indent=2)
    return path

def read_plan(path, instance):
    with open(path, 'r') as fp:
        doc = json.load(fp)
    for key in ("on", "start", "stop", "curtail"):
        if key not in doc:
            raise ValueError("plan file {} has no '{}' entry".format(path, key))
    plan = CommitmentPlan(doc["on"], doc["start"], doc["stop"], doc["curtail"])
    problems = plan.violations(instance)
    if len(problems) > 0:
        raise ValueError("plan file {}: {}".format(path, problems[0]))
    broken = master_violations(instance, plan)
    if len(broken) > 0:
        raise ValueError("plan file {}: {} {} off by {:.3g}".format(path, broken[0].kind, broken[0].name,
                broken[0].magnitude))
    return plan

def dispatch_frame(instance, dispatch):
    rows = []
    for kind, values in (("production", dispatch.production), ("reserve", dispatch.reserve)):
        for i, g in enumerate(instance.generators):
            for t in range(instance.horizon):
                rows.append((kind, g.name, t + 1, float(values[i, t])))
    return pd.DataFrame(rows, columns=["kind", "unit", "slot", "value"])

def write_frame(out_dir, frame, name):
    path = os.path.join(_ensure(out_dir), name)
    frame.to_csv(path, index=False)
    return path

def write_pair_reports(out_dir, reports):
    '''samples.csv, summary.csv and tests.csv over one or more PairReports.'''
    samples, summary, tests = combined_frames(reports)
    return [write_frame(out_dir, samples, "samples.csv"), write_frame(out_dir, summary, "summary.csv"),
            write_frame(out_dir, tests, "tests.csv")]
