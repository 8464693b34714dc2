"""
A verification report
=====================

The suite bundles every check into one JSON report.  Findings are recorded
with witnesses but do not make the run fail.
"""

import json

from aidlab.suite import SuiteConfig, run_suite

config = SuiteConfig(rank=1, gram="a1", window=4, split_samples=50, inner_samples=10,
                     normal_samples=20, parser_samples=200, linalg_samples=100)
report = run_suite(config)
print(report.text())

data = json.loads(report.dumps())
for check in data["checks"]:
    if check["status"] == "finding":
        print(check["name"], "->", check["witness"])
