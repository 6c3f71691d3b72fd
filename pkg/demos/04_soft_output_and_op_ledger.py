# # Soft outputs and the operation ledger
#
# LLRs are differences of partition minima, so they inherit the metric.
# Restoring the d' weights costs one real multiply per dimension per
# candidate, i.e. n*P extra multiplies for an exhaustive search.

from pathlib import Path

import numpy as np

from qdrd import llr_soft, make_qam, sample_instance
from qdrd.harness import ledger_for_instance, read_counterexample

c = make_qam(16)
inst = sample_instance(4, 2, 10.0, c, seed=3)
for method in ("qr", "qdrd-weighted", "qdrd-unweighted"):
    print(f"{method:>16}:", np.round(llr_soft(inst, c, method).llr, 3))

# On a stored counterexample the unweighted LLRs are visibly off.

stored = read_counterexample(Path(__file__).parents[1] / "tests" / "fixtures" / "counterexample_qam16_seed7.txt")
for method in ("qr", "qdrd-unweighted"):
    print(f"{method:>16}:", np.round(llr_soft(stored.instance, c, method).llr, 3))

# ## Integer ledger

for order in (4, 16):
    q = make_qam(order)
    report, counters = ledger_for_instance(sample_instance(2, 2, 10.0, q, seed=0), q)
    print(report.text())
    print(counters["qdrd-weighted"].report())
