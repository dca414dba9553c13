"""Regenerate the frozen high-trial estimates used by the genericity-trend check."""

import json
import sys

from artinkit.random_model import ModelConfig, genericity_estimate

TRIALS = 10**6
SEED = 20240601

out = {}
for n in (10, 20, 40):
    r = genericity_estimate(ModelConfig(n, n, SEED, TRIALS), "theorem_applicable")
    out[str(n)] = {"hits": r.hits, "trials": r.trials, "seed": SEED}
    print(n, r.hits, file=sys.stderr)
json.dump(out, sys.stdout, indent=2)
print()
