import logging
import sys

import ujson as json

from preserver_lab.evaluate import random_multipliers, classify_cases, evaluate_classifications, print_evaluation

COUNT = 50
MAX_DEGREE = 5
SEED = 0
BUDGET = None

OUTPUT_PATH = 'sweep.json'

logging.basicConfig(stream=sys.stderr, format='[%(levelname)s] %(message)s', level=logging.INFO)

cases = random_multipliers(COUNT, MAX_DEGREE, SEED)
results = classify_cases(cases, BUDGET, SEED)

with open(OUTPUT_PATH, 'w') as f:
    json.dump(results, f, sort_keys=True, indent=2)

print_evaluation(evaluate_classifications(results))
