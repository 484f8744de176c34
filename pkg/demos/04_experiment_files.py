"""Experiment files, parsed, printed and run."""
from pathsim import run_scenario, sample_events, shipped_experiments, tally
from pathsim.dsl import compile_ast, load, parse, print_canonical

for name, path in shipped_experiments().items():
    ast = load(path)
    print(f"--- {name}")
    print(print_canonical(ast), end="")
    assert parse(print_canonical(ast)) == ast

exp = compile_ast(load(shipped_experiments()["mixed.exp"]))
print(run_scenario(exp.scenario))

# sampling is seeded, so this repeats exactly
for rec in tally(sample_events(exp.scenario, 10_000, exp.seed), exp.scenario):
    print(rec.as_dict())

# a file with mistakes reports all of them at once
try:
    parse("detect L 2\nphase phi1 = pi/x\nwhatever")
except ValueError as err:
    print(err)
