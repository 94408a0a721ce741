"""
Blockimage ensembles, valued ties and permutation tests
=======================================================

A hypothesis about positions often leaves some blocks undecided. An
ensemble lists the acceptable types per block; we score every member for a
fixed partition, then ask whether the winning fit beats random relabelings
of the actors.
"""

import numpy as np

import blockcorr as bc

net = bc.load_fixture("transatlantic")
groups = bc.parse_partition(
    "Ron_1,Frank_3,Boyd_4,Tim_5,Darrin_11;Tom_2;John_6,Jerry_10,Ben_12,Arnie_13;"
    "Jeff_7,Jay_8,Sandy_9", net)

# cohesive groups on the diagonal, every other block either regular or null
open_cell = "reg|nul"
rows = []
for i in range(4):
    rows.append(" ".join("com" if i == j else open_cell for j in range(4)))
ensemble = bc.parse_blockimage("; ".join(rows))
members = bc.expand_ensemble(ensemble)
print("ensemble members:", len(members))

params = bc.SearchParams(4, allowed_types=("com", "reg", "nul"))
pool = bc.local_search(net, params, fixed_partition=groups, fixed_blockimage=ensemble)
best = pool.best
print("best member:", best.blockimage, round(best.correlation, 4))
print("every member scored:", pool.optimum_is_proven)
for sol in pool.solutions[1:4]:
    print("  runner-up:", sol.blockimage, round(sol.correlation, 4))

# the purely cohesive image, for comparison
cohesive = [["com" if i == j else "nul" for j in range(4)] for i in range(4)]
print("cohesive only:", round(bc.evaluate(net, groups, cohesive).correlation, 4))

# how often does a random relabeling of the boys fit as well?
res = bc.qap_test(net, groups, best.blockimage, iterations=1999, seed=3)
print(f"QAP: observed {res.observed:.4f}, p = {res.p_value:.4f}, "
      f"null mean {res.null_mean:.4f} sd {res.null_sd:.4f}")

# valued ties: regular blocks score each row and column by its largest value
rng = np.random.default_rng(0)
n = 12
pos = np.repeat([0, 1, 2], 4)
strength = np.array([[4, 2, 0], [0, 3, 1], [1, 0, 0]])
values = np.zeros((n, n))
for r in range(n):
    # each actor sends one strong tie into each block its position cares about
    for q in range(3):
        if strength[pos[r], q]:
            targets = [c for c in np.flatnonzero(pos == q) if c != r]
            values[r, rng.choice(targets)] = strength[pos[r], q]
valued = bc.build_network(range(1, n + 1), values)
part = bc.Partition(pos, 3)
image = [["reg", "reg", "nul"], ["nul", "reg", "reg"], ["reg", "nul", "nul"]]
print("\nvalued regular fit:", round(bc.evaluate(valued, part, image).correlation, 4))
print("same data, complete blocks:",
      round(bc.evaluate(valued, part, [[("nul" if t == "nul" else "com") for t in row]
                                       for row in image]).correlation, 4))

# for tiny networks the permutation distribution can be enumerated exactly:
# three mutually tied actors and two hangers-on
small = bc.build_network("abcde", [[0, 1, 1, 1, 0],
                                   [1, 0, 1, 0, 1],
                                   [1, 1, 0, 0, 0],
                                   [1, 0, 0, 0, 0],
                                   [0, 1, 0, 0, 0]], directed=False)
res = bc.qap_test(small, bc.Partition(np.array([0, 0, 0, 1, 1]), 2),
                  [["com", "nul"], ["nul", "nul"]])
# only the 3! * 2! relabelings that keep the trio together fit as well: p = 12/120
print("exact QAP on 5 actors:", res.exact, res.iterations, "permutations, p =",
      round(res.p_value, 4))
