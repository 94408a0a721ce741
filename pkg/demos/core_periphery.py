"""
Core and periphery in a ten-actor network
==========================================

Four actors tie to each other and to scattered others. We score a few
hypotheses about that structure with the weighted correlation and with the
classic inconsistency count, then let exhaustive search find the core.
"""

import blockcorr as bc

net = bc.load_fixture("befig1")
print(net.n, "actors, undirected:", not net.directed)

core = bc.parse_partition("1,2,3,4;5,6,7,8,9,10", net)

# the core-periphery model leaves the off-diagonal blocks free
loose = bc.parse_blockimage("com dnc; dnc nul")
ev = bc.evaluate(net, core, loose)
print("com/dnc/nul:", round(ev.correlation, 4), "penalty", ev.penalty)

# demanding a null periphery and null links between the groups
strict = bc.parse_blockimage("com nul; nul nul")
ev = bc.evaluate(net, core, strict)
print("com/nul/nul:", round(ev.correlation, 4), "penalty", ev.penalty)

# per-block diagnostics show where the misfit sits
for b in ev.per_block:
    print(f"  block ({b.i + 1},{b.j + 1}) {b.chosen_type}: density {b.block_density:.3f}, "
          f"weight {b.weight_sum:g}, penalty {b.penalty}")

# complete links between core and periphery fit worse, because most
# periphery actors touch only one core member
ev = bc.evaluate(net, core, [["com", "com"], ["com", "nul"]])
print("com/com/com/nul:", round(ev.correlation, 4), "penalty", ev.penalty)

print()
print(bc.render_blockmodel(net, core, strict))

# exhaustive search over all 511 two-position partitions and all
# non-trivial com/nul images
params = bc.SearchParams(2, allowed_types=("com", "nul"), epsilon_near=0.05)
pool = bc.exhaustive_search(net, params)
best = pool.best
print("best:", bc.format_partition(net, best.partition), best.blockimage,
      round(best.correlation, 4))
print("arrangements within 5% of the best:", len(pool.solutions))
for sol in pool.solutions[1:4]:
    print("  ", bc.format_partition(net, sol.partition), sol.blockimage, round(sol.correlation, 4))

# the inconsistency count has several equally good answers here
n_opt, pool = bc.count_optima(net, bc.SearchParams(2, criterion="penalty", epsilon_near=0),
                              [["com", "nul"], ["nul", "nul"]])
print("penalty-optimal arrangements for com/nul/nul:", n_opt, "at penalty", pool.best.penalty)
