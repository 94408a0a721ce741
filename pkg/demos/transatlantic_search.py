"""
Searching partitions of a friendship network
=============================================

Thirteen boys on a little league team name their friends. We look for
positions with structural (complete/null) and regular blocks, compare the
correlation criterion with the inconsistency count, and check that local
search finds what exhaustive search finds.
"""

import time

import blockcorr as bc

net = bc.load_fixture("transatlantic")
print(", ".join(net.labels))
print("partitions into 3 positions:", bc.stirling(net.n, 3))

# k = 2 and 3 are small enough to enumerate
for k in (2, 3):
    t = time.perf_counter()
    corr = bc.exhaustive_search(net, bc.SearchParams(k))
    pen = bc.exhaustive_search(net, bc.SearchParams(k, criterion="penalty"))
    print(f"\nk={k} ({time.perf_counter() - t:.1f}s)")
    b = corr.best
    print("  correlation optimum", round(b.correlation, 4), "penalty", b.penalty)
    print("   ", bc.format_partition(net, b.partition), b.blockimage)
    b = pen.best
    print("  penalty optimum    ", round(b.correlation, 4), "penalty", b.penalty)
    print("   ", bc.format_partition(net, b.partition), b.blockimage)

# the two criteria can disagree: the fewest inconsistencies need not give
# the highest correlation, since the correlation rewards balanced blocks

# local search with restarts reaches the same k=3 optimum
params = bc.SearchParams(3, restarts=50, seed=1)
local = bc.local_search(net, params)
print("\nlocal search k=3:", round(local.best.correlation, 4),
      bc.format_partition(net, local.best.partition))

# larger k needs local search
pool = bc.local_search(net, bc.SearchParams(4, restarts=100, seed=7))
print("local search k=4:", round(pool.best.correlation, 4), pool.best.blockimage)
print("  ", bc.format_partition(net, pool.best.partition))

# regular blocks: every row and column of a block holds at least one tie
mutual = bc.parse_partition("Jeff_7,Jay_8,Sandy_9;" + ",".join(
    lab for lab in net.labels if lab not in ("Jeff_7", "Jay_8", "Sandy_9")), net)
image, total = bc.per_block_best_penalty(net, mutual, ("com", "reg", "nul"))
ev = bc.evaluate(net, mutual, image)
print("\nper-block best image for", bc.format_partition(net, mutual))
print("  ", image, "penalty", total, "correlation", round(ev.correlation, 4))
print(bc.render_blockmodel(net, mutual, image))
