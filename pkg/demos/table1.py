# # State counts on the benchmark instances
#
# Parameters are (m, n, sigma, (delta_low, delta_high), f).  The plain trie
# is left out for the bigger alphabets: it does not fit in memory.

# +
import time

import subsetdfa as sd

INSTANCES = [
    (32, 10000, 2, 2, 2, 0.2),
    (32, 10000, 4, 2, 4, 0.3),
    (16, 10000, 20, 2, 6, 0.75),
    (16, 100000, 32, 2, 32, 0.01),
    (16, 1000, 32, 32, 32, 0.25),
]


def timed(fn):
    t0 = time.perf_counter()
    try:
        out = fn()
    except sd.BuildBudgetExceeded:
        out = None  # too big, like the missing entries of the original table
    return out, time.perf_counter() - t0
# -

for params in INSTANCES:
    d = sd.generate_instance(sd.InstanceParams(*params, seed=1))
    pm, t_pm = timed(lambda: sd.build_automaton(d))
    mini, t_min = timed(lambda: sd.minimize(pm))
    pc, t_pc = timed(lambda: sd.build_automaton(d, pc=True))
    tpc, t_tpc = timed(lambda: sd.build_automaton(d, "trie", pc=True, max_states=30_000_000))
    print(params, f"|D'|={sd.count_accepted_strings(pm):.4g}")
    for name, a, t in [("pm", pm, t_pm), ("min", mini, t_min), ("pm+pc", pc, t_pc), ("trie+pc", tpc, t_tpc)]:
        if a is None:
            print(f"   {name:8s}{'-':>12}")
        else:
            print(f"   {name:8s}{a.num_states:>12,}{t:8.2f}s")
    del pm, mini, pc, tpc

# Same thing from the shell, as CSV:
#
#     subsetdfa bench -m 32 -n 10000 -s 4 --dl 2 --dh 4 -f 0.3 --seed 1 --methods pm,min,pmpc
