# # Building an index and asking it questions
#
# A dictionary of subset-strings: every position holds a set of symbols.

# +
from collections import Counter

import numpy as np

import subsetdfa as sd

d = sd.Dictionary.from_sets(2, [[{0}, {0, 1}], [{0, 1}, {1}]])
print(sd.format_dictionary(d))
# -

# Three flavours of the same language.  The pseudo-minimal one keeps the
# per-string answers; the minimal one only knows yes/no.

trie = sd.build_automaton(d, "trie")
pm = sd.build_automaton(d)
mini = sd.minimize(pm)
trie.num_states, pm.num_states, mini.num_states

for p in [(0, 0), (0, 1), (1, 1), (1, 0)]:
    print(p, sd.match_retrieve(pm, p), sd.match_membership(mini, p))

# States and what they accept
for s in pm.states():
    print(s.id, s.depth, s.transitions, s.accept)

# The automaton file format is plain text
print(sd.format_automaton(pm))

# ## Leaf path compression
#
# Once only one string can still match, the rest of the path is replaced by
# a pointer into the dictionary.

rng = np.random.default_rng(0)
big = sd.generate_instance(sd.InstanceParams(m=24, n=2000, sigma=4, delta_low=2, delta_high=3, f=0.3, seed=5))
pm = sd.build_automaton(big)
pc = sd.build_automaton(big, pc=True)
pm.num_states, pc.num_states

p = [int(rng.choice(np.flatnonzero([(big.masks[0, j] >> c) & 1 for c in range(4)]))) for j in range(24)]
steps = Counter()
sd.match_retrieve(pc, p, counter=steps), steps

# Batches go through numpy in one pass
queries = rng.integers(0, 4, size=(10000, 24))
hits = sd.match_membership_many(pc, queries)
hits.sum()

# Number of distinct simple strings the index accepts
sd.count_accepted_strings(pm)
