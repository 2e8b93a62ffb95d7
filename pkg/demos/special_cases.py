# # Special dictionaries
#
# Wild cards, delta-ranges, and the all-wildcard worst case for a trie.

import subsetdfa as sd

# One string, every position the whole alphabet.  A trie has sigma^m leaves;
# merging states by (depth, ids) leaves one state per depth, and path
# compression cuts it to two.
for sigma, m in [(2, 3), (4, 8)]:
    d = sd.Dictionary.from_masks(sigma, [[sd.full_mask(sigma)] * m])
    print(sigma, m,
          sd.build_automaton(d, "trie", max_states=10**6).num_states,
          sd.build_automaton(d).num_states,
          sd.build_automaton(d, pc=True).num_states)

# k wild cards per pattern, the rest single symbols
wild = sd.generate_wildcard_instance(m=12, n=500, sigma=8, k=3, seed=2)
print(sd.format_dictionary(wild).splitlines()[1])
sd.build_automaton(wild).num_states, sd.minimize(sd.build_automaton(wild)).num_states

# delta-matching: each position is {c-delta..c+delta} clipped to the alphabet
delta = sd.generate_delta_instance(m=16, n=1000, sigma=12, delta=1, seed=3)
print(sd.format_dictionary(delta).splitlines()[1])
pm = sd.build_automaton(delta, pc=True)
pm.num_states, sd.count_accepted_strings(pm)

# Strings of different lengths and duplicates are fine
mixed = sd.Dictionary.from_sets(3, [[{0}, {1, 2}], [{0}], [{0}, {1, 2}], []])
a = sd.build_automaton(mixed)
[(p, sd.match_retrieve(a, p)) for p in [(), (0,), (0, 1), (0, 2, 1)]]
