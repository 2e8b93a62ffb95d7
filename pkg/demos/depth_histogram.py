# # Where the automaton is widest
#
# Number of states per depth.  Up to roughly alpha = log_{sigma/Delta}(n)
# the id lists are long and every branch is new; past it the lists are
# short and states start coinciding.

# +
import numpy as np

import subsetdfa as sd

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
# -

cases = [(32, 10000, 4, 2, 4, 0.3), (16, 10000, 20, 2, 6, 0.75), (16, 1000, 32, 32, 32, 0.25)]
curves = {}
for params in cases:
    p = sd.InstanceParams(*params, seed=1)
    d = sd.generate_instance(p)
    hist = np.array(sd.depth_histogram(sd.build_automaton(d)))
    hist_pc = np.array(sd.depth_histogram(sd.build_automaton(d, pc=True)))
    alpha = sd.alpha_estimate(p.n, p.sigma, p.expected_delta)
    curves[params] = hist, hist_pc, alpha
    print(params, f"alpha={alpha:.2f}", "peak at", hist[hist[:, 1].argmax(), 0])
    print("   pm   ", hist[:, 1].tolist())
    print("   pm+pc", hist_pc[:, 1].tolist())

if plt is not None:
    fig, axes = plt.subplots(len(cases), 1, figsize=(7, 9))
    for ax, (params, (hist, hist_pc, alpha)) in zip(axes, curves.items()):
        ax.semilogy(hist[:, 0], hist[:, 1], "o-", label="pm")
        ax.semilogy(hist_pc[:, 0], hist_pc[:, 1], "s--", label="pm+pc")
        ax.axvline(alpha, color="gray", lw=0.8)
        ax.set_title(str(params), fontsize=9)
        ax.legend()
    axes[-1].set_xlabel("depth")
    fig.tight_layout()
    fig.savefig("depth_histogram.png", dpi=120)
