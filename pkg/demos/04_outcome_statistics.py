# %% [markdown]
# # Sampled messages against the exact outcome law
#
# Every 4-bit message has probability exactly 1/16.  Sampling full protocol
# runs with per-trial seeds reproduces that within a few standard deviations,
# and flips at rate p on every qubit show where the code starts to fail.

# %%
from qcect import cli

for noise in ("none", "random:0.02", "random:0.2"):
    cfg = cli.parse_args(["--mode", "stats", "--trials", "3000", "--seed", "1", "--theta", "1.2",
                          "--inject-error", noise])
    report = cli.run(cfg)
    h = report["histogram"]
    print(f"{noise:<12} max deviation {h['max_deviation_sigma']:.2f} sigma, "
          f"failed transfers {h['fidelity_failures']}/{h['trials']}, syndromes {report['syndrome']['counts']}")

# %% [markdown]
# Failures need two or more flips, so their rate is 3p^2 - 2p^3 (to within sampling error).

# %%
for p in (0.02, 0.2):
    print(f"p={p}: expected failure rate {3 * p**2 - 2 * p**3:.4f}")
