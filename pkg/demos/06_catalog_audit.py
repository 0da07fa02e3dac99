# %% [markdown]
# # Checking published closed-form examples
#
# Reference data is validated before use.  The audit reports every
# constraint residual for each entry as printed and with all spins negated.

# %%
from halfwave import CATALOG_IDS, catalog_audit

audit = catalog_audit()
for name in CATALOG_IDS:
    for variant in ("printed", "negated_spins"):
        r = audit[name][variant]
        print(f"{name:14s} {variant:14s} max residual {r['max_residual']:.2e}  "
              f"admissible {r['admissible']}")
