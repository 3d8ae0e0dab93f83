"""Audit of the textbook closed-form flux expressions.

The package carries closed-form mesh and branch flux formulas of the
kind often quoted for dominance-regime networks (magnet reluctance much
larger than the iron paths).  This script runs the sampling audit that
compares each formula against the exact rational solution of the full
five-mesh system and prints the verdict table plus the plain-language
notes.  Spoiler: only the yoke-branch pair survives; the rest are not
even asymptotic limits, which is why all production computation uses
the numeric solve.  Deterministic by a fixed seed; run as
`python3 demos/closed_form_audit.py`.
"""

from srmec.fidelity import audit_notes, run_fidelity_audit


def main() -> None:
    rows = run_fidelity_audit()
    width = max(len(row.equation) for row in rows)
    print(f"{'expression under audit':<{width}}  {'max rel dev':>12}  {'median':>12}")
    print("-" * (width + 28))
    for row in rows:
        print(f"{row.equation:<{width}}  {row.max_rel_dev:>12.3e}  {row.median_rel_dev:>12.3e}")
    print()
    print(audit_notes(rows))


if __name__ == "__main__":
    main()
