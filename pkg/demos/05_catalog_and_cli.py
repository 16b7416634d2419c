"""
Running the regression catalog
==============================

The same batch the command line runs with ``zn-ktheory catalog run --strict``.
"""

from zn_ktheory.catalog import bundled_catalog_text, run_batch

status, report = run_batch(bundled_catalog_text(), strict=True, jobs=2)
print("exit status", status, report["summary"])
for entry in report["entries"]:
    oracle = [c for c in entry["results"] if c["mode"] == "oracle"]
    got = (oracle[0]["rank0"], oracle[0]["rank1"]) if oracle else None
    print(f"  {entry['name']:28s} {entry['status']:8s} oracle={got}")
