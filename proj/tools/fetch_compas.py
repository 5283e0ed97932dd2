#!/usr/bin/env python3
"""Download the ProPublica two-year recidivism dataset.

The audit's reference targets were measured on this file. It is not
committed to the repository; fetch it once and the acceptance suite's
dataset criteria activate automatically:

    python3 tools/fetch_compas.py
    ctest --test-dir build -R acceptance

The canonical source is ProPublica's compas-analysis repository.
"""

import argparse
import hashlib
import pathlib
import sys
import urllib.request

DEFAULT_URL = (
    "https://raw.githubusercontent.com/propublica/compas-analysis/"
    "master/compas-scores-two-years.csv"
)
DEFAULT_DEST = pathlib.Path(__file__).resolve().parents[1] / "data" / (
    "compas-scores-two-years.csv"
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--url", default=DEFAULT_URL)
    parser.add_argument("--dest", type=pathlib.Path, default=DEFAULT_DEST)
    args = parser.parse_args()

    print(f"fetching {args.url}")
    with urllib.request.urlopen(args.url) as response:
        payload = response.read()
    args.dest.parent.mkdir(parents=True, exist_ok=True)
    args.dest.write_bytes(payload)
    digest = hashlib.sha256(payload).hexdigest()
    print(f"wrote {len(payload):,} bytes to {args.dest}")
    print(f"sha256 {digest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
