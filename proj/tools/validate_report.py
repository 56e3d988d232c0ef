#!/usr/bin/env python3
"""Validate analysis reports against the shipped JSON schema.

usage: validate_report.py SCHEMA REPORT [REPORT ...]
"""

import json
import sys

import jsonschema


def main(argv):
    if len(argv) < 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    with open(argv[1], encoding="utf-8") as fh:
        schema = json.load(fh)
    validator = jsonschema.Draft202012Validator(schema)
    failed = False
    for path in argv[2:]:
        with open(path, encoding="utf-8") as fh:
            report = json.load(fh)
        errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
        for err in errors:
            loc = "/".join(str(p) for p in err.path)
            print(f"{path}: {loc}: {err.message}", file=sys.stderr)
        failed = failed or bool(errors)
        if not errors:
            print(f"{path}: valid")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
