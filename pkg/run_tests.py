#!/usr/bin/env python3
"""Simple test runner for trispec.

Runs pytest over the `tests/` directory and returns a non-zero exit code
if any test fails. Set TRISPEC_FULL=1 to sweep the full degree and
eigenvalue ranges instead of the quick ones.
"""
import sys

import pytest


def main():
    return int(pytest.main(['tests', '-q'] + sys.argv[1:]))


if __name__ == '__main__':
    raise SystemExit(main())
