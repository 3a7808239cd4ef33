#!/usr/bin/env python3
"""
qexciton - Entry point.

Config-driven spectra and absorption of q-deformed excitons in a microcavity.
"""

from qexciton.cli import main

if __name__ == "__main__":
    main()
