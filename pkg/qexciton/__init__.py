"""
qexciton - Spectra and optical response of q-deformed excitons in a microcavity.
"""

__version__ = "0.1.0"
